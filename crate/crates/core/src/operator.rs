//! Dense Hermitian operators: spectral calculus, traces, tensor products and
//! von Neumann entropy.
//!
//! All entropies are in nats. Matrices are stored densely as `faer::Mat<c64>`;
//! the eigendecomposition is computed on first use and cached.

use std::sync::OnceLock;

use faer::{complex_native::c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Symmetry residual above which an input matrix is rejected.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are treated as zero in entropies.
pub const EIGEN_CLAMP: f64 = 1e-12;
/// Default ceiling on Hilbert-space dimension (twelve qubits).
pub const DEFAULT_MAX_DIM: usize = 4096;

pub fn cplx(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

pub fn real(re: f64) -> c64 {
    c64::new(re, 0.0)
}

/// Eigenpairs `A = V diag(values) V^H`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Mat<c64>,
}

impl Spectrum {
    /// `V diag(f(values)) V^H` for a complex-valued scalar function.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> c64) -> Mat<c64> {
        let n = self.values.len();
        let fv: Vec<c64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        let scaled = Mat::<c64>::from_fn(n, n, |i, k| v.read(i, k) * fv[k]);
        &scaled * v.adjoint()
    }
}

/// A dense complex Hermitian matrix with a lazily computed eigendecomposition.
#[derive(Debug)]
pub struct HermitianOperator {
    entries: Mat<c64>,
    spectrum: OnceLock<Spectrum>,
}

impl Clone for HermitianOperator {
    fn clone(&self) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(s.clone());
        }
        Self { entries: self.entries.clone(), spectrum }
    }
}

impl HermitianOperator {
    /// Validates Hermiticity (max entrywise residual `HERMITIAN_TOLERANCE`) and
    /// stores the exactly symmetrized matrix.
    pub fn new(entries: Mat<c64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::param(
                "entries",
                format!("expected a non-empty square matrix, got {}x{}", entries.nrows(), entries.ncols()),
            ));
        }
        let residual = hermitian_residual(entries.as_ref());
        if !(residual <= HERMITIAN_TOLERANCE) {
            return Err(Error::NonHermitian { residual, tolerance: HERMITIAN_TOLERANCE });
        }
        Ok(Self::from_parts(symmetrize(entries.as_ref()), None))
    }

    fn from_parts(entries: Mat<c64>, spectrum: Option<Spectrum>) -> Self {
        let cell = OnceLock::new();
        if let Some(s) = spectrum {
            let _ = cell.set(s);
        }
        Self { entries, spectrum: cell }
    }

    /// Real diagonal operator in the computational basis.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let entries = Mat::<c64>::from_fn(n, n, |i, j| if i == j { real(diag[i]) } else { real(0.0) });
        let spectrum = Spectrum { values: diag.to_vec(), vectors: Mat::<c64>::identity(n, n) };
        Self::from_parts(entries, Some(spectrum))
    }

    /// Builds `V diag(values) V^H`; `vectors` must be unitary.
    pub fn from_spectrum(values: Vec<f64>, vectors: Mat<c64>) -> Self {
        let spectrum = Spectrum { values, vectors };
        let entries = symmetrize(spectrum.reconstruct_with(real).as_ref());
        Self::from_parts(entries, Some(spectrum))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_diagonal(&vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> MatRef<'_, c64> {
        self.entries.as_ref()
    }

    pub fn into_entries(self) -> Mat<c64> {
        self.entries
    }

    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| {
            let n = self.dim();
            if (0..n).all(|j| (0..n).all(|i| self.entries.read(i, j).im == 0.0)) {
                // Real symmetric: the real solver is several times cheaper.
                let re = Mat::<f64>::from_fn(n, n, |i, j| self.entries.read(i, j).re);
                let evd = re.selfadjoint_eigendecomposition(Side::Lower);
                let s = evd.s().column_vector();
                let values = (0..n).map(|i| s.read(i)).collect();
                let u = evd.u();
                let vectors = Mat::<c64>::from_fn(n, n, |i, j| real(u.read(i, j)));
                return Spectrum { values, vectors };
            }
            let evd = self.entries.selfadjoint_eigendecomposition(Side::Lower);
            let s = evd.s().column_vector();
            let values = (0..self.dim()).map(|i| s.read(i).re).collect();
            Spectrum { values, vectors: evd.u().to_owned() }
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum().values
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.entries.read(i, j).norm() == 0.0))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries.read(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries.read(i, i).re).sum()
    }

    /// `V f(D) V^H` for a complex-valued function (e.g. `exp(-i x t)`).
    pub fn complex_function(&self, f: impl Fn(f64) -> c64) -> Mat<c64> {
        if self.is_diagonal() {
            let d = self.diagonal();
            let n = d.len();
            return Mat::<c64>::from_fn(n, n, |i, j| if i == j { f(d[i]) } else { real(0.0) });
        }
        self.spectrum().reconstruct_with(f)
    }

    /// Unitary `exp(-i A t)`.
    pub fn evolution(&self, t: f64) -> Mat<c64> {
        self.complex_function(|x| c64::new((x * t).cos(), -(x * t).sin()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let spectrum = self.spectrum.get().map(|s| Spectrum {
            values: s.values.iter().map(|x| x * factor).collect(),
            vectors: s.vectors.clone(),
        });
        Self::from_parts(faer::scale(real(factor)) * &self.entries, spectrum)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self::from_parts(&self.entries + &other.entries, None))
    }

    /// Frobenius norm of `[A, B]`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        let ab = &self.entries * &other.entries;
        let ba = &other.entries * &self.entries;
        (&ab - &ba).norm_l2()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm_l2()
    }
}

/// Eigendecompose `a = V D V^H` and return `V f(D) V^H`.
pub fn matrix_function(a: &HermitianOperator, f: impl Fn(f64) -> f64) -> HermitianOperator {
    if a.is_diagonal() {
        let d: Vec<f64> = a.diagonal().into_iter().map(&f).collect();
        return HermitianOperator::from_diagonal(&d);
    }
    let s = a.spectrum();
    let values: Vec<f64> = s.values.iter().map(|&x| f(x)).collect();
    HermitianOperator::from_spectrum(values, s.vectors.clone())
}

/// `x ln x` with the continuous extension `0 ln 0 = 0`.
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `-sum p ln p` over a spectrum, clamping eigenvalues in `[-EIGEN_CLAMP, 0)`.
pub fn spectral_entropy(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in values {
        if p < -EIGEN_CLAMP {
            return Err(Error::NotPositive(format!("eigenvalue {p:.3e} below -{EIGEN_CLAMP:.0e}")));
        }
        s -= xlogx(p.max(0.0));
    }
    Ok(s)
}

/// Entropy of `A / tr A` for a positive semidefinite `A` given its spectrum.
/// Clamping is applied relative to the trace.
pub fn normalized_spectral_entropy(values: &[f64]) -> Result<f64> {
    let tr: f64 = values.iter().sum();
    if !(tr > 0.0) {
        return Err(Error::NotPositive(format!("trace {tr:.3e} is not positive")));
    }
    let scaled: Vec<f64> = values.iter().map(|v| v / tr).collect();
    spectral_entropy(&scaled)
}

/// `tr[A B]` evaluated as `sum_ij A_ij B_ji` without forming the product.
pub fn trace_product(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> c64 {
    assert_eq!(a.nrows(), b.ncols());
    assert_eq!(a.ncols(), b.nrows());
    let mut acc = real(0.0);
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a.read(i, j) * b.read(j, i);
        }
    }
    acc
}

/// Tensor product `A ⊗ B`, rejected above `max_dim`.
pub fn kron(a: &HermitianOperator, b: &HermitianOperator, max_dim: usize) -> Result<HermitianOperator> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .ok_or(Error::DimensionTooLarge { dim: usize::MAX, max: max_dim })?;
    if dim > max_dim {
        return Err(Error::DimensionTooLarge { dim, max: max_dim });
    }
    Ok(HermitianOperator::from_parts(kron_matrix(a.entries(), b.entries()), None))
}

pub fn kron_matrix(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Mat<c64> {
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::<c64>::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| a.read(i / br, j / bc) * b.read(i % br, j % bc))
}

pub fn hermitian_residual(m: MatRef<'_, c64>) -> f64 {
    let n = m.nrows();
    let mut r = 0.0_f64;
    for j in 0..n {
        for i in 0..=j {
            r = r.max((m.read(i, j) - m.read(j, i).conj()).norm());
        }
    }
    r
}

fn symmetrize(m: MatRef<'_, c64>) -> Mat<c64> {
    let n = m.nrows();
    Mat::<c64>::from_fn(n, n, |i, j| {
        if i == j {
            real(m.read(i, i).re)
        } else {
            (m.read(i, j) + m.read(j, i).conj()) * 0.5
        }
    })
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::param("dim", format!("dimension mismatch {a} vs {b}")));
    }
    Ok(())
}

/// A positive semidefinite, unit-trace Hermitian operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::NotPositive(format!("trace {tr} differs from 1")));
        }
        if let Some(&min) = op.eigenvalues().iter().min_by(|a, b| a.total_cmp(b)) {
            if min < -EIGEN_CLAMP {
                return Err(Error::NotPositive(format!("eigenvalue {min:.3e} below -{EIGEN_CLAMP:.0e}")));
            }
        }
        Ok(Self { op })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { op: HermitianOperator::from_diagonal(&vec![1.0 / dim as f64; dim]) }
    }

    /// Projector onto the normalized `state`.
    pub fn pure(state: &[c64]) -> Result<Self> {
        let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::param("state", "zero vector"));
        }
        let n = state.len();
        let m = Mat::<c64>::from_fn(n, n, |i, j| state[i] * state[j].conj() * (1.0 / (norm * norm)));
        Self::new(HermitianOperator::new(m)?)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn von_neumann_entropy(&self) -> f64 {
        spectral_entropy(self.op.eigenvalues()).expect("validated at construction")
    }
}

/// `-tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.von_neumann_entropy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
        let mut m = 0.0_f64;
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                m = m.max((a.read(i, j) - b.read(i, j)).norm());
            }
        }
        m
    }

    pub(crate) fn random_hermitian(n: usize, seed: u64) -> HermitianOperator {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = Mat::<c64>::from_fn(n, n, |_, _| cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        HermitianOperator::new(&a + a.adjoint()).unwrap()
    }

    #[test]
    fn identity_function_returns_input() {
        let a = random_hermitian(5, 1);
        let b = matrix_function(&a, |x| x);
        assert!(max_abs_diff(a.entries(), b.entries()) < 1e-12);
    }

    #[test]
    fn exp_of_diagonal() {
        let a = HermitianOperator::from_diagonal(&[0.0, 2f64.ln()]);
        let e = matrix_function(&a, f64::exp);
        assert_abs_diff_eq!(e.entries().read(0, 0).re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.entries().read(1, 1).re, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn sqrt_multiplies_back() {
        let a = random_hermitian(4, 7);
        let p = HermitianOperator::new(a.entries() * a.entries()).unwrap();
        let b = matrix_function(&p, |x| x.max(0.0).sqrt());
        let bb = b.entries() * b.entries();
        assert!(max_abs_diff(bb.as_ref(), p.entries()) < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Mat::<c64>::zeros(2, 2);
        m.write(0, 1, real(1.0));
        assert!(matches!(HermitianOperator::new(m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn entropy_examples() {
        let mixed = DensityMatrix::maximally_mixed(6);
        assert_abs_diff_eq!(mixed.von_neumann_entropy(), 6f64.ln(), epsilon = 1e-14);

        let pure = DensityMatrix::pure(&[cplx(0.6, 0.0), cplx(0.0, 0.8)]).unwrap();
        assert_abs_diff_eq!(pure.von_neumann_entropy(), 0.0, epsilon = 1e-12);

        let d = DensityMatrix::new(HermitianOperator::from_diagonal(&[0.75, 0.25])).unwrap();
        let expected = -0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln();
        assert_abs_diff_eq!(d.von_neumann_entropy(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.5623351446188083, epsilon = 1e-15);
    }

    #[test]
    fn entropy_rejects_negative_eigenvalue() {
        assert!(spectral_entropy(&[1.1, -0.1]).is_err());
        assert!(spectral_entropy(&[1.0, -1e-13]).is_ok());
        assert!(DensityMatrix::new(HermitianOperator::from_diagonal(&[1.1, -0.1])).is_err());
    }

    #[test]
    fn kron_and_trace_product() {
        let i2 = HermitianOperator::identity(2);
        let i4 = kron(&i2, &i2, DEFAULT_MAX_DIM).unwrap();
        assert!(max_abs_diff(i4.entries(), Mat::<c64>::identity(4, 4).as_ref()) == 0.0);

        let z = HermitianOperator::from_diagonal(&[1.0, -1.0]);
        let rho = HermitianOperator::from_diagonal(&[0.75, 0.25]);
        let t = trace_product(z.entries(), rho.entries());
        assert_abs_diff_eq!(t.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(t.im, 0.0, epsilon = 1e-15);

        let r = DensityMatrix::pure(&[cplx(0.6, 0.1), cplx(0.3, -0.2), cplx(0.1, 0.7)]).unwrap();
        let one = trace_product(HermitianOperator::identity(3).entries(), r.operator().entries());
        assert_abs_diff_eq!(one.re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn kron_rejects_oversized() {
        let a = HermitianOperator::identity(64);
        assert!(kron(&a, &a, DEFAULT_MAX_DIM).is_ok());
        let b = HermitianOperator::identity(128);
        assert!(matches!(kron(&a, &b, DEFAULT_MAX_DIM), Err(Error::DimensionTooLarge { dim: 8192, max: 4096 })));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn random_unitary(n: usize, seed: u64) -> Mat<c64> {
            random_hermitian(n, seed).evolution(0.7)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn function_commutes_with_argument(seed in 0u64..10_000, n in 2usize..7) {
                let a = random_hermitian(n, seed);
                let f = matrix_function(&a, |x| (0.3 * x).exp() + x * x);
                let scale = a.frobenius_norm() * f.frobenius_norm();
                prop_assert!(a.commutator_norm(&f) < 1e-9 * scale.max(1.0));
            }

            #[test]
            fn entropy_is_unitarily_invariant(seed in 0u64..10_000, n in 2usize..7) {
                let a = random_hermitian(n, seed);
                let g = matrix_function(&a, |x| (-x).exp());
                let rho = DensityMatrix::new(g.scaled(1.0 / g.trace())).unwrap();
                let u = random_unitary(n, seed + 1);
                let rotated = &(&u * rho.operator().entries()) * u.adjoint();
                let rho2 = DensityMatrix::new(HermitianOperator::new(rotated).unwrap()).unwrap();
                prop_assert!((rho.von_neumann_entropy() - rho2.von_neumann_entropy()).abs() < 1e-10);
            }

            #[test]
            fn exp_log_round_trip(seed in 0u64..10_000, n in 2usize..7) {
                let a = random_hermitian(n, seed);
                let e = matrix_function(&a, f64::exp);
                let back = matrix_function(&e, f64::ln);
                prop_assert!(max_abs_diff(a.entries(), back.entries()) < 1e-9);
            }
        }
    }
}
