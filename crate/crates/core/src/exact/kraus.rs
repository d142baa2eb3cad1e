//! Measurement Kraus families diagonal in the eigenbasis of a monitored
//! observable `Q`.
//!
//! Every operator in a family has the form `K_m = V diag(k_m) V^H`, where `V`
//! diagonalises `Q`. Discrete families carry unit weights; continuous families
//! carry quadrature weights so that `sum_m w_m K_m^H K_m ≈ 1`.

use faer::{complex_native::c64, Mat};

use crate::error::{Error, Result};
use crate::operator::{real, HermitianOperator};

/// Default number of outcome nodes for a continuous (Gaussian) meter.
pub const DEFAULT_OUTCOME_NODES: usize = 64;
/// Half-width margin, in units of the meter noise, added around the spectrum.
pub const OUTCOME_MARGIN: f64 = 6.0;
/// Completeness residual above which a discretised family is rejected.
pub const COMPLETENESS_TOLERANCE: f64 = 1e-4;

/// Uniform outcome grid with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl OutcomeGrid {
    /// `count` equally spaced nodes on `[lo, hi]`. For the Gaussian integrands
    /// met here the trapezoid rule is spectrally accurate; the residual is
    /// then set by the mass beyond the grid ends.
    pub fn uniform(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::param("outcome grid", format!("need lo < hi and count >= 2, got [{lo}, {hi}] x {count}")));
        }
        let h = (hi - lo) / (count - 1) as f64;
        let nodes = (0..count).map(|i| lo + h * i as f64).collect();
        let mut weights = vec![h; count];
        weights[0] = h / 2.0;
        weights[count - 1] = h / 2.0;
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct KrausFamily {
    /// Eigenbasis of the observable; `None` for the computational basis.
    basis: Option<Mat<c64>>,
    /// `diagonals[m][i]`: eigenvalue `i` of `K_m`.
    diagonals: Vec<Vec<f64>>,
    labels: Vec<f64>,
    weights: Vec<f64>,
    continuous: bool,
    /// Densities `|K_m|^2` of a meter coupled to `Q = 0`, for renormalised
    /// Shannon entropies of continuous records.
    reference: Option<Vec<f64>>,
}

impl KrausFamily {
    /// Two outcomes `K_± = sqrt((1 ± Q) / 2)`; requires `‖Q‖ ≤ 1`.
    pub fn binary(q: &HermitianOperator) -> Result<Self> {
        let norm = q.operator_norm();
        if norm > 1.0 + 1e-9 {
            return Err(Error::param("observable", format!("binary measurement needs ‖Q‖ <= 1, got {norm:.6}")));
        }
        let (basis, values) = eigenbasis(q);
        let k = |sign: f64| values.iter().map(|x| ((1.0 + sign * x) / 2.0).max(0.0).sqrt()).collect();
        Ok(Self {
            basis,
            diagonals: vec![k(1.0), k(-1.0)],
            labels: vec![1.0, -1.0],
            weights: vec![1.0, 1.0],
            continuous: false,
            reference: None,
        })
    }

    /// Gaussian meter `K_m = (2π)^{-1/4} exp(-(Q sqrt(dt) - m)^2 / 4)` sampled on
    /// `grid`, or on the default grid covering `spec(Q sqrt(dt)) ± 6`.
    pub fn gaussian(q: &HermitianOperator, dt: f64, grid: Option<OutcomeGrid>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::param("dt", format!("{dt} must be positive")));
        }
        let (basis, values) = eigenbasis(q);
        let shift: Vec<f64> = values.iter().map(|x| x * dt.sqrt()).collect();
        let grid = match grid {
            Some(g) => g,
            None => {
                let lo = shift.iter().cloned().fold(f64::INFINITY, f64::min) - OUTCOME_MARGIN;
                let hi = shift.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + OUTCOME_MARGIN;
                OutcomeGrid::uniform(lo, hi, DEFAULT_OUTCOME_NODES)?
            }
        };
        let amp = (2.0 * std::f64::consts::PI).powf(-0.25);
        let kernel = |x: f64, m: f64| amp * (-(x - m).powi(2) / 4.0).exp();
        let diagonals = grid.nodes.iter().map(|&m| shift.iter().map(|&x| kernel(x, m)).collect()).collect();
        let reference = grid.nodes.iter().map(|&m| kernel(0.0, m).powi(2)).collect();
        let family = Self {
            basis,
            diagonals,
            labels: grid.nodes,
            weights: grid.weights,
            continuous: true,
            reference: Some(reference),
        };
        let residual = family.completeness_residual();
        if residual > COMPLETENESS_TOLERANCE {
            return Err(Error::param(
                "outcome grid",
                format!("completeness residual {residual:.3e} exceeds {COMPLETENESS_TOLERANCE:.0e}"),
            ));
        }
        Ok(family)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.diagonals.first().map_or(0, Vec::len)
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    pub fn basis(&self) -> Option<&Mat<c64>> {
        self.basis.as_ref()
    }

    /// Eigenvalues of `K_m` in the observable eigenbasis.
    pub fn diagonal(&self, m: usize) -> &[f64] {
        &self.diagonals[m]
    }

    pub fn reference_densities(&self) -> Option<&[f64]> {
        self.reference.as_deref()
    }

    /// `K_m` in the computational basis.
    pub fn operator(&self, m: usize) -> Mat<c64> {
        let d = &self.diagonals[m];
        let n = d.len();
        match &self.basis {
            None => Mat::<c64>::from_fn(n, n, |i, j| if i == j { real(d[i]) } else { real(0.0) }),
            Some(v) => {
                let scaled = Mat::<c64>::from_fn(n, n, |i, k| v.read(i, k) * d[k]);
                &scaled * v.adjoint()
            }
        }
    }

    /// Frobenius norm of `sum_m w_m K_m^H K_m - 1` (basis independent).
    pub fn completeness_residual(&self) -> f64 {
        let mut acc = vec![0.0; self.dim()];
        for (d, w) in self.diagonals.iter().zip(&self.weights) {
            for (a, k) in acc.iter_mut().zip(d) {
                *a += w * k * k;
            }
        }
        acc.iter().map(|a| (a - 1.0).powi(2)).sum::<f64>().sqrt()
    }

    /// Matrix `M_ij = sum_m w_m k_{m,i} k_{m,j}`; the unconditional update
    /// `D[O] = sum_m w_m K_m^H O K_m` is `O ∘ M` in the observable eigenbasis.
    pub fn dephasing_kernel(&self) -> Mat<f64> {
        let n = self.dim();
        let mut m = Mat::<f64>::zeros(n, n);
        for (d, w) in self.diagonals.iter().zip(&self.weights) {
            for j in 0..n {
                for i in 0..n {
                    m.write(i, j, m.read(i, j) + w * d[i] * d[j]);
                }
            }
        }
        m
    }
}

fn eigenbasis(q: &HermitianOperator) -> (Option<Mat<c64>>, Vec<f64>) {
    if q.is_diagonal() {
        (None, q.diagonal())
    } else {
        let s = q.spectrum();
        (Some(s.vectors.clone()), s.values.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::spin::SpinChainModel;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_family_is_complete() {
        let m = SpinChainModel::mixed_field(4).unwrap();
        let q = m.erf_observable(0.75);
        let k = KrausFamily::binary(&q).unwrap();
        assert_eq!(k.len(), 2);
        assert!(k.completeness_residual() < 1e-12);
    }

    #[test]
    fn binary_rejects_unbounded_observable() {
        let q = HermitianOperator::from_diagonal(&[0.5, -1.5]);
        assert!(KrausFamily::binary(&q).is_err());
    }

    #[test]
    fn binary_operators_square_to_projector_mix() {
        // For Q = diag(1, 0): K_+ = diag(1, 1/√2), K_- = diag(0, 1/√2).
        let q = HermitianOperator::from_diagonal(&[1.0, 0.0]);
        let k = KrausFamily::binary(&q).unwrap();
        let kp = k.operator(0);
        assert_abs_diff_eq!(kp.read(0, 0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(kp.read(1, 1).re, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(k.operator(1).read(0, 0).re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn non_diagonal_observable_operators_commute_with_it() {
        let x = Mat::<c64>::from_fn(2, 2, |i, j| if i != j { real(0.6) } else { real(0.0) });
        let q = HermitianOperator::new(x).unwrap();
        let k = KrausFamily::binary(&q).unwrap();
        let kp = HermitianOperator::new(k.operator(0)).unwrap();
        assert!(kp.commutator_norm(&q) < 1e-14);
        // K_+^2 = (1 + Q) / 2.
        let sq = kp.entries() * kp.entries();
        assert_abs_diff_eq!(sq.read(0, 1).re, 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(sq.read(0, 0).re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn gaussian_family_default_grid_is_complete() {
        let q = HermitianOperator::from_diagonal(&[-2.0, 0.3, 1.7]);
        let k = KrausFamily::gaussian(&q, 0.5, None).unwrap();
        assert_eq!(k.len(), DEFAULT_OUTCOME_NODES);
        assert!(k.completeness_residual() < 1e-8);
        let r = k.reference_densities().unwrap();
        let total: f64 = r.iter().zip(k.weights()).map(|(d, w)| d * w).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn uninformative_binary_family() {
        let k = KrausFamily::binary(&HermitianOperator::zeros(3)).unwrap();
        for m in 0..2 {
            let op = k.operator(m);
            for i in 0..3 {
                assert_abs_diff_eq!(op.read(i, i).re, 0.5f64.sqrt(), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn two_level_gaussian_completeness() {
        // Direct oracle: sum_m h (2π)^{-1/2} exp(-(±1 - m)^2 / 2) over the grid.
        let q = HermitianOperator::from_diagonal(&[1.0, -1.0]);
        let grid = OutcomeGrid::uniform(-7.0, 7.0, 64).unwrap();
        let direct: f64 = grid
            .nodes
            .iter()
            .zip(&grid.weights)
            .map(|(m, w)| w * (-(1.0 - m).powi(2) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt())
            .sum();
        let k = KrausFamily::gaussian(&q, 1.0, Some(grid)).unwrap();
        assert!(k.completeness_residual() < 1e-8);
        assert_abs_diff_eq!(k.completeness_residual(), 2f64.sqrt() * (direct - 1.0).abs(), epsilon = 1e-15);
    }

    #[test]
    fn refinement_does_not_increase_residual() {
        let q = HermitianOperator::from_diagonal(&[1.0, -1.0]);
        let r: Vec<f64> = [8, 16, 32, 64, 128]
            .iter()
            .map(|&n| {
                let grid = OutcomeGrid::uniform(-7.0, 7.0, n).unwrap();
                KrausFamily::gaussian(&q, 1.0, Some(grid)).map(|k| k.completeness_residual()).unwrap_or(f64::INFINITY)
            })
            .collect();
        for w in r.windows(2) {
            assert!(w[1] <= w[0] + 1e-14, "{r:?}");
        }
        assert!(r[4] < 1e-8);
    }

    #[test]
    fn gaussian_family_rejects_truncated_grid() {
        let q = HermitianOperator::from_diagonal(&[0.0, 1.0]);
        let grid = OutcomeGrid::uniform(-1.0, 1.0, 30).unwrap();
        assert!(KrausFamily::gaussian(&q, 1.0, Some(grid)).is_err());
    }

    #[test]
    fn dephasing_kernel_diagonal_is_completeness() {
        let q = HermitianOperator::from_diagonal(&[-0.4, 0.9]);
        let k = KrausFamily::binary(&q).unwrap();
        let m = k.dephasing_kernel();
        assert_abs_diff_eq!(m.read(0, 0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.read(1, 1), 1.0, epsilon = 1e-15);
        // Off-diagonal: sum_± sqrt((1±a)(1±b))/2.
        let (a, b) = (-0.4f64, 0.9f64);
        let expect = (((1.0 + a) * (1.0 + b)).sqrt() + ((1.0 - a) * (1.0 - b)).sqrt()) / 2.0;
        assert_abs_diff_eq!(m.read(0, 1), expect, epsilon = 1e-15);
    }
}
