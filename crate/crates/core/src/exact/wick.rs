//! Cluster decomposition check: how far the four-point function of a
//! mesoscopic observable is from its Gaussian (Wick) factorisation.

use faer::{complex_native::c64, Mat};

use crate::error::{Error, Result};
use crate::exact::spin::{centered_diagonal, thermal_state, SpinChainModel};
use crate::operator::{real, HermitianOperator};

/// Thermal correlators of `Q(t) = e^{iHt} Q e^{-iHt}` evaluated in the energy
/// eigenbasis, where time evolution is an elementwise phase.
pub struct ThermalCorrelator {
    energies: Vec<f64>,
    populations: Vec<f64>,
    /// `Q` in the energy eigenbasis.
    q: Mat<c64>,
}

impl ThermalCorrelator {
    pub fn new(hamiltonian: &HermitianOperator, beta: f64, q: &HermitianOperator) -> Result<Self> {
        if q.dim() != hamiltonian.dim() {
            return Err(Error::param("observable", "dimension differs from the Hamiltonian"));
        }
        let rho = thermal_state(hamiltonian, beta)?;
        let s = hamiltonian.spectrum();
        let v = &s.vectors;
        let q = v.adjoint() * q.entries() * v;
        let rho_e = v.adjoint() * rho.operator().entries() * v;
        let populations = (0..rho_e.nrows()).map(|i| rho_e.read(i, i).re).collect();
        Ok(Self { energies: s.values.clone(), populations, q })
    }

    pub fn heisenberg(&self, t: f64) -> Mat<c64> {
        let e = &self.energies;
        Mat::<c64>::from_fn(e.len(), e.len(), |a, b| {
            let phase = (e[a] - e[b]) * t;
            self.q.read(a, b) * c64::new(phase.cos(), phase.sin())
        })
    }

    /// `tr[ρ A B]` for operators in the energy eigenbasis.
    pub fn pair(&self, a: &Mat<c64>, b: &Mat<c64>) -> c64 {
        let n = a.nrows();
        let mut acc = real(0.0);
        for i in 0..n {
            let mut row = real(0.0);
            for k in 0..n {
                row += a.read(i, k) * b.read(k, i);
            }
            acc += row * self.populations[i];
        }
        acc
    }

    /// `⟨Q Q(t)⟩`.
    pub fn two_point(&self, t: f64) -> c64 {
        let qt = self.heisenberg(t);
        self.pair(&self.q, &qt)
    }

    pub fn wick_residual(&self, times: [f64; 4]) -> f64 {
        let q: Vec<Mat<c64>> = times.iter().map(|&t| self.heisenberg(t)).collect();
        let c = |i: usize, j: usize| self.pair(&q[i], &q[j]);
        let left = &q[0] * &q[1];
        let right = &q[2] * &q[3];
        let c4 = self.pair(&left, &right);
        let gaussian = c(0, 1) * c(2, 3) + c(0, 3) * c(1, 2) + c(0, 2) * c(1, 3);
        (c4 - gaussian).norm()
    }
}

/// `|C_1234 - (C_12 C_34 + C_14 C_23 + C_13 C_24)|` for a mean-free `q`.
pub fn wick_residual(hamiltonian: &HermitianOperator, beta: f64, q: &HermitianOperator, times: [f64; 4]) -> Result<f64> {
    Ok(ThermalCorrelator::new(hamiltonian, beta, q)?.wick_residual(times))
}

/// Residual for the volume-normalised fluctuation of the chain's local
/// density `J Z_x - h Z_x Z_{x+1}`, mean subtracted in the Gibbs state.
pub fn mesoscopic_wick_residual(model: &SpinChainModel, beta: f64, times: [f64; 4]) -> Result<f64> {
    let h = model.hamiltonian()?;
    let rho = thermal_state(&h, beta)?;
    let q = model.mesoscopic_fluctuation(&rho)?;
    wick_residual(&h, beta, &q, times)
}

/// Residual for a single-site observable `Z_0 - ⟨Z_0⟩` (no self-averaging).
pub fn single_site_wick_residual(model: &SpinChainModel, beta: f64, times: [f64; 4]) -> Result<f64> {
    let h = model.hamiltonian()?;
    let rho = thermal_state(&h, beta)?;
    let q = centered_diagonal(&model.z(0)?.diagonal(), &rho)?;
    wick_residual(&h, beta, &q, times)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn commuting_pauli_sum_matches_moments() {
        // Q = sum_x Z_x / sqrt(L) at infinite temperature: <Q^2> = 1 and
        // <Q^4> = 3 - 2/L, so the residual at equal times is 2/L.
        for sites in [3, 4, 6] {
            let m = SpinChainModel::mixed_field(sites).unwrap();
            let d: Vec<f64> = (0..m.dim())
                .map(|b| (0..sites).map(|j| crate::exact::spin::z_value(b, j)).sum::<f64>() / (sites as f64).sqrt())
                .collect();
            let q = HermitianOperator::from_diagonal(&d);
            let r = wick_residual(&m.hamiltonian().unwrap(), 0.0, &q, [0.0; 4]).unwrap();
            assert_abs_diff_eq!(r, 2.0 / sites as f64, epsilon = 1e-10);
        }
    }

    #[test]
    fn single_site_is_far_from_gaussian() {
        let m = SpinChainModel::mixed_field(4).unwrap();
        let r = single_site_wick_residual(&m, 0.0, [0.0; 4]).unwrap();
        // Z^4 = 1 while the Wick sum gives 3.
        assert_abs_diff_eq!(r, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn two_point_at_zero_is_variance() {
        let m = SpinChainModel::mixed_field(4).unwrap();
        let h = m.hamiltonian().unwrap();
        let rho = thermal_state(&h, 0.4).unwrap();
        let q = m.mesoscopic_fluctuation(&rho).unwrap();
        let c = ThermalCorrelator::new(&h, 0.4, &q).unwrap();
        let sq = q.entries() * q.entries();
        let direct = crate::operator::trace_product(rho.operator().entries(), sq.as_ref());
        assert_abs_diff_eq!(c.two_point(0.0).re, direct.re, epsilon = 1e-10);
        assert_abs_diff_eq!(c.two_point(0.0).im, 0.0, epsilon = 1e-10);
    }
}
