//! Joint Gaussian statistics of `n` meter readings and their correlation
//! with the purifying copy of the bath.
//!
//! Readings have covariance
//! `K_{ss'} = δ_{ss'} + dt G_K(s - s') + dt^2 sum_{u ≤ min(s,s')} G_R(s - u) G_R(s' - u)`,
//! and correlate with the purifier's mode `j` through
//! `W_{sj} = sqrt(dt/2) λ_j e^{iω_j s dt} / (2 sinh(βω_j/2))`.

use faer::{complex_native::c64, Mat, Side};

use crate::error::{Error, Result};
use crate::gaussian::model::BosonModel;

pub const MAX_STEPS: usize = 4000;

#[derive(Debug, Clone)]
pub struct OutcomeGaussian {
    pub dt: f64,
    /// `n × n` outcome covariance.
    pub k: Mat<f64>,
    /// `n × N` complex cross matrix `W`.
    pub w: Mat<c64>,
    /// Real cross-covariance between the quadratures `(x_j, p_j)` (rows
    /// `2j`, `2j+1`) and the readings (columns): `x`-row `sqrt(2) Re W`,
    /// `p`-row `-sqrt(2) Im W`.
    pub cross: Mat<f64>,
    /// Lower Cholesky factor of `k`.
    pub cholesky: Mat<f64>,
}

impl OutcomeGaussian {
    pub fn steps(&self) -> usize {
        self.k.nrows()
    }

    /// `½ ln det K` of the first `s` readings, `s = 1..=n`, from the
    /// Cholesky factor (leading principal minors).
    pub fn joint_shannon_by_step(&self) -> Vec<f64> {
        let mut acc = 0.0;
        (0..self.steps())
            .map(|i| {
                acc += self.cholesky.read(i, i).ln();
                acc
            })
            .collect()
    }
}

pub fn build_outcome_gaussian(model: &BosonModel, dt: f64, n: usize) -> Result<OutcomeGaussian> {
    if n == 0 || n > MAX_STEPS {
        return Err(Error::Budget { what: "outcome steps", required: n as f64, limit: MAX_STEPS as f64 });
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    let (gk, gr): (Vec<f64>, Vec<f64>) = (0..=n).map(|i| model.greens_time(i as f64 * dt)).unzip();
    // R_{s,u} = G_R((s - u) dt) for u ≤ s, so G_RA = dt R R^T.
    let r = Mat::<f64>::from_fn(n, n, |s, u| if u <= s { gr[s - u] } else { 0.0 });
    let ra = &r * r.transpose();
    let k = Mat::<f64>::from_fn(n, n, |s, t| {
        let delta = if s == t { 1.0 } else { 0.0 };
        delta + dt * gk[s.abs_diff(t)] + dt * dt * ra.read(s, t)
    });
    let cholesky = match k.cholesky(Side::Lower) {
        Ok(c) => c.compute_l(),
        Err(_) => return Err(Error::Numerical("outcome covariance K is not positive definite".into())),
    };
    let nm = model.len();
    let sh = model.sinh_factors();
    let w = Mat::<c64>::from_fn(n, nm, |s, j| {
        let m = &model.modes[j];
        let amp = (dt / 2.0).sqrt() * m.coupling / sh[j];
        let phase = m.omega * (s + 1) as f64 * dt;
        c64::new(amp * phase.cos(), amp * phase.sin())
    });
    let root2 = 2f64.sqrt();
    let cross = Mat::<f64>::from_fn(2 * nm, n, |row, s| {
        let v = w.read(s, row / 2);
        if row % 2 == 0 {
            root2 * v.re
        } else {
            -root2 * v.im
        }
    });
    Ok(OutcomeGaussian { dt, k, w, cross, cholesky })
}

/// `½ ln det K` for a positive-definite covariance.
pub fn joint_shannon(k: &Mat<f64>) -> Result<f64> {
    match k.cholesky(Side::Lower) {
        Ok(c) => {
            let l = c.compute_l();
            Ok((0..l.nrows()).map(|i| l.read(i, i).ln()).sum())
        }
        Err(_) => Err(Error::NotPositive("covariance is not positive definite".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn decoupled_observable() {
        let m = BosonModel::single_mode(1.0, 0.0, 1.0).unwrap();
        let og = build_outcome_gaussian(&m, 0.1, 5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(og.k.read(i, j), if i == j { 1.0 } else { 0.0 });
            }
            assert_eq!(og.w.read(i, 0).norm(), 0.0);
        }
    }

    #[test]
    fn two_steps_by_hand() {
        let (w, lam, beta, dt) = (1.3f64, 0.4f64, 0.7f64, 0.3f64);
        let m = BosonModel::single_mode(w, lam, beta).unwrap();
        let og = build_outcome_gaussian(&m, dt, 2).unwrap();
        let coth = 1.0 / (beta * w / 2.0).tanh();
        let gk = |t: f64| 0.5 * lam * lam * coth * (w * t).cos();
        let gr = |t: f64| 0.5 * lam * lam * (w * t).sin();
        assert_abs_diff_eq!(og.k.read(0, 0), 1.0 + dt * gk(0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(og.k.read(0, 1), dt * gk(dt), epsilon = 1e-15);
        assert_abs_diff_eq!(og.k.read(1, 0), dt * gk(dt), epsilon = 1e-15);
        assert_abs_diff_eq!(og.k.read(1, 1), 1.0 + dt * gk(0.0) + dt * dt * gr(dt).powi(2), epsilon = 1e-15);
    }

    #[test]
    fn cross_matrix_vanishes_at_low_temperature() {
        let w0 = build_outcome_gaussian(&BosonModel::single_mode(1.0, 0.5, 10.0).unwrap(), 0.1, 3).unwrap();
        let w1 = build_outcome_gaussian(&BosonModel::single_mode(1.0, 0.5, 20.0).unwrap(), 0.1, 3).unwrap();
        let ratio = w1.w.read(0, 0).norm() / w0.w.read(0, 0).norm();
        assert_abs_diff_eq!(ratio, (-5.0f64).exp(), epsilon = 1e-6);
    }

    #[test]
    fn covariance_eigenvalues_at_least_one() {
        let m = BosonModel::from_keldysh(|w| 1.0 / (1.0 + w * w), 1.0, 10.0, 50).unwrap();
        let og = build_outcome_gaussian(&m, 0.1, 60).unwrap();
        let ev = og.k.selfadjoint_eigenvalues(Side::Lower);
        assert!(ev.iter().all(|&e| e >= 1.0 - 1e-9));
    }

    #[test]
    fn joint_shannon_examples() {
        assert_eq!(joint_shannon(&Mat::<f64>::identity(3, 3)).unwrap(), 0.0);
        let k = Mat::<f64>::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 0.0 });
        assert_abs_diff_eq!(joint_shannon(&k).unwrap(), 2f64.ln(), epsilon = 1e-15);
        let bad = Mat::<f64>::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(joint_shannon(&bad).is_err());
    }

    #[test]
    fn budget() {
        let m = BosonModel::single_mode(1.0, 0.5, 1.0).unwrap();
        assert!(matches!(build_outcome_gaussian(&m, 0.1, 4001), Err(Error::Budget { .. })));
    }
}
