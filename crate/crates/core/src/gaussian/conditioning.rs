//! Conditional states of the purifying bath copy after Gaussian readings.
//!
//! Quadratures `(x_j, p_j)` start in the thermal covariance `ε_j 1_2`.
//! Conditioning on readings with covariance `K` and cross-covariance `C`
//! gives the Schur complement `V = V_0 - C K^{-1} C^T`, whose symplectic
//! eigenvalues determine the entropy `sum_j η(ν_j)`.

use faer::{linalg::triangular_solve::solve_lower_triangular_in_place, Mat, Parallelism, Side};

use crate::error::{Error, Result};
use crate::gaussian::model::BosonModel;
use crate::gaussian::outcome::OutcomeGaussian;

/// Tolerance below `½` tolerated in a symplectic eigenvalue.
pub const UNCERTAINTY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    /// Every reading of the record.
    Record,
    /// The single reading at 0-based step `s`.
    Step(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeOccupations {
    /// `ε_j = ½ coth(βω_j/2)` before measurement.
    pub epsilon: Vec<f64>,
    /// Symplectic values after conditioning, matched to modes by rank.
    pub conditioned: Vec<f64>,
}

impl ModeOccupations {
    /// `sum_j η(ε_j) - η(ν_j)`.
    pub fn entropy_drop(&self) -> f64 {
        use crate::gaussian::model::eta;
        self.epsilon.iter().zip(&self.conditioned).map(|(e, n)| eta(*e) - eta(*n)).sum()
    }
}

pub fn condition_state(model: &BosonModel, og: &OutcomeGaussian, subset: Conditioning) -> Result<ModeOccupations> {
    let eps = model.occupations();
    let nm = eps.len();
    if og.cross.nrows() != 2 * nm {
        return Err(Error::param("outcome", "cross-covariance does not match the model's mode count"));
    }
    let conditioned = match subset {
        Conditioning::Record => {
            // X = L^{-1} C^T, so C K^{-1} C^T = X^T X.
            let mut x = og.cross.transpose().to_owned();
            solve_lower_triangular_in_place(og.cholesky.as_ref(), x.as_mut(), Parallelism::None);
            let reduction = x.transpose() * &x;
            let v = Mat::<f64>::from_fn(2 * nm, 2 * nm, |i, j| {
                let base = if i == j { eps[i / 2] } else { 0.0 };
                base - reduction.read(i, j)
            });
            let nu = symplectic_eigenvalues(&v)?;
            match_by_rank(&eps, nu)
        }
        Conditioning::Step(s) => {
            if s >= og.steps() {
                return Err(Error::param("step", format!("{s} outside record of {}", og.steps())));
            }
            let kappa = og.k.read(s, s);
            let r: Vec<f64> = (0..nm)
                .map(|j| (og.cross.read(2 * j, s).powi(2) + og.cross.read(2 * j + 1, s).powi(2)) / kappa)
                .collect();
            rank_one_symplectic(&eps, &r)
        }
    };
    if let Some(bad) = conditioned.iter().find(|&&v| v < 0.5 - UNCERTAINTY_SLACK) {
        return Err(Error::Consistency(format!("symplectic eigenvalue {bad:.12} violates the uncertainty bound")));
    }
    Ok(ModeOccupations { epsilon: eps, conditioned })
}

/// Symplectic eigenvalues (ascending) of a positive-definite `2N × 2N`
/// covariance in the `(x_1, p_1, x_2, p_2, ...)` ordering.
pub fn symplectic_eigenvalues(v: &Mat<f64>) -> Result<Vec<f64>> {
    let n2 = v.nrows();
    if n2 % 2 != 0 || v.ncols() != n2 {
        return Err(Error::param("covariance", "expected an even square matrix"));
    }
    let l = match v.cholesky(Side::Lower) {
        Ok(c) => c.compute_l(),
        Err(_) => return Err(Error::NotPositive("covariance is not positive definite".into())),
    };
    // M = L^T Ω L has eigenvalues ±iν; -M^2 = M^T M has each ν^2 twice.
    let omega_l = Mat::<f64>::from_fn(n2, n2, |i, j| if i % 2 == 0 { l.read(i + 1, j) } else { -l.read(i - 1, j) });
    let m = l.transpose() * &omega_l;
    let mtm = m.transpose() * &m;
    let mut ev: Vec<f64> = mtm.selfadjoint_eigenvalues(Side::Lower).into_iter().map(|x| x.max(0.0).sqrt()).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

fn match_by_rank(eps: &[f64], nu_sorted: Vec<f64>) -> Vec<f64> {
    let mut order: Vec<usize> = (0..eps.len()).collect();
    order.sort_by(|&a, &b| eps[a].total_cmp(&eps[b]));
    let mut out = vec![0.0; eps.len()];
    for (rank, &j) in order.iter().enumerate() {
        out[j] = nu_sorted[rank];
    }
    out
}

/// Symplectic values of `diag(ε_j 1_2) - u u^T` with `r_j = |u_j|^2`.
///
/// The squares `μ = ν^2` solve the secular equation
/// `sum_j ε_j r_j / (ε_j^2 - μ) = 1`, one root just below each pole `ε_k^2`.
/// Each root is found as an offset `δ = ε_k^2 - μ` so that tiny shifts keep
/// full relative precision.
pub fn rank_one_symplectic(eps: &[f64], r: &[f64]) -> Vec<f64> {
    let mut out = eps.to_vec();
    // Group coupled modes by pole; a degenerate pole carries the summed weight
    // and its remaining copies keep ν = ε.
    let mut idx: Vec<usize> = (0..eps.len()).filter(|&j| r[j] > 0.0).collect();
    idx.sort_by(|&a, &b| eps[a].total_cmp(&eps[b]));
    let mut poles: Vec<(f64, f64, usize)> = Vec::new(); // (ε, ε r, representative)
    for &j in &idx {
        match poles.last_mut() {
            Some(p) if p.0 == eps[j] => p.1 += eps[j] * r[j],
            _ => poles.push((eps[j], eps[j] * r[j], j)),
        }
    }
    let e: Vec<f64> = poles.iter().map(|p| p.0 * p.0).collect();
    let total: f64 = poles.iter().map(|p| p.1).sum();
    for k in 0..poles.len() {
        let g = |d: f64| -> (f64, f64) {
            let mut val = poles[k].1 / d - 1.0;
            let mut der = -poles[k].1 / (d * d);
            for (j, p) in poles.iter().enumerate() {
                if j != k {
                    let den = e[j] - e[k] + d;
                    val += p.1 / den;
                    der -= p.1 / (den * den);
                }
            }
            (val, der)
        };
        let mut lo = 0.0;
        let mut hi = if k == 0 { total } else { e[k] - e[k - 1] };
        let mut d = poles[k].1.min(0.5 * hi);
        for _ in 0..200 {
            let (val, der) = g(d);
            if val > 0.0 {
                lo = d;
            } else {
                hi = d;
            }
            let newton = d - val / der;
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - d).abs() <= 1e-16 * d || hi - lo <= 1e-16 * hi {
                d = next;
                break;
            }
            d = next;
        }
        out[poles[k].2] = (e[k] - d).max(0.0).sqrt();
    }
    out
}

/// `ε_j - (t/2) λ_j^2 (2 sinh(βω_j/2))^{-2} / k_j`: the first-order record
/// conditioning with per-mode spectral factors `k_j` (use 1 at lowest order).
pub fn first_order_record(model: &BosonModel, t: f64, k: &[f64]) -> Vec<f64> {
    let sh = model.sinh_factors();
    model
        .occupations()
        .iter()
        .zip(&model.modes)
        .zip(sh.iter().zip(k))
        .map(|((e, m), (s, kj))| e - 0.5 * t * m.coupling * m.coupling / (s * s) / kj)
        .collect()
}

/// `ε_j - (dt/2) λ_j^2 (2 sinh(βω_j/2))^{-2} / κ` for one reading.
pub fn first_order_step(model: &BosonModel, dt: f64, kappa: f64) -> Vec<f64> {
    first_order_record(model, dt, &vec![kappa; model.len()])
}
