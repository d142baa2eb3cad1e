//! Long-time rates from spectral data and the associated Planckian constants.
//!
//! With `G̃ = G_K + |G_R|^2` and `y = βω`,
//!
//! ```text
//! s_CNT = ½ ∫ dω/2π [ ln(1 + G̃) - G̃ + (y / sinh y) G_K ]
//! 𝒥     = ½ ∫ dω/2π (y / sinh y) G_K / (1 + G̃)
//! ```
//!
//! Both integrands are even, so the half grid suffices. Samples are
//! interpolated linearly; below the first node `G_K` and `Re G_R` are held
//! constant and `Im G_R` goes linearly to zero, above the last node all
//! samples vanish.

use std::f64::consts::PI;

use faer::complex_native::c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_pieces, integrate_to_infinity, QuadratureOptions};
use crate::spectral::data::SpectralData;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub s_cnt: f64,
    pub purification: f64,
    /// `½ ∫ dω/2π ln(1 + G̃)`.
    pub joint_term: f64,
    /// `-½ ∫ dω/2π G̃`.
    pub marginal_term: f64,
    /// `½ ∫ dω/2π (y / sinh y) G_K`, the single-step information rate.
    pub first_order_term: f64,
    pub error: f64,
}

/// `y / sinh y` with its limit 1 at the origin.
pub fn planck_factor(y: f64) -> f64 {
    let y = y.abs();
    if y < 1e-4 {
        1.0 - y * y / 6.0
    } else if y > 30.0 {
        2.0 * y * (-y).exp()
    } else {
        y / y.sinh()
    }
}

/// `sinh y - y`, accurate near the origin.
pub fn sinh_minus_identity(y: f64) -> f64 {
    if y.abs() < 0.5 {
        // y^3/3! + y^5/5! + ...
        let y2 = y * y;
        let mut term = y * y2 / 6.0;
        let mut sum = 0.0_f64;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            sum += term;
            term *= y2 / ((k + 1.0) * (k + 2.0));
            k += 2.0;
        }
        sum
    } else {
        y.sinh() - y
    }
}

/// `y / (sinh y - y)`, the unconstrained optimum of the entropy rate.
pub fn untight_optimum(y: f64) -> f64 {
    let y = y.abs();
    if y > 700.0 {
        return 0.0;
    }
    y / sinh_minus_identity(y)
}

struct Interpolant {
    x: Vec<f64>,
    gk: Vec<f64>,
    gr: Vec<c64>,
}

impl Interpolant {
    fn new(sd: &SpectralData) -> Self {
        let mut x = Vec::with_capacity(sd.len() + 1);
        let mut gk = Vec::with_capacity(sd.len() + 1);
        let mut gr = Vec::with_capacity(sd.len() + 1);
        if sd.omega[0] > 0.0 {
            x.push(0.0);
            gk.push(sd.keldysh[0]);
            gr.push(c64::new(sd.retarded[0].re, 0.0));
        }
        x.extend_from_slice(&sd.omega);
        gk.extend_from_slice(&sd.keldysh);
        gr.extend_from_slice(&sd.retarded);
        Self { x, gk, gr }
    }

    fn at(&self, w: f64) -> (f64, f64) {
        let k = match self.x.partition_point(|&v| v <= w) {
            0 => 0,
            p if p >= self.x.len() => self.x.len() - 2,
            p => p - 1,
        };
        let (a, b) = (self.x[k], self.x[k + 1]);
        let t = ((w - a) / (b - a)).clamp(0.0, 1.0);
        let gk = self.gk[k] + t * (self.gk[k + 1] - self.gk[k]);
        let re = self.gr[k].re + t * (self.gr[k + 1].re - self.gr[k].re);
        let im = self.gr[k].im + t * (self.gr[k + 1].im - self.gr[k].im);
        (gk, gk + re * re + im * im)
    }
}

fn rate_options() -> QuadratureOptions {
    QuadratureOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 200 }
}

fn integrate_term(ip: &Interpolant, f: impl Fn(f64, f64, f64) -> f64) -> Result<(f64, f64)> {
    let r = integrate_pieces(
        |w| {
            let (gk, gt) = ip.at(w);
            f(w, gk, gt)
        },
        &ip.x,
        rate_options(),
    )
    .map_err(|e| Error::Numerical(format!("rate quadrature did not converge: {e}")))?;
    Ok((r.value / (2.0 * PI), r.error / (2.0 * PI)))
}

/// Entropy rate, purification rate and the per-term breakdown.
pub fn scnt_rate(sd: &SpectralData) -> Result<RateResult> {
    let ip = Interpolant::new(sd);
    let beta = sd.beta;
    let (joint, e1) = integrate_term(&ip, |_, _, gt| gt.ln_1p())?;
    let (marg, e2) = integrate_term(&ip, |_, _, gt| -gt)?;
    let (first, e3) = integrate_term(&ip, |w, gk, _| planck_factor(beta * w) * gk)?;
    // The combined integrand is evaluated directly to avoid cancellation
    // between the large Shannon terms.
    let (s, e4) = integrate_term(&ip, |w, gk, gt| gt.ln_1p() - gt + planck_factor(beta * w) * gk)?;
    let (j, e5) = integrate_term(&ip, |w, gk, gt| planck_factor(beta * w) * gk / (1.0 + gt))?;
    Ok(RateResult {
        s_cnt: s,
        purification: j,
        joint_term: joint,
        marginal_term: marg,
        first_order_term: first,
        error: e1 + e2 + e3 + e4 + e5,
    })
}

pub fn purification_rate(sd: &SpectralData) -> Result<f64> {
    let ip = Interpolant::new(sd);
    let beta = sd.beta;
    Ok(integrate_term(&ip, |w, gk, gt| planck_factor(beta * w) * gk / (1.0 + gt))?.0)
}

/// Largest violations of `ln(1 + G̃) ≤ G̃` and `(y / sinh y) G_K ≤ G̃` over
/// the samples (non-positive when both hold).
pub fn pointwise_violations(sd: &SpectralData) -> (f64, f64) {
    let mut shannon = f64::NEG_INFINITY;
    let mut defect = f64::NEG_INFINITY;
    for ((w, gk), gt) in sd.omega.iter().zip(&sd.keldysh).zip(sd.g_tilde()) {
        shannon = shannon.max(gt.ln_1p() - gt);
        defect = defect.max(planck_factor(sd.beta * w) * gk - gt);
    }
    (shannon, defect)
}

/// `(1/4π) ∫ dy [ln(sinh y / (sinh y - y)) - y / sinh y]` over the real line.
pub fn untight_bound_constant() -> Result<f64> {
    untight_bound_constant_with(QuadratureOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_intervals: 4000 })
}

pub fn untight_bound_constant_with(opts: QuadratureOptions) -> Result<f64> {
    let f = |y: f64| {
        if y == 0.0 {
            return f64::INFINITY;
        }
        let r = planck_factor(y);
        // ln(sinh y / (sinh y - y)) = -ln(1 - y/sinh y); near 0 use the series.
        let ln_ratio = if y < 0.5 { (y.sinh() / sinh_minus_identity(y)).ln() } else { -(-r).ln_1p() };
        ln_ratio - r
    };
    let head = integrate_pieces(f, &[0.0, 0.5, 2.0, 8.0], opts)?;
    let tail = integrate_to_infinity(f, 8.0, opts)?;
    Ok((head.value + tail.value) / (2.0 * PI))
}

/// `∫ y / sinh y dy` over the real line (`π^2 / 2`).
pub fn planck_factor_integral() -> Result<f64> {
    let opts = QuadratureOptions { abs_tol: 1e-14, rel_tol: 1e-13, max_intervals: 4000 };
    let head = integrate_pieces(planck_factor, &[0.0, 1.0, 8.0], opts)?;
    let tail = integrate_to_infinity(planck_factor, 8.0, opts)?;
    Ok(2.0 * (head.value + tail.value))
}
