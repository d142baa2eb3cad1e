//! Free bosons `H = sum_j ω_j a_j^† a_j` probed through
//! `Q = sum_j λ_j (a_j + a_j^†) / sqrt(2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub omega: f64,
    pub coupling: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BosonModel {
    pub modes: Vec<Mode>,
    pub beta: f64,
}

impl BosonModel {
    pub fn new(modes: Vec<Mode>, beta: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::param("modes", "need at least one mode"));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::param("beta", format!("{beta} must be finite and positive")));
        }
        for m in &modes {
            if !(m.omega > 0.0) || !m.omega.is_finite() || !m.coupling.is_finite() {
                return Err(Error::param("modes", format!("invalid mode ω = {}, λ = {}", m.omega, m.coupling)));
            }
        }
        Ok(Self { modes, beta })
    }

    pub fn single_mode(omega: f64, coupling: f64, beta: f64) -> Result<Self> {
        Self::new(vec![Mode { omega, coupling }], beta)
    }

    /// Discretises a target Keldysh spectrum on `count` uniform bins of
    /// `[0, omega_max]`, mode `j` at the bin centre with
    /// `λ_j^2 = (2/π) Δω G_K(ω_j) tanh(βω_j/2)`.
    pub fn from_keldysh(gk: impl Fn(f64) -> f64, beta: f64, omega_max: f64, count: usize) -> Result<Self> {
        if count == 0 || !(omega_max > 0.0) {
            return Err(Error::param("grid", "need omega_max > 0 and at least one mode"));
        }
        let dw = omega_max / count as f64;
        let mut modes = Vec::with_capacity(count);
        for j in 0..count {
            let omega = (j as f64 + 0.5) * dw;
            let g = gk(omega);
            if !(g >= 0.0) || !g.is_finite() {
                return Err(Error::param("G_K", format!("G_K({omega}) = {g} must be finite and non-negative")));
            }
            let lam2 = 2.0 / std::f64::consts::PI * dw * g * (beta * omega / 2.0).tanh();
            modes.push(Mode { omega, coupling: lam2.sqrt() });
        }
        Self::new(modes, beta)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// `ε_j = coth(βω_j/2) / 2`.
    pub fn occupations(&self) -> Vec<f64> {
        self.modes.iter().map(|m| 0.5 / (self.beta * m.omega / 2.0).tanh()).collect()
    }

    /// `2 sinh(βω_j/2)`.
    pub fn sinh_factors(&self) -> Vec<f64> {
        self.modes.iter().map(|m| 2.0 * (self.beta * m.omega / 2.0).sinh()).collect()
    }

    /// Time-domain `(G_K(t), G_R(t))` with
    /// `G_K(t) = ½ sum λ^2 coth(βω/2) cos ωt` and `G_R(t) = θ(t) ½ sum λ^2 sin ωt`.
    pub fn greens_time(&self, t: f64) -> (f64, f64) {
        let mut gk = 0.0;
        let mut gr = 0.0;
        for m in &self.modes {
            let l2 = m.coupling * m.coupling;
            let (s, c) = (m.omega * t).sin_cos();
            gk += 0.5 * l2 * c / (self.beta * m.omega / 2.0).tanh();
            if t > 0.0 {
                gr += 0.5 * l2 * s;
            }
        }
        (gk, gr)
    }

    /// Bin-integrated Keldysh weight per mode, `G_K(ω_j) Δω` recovered from
    /// the mode expansion (inverse of [`BosonModel::from_keldysh`]).
    pub fn keldysh_weights(&self) -> Vec<(f64, f64)> {
        self.modes
            .iter()
            .map(|m| {
                let w = std::f64::consts::PI / 2.0 * m.coupling * m.coupling / (self.beta * m.omega / 2.0).tanh();
                (m.omega, w)
            })
            .collect()
    }
}

/// `η(x) = (x + ½) ln(x + ½) - (x - ½) ln(x - ½)`, the entropy of a mode with
/// symplectic value `x ≥ ½`.
pub fn eta(x: f64) -> f64 {
    let a = x + 0.5;
    let b = x - 0.5;
    let lb = if b > 0.0 { b * b.ln() } else { 0.0 };
    a * a.ln() - lb
}

/// `η'(x) = ln((x + ½)/(x - ½))`.
pub fn eta_derivative(x: f64) -> f64 {
    ((x + 0.5) / (x - 0.5)).ln()
}
