//! Truncated harmonic oscillator, the finite-dimensional bridge between the
//! brute-force engine and the Gaussian engine.

use faer::{complex_native::c64, Mat};

use crate::error::{Error, Result};
use crate::operator::{real, HermitianOperator};

pub const MIN_LEVELS: usize = 20;
/// Largest admissible thermal population of the top retained level.
pub const TRUNCATION_TOLERANCE: f64 = 1e-10;

/// Annihilation operator on levels `0..=n_max`: `<n|a|n+1> = sqrt(n+1)`.
pub fn annihilation(n_max: usize) -> Mat<c64> {
    let d = n_max + 1;
    Mat::<c64>::from_fn(d, d, |i, j| if j == i + 1 { real((j as f64).sqrt()) } else { real(0.0) })
}

#[derive(Debug, Clone)]
pub struct TruncatedOscillator {
    pub omega: f64,
    pub coupling: f64,
    pub beta: f64,
    /// `ω a^† a`.
    pub hamiltonian: HermitianOperator,
    /// `λ (a + a^†) / sqrt(2)`.
    pub observable: HermitianOperator,
}

/// `(n_max + 1)`-level truncation of `ω a^† a` and `λ (a + a^†)/√2`, rejected
/// when the Gibbs population of level `n_max` exceeds `TRUNCATION_TOLERANCE`.
pub fn truncated_oscillator(omega: f64, coupling: f64, beta: f64, n_max: usize) -> Result<TruncatedOscillator> {
    if n_max < MIN_LEVELS {
        return Err(Error::param("n_max", format!("{n_max} below the minimum {MIN_LEVELS}")));
    }
    if !(omega > 0.0) || !omega.is_finite() || !coupling.is_finite() {
        return Err(Error::param("omega", "frequency must be positive and coupling finite"));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::param("beta", "a truncated oscillator needs finite positive beta"));
    }
    let x = beta * omega;
    let top = (1.0 - (-x).exp()) * (-x * n_max as f64).exp();
    if top > TRUNCATION_TOLERANCE {
        return Err(Error::param(
            "n_max",
            format!("level {n_max} has thermal population {top:.2e} > {TRUNCATION_TOLERANCE:.0e}"),
        ));
    }
    let energies: Vec<f64> = (0..=n_max).map(|n| omega * n as f64).collect();
    let a = annihilation(n_max);
    let q = faer::scale(real(coupling / 2f64.sqrt())) * (&a + a.adjoint());
    Ok(TruncatedOscillator {
        omega,
        coupling,
        beta,
        hamiltonian: HermitianOperator::from_diagonal(&energies),
        observable: HermitianOperator::new(q)?,
    })
}
