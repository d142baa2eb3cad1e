//! Mixed-field Ising chains and the monitored observables defined on them.
//!
//! Basis convention: bit `j` of a basis index is the state of site `j`, with a
//! cleared bit meaning `Z_j = +1`. Sites are 0-based and the chain is periodic.

use faer::{complex_native::c64, Mat};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::operator::{real, DensityMatrix, HermitianOperator, Spectrum};

pub const MIN_SITES: usize = 2;
pub const MAX_SITES: usize = 12;

/// `H = sum_j X_j + h Z_j + J Z_j Z_{j+1}` on a ring of `sites` spins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinChainModel {
    pub sites: usize,
    /// Longitudinal field `h`.
    pub field: f64,
    /// Nearest-neighbour `ZZ` coupling `J`.
    pub coupling: f64,
    #[serde(default = "default_periodic")]
    pub periodic: bool,
}

fn default_periodic() -> bool {
    true
}

impl SpinChainModel {
    pub fn new(sites: usize, field: f64, coupling: f64) -> Result<Self> {
        let model = Self { sites, field, coupling, periodic: true };
        model.validate()?;
        Ok(model)
    }

    /// Parameters of the mixed-field chain used for the monitoring figures.
    pub fn mixed_field(sites: usize) -> Result<Self> {
        Self::new(sites, 1.245, 0.945)
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_SITES..=MAX_SITES).contains(&self.sites) {
            return Err(Error::param("sites", format!("{} outside [{MIN_SITES}, {MAX_SITES}]", self.sites)));
        }
        if !self.field.is_finite() || !self.coupling.is_finite() {
            return Err(Error::param("field/coupling", "must be finite"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.sites
    }

    fn bonds(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.sites;
        let last = if self.periodic { n } else { n - 1 };
        (0..last).map(move |j| (j, (j + 1) % n))
    }

    /// Dense Hamiltonian; real symmetric in the computational basis.
    pub fn hamiltonian(&self) -> Result<HermitianOperator> {
        self.validate()?;
        let dim = self.dim();
        let mut m = Mat::<c64>::zeros(dim, dim);
        for b in 0..dim {
            let mut diag = 0.0;
            for j in 0..self.sites {
                diag += self.field * z_value(b, j);
                m.write(b ^ (1 << j), b, m.read(b ^ (1 << j), b) + real(1.0));
            }
            for (i, j) in self.bonds() {
                diag += self.coupling * z_value(b, i) * z_value(b, j);
            }
            m.write(b, b, real(diag));
        }
        HermitianOperator::new(m)
    }

    /// `Z_i Z_j` as a diagonal operator.
    pub fn zz(&self, i: usize, j: usize) -> Result<HermitianOperator> {
        self.check_site(i)?;
        self.check_site(j)?;
        Ok(HermitianOperator::from_diagonal(&self.diagonal(|b| z_value(b, i) * z_value(b, j))))
    }

    pub fn z(&self, i: usize) -> Result<HermitianOperator> {
        self.check_site(i)?;
        Ok(HermitianOperator::from_diagonal(&self.diagonal(|b| z_value(b, i))))
    }

    /// Extensive sum `sum_x (J Z_x - h Z_x Z_{x+1})`, diagonal.
    pub fn energy_like_sum(&self) -> Vec<f64> {
        self.diagonal(|b| {
            let mut s = 0.0;
            for (i, j) in self.bonds() {
                s += self.coupling * z_value(b, i) - self.field * z_value(b, i) * z_value(b, j);
            }
            s
        })
    }

    /// Microscopic observable `gamma Z_i Z_j`.
    pub fn microscopic_observable(&self, gamma: f64, i: usize, j: usize) -> Result<HermitianOperator> {
        Ok(self.zz(i, j)?.scaled(gamma))
    }

    /// Bounded mesoscopic observable `erf(gamma sum_x (J Z_x - h Z_x Z_{x+1}) / sqrt(L))`.
    pub fn erf_observable(&self, gamma: f64) -> HermitianOperator {
        let norm = (self.sites as f64).sqrt();
        let d: Vec<f64> = self.energy_like_sum().into_iter().map(|x| erf(gamma * x / norm)).collect();
        HermitianOperator::from_diagonal(&d)
    }

    /// Volume-normalised fluctuation `V^{-1/2} sum_x (Q_x - <Q_x>)` of the
    /// same local density, with the mean taken in `state`.
    pub fn mesoscopic_fluctuation(&self, state: &DensityMatrix) -> Result<HermitianOperator> {
        let norm = (self.sites as f64).sqrt();
        let d: Vec<f64> = self.energy_like_sum().into_iter().map(|x| x / norm).collect();
        centered_diagonal(&d, state)
    }

    fn check_site(&self, i: usize) -> Result<()> {
        if i >= self.sites {
            return Err(Error::param("site", format!("{i} outside chain of {} sites", self.sites)));
        }
        Ok(())
    }

    fn diagonal(&self, f: impl Fn(usize) -> f64) -> Vec<f64> {
        (0..self.dim()).map(f).collect()
    }
}

pub(crate) fn z_value(basis: usize, site: usize) -> f64 {
    if basis >> site & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `diag(d) - <diag(d)>_state`.
pub fn centered_diagonal(d: &[f64], state: &DensityMatrix) -> Result<HermitianOperator> {
    if d.len() != state.dim() {
        return Err(Error::param("state", "dimension mismatch"));
    }
    let rho = state.operator().entries();
    let mean: f64 = d.iter().enumerate().map(|(i, x)| x * rho.read(i, i).re).sum();
    Ok(HermitianOperator::from_diagonal(&d.iter().map(|x| x - mean).collect::<Vec<_>>()))
}

/// Gibbs state `exp(-beta H) / Z`.
pub fn thermal_state(hamiltonian: &HermitianOperator, beta: f64) -> Result<DensityMatrix> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::param("beta", format!("{beta} must be finite and non-negative")));
    }
    let dim = hamiltonian.dim();
    if beta == 0.0 {
        return Ok(DensityMatrix::maximally_mixed(dim));
    }
    let s = hamiltonian.spectrum();
    let e0 = s.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = s.values.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    let probs: Vec<f64> = w.into_iter().map(|x| x / z).collect();
    let op = if hamiltonian.is_diagonal() {
        HermitianOperator::from_diagonal(&probs)
    } else {
        HermitianOperator::from_spectrum(probs, s.vectors.clone())
    };
    DensityMatrix::new(op)
}

/// `sqrt(rho)`, reusing the cached spectrum.
pub fn sqrt_state(state: &DensityMatrix) -> Mat<c64> {
    let op = state.operator();
    if op.is_diagonal() {
        let d = op.diagonal();
        let n = d.len();
        return Mat::<c64>::from_fn(n, n, |i, j| if i == j { real(d[i].max(0.0).sqrt()) } else { real(0.0) });
    }
    let Spectrum { values, vectors } = op.spectrum();
    Spectrum { values: values.clone(), vectors: vectors.clone() }.reconstruct_with(|x| real(x.max(0.0).sqrt()))
}
