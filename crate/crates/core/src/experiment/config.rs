use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::spin::{MAX_SITES, MIN_SITES};
use crate::gaussian::outcome::MAX_STEPS;
use crate::spectral::maximize::MaximizerOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig3,
    Bounds,
    Converge,
    Oracle,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Fig2a,
        Experiment::Fig2b,
        Experiment::Fig2c,
        Experiment::Fig2d,
        Experiment::Fig3,
        Experiment::Bounds,
        Experiment::Converge,
        Experiment::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig2a => "fig2a",
            Experiment::Fig2b => "fig2b",
            Experiment::Fig2c => "fig2c",
            Experiment::Fig2d => "fig2d",
            Experiment::Fig3 => "fig3",
            Experiment::Bounds => "bounds",
            Experiment::Converge => "converge",
            Experiment::Oracle => "oracle",
        }
    }
}

/// Mixed-field Ising chain `sum_j X_j + h Z_j + J Z_j Z_{j+1}` monitored with
/// the binary family `K_± = sqrt((1 ± Q)/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainConfig {
    pub field: f64,
    pub coupling: f64,
    pub beta: f64,
    pub gamma: f64,
    pub dt: f64,
    pub steps: usize,
    /// Sites of the microscopic observable `γ Z_i Z_j`.
    pub sites: [usize; 2],
    pub microscopic_sizes: Vec<usize>,
    pub mesoscopic_sizes: Vec<usize>,
    pub leaf_budget: f64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            field: 1.245,
            coupling: 0.945,
            beta: 0.0,
            gamma: 0.75,
            dt: 1.0,
            steps: 8,
            sites: [0, 2],
            microscopic_sizes: vec![6, 8],
            mesoscopic_sizes: vec![4, 6, 8],
            leaf_budget: crate::exact::monitor::DEFAULT_LEAF_BUDGET,
        }
    }
}

/// Heisenberg iteration of the unconditional channel for the microscopic
/// observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub size: usize,
    pub iterations: usize,
    /// Inclusive `k` window of the log-linear decay fit.
    pub fit_window: [usize; 2],
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self { size: 6, iterations: 12, fit_window: [2, 12] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WickConfig {
    pub sizes: Vec<usize>,
    pub beta: f64,
    pub quadruples: Vec<[f64; 4]>,
}

impl Default for WickConfig {
    fn default() -> Self {
        Self { sizes: vec![4, 6, 8, 10], beta: 0.0, quadruples: vec![[0.0, 0.5, 1.0, 1.5], [0.0, 1.0, 2.0, 3.0]] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    pub adversarial_cases: usize,
    pub grid_points: usize,
    pub y_max: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self { adversarial_cases: 50, grid_points: 1500, y_max: 40.0 }
    }
}

/// Gaussian-engine ledger against the closed-form rates for
/// `G_K(ω) = a / (1 + ω^2)` on `[0, omega_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeConfig {
    pub modes: usize,
    pub steps: usize,
    pub dt: f64,
    pub beta: f64,
    pub omega_max: f64,
    pub amplitudes: Vec<f64>,
    pub spectral_points: usize,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self { modes: 200, steps: 2000, dt: 0.05, beta: 1.0, omega_max: 10.0, amplitudes: vec![0.05], spectral_points: 4000 }
    }
}

/// Truncated single oscillator under the Gaussian meter, enumerated exactly,
/// against the covariance engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub omega: f64,
    pub coupling: f64,
    pub beta: f64,
    pub dt: f64,
    pub steps: usize,
    pub levels: usize,
    pub outcome_nodes: usize,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { omega: 1.0, coupling: 0.3, beta: 1.0, dt: 0.25, steps: 4, levels: 60, outcome_nodes: 20, tolerance: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; must agree with the requested experiment when present.
    pub experiment: Option<Experiment>,
    /// Seed of every randomized component (maximizer starts, adversarial
    /// spectra); overrides `fig3.seed`.
    pub seed: u64,
    pub chain: ChainConfig,
    pub channel: ChannelConfig,
    pub wick: WickConfig,
    pub fig3: MaximizerOptions,
    pub bounds: BoundsConfig,
    pub converge: ConvergeConfig,
    pub oracle: OracleConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            seed: 7,
            chain: ChainConfig::default(),
            channel: ChannelConfig::default(),
            wick: WickConfig::default(),
            fig3: MaximizerOptions::default(),
            bounds: BoundsConfig::default(),
            converge: ConvergeConfig::default(),
            oracle: OracleConfig::default(),
        }
    }
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::param(name, format!("{x} must be finite and positive")));
    }
    Ok(())
}

fn sizes(name: &'static str, list: &[usize]) -> Result<()> {
    if list.is_empty() {
        return Err(Error::param(name, "need at least one system size"));
    }
    if let Some(l) = list.iter().find(|l| !(MIN_SITES..=MAX_SITES).contains(*l)) {
        return Err(Error::param(name, format!("size {l} outside [{MIN_SITES}, {MAX_SITES}]")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Configuration with the shared seed propagated.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        c.fig3.seed = c.seed;
        c
    }

    /// Hex SHA-256 of the canonical JSON of the resolved configuration.
    pub fn sha256(&self) -> String {
        let text = serde_json::to_string(&self.resolved()).expect("configuration serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Checks every precondition of `experiment` before any computation.
    pub fn validate(&self, experiment: Experiment) -> Result<()> {
        if let Some(e) = self.experiment {
            if e != experiment {
                return Err(Error::param("experiment", format!("config is for `{}`, not `{}`", e.name(), experiment.name())));
            }
        }
        let c = &self.chain;
        match experiment {
            Experiment::Fig2a | Experiment::Fig2b | Experiment::Fig2c | Experiment::Fig2d => {
                if !(c.beta >= 0.0) || !c.beta.is_finite() {
                    return Err(Error::param("chain.beta", "must be finite and non-negative"));
                }
                positive("chain.dt", c.dt)?;
                if c.steps == 0 {
                    return Err(Error::param("chain.steps", "need at least one step"));
                }
                if !c.gamma.is_finite() || !c.field.is_finite() || !c.coupling.is_finite() {
                    return Err(Error::param("chain", "couplings must be finite"));
                }
                let leaves = 2f64.powi(c.steps as i32);
                if leaves > c.leaf_budget {
                    return Err(Error::Budget { what: "outcome leaves", required: leaves, limit: c.leaf_budget });
                }
                match experiment {
                    Experiment::Fig2a | Experiment::Fig2c => {
                        sizes("chain.microscopic_sizes", &c.microscopic_sizes)?;
                        let min = *c.microscopic_sizes.iter().min().unwrap();
                        if c.sites[0] == c.sites[1] || c.sites.iter().any(|&s| s >= min) {
                            return Err(Error::param("chain.sites", "need two distinct sites inside the smallest chain"));
                        }
                        if c.gamma.abs() > 1.0 {
                            return Err(Error::param("chain.gamma", "binary measurement needs |γ| ≤ 1 for γ Z_i Z_j"));
                        }
                        if experiment == Experiment::Fig2a {
                            let ch = &self.channel;
                            sizes("channel.size", &[ch.size])?;
                            if c.sites.iter().any(|&s| s >= ch.size) {
                                return Err(Error::param("channel.size", "observable sites must lie inside the chain"));
                            }
                            if ch.fit_window[0] >= ch.fit_window[1] || ch.fit_window[1] > ch.iterations {
                                return Err(Error::param("channel.fit_window", "need lo < hi ≤ iterations"));
                            }
                        }
                    }
                    _ => {
                        sizes("chain.mesoscopic_sizes", &c.mesoscopic_sizes)?;
                        if experiment == Experiment::Fig2b {
                            sizes("wick.sizes", &self.wick.sizes)?;
                            if !(self.wick.beta >= 0.0) || !self.wick.beta.is_finite() {
                                return Err(Error::param("wick.beta", "must be finite and non-negative"));
                            }
                            if self.wick.quadruples.iter().flatten().any(|t| !t.is_finite()) {
                                return Err(Error::param("wick.quadruples", "times must be finite"));
                            }
                        }
                    }
                }
            }
            Experiment::Fig3 => self.resolved().fig3.validate()?,
            Experiment::Bounds => {
                self.resolved().fig3.validate()?;
                let b = &self.bounds;
                if b.adversarial_cases == 0 || b.grid_points < 16 {
                    return Err(Error::param("bounds", "need at least one case and 16 grid points"));
                }
                if b.grid_points > 20000 {
                    return Err(Error::Budget { what: "adversarial grid points", required: b.grid_points as f64, limit: 20000.0 });
                }
                positive("bounds.y_max", b.y_max)?;
            }
            Experiment::Converge => {
                let v = &self.converge;
                positive("converge.dt", v.dt)?;
                positive("converge.beta", v.beta)?;
                positive("converge.omega_max", v.omega_max)?;
                if v.modes == 0 || v.steps == 0 || v.amplitudes.is_empty() || v.spectral_points < 16 {
                    return Err(Error::param("converge", "need modes, steps, amplitudes and ≥ 16 spectral points"));
                }
                if v.steps > MAX_STEPS {
                    return Err(Error::Budget { what: "outcome steps", required: v.steps as f64, limit: MAX_STEPS as f64 });
                }
                if v.spectral_points > 20000 {
                    return Err(Error::Budget { what: "spectral grid points", required: v.spectral_points as f64, limit: 20000.0 });
                }
                if v.amplitudes.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
                    return Err(Error::param("converge.amplitudes", "must be finite and non-negative"));
                }
            }
            Experiment::Oracle => {
                let o = &self.oracle;
                positive("oracle.omega", o.omega)?;
                positive("oracle.beta", o.beta)?;
                positive("oracle.dt", o.dt)?;
                positive("oracle.tolerance", o.tolerance)?;
                if !o.coupling.is_finite() {
                    return Err(Error::param("oracle.coupling", "must be finite"));
                }
                if o.steps == 0 || o.outcome_nodes < 2 {
                    return Err(Error::param("oracle", "need steps ≥ 1 and at least two outcome nodes"));
                }
                let leaves = (o.outcome_nodes as f64).powi(o.steps as i32);
                if leaves > crate::exact::monitor::DEFAULT_LEAF_BUDGET {
                    return Err(Error::Budget {
                        what: "outcome leaves",
                        required: leaves,
                        limit: crate::exact::monitor::DEFAULT_LEAF_BUDGET,
                    });
                }
            }
        }
        Ok(())
    }
}
