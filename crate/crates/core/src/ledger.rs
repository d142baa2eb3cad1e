//! Per-step entropy bookkeeping shared by the exact and Gaussian engines.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the definition identity of `S_CNT`.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
/// Slack allowed on positivity of defects and subadditivity.
pub const POSITIVITY_SLACK: f64 = 1e-9;
/// Allowed deviation of total probability from one.
pub const PROBABILITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEntry {
    /// 1-based step index.
    pub step: usize,
    /// Shannon entropy of the single-step marginal outcome distribution.
    pub marginal_shannon: f64,
    /// Purification gain `J_s` from the step-`s` outcome alone.
    pub purification: f64,
    /// Total probability of the step-`s` marginal.
    pub probability: f64,
}

impl StepEntry {
    /// `S_cl_marginal - J_s`.
    pub fn defect(&self) -> f64 {
        self.marginal_shannon - self.purification
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyLedger {
    pub dt: f64,
    pub steps: Vec<StepEntry>,
    /// Shannon entropy of the full record.
    pub joint_shannon: f64,
    /// Conditional entropy `J = S(ρ) - sum p S(ρ_m)` for the full record.
    pub purification: f64,
    pub s_cnt: f64,
    /// Total probability of the full record.
    pub probability: f64,
    /// Shannon entropies of continuous outcomes are reported with the
    /// uninformative-meter value subtracted.
    pub renormalized: bool,
    /// Joint Shannon entropy of the first `s` outcomes, `s = 1..=n`.
    pub joint_shannon_by_step: Vec<f64>,
    /// `J` of the first `s` outcomes, when tracked.
    pub purification_by_step: Option<Vec<f64>>,
}

impl EntropyLedger {
    /// Assembles `S_CNT = S_joint - sum_s (S_marginal[s] - J_s)`.
    pub fn assemble(
        dt: f64,
        steps: Vec<StepEntry>,
        joint_shannon_by_step: Vec<f64>,
        purification_by_step: Option<Vec<f64>>,
        purification: f64,
        probability: f64,
        renormalized: bool,
    ) -> Self {
        let joint_shannon = *joint_shannon_by_step.last().unwrap_or(&0.0);
        let s_cnt = joint_shannon - steps.iter().map(StepEntry::defect).sum::<f64>();
        Self {
            dt,
            steps,
            joint_shannon,
            purification,
            s_cnt,
            probability,
            renormalized,
            joint_shannon_by_step,
            purification_by_step,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.steps.len() as f64
    }

    pub fn purification_steps(&self) -> Vec<f64> {
        self.steps.iter().map(|e| e.purification).collect()
    }

    pub fn defects(&self) -> Vec<f64> {
        self.steps.iter().map(StepEntry::defect).collect()
    }

    /// `S_CNT` of the first `s` steps. Marginals of earlier steps do not
    /// depend on later ones, so every prefix is available from one run.
    pub fn s_cnt_by_step(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.joint_shannon_by_step
            .iter()
            .zip(&self.steps)
            .map(|(joint, e)| {
                acc += e.defect();
                joint - acc
            })
            .collect()
    }

    pub fn identity_residual(&self) -> f64 {
        let defects: f64 = self.steps.iter().map(StepEntry::defect).sum();
        (self.s_cnt - (self.joint_shannon - defects)).abs()
    }

    /// Checks the definition identity, positivity of `J`, `J_s` and defects,
    /// subadditivity and probability conservation.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Consistency(msg));
        let r = self.identity_residual();
        if r > IDENTITY_TOLERANCE {
            return fail(format!("S_CNT identity residual {r:.3e}"));
        }
        if self.purification < -POSITIVITY_SLACK {
            return fail(format!("J = {:.3e} is negative", self.purification));
        }
        for e in &self.steps {
            if e.purification < -POSITIVITY_SLACK {
                return fail(format!("J_{} = {:.3e} is negative", e.step, e.purification));
            }
            if e.defect() < -POSITIVITY_SLACK {
                return fail(format!("defect at step {} = {:.3e} is negative", e.step, e.defect()));
            }
            if (e.probability - 1.0).abs() > PROBABILITY_TOLERANCE {
                return fail(format!("marginal probability at step {} sums to {:.12}", e.step, e.probability));
            }
        }
        let sum_js: f64 = self.steps.iter().map(|e| e.purification).sum();
        if self.s_cnt > sum_js + POSITIVITY_SLACK {
            return fail(format!("S_CNT = {:.6e} exceeds sum J_s = {:.6e}", self.s_cnt, sum_js));
        }
        if (self.probability - 1.0).abs() > PROBABILITY_TOLERANCE {
            return fail(format!("record probability sums to {:.12}", self.probability));
        }
        Ok(())
    }

    /// Tidy CSV: a `#` legend, one row per step, then `#` summary lines.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# s: step index; S_cl_marginal: single-step outcome Shannon entropy (nats)")?;
        writeln!(out, "# J_s: single-step purification gain; defect: S_cl_marginal - J_s")?;
        writeln!(out, "s,S_cl_marginal,J_s,defect")?;
        for e in &self.steps {
            writeln!(out, "{},{},{},{}", e.step, fmt(e.marginal_shannon), fmt(e.purification), fmt(e.defect()))?;
        }
        writeln!(out, "# dt={}", fmt(self.dt))?;
        writeln!(out, "# S_cl_joint={}", fmt(self.joint_shannon))?;
        writeln!(out, "# J={}", fmt(self.purification))?;
        writeln!(out, "# S_CNT={}", fmt(self.s_cnt))?;
        writeln!(out, "# renormalized={}", self.renormalized)?;
        Ok(())
    }
}

/// Fixed 12-significant-digit formatting used for every emitted number.
pub fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}
