//! Entropy ledger of the free-boson model from exact Gaussian conditioning.

use crate::error::Result;
use crate::gaussian::conditioning::{condition_state, Conditioning};
use crate::gaussian::model::BosonModel;
use crate::gaussian::outcome::{build_outcome_gaussian, OutcomeGaussian};
use crate::ledger::{EntropyLedger, StepEntry};

/// Builds the outcome statistics and assembles the ledger.
pub fn entropy_ledger_gaussian(model: &BosonModel, dt: f64, n: usize) -> Result<EntropyLedger> {
    let og = build_outcome_gaussian(model, dt, n)?;
    ledger_from_outcome(model, &og)
}

/// Joint Shannon `½ ln det K`, marginal Shannon `½ ln K_ss`,
/// `J = sum η(ε) - η(ε̂)`, `J_s = sum η(ε) - η(ε̌_s)`. Shannon entropies are
/// already renormalised: the uninformative meter has `K = 1`.
pub fn ledger_from_outcome(model: &BosonModel, og: &OutcomeGaussian) -> Result<EntropyLedger> {
    let purification = condition_state(model, og, Conditioning::Record)?.entropy_drop();
    let mut steps = Vec::with_capacity(og.steps());
    for s in 0..og.steps() {
        let occ = condition_state(model, og, Conditioning::Step(s))?;
        steps.push(StepEntry {
            step: s + 1,
            marginal_shannon: 0.5 * og.k.read(s, s).ln(),
            purification: occ.entropy_drop(),
            probability: 1.0,
        });
    }
    Ok(EntropyLedger::assemble(og.dt, steps, og.joint_shannon_by_step(), None, purification, 1.0, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn decoupled_ledger_is_zero() {
        let m = BosonModel::single_mode(1.0, 0.0, 1.0).unwrap();
        let l = entropy_ledger_gaussian(&m, 0.1, 8).unwrap();
        assert_eq!(l.joint_shannon, 0.0);
        assert_eq!(l.purification, 0.0);
        assert_eq!(l.s_cnt, 0.0);
    }

    #[test]
    fn ledger_invariants() {
        let m = BosonModel::from_keldysh(|w| 0.8 / (1.0 + w * w), 1.0, 10.0, 30).unwrap();
        let l = entropy_ledger_gaussian(&m, 0.1, 100).unwrap();
        l.check().unwrap();
        assert!(l.purification > 0.0);
        let sum_js: f64 = l.purification_steps().iter().sum();
        assert!(l.purification <= sum_js + 1e-12);
        assert_abs_diff_eq!(l.identity_residual(), 0.0, epsilon = 1e-12);
    }
}
