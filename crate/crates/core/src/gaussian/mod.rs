//! Exact covariance calculus for a harmonic bath monitored through a linear
//! observable with a Gaussian meter.

pub mod conditioning;
pub mod ledger;
pub mod model;
pub mod outcome;

pub use conditioning::{condition_state, Conditioning, ModeOccupations};
pub use ledger::entropy_ledger_gaussian;
pub use model::{eta, BosonModel, Mode};
pub use outcome::{build_outcome_gaussian, joint_shannon, OutcomeGaussian};
