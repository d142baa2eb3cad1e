//! Dynamical entropy and purification rates of monitored quantum systems.
//!
//! Three independent engines compute the same quantities:
//!
//! * [`exact`] — brute-force enumeration of measurement records for small
//!   spin chains and truncated oscillators;
//! * [`gaussian`] — exact covariance calculus for a harmonic bath coupled
//!   linearly to a Gaussian meter;
//! * [`spectral`] — closed-form long-time rates from the Keldysh spectrum,
//!   plus the fluctuation–dissipation-constrained optimisation.
//!
//! Entropies are in nats, time in units of the inverse coupling.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exact;
pub mod experiment;
pub mod fit;
pub mod gaussian;
pub mod ledger;
pub mod operator;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
