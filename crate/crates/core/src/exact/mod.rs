//! Brute-force monitoring of finite-dimensional systems.

pub mod channel;
pub mod kraus;
pub mod monitor;
pub mod oscillator;
pub mod spin;
pub mod wick;

pub use channel::{channel_iterate, ChannelTrace};
pub use kraus::{KrausFamily, OutcomeGrid};
pub use monitor::{run_monitoring, MonitoringRun};
pub use oscillator::{truncated_oscillator, TruncatedOscillator};
pub use spin::{thermal_state, SpinChainModel};
pub use wick::{mesoscopic_wick_residual, wick_residual, ThermalCorrelator};
