//! Closed-form long-time rates from Keldysh/retarded spectra, the bound
//! constants, and the fluctuation–dissipation constrained maximization.

pub mod data;
pub mod hilbert;
pub mod maximize;
pub mod rates;

pub use data::{fdt_complete, FdtConvention, HilbertStatus, SpectralData};
pub use hilbert::{hilbert_transform, Parity, TailModel};
pub use maximize::{maximize_fdt, MaximizerOptions, MaximizerResult};
pub use rates::{purification_rate, scnt_rate, untight_bound_constant, RateResult};
