// One oscillator, two independent computations: brute-force enumeration of
// discretized Gaussian readings on a truncated Fock space, and the
// covariance engine.
//
// `cargo run --release --example oscillator_oracle`

use std::error::Error;

use monitored_entropy::exact::{kraus::OutcomeGrid, run_monitoring, truncated_oscillator, KrausFamily, MonitoringRun};
use monitored_entropy::gaussian::{entropy_ledger_gaussian, BosonModel};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (omega, lambda, beta, dt, n) = (1.0, 0.3, 1.0, 0.25, 2);
    let gauss = entropy_ledger_gaussian(&BosonModel::single_mode(omega, lambda, beta)?, dt, n)?;

    let osc = truncated_oscillator(omega, lambda, beta, 40)?;
    let reach = osc.observable.operator_norm() * dt.sqrt() + 6.0;
    let kraus = KrausFamily::gaussian(&osc.observable, dt, Some(OutcomeGrid::uniform(-reach, reach, 20)?))?;
    let exact = run_monitoring(&MonitoringRun::thermal(osc.hamiltonian.clone(), beta, dt, n, kraus)?)?;
    exact.check()?;
    println!("J: enumeration {:.10}, covariance {:.10}", exact.purification, gauss.purification);
    for (s, (a, b)) in exact.purification_steps().iter().zip(gauss.purification_steps()).enumerate() {
        println!("J_{}: {a:.10} vs {b:.10}", s + 1);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
