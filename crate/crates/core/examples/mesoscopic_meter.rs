// A meter coupled to a bounded function of a collective observable
// spread over the whole chain; compare purification rates across sizes.
//
// `cargo run --release --example mesoscopic_meter`

use std::error::Error;

use monitored_entropy::exact::{run_monitoring, KrausFamily, MonitoringRun, SpinChainModel};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for l in [4, 6] {
        let model = SpinChainModel::mixed_field(l)?;
        let q = model.erf_observable(0.75);
        let run = MonitoringRun::thermal(model.hamiltonian()?, 0.0, 1.0, 5, KrausFamily::binary(&q)?)?;
        let ledger = run_monitoring(&run)?;
        ledger.check()?;
        let js: Vec<String> = ledger.purification_steps().iter().map(|j| format!("{j:.4}")).collect();
        println!("L={l}: J_s = [{}], J/t = {:.5}", js.join(", "), ledger.purification / ledger.duration());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
