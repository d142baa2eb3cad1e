// Exact outcome enumeration for a spin chain watched through a local
// two-outcome meter: per-step purification, defects, and the ledger.
//
// `cargo run --release --example chain_monitoring`

use std::error::Error;

use monitored_entropy::exact::{run_monitoring, KrausFamily, MonitoringRun, SpinChainModel};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let model = SpinChainModel::mixed_field(4)?;
    let q = model.microscopic_observable(0.75, 0, 2)?;
    let run = MonitoringRun::thermal(model.hamiltonian()?, 0.0, 1.0, 6, KrausFamily::binary(&q)?)?.tracking_prefixes(true);
    let ledger = run_monitoring(&run)?;
    ledger.check()?;
    println!(" s   J_s        S_s        defect     J(t)/t");
    let jt = ledger.purification_by_step.clone().unwrap_or_default();
    for (e, j) in ledger.steps.iter().zip(&jt) {
        println!("{:2}   {:.6}   {:.6}   {:.6}   {:.6}", e.step, e.purification, e.marginal_shannon, e.defect(), j / e.step as f64);
    }
    println!("S_CNT = {:.6}, J = {:.6}, identity residual {:.1e}", ledger.s_cnt, ledger.purification, ledger.identity_residual());
    ledger.write_csv(std::io::sink())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
