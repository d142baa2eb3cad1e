// Repeated "evolve, then read +" on the identity: generic dynamics forgets
// the readings exponentially fast, a conserved observable never does.
//
// `cargo run --release --example channel_iteration`

use std::error::Error;

use monitored_entropy::exact::{channel_iterate, KrausFamily, SpinChainModel};
use monitored_entropy::operator::HermitianOperator;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let model = SpinChainModel::mixed_field(4)?;
    let kraus = KrausFamily::binary(&model.microscopic_observable(0.75, 0, 2)?)?;
    let h = model.hamiltonian()?;
    let diag = HermitianOperator::from_diagonal(&h.diagonal());
    for (label, ham) in [("generic", h), ("conserved", diag)] {
        let trace = channel_iterate(&kraus, &ham.evolution(1.0), 0, 10)?;
        let d: Vec<String> = trace.distances.iter().map(|x| format!("{x:.2e}")).collect();
        println!("{label:>9}: {}", d.join(" "));
        if let Some((slope, r2)) = trace.log_slope(2..=10) {
            println!("{:>9}  log-slope {slope:.3} (R^2 {r2:.3})", "");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
