// The Keldysh spectrum that maximizes the entropy rate when the response
// is tied to it by the FDT, versus the unconstrained optimum.
//
// `cargo run --release --example optimal_spectrum`

use std::error::Error;

use monitored_entropy::spectral::{maximize_fdt, rates::untight_optimum, MaximizerOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let opts = MaximizerOptions { log_points: 60, linear_points: 120, random_starts: 0, ..Default::default() };
    let tight = maximize_fdt(&opts)?;
    let free = maximize_fdt(&MaximizerOptions { fdt: None, ..opts })?;
    println!("max beta*s_CNT: FDT-tied {:.5}, free {:.5}", tight.value, free.value);
    println!("small-y behaviour: G_K ~ {:.3} y^(-{:.3})", tight.prefactor, tight.alpha);
    println!("     y       G_K(tight)    G_K(free)   y/(sinh y - y)");
    for k in (0..tight.y.len()).step_by(20) {
        let y = tight.y[k];
        println!("{y:8.4}  {:12.5e}  {:12.5e}  {:12.5e}", tight.keldysh[k], free.keldysh[k], untight_optimum(y));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
