// How Gaussian is the collective fluctuation of a chaotic chain? Four-point
// function against its Wick decomposition.
//
// `cargo run --release --example wick_residual`

use std::error::Error;

use monitored_entropy::exact::{mesoscopic_wick_residual, SpinChainModel};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for times in [[0.0, 0.5, 1.0, 1.5], [0.3, 0.0, 1.1, 0.7]] {
        for l in [4, 6, 8] {
            let r = mesoscopic_wick_residual(&SpinChainModel::mixed_field(l)?, 0.0, times)?;
            println!("t = {times:?}  L={l}: residual {r:.4}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
