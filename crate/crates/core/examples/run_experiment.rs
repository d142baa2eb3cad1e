// Drive an experiment programmatically and write its tables and manifest
// (what `cnt fig3 --out DIR` does).
//
// `cargo run --release --example run_experiment`

use std::error::Error;

use monitored_entropy::experiment::{run, Experiment, ExperimentConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut config: ExperimentConfig = serde_json::from_str(r#"{"fig3": {"log_points": 60, "linear_points": 120}}"#)?;
    config.seed = 11;
    let report = run(Experiment::Fig3, &config)?;
    let dir = std::env::temp_dir().join(format!("cnt-example-{}", std::process::id()));
    for path in report.write(&dir, Experiment::Fig3, &config)? {
        println!("wrote {}", path.display());
    }
    println!("config sha256 {}", config.sha256());
    println!("value {:.6}", report.scalars["value"]);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
