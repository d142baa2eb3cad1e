// Rates for a tabulated `omega,G_K` file on a symmetric grid.
//
// `cargo run --release --example spectrum_file -- path/to/spectrum.csv 1.0`
// (without arguments a sample file is generated).

use std::error::Error;

use monitored_entropy::spectral::{fdt_complete, scnt_rate, FdtConvention, SpectralData, TailModel};

fn sample() -> String {
    let mut s = String::from("# omega,G_K\n");
    for k in -400..=400 {
        let w = k as f64 * 0.025;
        s += &format!("{w},{}\n", 0.2 * (-(w * w)).exp() + 0.1 / (1.0 + w * w));
    }
    s
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    rates_for(&sample(), 0.5)
}

fn rates_for(text: &str, beta: f64) -> Result<(), Box<dyn Error>> {
    let (omega, gk) = SpectralData::read_keldysh_csv(text.as_bytes())?;
    let (half, gk) = SpectralData::half_from_symmetric(&omega, &gk)?;
    for conv in [FdtConvention::ModeExpansion, FdtConvention::FullTanh] {
        let sd = fdt_complete(half.clone(), gk.clone(), beta, conv, TailModel::Vanishing)?;
        let r = scnt_rate(&sd)?;
        let h = sd.hilbert.unwrap();
        println!("{conv:?}: s_CNT = {:.6e}, J = {:.6e}, KK resolved: {} ({:.1e})", r.s_cnt, r.purification, h.resolved, h.relative_change);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    match (args.next(), args.next()) {
        (Some(path), beta) => rates_for(&std::fs::read_to_string(path)?, beta.map_or(Ok(1.0), |b| b.parse())?),
        _ => run_example(),
    }
}
