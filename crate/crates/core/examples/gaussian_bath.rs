// A bath of harmonic modes under continuous weak measurement: finite-time
// rates from the covariance engine approach the closed-form spectral rates.
//
// `cargo run --release --example gaussian_bath`

use std::error::Error;

use monitored_entropy::gaussian::{entropy_ledger_gaussian, BosonModel};
use monitored_entropy::spectral::{fdt_complete, scnt_rate, FdtConvention, TailModel};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (a, beta, wmax) = (0.05, 1.0, 10.0);
    let gk = |w: f64| a / (1.0 + w * w);
    let model = BosonModel::from_keldysh(gk, beta, wmax, 60)?;
    let ledger = entropy_ledger_gaussian(&model, 0.1, 300)?;
    ledger.check()?;
    let t = ledger.duration();

    let omega: Vec<f64> = (0..2000).map(|k| wmax * (k as f64 + 0.5) / 2000.0).collect();
    let keldysh = omega.iter().map(|&w| gk(w)).collect();
    let r = scnt_rate(&fdt_complete(omega, keldysh, beta, FdtConvention::ModeExpansion, TailModel::Vanishing)?)?;
    println!("t = {t}: S_CNT/t = {:.6} (spectral {:.6}), J/t = {:.6} (spectral {:.6})",
        ledger.s_cnt / t, r.s_cnt, ledger.purification / t, r.purification);
    let by_step = ledger.s_cnt_by_step();
    for k in [9, 49, 149, 299] {
        println!("  S_CNT/t at t={:5.1}: {:.6}", (k + 1) as f64 * 0.1, by_step[k] / ((k + 1) as f64 * 0.1));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
