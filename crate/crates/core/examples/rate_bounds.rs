// Universal bounds on the long-time rates and the rates of one spectrum.
//
// `cargo run --release --example rate_bounds`

use std::error::Error;
use std::f64::consts::PI;

use monitored_entropy::spectral::{
    fdt_complete, rates::planck_factor_integral, scnt_rate, untight_bound_constant, FdtConvention, TailModel,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let c = untight_bound_constant()?;
    println!("beta * s_CNT <= {c:.6} for any G_K >= 0 and any G_R");
    println!("beta * J     <= {:.6} (pi/8 = {:.6})", planck_factor_integral()? / (4.0 * PI), PI / 8.0);

    // an ohmic bath with exponential cutoff, completed by the FDT
    let beta = 2.0;
    let omega: Vec<f64> = (0..2000).map(|k| 20.0 * (k as f64 + 0.5) / 2000.0).collect();
    let gk: Vec<f64> = omega.iter().map(|w| 0.3 * w * (-w / 4.0).exp() / (0.5 * beta * w).tanh()).collect();
    let sd = fdt_complete(omega, gk, beta, FdtConvention::ModeExpansion, TailModel::Vanishing)?;
    let r = scnt_rate(&sd)?;
    println!("ohmic bath at beta={beta}: s_CNT = {:.6}, J = {:.6}", r.s_cnt, r.purification);
    // s_CNT < 0 here: correlations between successive readings, carried by
    // the response G_R, outweigh what the readings purify
    println!("  joint {:.6}  marginal {:.6}  first-order {:.6}", r.joint_term, r.marginal_term, r.first_order_term);
    println!("  Kramers-Kronig coarsening change {:.2e}", sd.hilbert.unwrap().relative_change);
    assert!(beta * r.s_cnt <= c && beta * r.purification <= PI / 8.0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
