//! Controlled dense coding through GHZ and W channels: per-branch outcomes, averages and a
//! seeded Monte Carlo check.
//!
//! Run with `cargo run --example controlled_dense_coding`.

use std::f64::consts::FRAC_PI_4;

use entkit::protocols::{self, CdcFamily, CdcOutcomes};
use entkit::Result;

fn main() -> Result<()> {
    let theta = 0.6;
    let run = protocols::cdc_run(CdcFamily::Ghz, theta, None, CdcOutcomes::default())?;
    println!("GHZ, θ = {theta}: outcomes {:?}", run.outcome_labels);
    println!(
        "  prefilter C = {:.6}, shared C = {:.6}, success = {:.6}",
        run.prefilter_concurrence, run.shared_concurrence, run.success_probability
    );

    for (family, epsilon) in [(CdcFamily::Ghz, None), (CdcFamily::Ghz4, Some(FRAC_PI_4)), (CdcFamily::W3, None)] {
        let avg = protocols::cdc_average(family, theta.max(FRAC_PI_4), epsilon)?;
        println!(
            "{}: success {:.6}, average bits {:.6} over {} branches",
            avg.family,
            avg.success_probability,
            avg.bits_transmitted_avg,
            avg.branches.len()
        );
    }

    let mc = protocols::cdc_monte_carlo(CdcFamily::Ghz, theta, None, 100_000, 7)?;
    println!("Monte Carlo: empirical {:.5} vs exact {:.5}", mc.empirical_success, mc.exact_success);
    Ok(())
}
