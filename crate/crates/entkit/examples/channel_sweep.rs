//! Sweeps the Werner family and reports when it teleports better than classically and when it
//! violates the CHSH inequality.
//!
//! Run with `cargo run --example channel_sweep`.

use entkit::channel;
use entkit::statezoo::MixedFamily;
use entkit::Result;

fn main() -> Result<()> {
    let grid: Vec<MixedFamily> = (1..=15).map(|k| MixedFamily::Werner { f: 0.25 + 0.05 * k as f64 }).collect();
    println!("{:>6} {:>8} {:>8} {:>8} {:>8} {:>10} {:>6}", "F", "C", "N", "M", "f_opt", "teleport", "CHSH");
    for point in channel::analyze_family(&grid)? {
        let MixedFamily::Werner { f } = point.params else { unreachable!() };
        let r = point.report;
        println!(
            "{f:>6.3} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>10} {:>6}",
            r.concurrence, r.n_value, r.m_value, r.fidelity_opt, r.useful_for_teleportation, r.violates_bell_chsh
        );
    }
    println!("Bell violation sets in at F = {:.6}", channel::werner_bell_boundary());
    Ok(())
}
