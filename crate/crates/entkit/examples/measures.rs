//! Entanglement measures on a handful of two-qubit states.
//!
//! Run with `cargo run --example measures`.

use entkit::measures::{self, EntropyKind};
use entkit::statezoo::{self, MixedFamily};
use entkit::Result;

fn main() -> Result<()> {
    let states = [
        ("Bell Ψ⁺", statezoo::bell(1)?.density()),
        ("Werner F = 0.6", statezoo::make_mixed(MixedFamily::Werner { f: 0.6 })?),
        ("Werner F = 0.4", statezoo::make_mixed(MixedFamily::Werner { f: 0.4 })?),
        ("MEMS C = 0.5", statezoo::make_mixed(MixedFamily::Mjwk { c: 0.5 })?),
    ];
    println!(
        "{:<16} {:>11} {:>11} {:>11} {:>11} {:>9}",
        "state", "concurrence", "negativity", "EoF", "S_linear", "PPT"
    );
    for (name, rho) in &states {
        let ph = measures::peres_horodecki(rho)?;
        println!(
            "{:<16} {:>11.6} {:>11.6} {:>11.6} {:>11.6} {:>9?}",
            name,
            measures::concurrence(rho)?,
            measures::negativity(rho)?,
            measures::entanglement_of_formation(rho)?,
            measures::entropy(rho, EntropyKind::Linear, 2.0)?,
            ph.verdict,
        );
    }
    Ok(())
}
