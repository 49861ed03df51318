//! Secret sharing through a cloned channel: Charlie's bit, Alice's Hadamard outcome and Bob's
//! unambiguous POVM read-out.
//!
//! Run with `cargo run --example secret_sharing`.

use entkit::protocols::{self, HadamardOutcome};
use entkit::Result;

fn main() -> Result<()> {
    let c = (2.0f64 / 3.0).sqrt();
    for bit in [0u8, 1] {
        for outcome in [HadamardOutcome::Plus, HadamardOutcome::Minus] {
            let report = protocols::secret_share_run(c, bit, outcome)?;
            println!(
                "bit {bit}, Alice {outcome:?}: p = {:.4}, POVM [{:.4}, {:.4}, {:.4}], decoded {} with success {:.6}",
                report.alice_probability,
                report.povm_stats[0],
                report.povm_stats[1],
                report.povm_stats[2],
                report.decoded_bit,
                report.success_probability
            );
        }
    }
    println!("overall success at c² = 2/3: {:.6}", protocols::secret_share_success(c)?);
    let checks = protocols::secret_share_witness_checks(c, 0.5)?;
    println!("witness on the shared pair: {:.6} (closed form {:.6})", checks.w1_value, checks.w1_closed_form);
    Ok(())
}
