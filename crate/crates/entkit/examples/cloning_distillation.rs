//! Clones a qutrit, checks the reduction criterion, filters the pair and compares its dense
//! coding capacity before and after.
//!
//! Run with `cargo run --example cloning_distillation`.

use entkit::cloning;
use entkit::measures;
use entkit::Result;

fn main() -> Result<()> {
    for d in [0.3, (1.0f64 / 8.0).sqrt(), 0.45, 0.5] {
        let pair = cloning::qutrit_cloned_pair(d)?;
        let rho = &pair.joint;
        let check = cloning::reduction_check(rho)?;
        let (side, eigenvalue, _) = check.most_negative();
        let filter = cloning::filter_from_reduction(rho)?;
        let distilled = cloning::distill(rho, &filter)?;
        println!("d = {d:.4} (optimal machine: {})", pair.optimal);
        println!("  reduction: most negative eigenvalue {eigenvalue:.6} on {side:?}");
        println!(
            "  singlet fraction {:.6} -> {:.6}",
            measures::singlet_fraction(rho)?,
            measures::singlet_fraction(&distilled)?
        );
        println!(
            "  entropy gap {:.6} -> {:.6}, capacity {:.6} -> {:.6} bits",
            cloning::dense_coding_entropy_gap(rho)?,
            cloning::dense_coding_entropy_gap(&distilled)?,
            cloning::dense_coding_capacity(rho)?,
            cloning::dense_coding_capacity(&distilled)?
        );
    }
    Ok(())
}
