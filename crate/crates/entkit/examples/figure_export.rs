//! Writes every figure table as CSV into a directory (default `figures/`).
//!
//! Run with `cargo run --example figure_export -- out_dir`.

use std::fs;
use std::path::PathBuf;

use entkit::cli::{figure_csv, FIGURE_IDS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    fs::create_dir_all(&dir)?;
    for id in FIGURE_IDS {
        let csv = figure_csv(id, 51)?;
        let path = dir.join(format!("figure_{id}.csv"));
        fs::write(&path, &csv)?;
        println!("{} ({} rows)", path.display(), csv.lines().count() - 1);
    }
    Ok(())
}
