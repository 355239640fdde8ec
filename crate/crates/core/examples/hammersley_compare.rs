//! Hammersley against jittered sampling and the centered grid, with both
//! upper bounds.
//!
//! cargo run --release --example hammersley_compare

use jitterbench::experiments::{run_hammersley_compare, HammersleyConfig};

fn main() -> jitterbench::Result<()> {
    let report = run_hammersley_compare(&HammersleyConfig {
        replications: 50,
        ..HammersleyConfig::default()
    })?;
    println!(
        "{:<10} {:>10} {:>10} {:>10} {:>12} {:>10}",
        "cell", "hammersley", "jittered", "grid", "ham. bound", "jit. bound"
    );
    for c in &report.cells {
        let v = |k: &str| c.value(k).unwrap_or(f64::NAN);
        println!(
            "{:<10} {:>10.5} {:>10.5} {:>10.5} {:>12.5} {:>10.5}",
            c.id,
            v("hammersley"),
            v("jittered_mean"),
            v("grid"),
            v("hammersley_leading_bound"),
            v("thm1_upper")
        );
    }
    Ok(())
}
