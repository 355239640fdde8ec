//! Mean star discrepancy of jittered and random sets against the reference
//! table. Pass a replication count to trade accuracy for time (the
//! defaults are 1000, and 200 for m = 20); add `--stretch` for the larger
//! cells.
//!
//! cargo run --release --example reproduce_table1 -- 100

use jitterbench::experiments::{run_table1, Table1Config};

fn main() -> jitterbench::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let reps: Option<usize> = args.iter().find_map(|a| a.parse().ok());
    let mut cfg = Table1Config::default();
    if args.iter().any(|a| a == "--stretch") {
        cfg.cells.extend(Table1Config::stretch_cells());
        cfg.bb_seconds = 20.0;
    }
    if let Some(r) = reps {
        for c in &mut cfg.cells {
            c.replications = Some(r.min(c.replications.unwrap_or(r)));
        }
    }

    let report = run_table1(&cfg)?;
    println!(
        "{:<18} {:>6} {:>9} {:>9} {:>9} {:>8}  method",
        "cell", "R", "mean", "se", "ref", "diff"
    );
    for c in &report.cells {
        let a = c.aggregate.expect("table cells aggregate");
        println!(
            "{:<18} {:>6} {:>9.5} {:>9.5} {:>9.4} {:>+8.4}  {}{}",
            c.id,
            a.count,
            a.mean,
            a.std_error,
            c.value("reference").unwrap_or(f64::NAN),
            c.value("difference").unwrap_or(f64::NAN),
            c.method.as_deref().unwrap_or("-"),
            if c.stretch { " (stretch)" } else { "" },
        );
    }
    report.write_csv(std::io::stdout())?;
    Ok(())
}
