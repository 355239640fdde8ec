//! Fitting the decay exponent of jittered star discrepancy, and writing a
//! report as CSV and JSON the way the command-line tool does.
//!
//! cargo run --release --example scaling_and_reports

use jitterbench::experiments::{run_scaling, ExperimentConfig, ExperimentKind, ScalingConfig};

fn main() -> jitterbench::Result<()> {
    for (d, ms) in [(1, vec![8, 16, 32, 64, 128, 256]), (2, vec![4, 8, 16, 32])] {
        let mut cfg = ScalingConfig::new(d, ms);
        cfg.replications = 50;
        let r = run_scaling(&cfg)?;
        println!(
            "d={d}: slope {:.3} +- {:.3} (target {:.3})",
            r.summary["slope"], r.summary["slope_std_error"], r.summary["target"]
        );
        for c in &r.cells {
            let a = c.aggregate.unwrap();
            println!(
                "  N={:<5} mean {:.5}  envelope [{:.5}, {:.5}]",
                c.params["N"],
                a.mean,
                c.value("thm1_lower").unwrap_or(f64::NAN),
                c.value("thm1_upper").unwrap_or(f64::NAN)
            );
        }
    }

    // the same config as the CLI would read it
    let text = r#"{"d": 2, "ms": [2, 3, 4, 5], "replications": 20, "seed": 1}"#;
    let cfg = ExperimentConfig::from_json(ExperimentKind::Scaling, text)?;
    let report = cfg.run()?;
    let dir = std::env::temp_dir().join("jitterbench-example");
    let (json, csv) = report.write_to_dir(&dir)?;
    println!("wrote {} and {}", json.display(), csv.display());
    print!("{}", std::fs::read_to_string(csv)?);
    Ok(())
}
