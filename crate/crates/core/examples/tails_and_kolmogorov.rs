//! One-dimensional discrepancy of uniform samples: tail frequencies against
//! DKW, exponential moments against their bound, and sqrt(n) E X_n against
//! the Kolmogorov mean.
//!
//! cargo run --release --example tails_and_kolmogorov

use jitterbench::experiments::{
    run_dkw_tails, run_kolmogorov, run_moment_bound, DkwConfig, KolmogorovConfig, MomentConfig,
};

fn main() -> jitterbench::Result<()> {
    let dkw = run_dkw_tails(&DkwConfig {
        replications: 20_000,
        ..DkwConfig::default()
    })?;
    println!("{:<14} {:>10} {:>12}", "cell", "frequency", "DKW bound");
    for c in &dkw.cells {
        println!(
            "{:<14} {:>10.5} {:>12.4e}",
            c.id,
            c.value("frequency").unwrap(),
            c.value("bound").unwrap()
        );
    }

    let moment = run_moment_bound(&MomentConfig {
        replications: 20_000,
        ..MomentConfig::default()
    })?;
    println!("\n{:<10} {:>10} {:>10}", "cell", "E e^tX", "bound");
    for c in &moment.cells {
        let est = c.aggregate.map_or(f64::NAN, |a| a.mean);
        println!(
            "{:<10} {:>10.5} {:>10.5}",
            c.id,
            est,
            c.value("bound").unwrap()
        );
    }

    let kol = run_kolmogorov(&KolmogorovConfig {
        replications: 5_000,
        tolerance: 0.05,
        ..KolmogorovConfig::default()
    })?;
    println!("\nsqrt(n) E X_n, limit {:.5}", kol.summary["limit"]);
    for c in &kol.cells {
        let a = c.aggregate.unwrap();
        println!(
            "  n={:<5} {:.5} +- {:.5}",
            c.params["n"], a.mean, a.std_error
        );
    }
    for status in [dkw.status(), moment.status(), kol.status()] {
        println!("{status:?}");
    }
    Ok(())
}
