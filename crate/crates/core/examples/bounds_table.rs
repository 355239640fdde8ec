//! Every bound evaluator at a few sizes, plus where the jittered inverse
//! discrepancy bound starts to win.
//!
//! cargo run --example bounds_table -- 1024 2

use jitterbench::bounds::{evaluate_all, inverse_improvement_onset, TailParams};

fn main() {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (n, d) = match args[..] {
        [n, d, ..] => (n, d as usize),
        _ => (1024.0, 2),
    };
    println!("N = {n}, d = {d}");
    for b in evaluate_all(n, d, TailParams::default()) {
        let inputs: Vec<String> = b.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let tag = if b.conjectural { " (conjectural)" } else { "" };
        println!(
            "  {:<26} {:>14.6e}  {}{tag}",
            b.name,
            b.value,
            inputs.join(" ")
        );
    }

    println!("\nfirst N beyond d^d where log N < N^(1/d):");
    for d in 2..=8 {
        if let Some(n) = inverse_improvement_onset(d, (d as f64).powi(d as i32), 1.01) {
            println!(
                "  d={d}: N ~ {n:.3e}  (d^d = {:.0})",
                (d as f64).powi(d as i32)
            );
        }
    }
}
