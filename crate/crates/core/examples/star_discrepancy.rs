//! Exact and heuristic star discrepancy on the same sets.
//!
//! cargo run --release --example star_discrepancy

use std::time::Instant;

use jitterbench::discrepancy::{
    star_discrepancy, star_exact_bb, star_exact_grid, star_heuristic_lower, BbBudget, CriticalGrid,
    StarOptions, DEFAULT_GRID_BUDGET,
};
use jitterbench::generators::{gen_jittered, gen_uniform};

fn main() -> jitterbench::Result<()> {
    for (label, p) in [
        ("uniform N=64 d=2", gen_uniform(64, 2, 1)?),
        ("jittered 8x8", gen_jittered(8, 2, 1)?),
        ("jittered 5^3", gen_jittered(5, 3, 1)?),
    ] {
        println!(
            "{label}: critical grid has {} points",
            CriticalGrid::size_of(&p)
        );

        let t = Instant::now();
        let grid = star_exact_grid(&p, DEFAULT_GRID_BUDGET)?;
        println!("  exact_grid  {:.6}  {:?}", grid.value, t.elapsed());

        let t = Instant::now();
        let bb = star_exact_bb(&p, BbBudget::unlimited());
        println!("  exact_bb    {:.6}  {:?}", bb.value, t.elapsed());

        let t = Instant::now();
        let h = star_heuristic_lower(&p, 32, 0)?;
        println!(
            "  heuristic   {:.6}  {:?}  (lower bound)",
            h.value,
            t.elapsed()
        );

        println!("  witness     {:?}", grid.witness.upper.as_slice());
    }

    // auto picks the cheapest exact engine that fits the budgets
    let big = gen_jittered(10, 3, 2)?;
    let res = star_discrepancy(&big, &StarOptions::default())?;
    println!(
        "jittered 10^3 via {}: {:.6} (exact: {})",
        res.method, res.value, res.is_exact
    );
    Ok(())
}
