//! L2 discrepancy closed forms and the partition principle: any
//! equal-measure partition beats i.i.d. sampling in expected L2 discrepancy.
//!
//! cargo run --release --example l2_and_partitions

use jitterbench::discrepancy::{
    expected_l2sq_partition, expected_l2sq_random, l2_bruteforce, l2_star, pointwise_count_variance,
};
use jitterbench::generators::gen_jittered;
use jitterbench::partition::{
    grid_partition, random_box_partition, randomized_fine_grid_partition, Partition,
};

fn main() -> jitterbench::Result<()> {
    let p = gen_jittered(4, 2, 11)?;
    let mc = l2_bruteforce(&p, 1_000_000, 5)?;
    println!(
        "L2^2 closed form {:.6e}, Monte Carlo {:.6e} +- {:.1e}",
        l2_star(&p),
        mc.mean,
        mc.std_error
    );

    println!(
        "\n{:<28} {:>12} {:>12} {:>7}",
        "partition", "E L2^2", "random", "ratio"
    );
    let mut parts: Vec<(String, Partition)> = vec![
        ("grid 2x2".into(), grid_partition(2, 2)?),
        ("grid 4x4".into(), grid_partition(4, 2)?),
        (
            "guillotine, 5 cells".into(),
            random_box_partition(5, 2, 3, 1)?,
        ),
    ];
    for m_fine in [2, 4, 8, 16] {
        parts.push((
            format!("fine grid m={m_fine}, 4 cells"),
            randomized_fine_grid_partition(m_fine, 4, 2, 0)?,
        ));
    }
    for (name, part) in &parts {
        let a = expected_l2sq_partition(part);
        let b = expected_l2sq_random(part.n_cells(), part.dim());
        println!("{name:<28} {a:>12.6e} {b:>12.6e} {:>7.4}", a / b);
    }

    // an L-shaped cell paired with its complement, from a JSON spec
    let y = 0.2 / 0.7;
    let spec = format!(
        r#"{{"dim": 2, "n_cells": 2, "cells": [
            {{"boxes": [{{"lower": [0, 0], "upper": [0.3, 1]}}, {{"lower": [0.3, 0], "upper": [1, {y}]}}]}},
            {{"boxes": [{{"lower": [0.3, {y}], "upper": [1, 1]}}]}}]}}"#
    );
    let l_shape = Partition::from_json(&spec)?;
    println!(
        "\nL-shaped pair: E L2^2 = {:.6e}, variance of the count at (0.5, 0.5): {:.4} (random {:.4})",
        expected_l2sq_partition(&l_shape),
        pointwise_count_variance(&l_shape, &[0.5, 0.5])?,
        2.0 * 0.25 * 0.75
    );
    Ok(())
}
