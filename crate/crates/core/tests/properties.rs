use proptest::prelude::*;

use jitterbench::discrepancy::{
    expected_l2sq_partition, expected_l2sq_random, l2_star, pointwise_count_variance,
    star_exact_bb, star_exact_grid, star_heuristic_lower, BbBudget, DEFAULT_GRID_BUDGET,
};
use jitterbench::generators::{gen_jittered, gen_uniform};
use jitterbench::geometry::{bracket, count_closed, count_open, volume_anchored};
use jitterbench::partition::{
    grid_partition, random_box_partition, randomized_fine_grid_partition, Partition,
};
use jitterbench::PointSet;

fn unit_vec(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, d)
}

/// Points on a coarse lattice so ties and boundary hits are common.
fn lattice_set() -> impl Strategy<Value = PointSet> {
    (1usize..=3, 1usize..=10).prop_flat_map(|(d, n)| {
        prop::collection::vec(0u8..=8, n * d).prop_map(move |c| {
            PointSet::new(
                d,
                c.into_iter().map(|k| k as f64 / 8.0).collect(),
                Default::default(),
            )
            .unwrap()
        })
    })
}

fn any_partition() -> impl Strategy<Value = Partition> {
    prop_oneof![
        (1usize..=4, 1usize..=3).prop_map(|(m, d)| grid_partition(m, d).unwrap()),
        (1usize..=3, 1usize..=8, 1usize..=4, any::<u64>())
            .prop_map(|(d, n, k, s)| random_box_partition(n, d, k, s).unwrap()),
        (1usize..=2, any::<u64>())
            .prop_map(|(d, s)| randomized_fine_grid_partition(4, 4, d, s).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn open_count_never_exceeds_closed(p in lattice_set(), seed in any::<u64>()) {
        let x = gen_uniform(1, p.dim(), seed).unwrap().point(0).to_vec();
        prop_assert!(count_open(&p, &x).unwrap() <= count_closed(&p, &x).unwrap());
        for k in 0..p.dim() {
            // lattice coordinates are hit exactly here
            let mut y = x.clone();
            y[k] = (y[k] * 8.0).round() / 8.0;
            prop_assert!(count_open(&p, &y).unwrap() <= count_closed(&p, &y).unwrap());
        }
    }

    #[test]
    fn counts_are_monotone(p in lattice_set(), a in unit_vec(3), b in unit_vec(3)) {
        let d = p.dim();
        let lo: Vec<f64> = a[..d].iter().zip(&b[..d]).map(|(x, y)| x.min(*y)).collect();
        let hi: Vec<f64> = a[..d].iter().zip(&b[..d]).map(|(x, y)| x.max(*y)).collect();
        prop_assert!(count_closed(&p, &lo).unwrap() <= count_closed(&p, &hi).unwrap());
        prop_assert!(count_open(&p, &lo).unwrap() <= count_open(&p, &hi).unwrap());
    }

    #[test]
    fn exact_engines_agree_and_bound_the_heuristic(p in lattice_set(), seed in any::<u64>()) {
        let grid = star_exact_grid(&p, DEFAULT_GRID_BUDGET).unwrap();
        let bb = star_exact_bb(&p, BbBudget::unlimited());
        prop_assert!(bb.is_exact);
        prop_assert_eq!(grid.value, bb.value);
        prop_assert!((0.0..=1.0).contains(&grid.value));
        // one point always leaves discrepancy at least 1/(2N) in each axis
        prop_assert!(grid.value >= 1.0 / (2.0 * p.len() as f64) - 1e-15);
        let h = star_heuristic_lower(&p, 4, seed).unwrap();
        prop_assert!(h.value <= grid.value);
    }

    #[test]
    fn witness_attains_the_reported_value(p in lattice_set()) {
        let r = star_exact_grid(&p, DEFAULT_GRID_BUDGET).unwrap();
        let y = r.witness.upper.as_slice();
        let n = p.len() as f64;
        let v = volume_anchored(y);
        let local = (count_closed(&p, y).unwrap() as f64 / n - v).max(v - count_open(&p, y).unwrap() as f64 / n);
        prop_assert!((local - r.value).abs() <= 1e-15);
    }

    #[test]
    fn cells_cover_the_anchored_box(part in any_partition(), x in unit_vec(3)) {
        let x = &x[..part.dim()];
        prop_assert!((part.total_overlap(x).unwrap() - volume_anchored(x)).abs() <= 1e-12);
    }

    #[test]
    fn partition_principle(part in any_partition()) {
        let a = expected_l2sq_partition(&part);
        let b = expected_l2sq_random(part.n_cells(), part.dim());
        prop_assert!(a <= b + 1e-12, "{} > {}", a, b);
        prop_assert!(a >= -1e-15);
    }

    #[test]
    fn pointwise_variance_is_dominated(part in any_partition(), x in unit_vec(3)) {
        let x = &x[..part.dim()];
        let n = part.n_cells() as f64;
        let v = volume_anchored(x);
        prop_assert!(pointwise_count_variance(&part, x).unwrap() <= n * v * (1.0 - v) + 1e-12);
    }

    #[test]
    fn point_files_round_trip(n in 1usize..40, d in 1usize..5, seed in any::<u64>()) {
        let p = gen_uniform(n, d, seed).unwrap();
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        let back = PointSet::read_from(buf.as_slice()).unwrap();
        prop_assert_eq!(back.coords(), p.coords());
        prop_assert_eq!(back.provenance().seed, seed);
    }

    #[test]
    fn jittered_points_stay_in_their_cells(m in 1usize..7, d in 1usize..4, seed in any::<u64>()) {
        let p = gen_jittered(m, d, seed).unwrap();
        for (k, x) in p.iter().enumerate() {
            let cell = bracket(x, m).unwrap();
            let flat = cell.iter().fold(0, |acc, &c| acc * m + (c - 1));
            prop_assert_eq!(flat, k);
        }
    }

    #[test]
    fn l2_is_nonnegative_and_bounded(p in lattice_set()) {
        let v = l2_star(&p);
        prop_assert!(v >= 0.0);
        prop_assert!(v <= 1.0);
    }
}
