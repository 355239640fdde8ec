use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::grid::{local_discrepancy, CriticalGrid};
use super::{BbBudget, DiscrepancyResult, StarMethod};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::rng::substream;

/// Exact star discrepancy of a one-dimensional set from its order statistics.
pub fn star_1d_exact(points: &PointSet) -> Result<DiscrepancyResult> {
    if points.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: points.dim(),
        });
    }
    let mut xs = points.coords().to_vec();
    xs.sort_by(f64::total_cmp);
    let (value, at) = ks_statistic_sorted(&xs);
    Ok(DiscrepancyResult::new(
        value,
        vec![at],
        StarMethod::Exact1d,
        true,
    ))
}

/// `sup_z |#{x_i <= z}/n - z|` for sorted `xs`, with the maximizing order
/// statistic.
pub(crate) fn ks_statistic_sorted(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mut best = (f64::NEG_INFINITY, 1.0);
    for (i, &x) in xs.iter().enumerate() {
        let above = (i + 1) as f64 / n - x;
        let below = x - i as f64 / n;
        let v = above.max(below);
        if v > best.0 {
            best = (v, x);
        }
    }
    best
}

/// Best grid point found so far; ties go to the lexicographically smallest
/// index vector.
#[derive(Clone, Debug)]
struct Best {
    value: f64,
    idx: Vec<u32>,
}

impl Best {
    fn none() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            idx: Vec::new(),
        }
    }

    fn offer(&mut self, value: f64, idx: &[u32]) {
        if value > self.value || (value == self.value && idx < self.idx.as_slice()) {
            self.value = value;
            self.idx.clear();
            self.idx.extend_from_slice(idx);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        if !other.idx.is_empty() {
            self.offer(other.value, &other.idx);
        }
        self
    }
}

struct Enumerator<'a> {
    grid: &'a CriticalGrid,
    hist_closed: Vec<u32>,
    hist_open: Vec<u32>,
    prefix: Vec<u32>,
    best: Best,
}

impl<'a> Enumerator<'a> {
    fn new(grid: &'a CriticalGrid) -> Self {
        let last = grid.axis(grid.dim() - 1).len();
        Self {
            grid,
            hist_closed: vec![0; last],
            hist_open: vec![0; last],
            prefix: Vec::with_capacity(grid.dim()),
            best: Best::none(),
        }
    }

    /// Visits every grid point whose first `level` indices are `self.prefix`.
    /// `closed` holds the points with index <= prefix, `open` those with
    /// index < prefix, on the leading coordinates.
    fn run(&mut self, level: usize, closed: &[u32], open: &[u32], vol: f64) {
        let g = self.grid;
        let d = g.dim();
        let axis = g.axis(level);
        if level + 1 == d {
            self.hist_closed.fill(0);
            self.hist_open.fill(0);
            for &p in closed {
                self.hist_closed[g.point_index(p as usize)[level] as usize] += 1;
            }
            for &p in open {
                self.hist_open[g.point_index(p as usize)[level] as usize] += 1;
            }
            let (mut c, mut o) = (0usize, 0usize);
            self.prefix.push(0);
            for (i, &a) in axis.iter().enumerate() {
                c += self.hist_closed[i] as usize;
                let v = local_discrepancy(c, o, g.n_points(), vol * a);
                o += self.hist_open[i] as usize;
                if v >= self.best.value {
                    *self.prefix.last_mut().expect("pushed above") = i as u32;
                    self.best.offer(v, &self.prefix);
                }
            }
            self.prefix.pop();
            return;
        }

        let key = |p: &u32| g.point_index(*p as usize)[level];
        let mut closed = closed.to_vec();
        let mut open = open.to_vec();
        closed.sort_by_key(key);
        open.sort_by_key(key);
        let (mut pc, mut po) = (0, 0);
        for (i, &a) in axis.iter().enumerate() {
            let i = i as u32;
            while pc < closed.len() && key(&closed[pc]) <= i {
                pc += 1;
            }
            while po < open.len() && key(&open[po]) < i {
                po += 1;
            }
            self.prefix.push(i);
            self.run(level + 1, &closed[..pc], &open[..po], vol * a);
            self.prefix.pop();
        }
    }
}

/// Exact star discrepancy by enumerating the critical grid.
///
/// Refuses with [`Error::BudgetExceeded`] when the grid has more than
/// `budget` points. The outermost coordinate is split across threads; the
/// result, witness included, does not depend on the thread count.
pub fn star_exact_grid(points: &PointSet, budget: u64) -> Result<DiscrepancyResult> {
    let required = CriticalGrid::size_of(points);
    if required > u128::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let g = CriticalGrid::new(points);
    let all: Vec<u32> = (0..g.n_points() as u32).collect();

    let best = if g.dim() == 1 {
        let mut e = Enumerator::new(&g);
        e.run(0, &all, &all, 1.0);
        e.best
    } else {
        let axis0 = g.axis(0);
        let partial: Vec<Best> = (0..axis0.len() as u32)
            .into_par_iter()
            .map(|i| {
                let closed: Vec<u32> = all
                    .iter()
                    .copied()
                    .filter(|&p| g.point_index(p as usize)[0] <= i)
                    .collect();
                let open: Vec<u32> = closed
                    .iter()
                    .copied()
                    .filter(|&p| g.point_index(p as usize)[0] < i)
                    .collect();
                let mut e = Enumerator::new(&g);
                e.prefix.push(i);
                e.run(1, &closed, &open, 1.0 * axis0[i as usize]);
                e.best
            })
            .collect();
        partial.into_iter().fold(Best::none(), Best::merge)
    };
    Ok(DiscrepancyResult::new(
        best.value,
        g.coords(&best.idx),
        StarMethod::ExactGrid,
        true,
    ))
}

struct Node {
    bound: f64,
    lo: Vec<u32>,
    hi: Vec<u32>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // Max-heap: larger bound first, then the smaller lower index.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.lo.cmp(&self.lo))
    }
}

fn node_bound(g: &CriticalGrid, lo: &[u32], hi: &[u32]) -> f64 {
    let n = g.n_points() as f64;
    let upper_closed = g.closed_count(hi) as f64 / n - g.volume(lo);
    let lower_open = g.volume(hi) - g.open_count(lo) as f64 / n;
    upper_closed.max(lower_open)
}

/// Exact star discrepancy by best-first branch-and-bound over index boxes of
/// the critical grid.
///
/// For an index box `[lo, hi]` every grid point inside has local
/// discrepancy at most `max(closed(hi)/N - vol(lo), vol(hi) - open(lo)/N)`;
/// boxes whose bound does not beat the incumbent are dropped. The incumbent
/// starts from a coordinate-ascent run. If the budget runs out the incumbent
/// is returned with `is_exact = false`.
pub fn star_exact_bb(points: &PointSet, budget: BbBudget) -> DiscrepancyResult {
    let start = Instant::now();
    let g = CriticalGrid::new(points);
    let d = g.dim();
    let mut inc = coordinate_ascent(&g, 16 * d, 0);

    let lo = vec![0u32; d];
    let hi: Vec<u32> = g.axes().iter().map(|a| a.len() as u32 - 1).collect();
    let mut heap = BinaryHeap::new();
    let root = Node {
        bound: node_bound(&g, &lo, &hi),
        lo,
        hi,
    };
    if root.bound > inc.value {
        heap.push(root);
    }

    let mut expanded: u64 = 0;
    let mut exact = true;
    while let Some(node) = heap.pop() {
        if node.bound <= inc.value {
            break;
        }
        if node.lo == node.hi {
            // Best-first: nothing left in the heap can beat this leaf.
            inc.offer(node.bound, &node.lo);
            break;
        }
        expanded += 1;
        let out_of_nodes = budget.max_nodes.is_some_and(|m| expanded > m);
        let out_of_time =
            expanded.is_multiple_of(256) && budget.max_time.is_some_and(|t| start.elapsed() > t);
        if out_of_nodes || out_of_time {
            exact = false;
            break;
        }

        let split = (0..d)
            .max_by_key(|&j| (node.hi[j] - node.lo[j], std::cmp::Reverse(j)))
            .expect("d >= 1");
        let mid = (node.lo[split] + node.hi[split]) / 2;
        let mut left_hi = node.hi.clone();
        left_hi[split] = mid;
        let mut right_lo = node.lo.clone();
        right_lo[split] = mid + 1;
        for (lo, hi) in [(node.lo, left_hi), (right_lo, node.hi)] {
            let bound = node_bound(&g, &lo, &hi);
            if lo == hi {
                inc.offer(bound, &lo);
            } else if bound > inc.value {
                heap.push(Node { bound, lo, hi });
            }
        }
    }
    DiscrepancyResult::new(inc.value, g.coords(&inc.idx), StarMethod::ExactBb, exact)
}

/// Best value along coordinate `j` with the other indices fixed, scanning
/// all of `Γ_j` in one pass.
fn scan_axis(
    g: &CriticalGrid,
    idx: &[u32],
    j: usize,
    hc: &mut Vec<u32>,
    ho: &mut Vec<u32>,
) -> (u32, f64) {
    let axis = g.axis(j);
    hc.clear();
    hc.resize(axis.len(), 0);
    ho.clear();
    ho.resize(axis.len(), 0);
    for p in 0..g.n_points() {
        let pi = g.point_index(p);
        let mut closed = true;
        let mut open = true;
        for (k, (&a, &b)) in pi.iter().zip(idx).enumerate() {
            if k == j {
                continue;
            }
            closed &= a <= b;
            open &= a < b;
        }
        if closed {
            hc[pi[j] as usize] += 1;
            if open {
                ho[pi[j] as usize] += 1;
            }
        }
    }
    let vol_rest: f64 = idx
        .iter()
        .zip(g.axes())
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, (&i, a))| a[i as usize])
        .product();

    let current = idx[j];
    let (mut c, mut o) = (0usize, 0usize);
    let mut best = (current, f64::NEG_INFINITY);
    let mut at_current = f64::NEG_INFINITY;
    for (i, &a) in axis.iter().enumerate() {
        c += hc[i] as usize;
        let v = local_discrepancy(c, o, g.n_points(), vol_rest * a);
        o += ho[i] as usize;
        if i as u32 == current {
            at_current = v;
        }
        if v > best.1 {
            best = (i as u32, v);
        }
    }
    if best.1 > at_current {
        best
    } else {
        (current, at_current)
    }
}

fn coordinate_ascent(g: &CriticalGrid, restarts: usize, seed: u64) -> Best {
    let d = g.dim();
    let runs: Vec<Best> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = substream(seed, r as u64);
            let mut idx: Vec<u32> = g
                .axes()
                .iter()
                .map(|a| rng.random_range(0..a.len() as u32))
                .collect();
            let (mut hc, mut ho) = (Vec::new(), Vec::new());
            for _ in 0..100 * d {
                let mut moved = false;
                for j in 0..d {
                    let (i, _) = scan_axis(g, &idx, j, &mut hc, &mut ho);
                    if i != idx[j] {
                        idx[j] = i;
                        moved = true;
                    }
                }
                if !moved {
                    break;
                }
            }
            Best {
                value: g.evaluate(&idx),
                idx,
            }
        })
        .collect();
    runs.into_iter().fold(Best::none(), Best::merge)
}

/// Lower bound on the star discrepancy by multistart coordinate ascent over
/// the critical grid.
///
/// Each restart starts at a seeded random grid point and re-optimizes one
/// coordinate at a time (a full scan of that axis) until a sweep makes no
/// move, capped at `100 d` sweeps. The reported value is always attained at
/// a grid point, so it never exceeds the true discrepancy.
pub fn star_heuristic_lower(
    points: &PointSet,
    restarts: usize,
    seed: u64,
) -> Result<DiscrepancyResult> {
    if restarts == 0 {
        return Err(Error::InvalidParameter(
            "heuristic needs at least one restart".into(),
        ));
    }
    let g = CriticalGrid::new(points);
    let best = coordinate_ascent(&g, restarts, seed);
    Ok(DiscrepancyResult::new(
        best.value,
        g.coords(&best.idx),
        StarMethod::Heuristic,
        false,
    ))
}
