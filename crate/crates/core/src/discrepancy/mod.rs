//! Star discrepancy and L² discrepancy.
//!
//! Exact star discrepancy is computed on the critical grid: per dimension
//! the sorted distinct point coordinates plus `1`. At a grid point `y` the
//! local discrepancy is
//!
//! ```text
//! max(closed(y)/N - vol(y), vol(y) - open(y)/N)
//! ```
//!
//! where `closed` counts `p <= y` and `open` counts `p < y`. The supremum
//! over all anchored boxes is the maximum of this quantity over the grid.

mod grid;
mod l2;
mod star;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::geometry::{AnchoredBox, Point, PointSet};

pub use grid::CriticalGrid;
pub use l2::{
    expected_l2sq_partition, expected_l2sq_random, l2_bruteforce, l2_star,
    pointwise_count_variance, ramp_product_integral, MonteCarloEstimate,
};
pub use star::{star_1d_exact, star_exact_bb, star_exact_grid, star_heuristic_lower};

/// Default cap on critical-grid evaluations for [`star_exact_grid`].
pub const DEFAULT_GRID_BUDGET: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StarMethod {
    Exact1d,
    ExactGrid,
    ExactBb,
    Heuristic,
}

impl StarMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact1d => "exact_1d",
            Self::ExactGrid => "exact_grid",
            Self::ExactBb => "exact_bb",
            Self::Heuristic => "heuristic",
        }
    }
}

impl std::fmt::Display for StarMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a star-discrepancy computation.
///
/// `witness` is the grid point attaining `value`. For the negative part the
/// supremum is a limit from below, so the witness is the corner the open
/// boxes approach.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyResult {
    pub value: f64,
    pub witness: AnchoredBox,
    pub method: StarMethod,
    pub is_exact: bool,
}

impl DiscrepancyResult {
    pub(crate) fn new(value: f64, witness: Vec<f64>, method: StarMethod, is_exact: bool) -> Self {
        Self {
            value,
            witness: AnchoredBox::new(
                Point::new(witness).expect("critical grid values lie in [0,1]"),
            ),
            method,
            is_exact,
        }
    }
}

/// Limits for [`star_exact_bb`]. Hitting either returns the incumbent with
/// `is_exact = false`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BbBudget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl BbBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }

    pub fn time(max_time: Duration) -> Self {
        Self {
            max_nodes: None,
            max_time: Some(max_time),
        }
    }
}

/// Which engine to use for a star-discrepancy request.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodPreference {
    ExactGrid,
    ExactBb,
    Heuristic,
    /// Enumeration when the critical grid fits the budget, otherwise
    /// branch-and-bound under a time limit, otherwise the heuristic.
    #[default]
    Auto,
}

/// Knobs shared by the star-discrepancy front door.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarOptions {
    pub method: MethodPreference,
    pub grid_budget: u64,
    pub bb_budget: BbBudget,
    /// `None` means the default `16 d`.
    pub restarts: Option<usize>,
    pub seed: u64,
}

impl Default for StarOptions {
    fn default() -> Self {
        Self {
            method: MethodPreference::Auto,
            grid_budget: DEFAULT_GRID_BUDGET,
            bb_budget: BbBudget::time(Duration::from_secs(60)),
            restarts: None,
            seed: 0,
        }
    }
}

/// Star discrepancy with the engine selected by `opts.method`.
///
/// In `Auto` mode a branch-and-bound run that runs out of budget returns its
/// incumbent, which starts from a heuristic run and so is never worse than
/// it; such results carry `is_exact = false`.
pub fn star_discrepancy(points: &PointSet, opts: &StarOptions) -> crate::Result<DiscrepancyResult> {
    let restarts = opts.restarts.unwrap_or(16 * points.dim());
    match opts.method {
        MethodPreference::ExactGrid => star_exact_grid(points, opts.grid_budget),
        MethodPreference::ExactBb => Ok(star_exact_bb(points, opts.bb_budget)),
        MethodPreference::Heuristic => star_heuristic_lower(points, restarts, opts.seed),
        MethodPreference::Auto => {
            if points.dim() == 1 {
                return star_1d_exact(points);
            }
            if CriticalGrid::size_of(points) <= u128::from(opts.grid_budget) {
                return star_exact_grid(points, opts.grid_budget);
            }
            Ok(star_exact_bb(points, opts.bb_budget))
        }
    }
}
