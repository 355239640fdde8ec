//! Equal-measure partitions of the unit cube.
//!
//! A cell is a finite union of interior-disjoint axis-aligned boxes, which
//! keeps both `|cell ∩ [0,x]|` and its square integral in closed form. Grid
//! partitions, guillotine partitions and randomly dealt fine grids are all
//! expressible this way.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;

/// Absolute tolerance on each cell's measure.
pub const MEASURE_TOLERANCE: f64 = 1e-12;

/// Intersections smaller than this are treated as shared faces.
const OVERLAP_TOLERANCE: f64 = 1e-14;

/// Axis-aligned box `[lower, upper]` inside the unit cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl AxisBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        Self { lower, upper }
    }

    pub fn unit(dim: usize) -> Self {
        Self::new(vec![0.0; dim], vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .product()
    }

    /// `|self ∩ [0,x]|`.
    pub fn anchored_overlap(&self, x: &[f64]) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .zip(x)
            .map(|((l, u), xi)| (xi - l).clamp(0.0, u - l))
            .product()
    }

    fn intersection_volume(&self, other: &AxisBox) -> f64 {
        let mut v = 1.0;
        for k in 0..self.dim() {
            let lo = self.lower[k].max(other.lower[k]);
            let hi = self.upper[k].min(other.upper[k]);
            if hi <= lo {
                return 0.0;
            }
            v *= hi - lo;
        }
        v
    }

    fn validate(&self, dim: usize, cell: usize) -> Result<()> {
        if self.lower.len() != dim || self.upper.len() != dim {
            return Err(Error::InvalidBox {
                cell,
                reason: format!(
                    "expected {dim} coordinates, got lower={} upper={}",
                    self.lower.len(),
                    self.upper.len()
                ),
            });
        }
        for k in 0..dim {
            let (l, u) = (self.lower[k], self.upper[k]);
            if !(0.0 <= l && l <= u && u <= 1.0) {
                return Err(Error::InvalidBox {
                    cell,
                    reason: format!("coordinate {k}: [{l}, {u}] is not an interval inside [0,1]"),
                });
            }
        }
        Ok(())
    }
}

/// A union of interior-disjoint boxes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    boxes: Vec<AxisBox>,
    measure: f64,
}

impl Cell {
    pub fn new(boxes: Vec<AxisBox>) -> Self {
        let measure = boxes.iter().map(AxisBox::volume).sum();
        Self { boxes, measure }
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }
}

/// `|c ∩ [0,x]|`.
pub fn cell_anchored_overlap(c: &Cell, x: &[f64]) -> Result<f64> {
    if let Some(b) = c.boxes.first() {
        if b.dim() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: b.dim(),
                found: x.len(),
            });
        }
    }
    Ok(c.boxes.iter().map(|b| b.anchored_overlap(x)).sum())
}

/// Draws a point uniformly from the cell.
///
/// A box is chosen with probability proportional to its volume, then each
/// coordinate is drawn uniformly inside it. Single-box cells skip the box
/// draw, so a grid cell consumes exactly `d` uniforms.
pub fn sample_cell<R: Rng + ?Sized>(c: &Cell, rng: &mut R) -> Result<Vec<f64>> {
    if c.boxes.is_empty() || c.measure <= 0.0 {
        return Err(Error::ZeroMeasureCell { cell: 0 });
    }
    let chosen = if c.boxes.len() == 1 {
        &c.boxes[0]
    } else {
        let target = rng.random::<f64>() * c.measure;
        let mut acc = 0.0;
        let mut pick = None;
        for b in &c.boxes {
            let v = b.volume();
            acc += v;
            if v > 0.0 && target < acc {
                pick = Some(b);
                break;
            }
        }
        // Rounding can leave `target` a hair above the final sum.
        pick.or_else(|| c.boxes.iter().rev().find(|b| b.volume() > 0.0))
            .expect("positive measure implies a positive-volume box")
    };
    Ok(sample_box(chosen, rng))
}

pub(crate) fn sample_box<R: Rng + ?Sized>(b: &AxisBox, rng: &mut R) -> Vec<f64> {
    b.lower
        .iter()
        .zip(&b.upper)
        .map(|(&l, &u)| {
            let x = l + rng.random::<f64>() * (u - l);
            // keep the draw inside the half-open interval [l, u)
            if x >= u && u > l {
                l.max(u.next_down())
            } else {
                x
            }
        })
        .collect()
}

/// A validated partition of `[0,1]^dim` into cells of measure `1/N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    dim: usize,
    cells: Vec<Cell>,
}

/// JSON description of a partition.
///
/// ```json
/// {"dim": 2, "n_cells": 2,
///  "cells": [{"boxes": [{"lower": [0, 0], "upper": [0.5, 1]}]},
///            {"boxes": [{"lower": [0.5, 0], "upper": [1, 1]}]}]}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub dim: usize,
    pub n_cells: usize,
    pub cells: Vec<CellSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSpec {
    pub boxes: Vec<AxisBox>,
}

impl Partition {
    /// Validates equal measure, pairwise disjointness and coverage.
    pub fn from_cells(dim: usize, cell_boxes: Vec<Vec<AxisBox>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "dimension must be at least 1".into(),
            ));
        }
        if cell_boxes.is_empty() {
            return Err(Error::InvalidParameter(
                "a partition needs at least one cell".into(),
            ));
        }
        let n = cell_boxes.len();
        let expected = 1.0 / n as f64;
        let mut cells = Vec::with_capacity(n);
        for (i, boxes) in cell_boxes.into_iter().enumerate() {
            if boxes.is_empty() {
                return Err(Error::ZeroMeasureCell { cell: i });
            }
            for b in &boxes {
                b.validate(dim, i)?;
            }
            let cell = Cell::new(boxes);
            if cell.measure <= 0.0 {
                return Err(Error::ZeroMeasureCell { cell: i });
            }
            let defect = (cell.measure - expected).abs();
            if defect > MEASURE_TOLERANCE {
                return Err(Error::MeasureMismatch {
                    cell: i,
                    measure: cell.measure,
                    expected,
                    defect,
                });
            }
            cells.push(cell);
        }
        check_disjoint(&cells)?;

        let part = Self { dim, cells };
        let ones = vec![1.0; dim];
        let total: f64 = part
            .cells
            .iter()
            .map(|c| cell_anchored_overlap(c, &ones).expect("dimension checked above"))
            .sum();
        let defect = (total - 1.0).abs();
        if defect > n as f64 * MEASURE_TOLERANCE {
            return Err(Error::CoverageGap { total, defect });
        }
        Ok(part)
    }

    pub fn from_spec(spec: &PartitionSpec) -> Result<Self> {
        if spec.n_cells != spec.cells.len() {
            return Err(Error::InvalidParameter(format!(
                "n_cells = {} but {} cells are listed",
                spec.n_cells,
                spec.cells.len()
            )));
        }
        Self::from_cells(
            spec.dim,
            spec.cells.iter().map(|c| c.boxes.clone()).collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PartitionSpec = serde_json::from_str(text)?;
        Self::from_spec(&spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_spec(&self) -> PartitionSpec {
        PartitionSpec {
            dim: self.dim,
            n_cells: self.cells.len(),
            cells: self
                .cells
                .iter()
                .map(|c| CellSpec {
                    boxes: c.boxes.clone(),
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// `Σ_i |Ω_i ∩ [0,x]|`, which equals the volume of `[0,x]`.
    pub fn total_overlap(&self, x: &[f64]) -> Result<f64> {
        self.cells.iter().map(|c| cell_anchored_overlap(c, x)).sum()
    }
}

fn check_disjoint(cells: &[Cell]) -> Result<()> {
    // Sweep along the first axis so only boxes sharing an x-range are compared.
    let mut all: Vec<(usize, &AxisBox)> = cells
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.boxes.iter().map(move |b| (i, b)))
        .collect();
    all.sort_by(|a, b| a.1.lower[0].total_cmp(&b.1.lower[0]));
    for (i, &(ca, a)) in all.iter().enumerate() {
        for &(cb, b) in &all[i + 1..] {
            if b.lower[0] >= a.upper[0] {
                break;
            }
            let v = a.intersection_volume(b);
            if v > OVERLAP_TOLERANCE {
                return Err(Error::Overlap {
                    cell_a: ca.min(cb),
                    cell_b: ca.max(cb),
                    volume: v,
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn checked_cell_count(m: usize, d: usize) -> Result<usize> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "need m >= 1 and d >= 1, got m={m}, d={d}"
        )));
    }
    let d32 =
        u32::try_from(d).map_err(|_| Error::Overflow(format!("dimension {d} is too large")))?;
    m.checked_pow(d32)
        .filter(|&n| n.checked_mul(d).is_some())
        .ok_or_else(|| Error::Overflow(format!("{m}^{d} cells do not fit in memory")))
}

/// Lexicographic index vectors of `{1..m}^d`, first coordinate slowest.
pub(crate) fn grid_indices(m: usize, d: usize) -> impl Iterator<Item = Vec<usize>> {
    let n = m.pow(d as u32);
    (0..n).map(move |mut flat| {
        let mut idx = vec![0; d];
        for k in (0..d).rev() {
            idx[k] = flat % m + 1;
            flat /= m;
        }
        idx
    })
}

pub(crate) fn grid_box(index: &[usize], m: usize) -> AxisBox {
    let mf = m as f64;
    AxisBox::new(
        index.iter().map(|&k| (k - 1) as f64 / mf).collect(),
        index.iter().map(|&k| k as f64 / mf).collect(),
    )
}

/// The `m^d` cubes of side `1/m`, in lexicographic index order.
pub fn grid_partition(m: usize, d: usize) -> Result<Partition> {
    checked_cell_count(m, d)?;
    let cells = grid_indices(m, d)
        .map(|idx| vec![grid_box(&idx, m)])
        .collect();
    Partition::from_cells(d, cells)
}

/// Deals the `m_fine^d` sub-cubes, shuffled by `seed`, into `n` cells of
/// `m_fine^d / n` sub-cubes each.
pub fn randomized_fine_grid_partition(
    m_fine: usize,
    n: usize,
    d: usize,
    seed: u64,
) -> Result<Partition> {
    let total = checked_cell_count(m_fine, d)?;
    if n == 0 || total < n || total % n != 0 {
        return Err(Error::InvalidParameter(format!(
            "{m_fine}^{d} = {total} sub-cubes cannot be dealt evenly into {n} cells"
        )));
    }
    let mut cubes: Vec<AxisBox> = grid_indices(m_fine, d)
        .map(|idx| grid_box(&idx, m_fine))
        .collect();
    cubes.shuffle(&mut substream(seed, 0));
    let block = total / n;
    let mut cells = Vec::with_capacity(n);
    let mut it = cubes.into_iter();
    for _ in 0..n {
        cells.push(it.by_ref().take(block).collect());
    }
    Partition::from_cells(d, cells)
}

/// A random equal-measure partition built by guillotine cuts.
///
/// The cube is cut recursively into `n * pieces_per_cell` boxes of equal
/// volume (each cut splits a box holding `c` pieces at a random fraction
/// `k/c` along a random axis); the boxes are then shuffled and dealt
/// `pieces_per_cell` at a time, so cells are generally disconnected.
pub fn random_box_partition(
    n: usize,
    d: usize,
    pieces_per_cell: usize,
    seed: u64,
) -> Result<Partition> {
    if n == 0 || d == 0 || pieces_per_cell == 0 {
        return Err(Error::InvalidParameter(
            "random_box_partition needs n, d and pieces_per_cell >= 1".into(),
        ));
    }
    let pieces = n
        .checked_mul(pieces_per_cell)
        .ok_or_else(|| Error::Overflow("too many pieces".into()))?;
    let mut rng = substream(seed, 0);
    let mut done = Vec::with_capacity(pieces);
    let mut stack = vec![(AxisBox::unit(d), pieces)];
    while let Some((b, count)) = stack.pop() {
        if count == 1 {
            done.push(b);
            continue;
        }
        let k = rng.random_range(1..count);
        let axis = rng.random_range(0..d);
        let cut = b.lower[axis] + (b.upper[axis] - b.lower[axis]) * (k as f64 / count as f64);
        let mut left = b.clone();
        let mut right = b;
        left.upper[axis] = cut;
        right.lower[axis] = cut;
        stack.push((left, k));
        stack.push((right, count - k));
    }
    done.shuffle(&mut rng);
    let mut it = done.into_iter();
    let cells = (0..n)
        .map(|_| it.by_ref().take(pieces_per_cell).collect())
        .collect();
    Partition::from_cells(d, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::volume_anchored;

    #[test]
    fn trivial_grids() {
        let p = grid_partition(1, 3).unwrap();
        assert_eq!(p.n_cells(), 1);
        assert_eq!(p.cells()[0].boxes()[0], AxisBox::unit(3));

        let p = grid_partition(2, 1).unwrap();
        assert_eq!(p.cells()[0].boxes()[0], AxisBox::new(vec![0.0], vec![0.5]));
        assert_eq!(p.cells()[1].boxes()[0], AxisBox::new(vec![0.5], vec![1.0]));

        let p = grid_partition(5, 2).unwrap();
        assert_eq!(p.n_cells(), 25);
        for c in p.cells() {
            assert!((c.measure() - 0.04).abs() < 1e-15);
        }
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let p = grid_partition(2, 2).unwrap();
        let lowers: Vec<_> = p
            .cells()
            .iter()
            .map(|c| c.boxes()[0].lower.clone())
            .collect();
        assert_eq!(
            lowers,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 0.5],
                vec![0.5, 0.0],
                vec![0.5, 0.5]
            ]
        );
    }

    #[test]
    fn grid_overflow_is_guarded() {
        assert!(matches!(
            grid_partition(1 << 20, 8),
            Err(Error::Overflow(_))
        ));
        assert!(grid_partition(0, 2).is_err());
    }

    #[test]
    fn l_shaped_two_cell_partition() {
        // Cell 0 = [0,0.3]x[0,1] ∪ [0.3,1]x[0,y*] with 0.3 + 0.7 y* = 0.5.
        let y = 0.2 / 0.7;
        let measure0: f64 = 0.3 * 1.0 + 0.7 * y;
        assert!((measure0 - 0.5).abs() < 1e-15);
        let spec = PartitionSpec {
            dim: 2,
            n_cells: 2,
            cells: vec![
                CellSpec {
                    boxes: vec![
                        AxisBox::new(vec![0.0, 0.0], vec![0.3, 1.0]),
                        AxisBox::new(vec![0.3, 0.0], vec![1.0, y]),
                    ],
                },
                CellSpec {
                    boxes: vec![AxisBox::new(vec![0.3, y], vec![1.0, 1.0])],
                },
            ],
        };
        let p = Partition::from_spec(&spec).unwrap();
        assert!((p.cells()[0].measure() - 0.5).abs() < 1e-12);
        assert!((p.cells()[1].measure() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unequal_measures_are_rejected() {
        let spec = PartitionSpec {
            dim: 1,
            n_cells: 2,
            cells: vec![
                CellSpec {
                    boxes: vec![AxisBox::new(vec![0.0], vec![0.6])],
                },
                CellSpec {
                    boxes: vec![AxisBox::new(vec![0.6], vec![1.0])],
                },
            ],
        };
        match Partition::from_spec(&spec) {
            Err(Error::MeasureMismatch {
                cell: 0, defect, ..
            }) => assert!((defect - 0.1).abs() < 1e-12),
            other => panic!("expected MeasureMismatch, got {other:?}"),
        }
    }

    #[test]
    fn overlapping_cells_are_rejected() {
        let cells = vec![
            vec![AxisBox::new(vec![0.0, 0.0], vec![0.5, 1.0])],
            vec![
                AxisBox::new(vec![0.25, 0.0], vec![0.75, 0.5]),
                AxisBox::new(vec![0.75, 0.0], vec![1.0, 1.0]),
            ],
        ];
        assert!(matches!(
            Partition::from_cells(2, cells),
            Err(Error::Overlap {
                cell_a: 0,
                cell_b: 1,
                ..
            })
        ));
    }

    #[test]
    fn boxes_outside_the_cube_are_rejected() {
        let cells = vec![
            vec![AxisBox::new(vec![0.0], vec![0.5])],
            vec![AxisBox::new(vec![0.6], vec![1.1])],
        ];
        assert!(matches!(
            Partition::from_cells(1, cells),
            Err(Error::InvalidBox { cell: 1, .. })
        ));
    }

    #[test]
    fn grid_round_trips_through_json() {
        let p = grid_partition(2, 2).unwrap();
        let text = serde_json::to_string(&p.to_spec()).unwrap();
        let q = Partition::from_json(&text).unwrap();
        assert_eq!(p, q);
        for x in [[0.3, 0.8], [0.75, 0.25], [1.0, 1.0]] {
            for (a, b) in p.cells().iter().zip(q.cells()) {
                assert_eq!(
                    cell_anchored_overlap(a, &x).unwrap(),
                    cell_anchored_overlap(b, &x).unwrap()
                );
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let p = grid_partition(2, 2).unwrap();
        let cell = &p.cells()[2]; // [0.5,1] x [0,0.5]
        assert_eq!(cell.boxes()[0].lower, vec![0.5, 0.0]);
        // (0.75 - 0.5) * (0.25 - 0) by hand
        assert_eq!(
            cell_anchored_overlap(cell, &[0.75, 0.25]).unwrap(),
            0.25 * 0.25
        );
        for c in p.cells() {
            assert_eq!(cell_anchored_overlap(c, &[1.0, 1.0]).unwrap(), 0.25);
            assert_eq!(cell_anchored_overlap(c, &[0.0, 0.0]).unwrap(), 0.0);
        }
        assert!(cell_anchored_overlap(cell, &[0.5]).is_err());
    }

    #[test]
    fn grid_overlap_matches_product_form() {
        let m = 3;
        let p = grid_partition(m, 2).unwrap();
        for (c, idx) in p.cells().iter().zip(grid_indices(m, 2)) {
            for x in [[0.1f64, 0.9], [0.5, 0.5], [0.77, 0.4], [1.0, 0.2]] {
                let product: f64 = idx
                    .iter()
                    .zip(&x)
                    .map(|(&k, &xi)| {
                        let lo = (k - 1) as f64 / m as f64;
                        let hi = k as f64 / m as f64;
                        (xi.min(hi) - lo).max(0.0)
                    })
                    .product();
                assert_eq!(cell_anchored_overlap(c, &x).unwrap(), product);
            }
        }
    }

    #[test]
    fn fine_grid_examples() {
        let p = randomized_fine_grid_partition(2, 4, 2, 1).unwrap();
        let mut lowers: Vec<_> = p
            .cells()
            .iter()
            .map(|c| c.boxes()[0].lower.clone())
            .collect();
        lowers.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let g = grid_partition(2, 2).unwrap();
        let expect: Vec<_> = g
            .cells()
            .iter()
            .map(|c| c.boxes()[0].lower.clone())
            .collect();
        assert_eq!(lowers, expect);

        let p = randomized_fine_grid_partition(4, 4, 2, 1).unwrap();
        for c in p.cells() {
            assert_eq!(c.boxes().len(), 4);
            assert!((c.measure() - 0.25).abs() < 1e-15);
        }

        assert_eq!(
            randomized_fine_grid_partition(8, 4, 2, 7).unwrap(),
            randomized_fine_grid_partition(8, 4, 2, 7).unwrap()
        );
        assert!(randomized_fine_grid_partition(3, 4, 2, 7).is_err());
    }

    #[test]
    fn random_box_partitions_validate() {
        for seed in 0..20 {
            for d in 1..=3 {
                let p = random_box_partition(2 + seed as usize % 7, d, 3, seed).unwrap();
                let x = vec![0.6; d];
                assert!((p.total_overlap(&x).unwrap() - volume_anchored(&x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sample_cell_stays_in_support() {
        let cell = Cell::new(vec![AxisBox::new(vec![0.0, 0.0], vec![0.5, 0.5])]);
        let mut rng = substream(3, 0);
        for _ in 0..1000 {
            let p = sample_cell(&cell, &mut rng).unwrap();
            assert!(p.iter().all(|&x| (0.0..0.5).contains(&x)));
        }
        let a = sample_cell(&cell, &mut substream(9, 2)).unwrap();
        let b = sample_cell(&cell, &mut substream(9, 2)).unwrap();
        assert_eq!(a, b);
        assert!(sample_cell(&Cell::new(vec![]), &mut rng).is_err());
    }

    #[test]
    fn sample_cell_selects_boxes_by_volume() {
        // volumes 0.2 and 0.05: box 0 should be picked with frequency 0.8
        let cell = Cell::new(vec![
            AxisBox::new(vec![0.0, 0.0], vec![0.4, 0.5]),
            AxisBox::new(vec![0.5, 0.5], vec![0.75, 0.7]),
        ]);
        let draws = 100_000;
        let mut rng = substream(11, 0);
        let mut first = 0;
        for _ in 0..draws {
            let p = sample_cell(&cell, &mut rng).unwrap();
            if p[0] < 0.4 {
                first += 1;
            } else {
                assert!((0.5..0.75).contains(&p[0]) && (0.5..0.7).contains(&p[1]));
            }
        }
        let freq = first as f64 / draws as f64;
        let se = (0.8f64 * 0.2 / draws as f64).sqrt();
        assert!((freq - 0.8).abs() < 4.0 * se, "freq {freq}");
    }
}
