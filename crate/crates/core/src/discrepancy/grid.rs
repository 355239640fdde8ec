use crate::geometry::PointSet;

/// Per-dimension sorted, deduplicated coordinate lists, each ending in `1`,
/// together with every point's position in them.
#[derive(Clone, Debug)]
pub struct CriticalGrid {
    axes: Vec<Vec<f64>>,
    /// `index[i * d + j]` is the position of point `i`'s coordinate `j` in `axes[j]`.
    index: Vec<u32>,
    n: usize,
}

impl CriticalGrid {
    pub fn new(points: &PointSet) -> Self {
        let d = points.dim();
        let n = points.len();
        let mut axes = Vec::with_capacity(d);
        let mut index = vec![0u32; n * d];
        for j in 0..d {
            let mut axis: Vec<f64> = points.iter().map(|p| p[j]).collect();
            axis.push(1.0);
            axis.sort_by(f64::total_cmp);
            axis.dedup();
            for (i, p) in points.iter().enumerate() {
                let pos = axis.partition_point(|&v| v < p[j]);
                index[i * d + j] = pos as u32;
            }
            axes.push(axis);
        }
        Self { axes, index, n }
    }

    /// Number of grid points, `∏ |Γ_j|`, without building the grid.
    pub fn size_of(points: &PointSet) -> u128 {
        (0..points.dim())
            .map(|j| {
                let mut axis: Vec<f64> = points.iter().map(|p| p[j]).collect();
                axis.push(1.0);
                axis.sort_by(f64::total_cmp);
                axis.dedup();
                axis.len() as u128
            })
            .product()
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn axis(&self, j: usize) -> &[f64] {
        &self.axes[j]
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn size(&self) -> u128 {
        self.axes.iter().map(|a| a.len() as u128).product()
    }

    #[inline]
    pub(crate) fn point_index(&self, i: usize) -> &[u32] {
        let d = self.dim();
        &self.index[i * d..(i + 1) * d]
    }

    /// Coordinates of the grid point with index vector `idx`.
    pub fn coords(&self, idx: &[u32]) -> Vec<f64> {
        idx.iter()
            .zip(&self.axes)
            .map(|(&i, a)| a[i as usize])
            .collect()
    }

    /// Volume of `[0, y]`, multiplied in dimension order.
    #[inline]
    pub(crate) fn volume(&self, idx: &[u32]) -> f64 {
        idx.iter()
            .zip(&self.axes)
            .fold(1.0, |v, (&i, a)| v * a[i as usize])
    }

    /// Points `p` with `index(p) <= idx` componentwise.
    pub(crate) fn closed_count(&self, idx: &[u32]) -> usize {
        (0..self.n)
            .filter(|&i| self.point_index(i).iter().zip(idx).all(|(a, b)| a <= b))
            .count()
    }

    /// Points `p` with `index(p) < idx` componentwise.
    pub(crate) fn open_count(&self, idx: &[u32]) -> usize {
        (0..self.n)
            .filter(|&i| self.point_index(i).iter().zip(idx).all(|(a, b)| a < b))
            .count()
    }

    /// Local discrepancy at a grid point.
    pub(crate) fn evaluate(&self, idx: &[u32]) -> f64 {
        local_discrepancy(
            self.closed_count(idx),
            self.open_count(idx),
            self.n,
            self.volume(idx),
        )
    }
}

/// `max(closed/N - vol, vol - open/N)`; every engine goes through this so
/// their values agree bit for bit.
#[inline]
pub(crate) fn local_discrepancy(closed: usize, open: usize, n: usize, vol: f64) -> f64 {
    let nf = n as f64;
    (closed as f64 / nf - vol).max(vol - open as f64 / nf)
}
