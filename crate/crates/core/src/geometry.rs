//! Points in the unit cube, origin-anchored boxes and the counting
//! primitives every discrepancy computation is built from.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_coords(coords: &[f64]) -> Result<()> {
    for (index, &value) in coords.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::CoordinateOutOfRange { index, value });
        }
    }
    Ok(())
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A point of `[0,1]^d`, `d >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter(
                "a point needs at least one coordinate".into(),
            ));
        }
        check_coords(&coords)?;
        Ok(Self(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn ones(dim: usize) -> Self {
        Self(vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// The box `[0, upper]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchoredBox {
    pub upper: Point,
}

impl AnchoredBox {
    pub fn new(upper: Point) -> Self {
        Self { upper }
    }

    pub fn volume(&self) -> f64 {
        volume_anchored(self.upper.as_slice())
    }
}

/// Where a point set came from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    /// Zero for deterministic generators.
    pub seed: u64,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(generator: impl Into<String>, seed: u64) -> Self {
        Self {
            generator: generator.into(),
            seed,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// `N >= 1` points of `[0,1]^dim`, stored row-major in generation order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    provenance: Provenance,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "dimension must be at least 1".into(),
            ));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not form a non-empty set of {dim}-dimensional points",
                coords.len()
            )));
        }
        check_coords(&coords)?;
        Ok(Self {
            dim,
            coords,
            provenance,
        })
    }

    /// Builds a set from explicit rows; handy in tests and examples.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            check_dim(dim, row.as_ref().len())?;
            coords.extend_from_slice(row.as_ref());
        }
        Self::new(dim, coords, Provenance::new("explicit", 0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false for a constructed set; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Writes the plain-text point-set format.
    ///
    /// ```text
    /// # dim=<d> n=<N> generator=<name> seed=<u64>
    /// 0.1 0.25
    /// ...
    /// ```
    ///
    /// Coordinates use the shortest representation that parses back to the
    /// identical `f64`.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let name = if self.provenance.generator.is_empty() {
            "unknown"
        } else {
            self.provenance.generator.as_str()
        };
        writeln!(
            out,
            "# dim={} n={} generator={} seed={}",
            self.dim,
            self.len(),
            name.replace(char::is_whitespace, "_"),
            self.provenance.seed
        )?;
        let mut line = String::new();
        for p in self.iter() {
            line.clear();
            for (k, x) in p.iter().enumerate() {
                if k > 0 {
                    line.push(' ');
                }
                write!(line, "{x:?}").expect("writing to a String cannot fail");
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty file".into(),
        })?;
        let header = header?;
        let header = header.strip_prefix('#').ok_or(Error::Parse {
            line: 1,
            message: "missing '# dim=... n=... generator=... seed=...' header".into(),
        })?;

        let mut fields = BTreeMap::new();
        for tok in header.split_whitespace() {
            if let Some((k, v)) = tok.split_once('=') {
                fields.insert(k.to_string(), v.to_string());
            }
        }
        let field = |key: &str| {
            fields.get(key).cloned().ok_or(Error::Parse {
                line: 1,
                message: format!("header is missing '{key}='"),
            })
        };
        let parse_int = |key: &str| -> Result<u64> {
            field(key)?.parse().map_err(|e| Error::Parse {
                line: 1,
                message: format!("bad {key}: {e}"),
            })
        };
        let dim = parse_int("dim")? as usize;
        let n = parse_int("n")? as usize;
        let provenance = Provenance::new(field("generator")?, parse_int("seed")?);

        let mut coords = Vec::with_capacity(n * dim);
        let mut rows = 0;
        for (idx, line) in lines {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let before = coords.len();
            for tok in trimmed.split(' ') {
                let x: f64 = tok.parse().map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("bad coordinate '{tok}': {e}"),
                })?;
                coords.push(x);
            }
            if coords.len() - before != dim {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!(
                        "expected {dim} coordinates, found {}",
                        coords.len() - before
                    ),
                });
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse {
                line: 1,
                message: format!("header announces n={n} but file holds {rows} points"),
            });
        }
        Self::new(dim, coords, provenance)
    }
}

/// Volume of `[0, x]`.
pub fn volume_anchored(x: &[f64]) -> f64 {
    x.iter().product()
}

/// Number of points `p` with `p <= x` in every coordinate.
pub fn count_closed(points: &PointSet, x: &[f64]) -> Result<usize> {
    check_dim(points.dim(), x.len())?;
    Ok(points
        .iter()
        .filter(|p| p.iter().zip(x).all(|(a, b)| a <= b))
        .count())
}

/// Number of points `p` with `p < x` in every coordinate.
pub fn count_open(points: &PointSet, x: &[f64]) -> Result<usize> {
    check_dim(points.dim(), x.len())?;
    Ok(points
        .iter()
        .filter(|p| p.iter().zip(x).all(|(a, b)| a < b))
        .count())
}

/// Index (1-based) of the sub-cube of side `1/m` holding `x`, per coordinate.
///
/// Cells are half-open, `[(k-1)/m, k/m)`; the coordinate `1.0` belongs to
/// cell `m`.
pub fn bracket(x: &[f64], m: usize) -> Result<Vec<usize>> {
    if m < 1 {
        return Err(Error::InvalidParameter("bracket needs m >= 1".into()));
    }
    check_coords(x)?;
    Ok(x.iter().map(|&xi| bracket_coord(xi, m)).collect())
}

pub(crate) fn bracket_coord(x: f64, m: usize) -> usize {
    ((m as f64 * x).floor() as usize + 1).min(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid3() -> PointSet {
        let vals = [0.0, 0.5, 1.0];
        let rows: Vec<[f64; 2]> = vals
            .iter()
            .flat_map(|&a| vals.iter().map(move |&b| [a, b]))
            .collect();
        PointSet::from_rows(&rows).unwrap()
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume_anchored(&[1.0, 1.0, 1.0]), 1.0);
        assert_eq!(volume_anchored(&[0.5, 0.5]), 0.25);
        assert!((volume_anchored(&[0.1, 0.2, 0.9]) - 0.018).abs() < 1e-15);
    }

    #[test]
    fn closed_and_open_counts() {
        let single = PointSet::from_rows(&[[0.5, 0.5]]).unwrap();
        assert_eq!(count_closed(&single, &[0.5, 0.5]).unwrap(), 1);
        assert_eq!(count_closed(&single, &[0.4, 1.0]).unwrap(), 0);
        assert_eq!(count_open(&single, &[0.5, 0.5]).unwrap(), 0);
        assert_eq!(count_open(&single, &[0.6, 0.6]).unwrap(), 1);
    }

    #[test]
    fn grid_counts_match_hand_enumeration() {
        // Enumerate the nine points directly.
        let p = grid3();
        let x = [0.5, 0.5];
        let mut closed = 0;
        let mut open = 0;
        for a in [0.0, 0.5, 1.0] {
            for b in [0.0, 0.5, 1.0] {
                if a <= x[0] && b <= x[1] {
                    closed += 1;
                }
                if a < x[0] && b < x[1] {
                    open += 1;
                }
            }
        }
        assert_eq!((closed, open), (4, 1));
        assert_eq!(count_closed(&p, &x).unwrap(), 4);
        assert_eq!(count_open(&p, &x).unwrap(), 1);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p = grid3();
        assert!(matches!(
            count_closed(&p, &[0.5]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
        assert!(count_open(&p, &[0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(&[0.0, 0.0], 5).unwrap(), vec![1, 1]);
        assert_eq!(bracket(&[0.99, 0.2], 5).unwrap(), vec![5, 2]);
        assert!(bracket(&[0.5], 0).is_err());
    }

    #[test]
    fn bracket_clamps_one_into_last_cell() {
        // Half-open membership oracle: 1.0 lies in no [(k-1)/3, k/3), so the
        // clamp must pick the only closed cell containing it, k = 3.
        let m = 3;
        let member: Vec<usize> = (1..=m)
            .filter(|&k| (k - 1) as f64 / m as f64 <= 1.0 && 1.0 <= k as f64 / m as f64)
            .collect();
        assert_eq!(member, vec![3]);
        assert_eq!(bracket(&[1.0], m).unwrap(), vec![3]);
    }

    #[test]
    fn point_rejects_out_of_range() {
        assert!(Point::new(vec![0.2, 1.5]).is_err());
        assert!(Point::new(vec![]).is_err());
        assert!(PointSet::new(2, vec![0.1, 0.2, 0.3], Provenance::default()).is_err());
        assert!(PointSet::new(1, vec![], Provenance::default()).is_err());
    }

    #[test]
    fn file_round_trip_preserves_bits() {
        let p = PointSet::new(
            2,
            vec![0.1, 1.0 / 3.0, std::f64::consts::FRAC_1_SQRT_2, 0.0],
            Provenance::new("jittered", 42),
        )
        .unwrap();
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# dim=2 n=2 generator=jittered seed=42\n"));
        let back = PointSet::read_from(&buf[..]).unwrap();
        assert_eq!(back.coords(), p.coords());
        assert_eq!(back.provenance().seed, 42);
    }

    #[test]
    fn reader_rejects_malformed_files() {
        assert!(PointSet::read_from(&b""[..]).is_err());
        assert!(PointSet::read_from(&b"0.1 0.2\n"[..]).is_err());
        assert!(PointSet::read_from(&b"# dim=2 n=1 generator=x seed=0\n0.1\n"[..]).is_err());
        assert!(PointSet::read_from(&b"# dim=1 n=2 generator=x seed=0\n0.1\n"[..]).is_err());
    }
}
