use crate::error::{Error, Result};

/// A piecewise-linear path in `R^d`, stored as a flat row-major point list.
///
/// The order of the points is the parametrization; consecutive points are
/// joined by straight segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    dimension: usize,
    coords: Vec<f64>,
}

impl Path {
    /// Builds a path from a list of points.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dimension = points.first().map(Vec::len).unwrap_or(0);
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dimension) {
            return Err(Error::invalid(format!(
                "point {i} has {} coordinates, expected {dimension}",
                p.len()
            )));
        }
        Self::from_flat(dimension, points.into_iter().flatten().collect())
    }

    /// Builds a path from row-major coordinates.
    pub fn from_flat(dimension: usize, coords: Vec<f64>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("path dimension must be positive"));
        }
        if coords.len() % dimension != 0 {
            return Err(Error::invalid(format!(
                "{} coordinates do not divide into points of dimension {dimension}",
                coords.len()
            )));
        }
        if coords.len() / dimension < 2 {
            return Err(Error::invalid("a path needs at least 2 points"));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite coordinate at point {}, axis {}",
                pos / dimension,
                pos % dimension + 1
            )));
        }
        Ok(Path { dimension, coords })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dimension
    }

    /// Always false: a valid path has at least two points.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn points(&self) -> impl DoubleEndedIterator<Item = &[f64]> + ExactSizeIterator {
        self.coords.chunks_exact(self.dimension)
    }

    /// Segment increments `x_{i+1} - x_i`.
    pub fn increments(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.points()
            .zip(self.points().skip(1))
            .map(|(a, b)| b.iter().zip(a).map(|(b, a)| b - a).collect())
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_points(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }

    /// The same trace run backwards.
    pub fn reversed(&self) -> Path {
        let coords = self.points().rev().flatten().copied().collect();
        Path {
            dimension: self.dimension,
            coords,
        }
    }

    /// Every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Path> {
        Path::from_flat(
            self.dimension,
            self.coords.iter().map(|c| c * factor).collect(),
        )
    }

    /// Appends `other`, translated so that it starts where `self` ends.
    pub fn concat(&self, other: &Path) -> Result<Path> {
        if self.dimension != other.dimension {
            return Err(Error::invalid(format!(
                "cannot concatenate paths of dimension {} and {}",
                self.dimension, other.dimension
            )));
        }
        let end = self.point(self.len() - 1).to_vec();
        let start = other.point(0);
        let shift: Vec<f64> = end.iter().zip(start).map(|(e, s)| e - s).collect();
        let mut coords = self.coords.clone();
        for p in other.points().skip(1) {
            coords.extend(p.iter().zip(&shift).map(|(x, s)| x + s));
        }
        Ok(Path {
            dimension: self.dimension,
            coords,
        })
    }

    /// Splits at interior point `at`; both halves contain that point.
    pub fn split_at(&self, at: usize) -> Result<(Path, Path)> {
        if at == 0 || at + 1 >= self.len() {
            return Err(Error::invalid(format!(
                "split point {at} is not interior to a path of {} points",
                self.len()
            )));
        }
        let d = self.dimension;
        let left = self.coords[..(at + 1) * d].to_vec();
        let right = self.coords[at * d..].to_vec();
        Ok((
            Path { dimension: d, coords: left },
            Path { dimension: d, coords: right },
        ))
    }

    /// Inserts the point at fraction `t` of segment `segment` (between points
    /// `segment` and `segment + 1`).
    pub fn subdivided(&self, segment: usize, t: f64) -> Result<Path> {
        if segment + 1 >= self.len() {
            return Err(Error::invalid(format!("no segment {segment}")));
        }
        let a = self.point(segment);
        let b = self.point(segment + 1);
        let mid: Vec<f64> = a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect();
        let d = self.dimension;
        let mut coords = self.coords[..(segment + 1) * d].to_vec();
        coords.extend(mid);
        coords.extend_from_slice(&self.coords[(segment + 1) * d..]);
        Path::from_flat(d, coords)
    }
}
