use crate::error::{Error, Result};
use crate::spectral::SpectralData;

/// A finite set of points in `R^dim`, stored row-major.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        PointSet {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        PointSet {
            dim,
            coords: Vec::with_capacity(dim * n),
        }
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::Input(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("non-finite coordinate".into()));
        }
        Ok(PointSet { dim, coords })
    }

    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Input(format!(
                "point {p:?} is not of dimension {dim}"
            )));
        }
        Self::from_flat(dim, points.concat())
    }

    pub fn origin(dim: usize) -> Self {
        PointSet {
            dim,
            coords: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim.max(1))
    }

    pub fn push(&mut self, p: &[f64]) {
        debug_assert_eq!(p.len(), self.dim);
        self.coords.extend_from_slice(p);
    }

    pub fn extend(&mut self, other: &PointSet) {
        debug_assert_eq!(other.dim, self.dim);
        self.coords.extend_from_slice(&other.coords);
    }

    /// Points at the given indices, in that order.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut out = PointSet::with_capacity(self.dim, indices.len());
        for &i in indices {
            out.push(self.point(i));
        }
        out
    }

    /// Largest Euclidean norm, 0 for the empty set.
    pub fn max_norm(&self) -> f64 {
        self.iter()
            .map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// `(min, max)` per coordinate; `None` when empty.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let mut it = self.iter();
        let first = it.next()?;
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        for p in it {
            for (k, &x) in p.iter().enumerate() {
                lo[k] = lo[k].min(x);
                hi[k] = hi[k].max(x);
            }
        }
        Some((lo, hi))
    }

    /// The same points in the frame where the adapted norm is Euclidean.
    pub fn to_adapted(&self, spectral: &SpectralData) -> PointSet {
        let mut out = PointSet {
            dim: self.dim,
            coords: vec![0.0; self.coords.len()],
        };
        for (src, dst) in self
            .coords
            .chunks_exact(self.dim)
            .zip(out.coords.chunks_exact_mut(self.dim))
        {
            spectral.to_adapted(src, dst);
        }
        out
    }
}

/// Which construction produced an approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Projection,
    Gifs,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Projection => "projection",
            Provenance::Gifs => "gifs",
        })
    }
}

/// A finite approximation of a Rauzy fractal, split into subtiles by letter,
/// in stable coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RauzyApprox {
    pub tiles: Vec<PointSet>,
    pub provenance: Provenance,
    /// Derivation depth (projection) or number of GIFS steps.
    pub depth: usize,
    /// Projection: `C / (1 - λ)`. GIFS: bound on the Hausdorff distance to
    /// the attractor in the adapted norm.
    pub bound: f64,
    /// Largest adapted norm over all points.
    pub max_adapted_norm: f64,
    /// Some GIFS step was randomly thinned to respect the point budget.
    pub thinned: bool,
}

impl RauzyApprox {
    pub fn len(&self) -> usize {
        self.tiles.iter().map(PointSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.tiles.first().map_or(0, PointSet::dim)
    }

    pub fn union(&self) -> PointSet {
        let mut out = PointSet::with_capacity(self.dim(), self.len());
        for t in &self.tiles {
            out.extend(t);
        }
        out
    }

    pub fn adapted_tiles(&self, spectral: &SpectralData) -> Vec<PointSet> {
        self.tiles.iter().map(|t| t.to_adapted(spectral)).collect()
    }

    /// Projection bound check: every point strictly inside `C / (1 - λ)`.
    pub fn bound_ok(&self) -> bool {
        self.provenance != Provenance::Projection || self.max_adapted_norm < self.bound
    }
}

pub(crate) fn max_adapted_norm(spectral: &SpectralData, tiles: &[PointSet]) -> f64 {
    tiles
        .iter()
        .map(|t| t.to_adapted(spectral).max_norm())
        .fold(0.0, f64::max)
}
