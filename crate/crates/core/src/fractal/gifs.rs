use crate::adic::{DirectiveSequence, SubstitutionSet};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::rng::SplitMix64;
use crate::spectral::SpectralData;
use crate::subst::{abelianize, Letter, Substitution};

use super::points::{max_adapted_norm, PointSet, Provenance, RauzyApprox};
use super::project::{prefix_constant, require_fractal_setting};

/// Default cap on the number of points a GIFS step may produce.
pub const DEFAULT_POINT_BUDGET: usize = 2_000_000;

/// One edge `j → i` of the graph: `y ↦ M_s y + translation`, taking
/// subtile `source` into subtile `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct GifsEdge {
    pub source: Letter,
    pub target: Letter,
    /// 1-based position of `target` inside `σ(source)`.
    pub position: usize,
    /// Stable coordinates of `l(P)`, `P` the prefix before that position.
    pub translation: Vec<f64>,
}

/// The graph-directed system `Φ_σ` of one substitution.
#[derive(Debug, Clone)]
pub struct GifsMap {
    d: usize,
    edges: Vec<GifsEdge>,
}

impl GifsMap {
    pub fn new(sub: &Substitution, spectral: &SpectralData) -> Result<Self> {
        let d = sub.alphabet_size();
        if d != spectral.alphabet_size() || sub.incidence_matrix() != *spectral.matrix() {
            return Err(Error::Input(format!(
                "substitution {} does not have the spectral matrix",
                sub.name()
            )));
        }
        let mut edges = sub
            .prefix_suffix_table()
            .into_iter()
            .map(|e| {
                Ok(GifsEdge {
                    source: e.letter_in,
                    target: e.pivot,
                    position: e.position,
                    translation: spectral.project_int(&abelianize(&e.prefix, d)?.0),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        edges.sort_by_key(|e| e.target);
        Ok(GifsMap { d, edges })
    }

    pub fn edges(&self) -> &[GifsEdge] {
        &self.edges
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    /// Number of points `Φ` produces from subtiles of the given sizes.
    pub fn output_len(&self, sizes: &[usize]) -> usize {
        self.edges.iter().map(|e| sizes[e.source as usize]).sum()
    }
}

const STEP_CHUNK: usize = 16_384;

/// `Φ_σ`: subtile `i` of the result is the union over edges `j → i` of
/// `M_s · A_j + translation`, in edge order.
pub fn gifs_step(map: &GifsMap, spectral: &SpectralData, tiles: &[PointSet]) -> Vec<PointSet> {
    gifs_step_with(Exec::default(), map, spectral, tiles)
}

pub fn gifs_step_with(
    exec: Exec,
    map: &GifsMap,
    spectral: &SpectralData,
    tiles: &[PointSet],
) -> Vec<PointSet> {
    let dim = spectral.stable_dim();
    let mut out = vec![PointSet::new(dim); map.d];
    for edge in &map.edges {
        let src = &tiles[edge.source as usize];
        let parts = par::chunked(exec, src.len(), STEP_CHUNK, |range| {
            let mut buf = Vec::with_capacity(range.len() * dim);
            let mut y = vec![0.0; dim];
            for i in range {
                spectral.apply_m_s(src.point(i), &mut y);
                for (a, t) in y.iter_mut().zip(&edge.translation) {
                    *a += t;
                }
                buf.extend_from_slice(&y);
            }
            buf
        });
        let target = &mut out[edge.target as usize];
        for p in parts {
            target.extend(&PointSet::from_flat(dim, p).expect("finite image points"));
        }
    }
    out
}

/// Keeps about `ratio` of each subtile (at least one point of a nonempty
/// subtile), chosen uniformly with a seeded generator, in original order.
fn thin(tiles: &[PointSet], ratio: f64, seed: u64) -> Vec<PointSet> {
    let mut rng = SplitMix64::new(seed);
    tiles
        .iter()
        .map(|t| {
            let n = t.len();
            let keep = ((n as f64 * ratio).floor() as usize).clamp(n.min(1), n);
            let mut idx: Vec<usize> = (0..n).collect();
            for i in 0..keep {
                let j = i + rng.below((n - i) as u64) as usize;
                idx.swap(i, j);
            }
            let mut chosen = idx[..keep].to_vec();
            chosen.sort_unstable();
            t.select(&chosen)
        })
        .collect()
}

/// Options for [`gifs_attractor`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GifsOptions {
    pub budget: usize,
    pub thin_seed: u64,
    pub exec: Exec,
}

impl Default for GifsOptions {
    fn default() -> Self {
        GifsOptions {
            budget: DEFAULT_POINT_BUDGET,
            thin_seed: 0,
            exec: Exec::default(),
        }
    }
}

/// One point at the origin in every subtile.
pub fn origin_seed(spectral: &SpectralData) -> Vec<PointSet> {
    vec![PointSet::origin(spectral.stable_dim()); spectral.alphabet_size()]
}

/// `Φ_{σ_0} ∘ Φ_{σ_1} ∘ ⋯ ∘ Φ_{σ_{n-1}}(seed)`.
///
/// The recorded bound is `λⁿ (r + C / (1 - λ))`, with `r` the largest
/// adapted norm in the seed: it dominates the Hausdorff distance to the
/// attractor when no thinning happened.
pub fn gifs_attractor(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    spectral: &SpectralData,
    depth: usize,
    seed: &[PointSet],
    opts: &GifsOptions,
) -> Result<RauzyApprox> {
    if depth == 0 {
        return Err(Error::Input("depth must be at least 1".into()));
    }
    if seed.len() != set.d() || seed.iter().any(PointSet::is_empty) {
        return Err(Error::Input(
            "seed needs one nonempty set per letter".into(),
        ));
    }
    if seed.iter().any(|s| s.dim() != spectral.stable_dim()) {
        return Err(Error::Input("seed points have the wrong dimension".into()));
    }
    if opts.budget == 0 {
        return Err(Error::Resource("point budget is zero".into()));
    }
    require_fractal_setting(set, spectral)?;
    seq.validate(set)?;
    let maps = (0..set.len())
        .map(|i| GifsMap::new(set.get(i), spectral))
        .collect::<Result<Vec<_>>>()?;

    let mut tiles = seed.to_vec();
    let mut thinned = false;
    for level in (0..depth).rev() {
        let map = &maps[seq.get(level)?];
        let sizes: Vec<usize> = tiles.iter().map(PointSet::len).collect();
        let predicted = map.output_len(&sizes);
        if predicted > opts.budget {
            let ratio = opts.budget as f64 / predicted as f64;
            tiles = thin(
                &tiles,
                ratio,
                opts.thin_seed ^ (level as u64).wrapping_mul(0x9E37_79B9),
            );
            thinned = true;
        }
        tiles = gifs_step_with(opts.exec, map, spectral, &tiles);
    }

    let c = prefix_constant(set, spectral)?;
    let seed_radius = max_adapted_norm(spectral, seed);
    let lambda = spectral.lambda;
    Ok(RauzyApprox {
        max_adapted_norm: max_adapted_norm(spectral, &tiles),
        tiles,
        provenance: Provenance::Gifs,
        depth,
        bound: lambda.powi(depth as i32) * (seed_radius + c / (1.0 - lambda)),
        thinned,
    })
}
