use nalgebra::DMatrix;

use crate::adic::{derivation_at_depth, Derivation, DirectiveSequence, SubstitutionSet};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::spectral::{GammaLattice, SpectralData};

use super::gifs::{gifs_attractor, gifs_step, origin_seed, GifsMap, GifsOptions};
use super::hausdorff::{hausdorff, hausdorff_tiles};
use super::points::{PointSet, RauzyApprox};
use super::project::{derivation_cloud, project_prefixes, require_fractal_setting};

/// Distances below this many adapted-norm units are treated as zero.
pub const RESOLUTION: f64 = 1e-9;

/// Hausdorff distances (adapted norm) between two approximations. A subtile
/// that is empty on one side only counts as infinitely far.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub per_tile: Vec<f64>,
    pub overall: f64,
}

pub fn compare_approximations(
    spectral: &SpectralData,
    a: &RauzyApprox,
    b: &RauzyApprox,
) -> Result<Comparison> {
    let ta = a.adapted_tiles(spectral);
    let tb = b.adapted_tiles(spectral);
    if ta.len() != tb.len() {
        return Err(Error::Input(
            "approximations have different alphabets".into(),
        ));
    }
    let per_tile = ta
        .iter()
        .zip(&tb)
        .map(|(x, y)| match (x.is_empty(), y.is_empty()) {
            (true, true) => Ok(0.0),
            (false, false) => hausdorff(x, y).map(|r| r.distance),
            _ => Ok(f64::INFINITY),
        })
        .collect::<Result<Vec<_>>>()?;
    let overall = hausdorff(
        &a.union().to_adapted(spectral),
        &b.union().to_adapted(spectral),
    )?
    .distance;
    Ok(Comparison { per_tile, overall })
}

/// Projection with `n_points` prefixes against the GIFS iterate of depth
/// `depth` started from the origin in every subtile.
pub fn compare_constructions(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    spectral: &SpectralData,
    n_points: usize,
    depth: usize,
    opts: &GifsOptions,
) -> Result<Comparison> {
    let proj = project_prefixes(seq, set, spectral, n_points, 0)?;
    let gifs = gifs_attractor(seq, set, spectral, depth, &origin_seed(spectral), opts)?;
    compare_approximations(spectral, &proj, &gifs)
}

/// Finite-depth set equation along the first letter chain of depth
/// `depth + 1`: one GIFS step of `σ_0` applied to the projected cloud of the
/// shifted chain, against the projected cloud of the full chain.
#[derive(Debug, Clone, PartialEq)]
pub struct SetEquationCheck {
    pub depth: usize,
    pub points: usize,
    pub counts_match: bool,
    /// Largest per-subtile Hausdorff distance, adapted norm.
    pub mismatch: f64,
}

pub fn set_equation_check(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    spectral: &SpectralData,
    depth: usize,
) -> Result<SetEquationCheck> {
    require_fractal_setting(set, spectral)?;
    let full = derivation_at_depth(seq, set, depth + 1, 0)?;
    let shifted = Derivation::new(set, full.chain.tail())?;
    let lhs_in = derivation_cloud(spectral, &shifted);
    let map = GifsMap::new(set.get(full.chain.subs[0]), spectral)?;
    let lhs = gifs_step(&map, spectral, &lhs_in);
    let rhs = derivation_cloud(spectral, &full);
    let counts_match = lhs.iter().zip(&rhs).all(|(a, b)| a.len() == b.len());
    let adapt = |t: &[PointSet]| t.iter().map(|p| p.to_adapted(spectral)).collect::<Vec<_>>();
    let mut mismatch: f64 = 0.0;
    for (a, b) in adapt(&lhs).iter().zip(&adapt(&rhs)) {
        if a.is_empty() != b.is_empty() {
            mismatch = f64::INFINITY;
        } else if !a.is_empty() {
            mismatch = mismatch.max(hausdorff(a, b)?.distance);
        }
    }
    Ok(SetEquationCheck {
        depth,
        points: rhs.iter().map(PointSet::len).sum(),
        counts_match,
        mismatch,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    /// `(n, d_H)` for each agreement depth.
    pub rows: Vec<(usize, f64)>,
    /// Fitted per-step decay ratio `r` from `log d ≈ n log r + c`.
    pub ratio: Option<f64>,
    /// Fewer than two distances above [`RESOLUTION`].
    pub resolution_limited: bool,
    /// Steps where the distance grew.
    pub increases: usize,
}

/// Least-squares slope of `y` against `x`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Distance between the GIFS approximations of `base` and of
/// `base[..n]` followed by `tail`, for each `n` in `ns`.
pub fn continuity_experiment(
    set: &SubstitutionSet,
    spectral: &SpectralData,
    base: &DirectiveSequence,
    tail: &DirectiveSequence,
    ns: &[usize],
    depth: usize,
    opts: &GifsOptions,
) -> Result<ContinuityReport> {
    let seed = origin_seed(spectral);
    let reference = gifs_attractor(base, set, spectral, depth, &seed, opts)?;
    let ref_tiles = reference.adapted_tiles(spectral);
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let variant = DirectiveSequence::splice(base.take(n)?, tail.clone());
        let approx = gifs_attractor(&variant, set, spectral, depth, &seed, opts)?;
        let d = hausdorff_tiles(&ref_tiles, &approx.adapted_tiles(spectral))?;
        rows.push((n, d));
    }
    let increases = rows.windows(2).filter(|w| w[1].1 > w[0].1).count();
    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.1 > RESOLUTION)
        .map(|&(n, d)| (n as f64, d.ln()))
        .collect();
    let distinct_n = fit.windows(2).any(|w| w[0].0 != w[1].0);
    let (ratio, resolution_limited) = if fit.len() >= 2 && distinct_n {
        (Some(slope(&fit).exp()), false)
    } else {
        (None, true)
    };
    Ok(ContinuityReport {
        rows,
        ratio,
        resolution_limited,
        increases,
    })
}

fn inverse(gamma: &GammaLattice) -> Result<DMatrix<f64>> {
    let k = gamma.generators.len();
    let g = DMatrix::from_fn(k, k, |i, j| gamma.generators[j][i]);
    g.try_inverse()
        .ok_or_else(|| Error::Domain("lattice generators are degenerate".into()))
}

const MAX_GRID_POINTS: usize = 50_000_000;

/// Fraction of the points of `step·ℤ^k` in the ball of radius `radius`
/// that lie within `step` of some Γ-translate of `points`.
pub fn coverage_estimate(
    points: &PointSet,
    gamma: &GammaLattice,
    radius: f64,
    step: f64,
) -> Result<f64> {
    let k = points.dim();
    if points.is_empty() {
        return Err(Error::Domain("empty point set".into()));
    }
    if gamma.generators.len() != k {
        return Err(Error::Input(
            "lattice and points differ in dimension".into(),
        ));
    }
    if !(step > 0.0 && radius >= 0.0) {
        return Err(Error::Input("need step > 0 and radius >= 0".into()));
    }
    let m = (radius / step).floor() as i64;
    let side = (2 * m + 1) as usize;
    let cells = side
        .checked_pow(k as u32)
        .filter(|&c| c <= MAX_GRID_POINTS)
        .ok_or_else(|| Error::Resource("coverage grid too large".into()))?;

    let index = |g: &[i64]| -> usize { g.iter().fold(0, |acc, &c| acc * side + (c + m) as usize) };

    // Translates γ with γ + points meeting the enlarged window.
    let reach = radius + step + points.max_norm();
    let ginv = inverse(gamma)?;
    let row_sum = (0..k)
        .map(|i| (0..k).map(|j| ginv[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let nmax = (row_sum * reach).ceil() as i64;
    let mut translates = Vec::new();
    let mut n = vec![-nmax; k];
    loop {
        let t = gamma.point(&n);
        if t.iter().map(|x| x * x).sum::<f64>().sqrt() <= reach {
            translates.push(t);
        }
        let mut i = 0;
        while i < k {
            if n[i] < nmax {
                n[i] += 1;
                break;
            }
            n[i] = -nmax;
            i += 1;
        }
        if i == k {
            break;
        }
    }

    let window = radius + step;
    let h2 = step * step;
    let r2 = radius * radius;
    let marks = par::map_slice(Exec::default(), &translates, |t| {
        let mut hit = Vec::new();
        let mut y = vec![0.0; k];
        let mut lo = vec![0i64; k];
        let mut hi = vec![0i64; k];
        let mut g = vec![0i64; k];
        for p in points.iter() {
            for i in 0..k {
                y[i] = p[i] + t[i];
            }
            if y.iter().map(|x| x * x).sum::<f64>() > window * window {
                continue;
            }
            for i in 0..k {
                lo[i] = (((y[i] - step) / step).ceil() as i64).max(-m);
                hi[i] = (((y[i] + step) / step).floor() as i64).min(m);
            }
            if lo.iter().zip(&hi).any(|(a, b)| a > b) {
                continue;
            }
            g.copy_from_slice(&lo);
            loop {
                let gp: Vec<f64> = g.iter().map(|&c| c as f64 * step).collect();
                let in_ball = gp.iter().map(|x| x * x).sum::<f64>() <= r2;
                let near = gp
                    .iter()
                    .zip(&y)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    <= h2;
                if in_ball && near {
                    hit.push(index(&g) as u32);
                }
                let mut i = 0;
                while i < k {
                    if g[i] < hi[i] {
                        g[i] += 1;
                        break;
                    }
                    g[i] = lo[i];
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
        }
        hit
    });
    let mut covered = vec![false; cells];
    for hit in marks {
        for c in hit {
            covered[c as usize] = true;
        }
    }

    let mut total = 0usize;
    let mut good = 0usize;
    let mut g = vec![-m; k];
    loop {
        let in_ball = g.iter().map(|&c| (c as f64 * step).powi(2)).sum::<f64>() <= r2;
        if in_ball {
            total += 1;
            good += covered[index(&g)] as usize;
        }
        let mut i = 0;
        while i < k {
            if g[i] < m {
                g[i] += 1;
                break;
            }
            g[i] = -m;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    Ok(good as f64 / total as f64)
}
