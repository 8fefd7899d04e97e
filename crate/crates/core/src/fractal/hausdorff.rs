//! Exact Hausdorff distance between finite point sets.
//!
//! Nearest neighbours come from a uniform grid over the second set with a
//! ring search; a query stops as soon as it cannot raise the running maximum.
//! Above three dimensions the grid is skipped and the scan is brute force.

use crate::error::{Error, Result};
use crate::par::{self, Exec};

use super::points::PointSet;

#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffResult {
    pub distance: f64,
    /// `(a, b)` with `a` in the first set, `b` in the second, at distance
    /// `distance`.
    pub witness: (Vec<f64>, Vec<f64>),
}

#[inline]
fn sq_dist(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn check_inputs(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    if a.dim() != b.dim() {
        return Err(Error::Input(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

const GRID_MAX_DIM: usize = 3;
const QUERY_CHUNK: usize = 2048;

struct Grid<'a> {
    pts: &'a PointSet,
    min: Vec<f64>,
    h: f64,
    dims: Vec<i64>,
    /// `start[c]..start[c + 1]` indexes `order` for cell `c`.
    start: Vec<usize>,
    order: Vec<u32>,
}

impl<'a> Grid<'a> {
    fn new(pts: &'a PointSet) -> Self {
        let k = pts.dim();
        let n = pts.len();
        let (lo, hi) = pts.bounding_box().expect("nonempty");
        let extent = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
        let per_axis = (n as f64).powf(1.0 / k as f64).ceil().max(1.0);
        let mut h = if extent > 0.0 { extent / per_axis } else { 1.0 };
        let cells = |h: f64| -> Vec<i64> {
            lo.iter()
                .zip(&hi)
                .map(|(a, b)| ((b - a) / h).floor() as i64 + 1)
                .collect()
        };
        let mut dims = cells(h);
        while dims.iter().map(|&x| x as f64).product::<f64>() > (4 * n + 16) as f64 {
            h *= 2.0;
            dims = cells(h);
        }
        let mut grid = Grid {
            pts,
            min: lo,
            h,
            dims,
            start: Vec::new(),
            order: Vec::new(),
        };
        let total: usize = grid.dims.iter().product::<i64>() as usize;
        let ids: Vec<usize> = pts
            .iter()
            .map(|p| {
                grid.flat(&grid.cell_of(p))
                    .expect("point inside its own box")
            })
            .collect();
        let mut start = vec![0usize; total + 1];
        for &c in &ids {
            start[c + 1] += 1;
        }
        for c in 0..total {
            start[c + 1] += start[c];
        }
        let mut fill = start.clone();
        let mut order = vec![0u32; n];
        for (i, &c) in ids.iter().enumerate() {
            order[fill[c]] = i as u32;
            fill[c] += 1;
        }
        grid.start = start;
        grid.order = order;
        grid
    }

    fn cell_of(&self, p: &[f64]) -> Vec<i64> {
        p.iter()
            .zip(&self.min)
            .map(|(x, m)| ((x - m) / self.h).floor() as i64)
            .collect()
    }

    fn flat(&self, c: &[i64]) -> Option<usize> {
        let mut idx = 0i64;
        for (&ci, &di) in c.iter().zip(&self.dims) {
            if ci < 0 || ci >= di {
                return None;
            }
            idx = idx * di + ci;
        }
        Some(idx as usize)
    }

    /// Nearest point to `q`, or `None` once it is known to be within
    /// `sqrt(threshold_sq)`.
    fn nearest(&self, q: &[f64], threshold_sq: f64) -> Option<(f64, usize)> {
        let k = q.len();
        let cq = self.cell_of(q);
        let mut r0 = 0i64;
        let mut rmax = 0i64;
        for (&c, &d) in cq.iter().zip(&self.dims) {
            r0 = r0.max(-c).max(c - (d - 1));
            rmax = rmax.max(c).max(d - 1 - c);
        }
        let mut best_sq = f64::INFINITY;
        let mut best_idx = usize::MAX;
        let mut cell = vec![0i64; k];
        for r in r0..=rmax {
            let lower = if r == 0 {
                0.0
            } else {
                (r - 1) as f64 * self.h * (1.0 - 1e-9)
            };
            if lower * lower >= best_sq {
                break;
            }
            let lo: Vec<i64> = (0..k).map(|i| (cq[i] - r).max(0)).collect();
            let hi: Vec<i64> = (0..k).map(|i| (cq[i] + r).min(self.dims[i] - 1)).collect();
            if lo.iter().zip(&hi).any(|(a, b)| a > b) {
                continue;
            }
            // Odometer over all axes but the last.
            cell[..k - 1].copy_from_slice(&lo[..k - 1]);
            loop {
                let on_shell = (0..k - 1).any(|i| (cell[i] - cq[i]).abs() == r);
                let last = k - 1;
                let mut visit = |c_last: i64, cell: &mut Vec<i64>| {
                    cell[last] = c_last;
                    if let Some(f) = self.flat(cell) {
                        for &j in &self.order[self.start[f]..self.start[f + 1]] {
                            let dsq = sq_dist(q, self.pts.point(j as usize));
                            if dsq < best_sq || (dsq == best_sq && (j as usize) < best_idx) {
                                best_sq = dsq;
                                best_idx = j as usize;
                            }
                        }
                    }
                };
                if on_shell {
                    for c_last in lo[last]..=hi[last] {
                        visit(c_last, &mut cell);
                    }
                } else {
                    let a = cq[last] - r;
                    let b = cq[last] + r;
                    if a >= lo[last] {
                        visit(a, &mut cell);
                    }
                    if b != a && b <= hi[last] {
                        visit(b, &mut cell);
                    }
                }
                if best_sq <= threshold_sq {
                    return None;
                }
                // Advance.
                let mut i = 0;
                while i < k - 1 {
                    if cell[i] < hi[i] {
                        cell[i] += 1;
                        break;
                    }
                    cell[i] = lo[i];
                    i += 1;
                }
                if i == k - 1 {
                    break;
                }
            }
        }
        Some((best_sq, best_idx))
    }
}

/// `(sup_{a∈A} d(a, B)², index in A, index of the nearest point in B)`.
type Directed = (f64, usize, usize);

fn merge(parts: Vec<Option<Directed>>) -> Directed {
    parts
        .into_iter()
        .flatten()
        .fold((-1.0, usize::MAX, usize::MAX), |acc, x| {
            if x.0 > acc.0 || (x.0 == acc.0 && x.1 < acc.1) {
                x
            } else {
                acc
            }
        })
}

fn directed_brute(exec: Exec, a: &PointSet, b: &PointSet) -> Directed {
    let parts = par::chunked(exec, a.len(), QUERY_CHUNK, |range| {
        let mut best: Option<Directed> = None;
        for i in range {
            let p = a.point(i);
            let (mut dmin, mut jmin) = (f64::INFINITY, 0);
            for (j, q) in b.iter().enumerate() {
                let dsq = sq_dist(p, q);
                if dsq < dmin {
                    dmin = dsq;
                    jmin = j;
                }
            }
            if best.is_none_or(|(m, _, _)| dmin > m) {
                best = Some((dmin, i, jmin));
            }
        }
        best
    });
    merge(parts)
}

fn directed_grid(exec: Exec, a: &PointSet, b: &PointSet) -> Directed {
    let grid = Grid::new(b);
    let parts = par::chunked(exec, a.len(), QUERY_CHUNK, |range| {
        let mut best: Option<Directed> = None;
        for i in range {
            let threshold = best.map_or(-1.0, |(m, _, _)| m);
            if let Some((dsq, j)) = grid.nearest(a.point(i), threshold) {
                best = Some((dsq, i, j));
            }
        }
        best
    });
    merge(parts)
}

fn assemble(a: &PointSet, b: &PointSet, ab: Directed, ba: Directed) -> HausdorffResult {
    if ab.0 >= ba.0 {
        HausdorffResult {
            distance: ab.0.sqrt(),
            witness: (a.point(ab.1).to_vec(), b.point(ab.2).to_vec()),
        }
    } else {
        HausdorffResult {
            distance: ba.0.sqrt(),
            witness: (a.point(ba.2).to_vec(), b.point(ba.1).to_vec()),
        }
    }
}

/// `max(sup_{a∈A} d(a,B), sup_{b∈B} d(b,A))` under the Euclidean metric.
pub fn hausdorff(a: &PointSet, b: &PointSet) -> Result<HausdorffResult> {
    hausdorff_with(Exec::default(), a, b)
}

pub fn hausdorff_with(exec: Exec, a: &PointSet, b: &PointSet) -> Result<HausdorffResult> {
    check_inputs(a, b)?;
    if a.dim() > GRID_MAX_DIM {
        return hausdorff_brute_with(exec, a, b);
    }
    let ab = directed_grid(exec, a, b);
    let ba = directed_grid(exec, b, a);
    Ok(assemble(a, b, ab, ba))
}

/// Quadratic reference implementation.
pub fn hausdorff_brute(a: &PointSet, b: &PointSet) -> Result<HausdorffResult> {
    hausdorff_brute_with(Exec::Sequential, a, b)
}

fn hausdorff_brute_with(exec: Exec, a: &PointSet, b: &PointSet) -> Result<HausdorffResult> {
    check_inputs(a, b)?;
    let ab = directed_brute(exec, a, b);
    let ba = directed_brute(exec, b, a);
    Ok(assemble(a, b, ab, ba))
}

/// Largest Hausdorff distance over corresponding pairs of sets.
pub fn hausdorff_tiles(a: &[PointSet], b: &[PointSet]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Input("different numbers of subtiles".into()));
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        worst = worst.max(hausdorff(x, y)?.distance);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn set(points: &[&[f64]]) -> PointSet {
        PointSet::from_points(
            points[0].len(),
            &points.iter().map(|p| p.to_vec()).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn examples() {
        let a = set(&[&[0.0, 0.0]]);
        let b = set(&[&[3.0, 4.0]]);
        assert_eq!(hausdorff(&a, &b).unwrap().distance, 5.0);
        let r = hausdorff(&b, &b).unwrap();
        assert_eq!(r.distance, 0.0);
        assert!(matches!(
            hausdorff(&PointSet::new(2), &b),
            Err(Error::Domain(_))
        ));

        let seg =
            |n: usize| PointSet::from_flat(1, (0..=n).map(|i| i as f64 * 0.01).collect()).unwrap();
        let d = hausdorff(&seg(100), &seg(200)).unwrap();
        assert!((d.distance - 1.0).abs() <= 0.01);
        assert_eq!(d.witness.1, vec![2.0]);
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = SplitMix64::new(5);
        for trial in 0..60 {
            let dim = 1 + trial % 3;
            let na = 1 + rng.below(300) as usize;
            let nb = 1 + rng.below(300) as usize;
            let spread = if trial % 4 == 0 { 1e-3 } else { 5.0 };
            let mk = |n: usize, rng: &mut SplitMix64, shift: f64| {
                PointSet::from_flat(
                    dim,
                    (0..n * dim)
                        .map(|_| shift + rng.range_f64(-spread, spread))
                        .collect(),
                )
                .unwrap()
            };
            let a = mk(na, &mut rng, 0.0);
            let b = mk(nb, &mut rng, if trial % 5 == 0 { 40.0 } else { 0.0 });
            let fast = hausdorff_with(Exec::Parallel, &a, &b).unwrap();
            let slow = hausdorff_brute(&a, &b).unwrap();
            assert_eq!(fast.distance, slow.distance, "trial {trial}");
            let seq = hausdorff_with(Exec::Sequential, &a, &b).unwrap();
            assert_eq!(fast, seq);
        }
    }

    #[test]
    fn duplicate_points_and_degenerate_boxes() {
        let a = PointSet::from_flat(2, vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let b = PointSet::from_flat(2, vec![1.0, 1.0, 2.0, 1.0]).unwrap();
        assert_eq!(hausdorff(&a, &b).unwrap().distance, 1.0);
        let c = PointSet::from_flat(4, vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let o = PointSet::origin(4);
        assert_eq!(hausdorff(&c, &o).unwrap().distance, 2.0);
    }
}
