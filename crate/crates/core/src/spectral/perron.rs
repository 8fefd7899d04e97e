//! Perron eigenpair of a primitive nonnegative integer matrix.

use nalgebra::{DMatrix, DVector};

use super::poly::CharPoly;
use crate::error::{Error, Result};

const MAX_POWER_STEPS: usize = 100_000;

pub(crate) struct PerronPair {
    pub beta: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

fn residual_inf(m: &DMatrix<f64>, x: &DVector<f64>, beta: f64) -> f64 {
    (m * x - x * beta).amax()
}

/// Positive eigenvector of `m` for the eigenvalue `beta`, normalized to sum 1.
///
/// Power iteration runs on `m^exponent` (entrywise positive for a primitive
/// matrix), then a few shifted inverse-iteration steps remove what is left of
/// the subdominant components.
fn perron_vector(m: &DMatrix<f64>, exponent: usize, tol: f64) -> Result<DVector<f64>> {
    let d = m.nrows();
    let mut power = DMatrix::<f64>::identity(d, d);
    for _ in 0..exponent {
        power = &power * m;
    }
    let mut x = DVector::from_element(d, 1.0 / d as f64);
    let mut converged = false;
    let mut last_change = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..MAX_POWER_STEPS {
        let mut y = &power * &x;
        let s = y.sum();
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::Convergence(
                "power iteration produced a non-positive vector".into(),
            ));
        }
        y /= s;
        let change = (&y - &x).amax();
        x = y;
        if change <= tol * 1e-2 {
            converged = true;
            break;
        }
        if change >= last_change {
            stalled += 1;
            if stalled > 50 {
                break;
            }
        } else {
            stalled = 0;
        }
        last_change = change;
    }
    if !converged && last_change > tol.sqrt() {
        return Err(Error::Convergence(format!(
            "power iteration stagnated (last change {last_change:e})"
        )));
    }
    Ok(x)
}

fn rayleigh(m: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    (m * x).dot(x) / x.dot(x)
}

fn newton_polish(poly: &CharPoly, mut beta: f64) -> f64 {
    for _ in 0..50 {
        let dp = poly.derivative_f64(beta);
        if dp == 0.0 {
            break;
        }
        let step = poly.eval_f64(beta) / dp;
        let next = beta - step;
        if !next.is_finite() || poly.eval_f64(next).abs() > poly.eval_f64(beta).abs() {
            break;
        }
        beta = next;
        if step.abs() <= f64::EPSILON * beta.abs() {
            break;
        }
    }
    beta
}

fn inverse_refine(m: &DMatrix<f64>, beta: f64, mut x: DVector<f64>) -> DVector<f64> {
    let d = m.nrows();
    let shift = beta * (1.0 + 1e-10);
    let shifted = m - DMatrix::<f64>::identity(d, d) * shift;
    let lu = shifted.lu();
    for _ in 0..3 {
        let Some(y) = lu.solve(&x) else {
            break;
        };
        let s = y.sum();
        if !(s.is_finite() && s != 0.0) {
            break;
        }
        let y = y / s;
        if residual_inf(m, &y, beta) <= residual_inf(m, &x, beta) {
            x = y;
        } else {
            break;
        }
    }
    x
}

pub(crate) fn perron_pair(
    m: &DMatrix<f64>,
    poly: &CharPoly,
    exponent: usize,
    tol: f64,
) -> Result<PerronPair> {
    let right = perron_vector(m, exponent, tol)?;
    let mt = m.transpose();
    let left = perron_vector(&mt, exponent, tol)?;
    let beta = newton_polish(poly, rayleigh(m, &right));
    let right = inverse_refine(m, beta, right);
    let left = inverse_refine(&mt, beta, left);

    if right.iter().chain(left.iter()).any(|&x| x <= 0.0) {
        return Err(Error::Convergence(
            "Perron vector is not strictly positive".into(),
        ));
    }
    let res_r = residual_inf(m, &right, beta);
    let res_l = residual_inf(&mt, &left, beta);
    if res_r > tol * beta || res_l > tol * beta {
        return Err(Error::Convergence(format!(
            "Perron residuals {res_r:e} / {res_l:e} exceed tolerance {:e}",
            tol * beta
        )));
    }
    let scale = left.dot(&right);
    let left = left / scale;
    Ok(PerronPair {
        beta,
        right: right.iter().copied().collect(),
        left: left.iter().copied().collect(),
    })
}
