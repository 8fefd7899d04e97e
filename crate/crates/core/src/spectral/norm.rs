//! Construction of a norm on the stable space in which `M_s` contracts.
//!
//! With `A = M_s / ρ` (ρ the largest stable eigenvalue modulus) the quadratic
//! form `Q = (1/K) Σ_{k<K} (A^k)ᵀ A^k` satisfies
//! `yᵀ M_sᵀ Q M_s y = ρ² (yᵀ Q y + (‖A^K y‖² − ‖y‖²) / K)`,
//! so the excess over ρ shrinks like `1/K` when `A` is power bounded. The
//! norm is `y ↦ ‖T y‖₂` with `Q = Tᵀ T`, and λ is the exact operator norm of
//! `T M_s T⁻¹`. The window `K` starts at 16 and doubles until λ is within
//! 0.1% of ρ.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub(crate) const INITIAL_WINDOW: usize = 16;
pub(crate) const MAX_WINDOW: usize = 1 << 14;

pub(crate) struct AdaptedNorm {
    pub transform: DMatrix<f64>,
    pub lambda: f64,
    pub window: usize,
}

fn operator_norm(a: &DMatrix<f64>) -> f64 {
    a.singular_values().max()
}

fn build(m_s: &DMatrix<f64>, rho: f64, window: usize) -> Option<(DMatrix<f64>, f64)> {
    let n = m_s.nrows();
    let a = m_s / rho;
    let mut q = DMatrix::<f64>::zeros(n, n);
    let mut power = DMatrix::<f64>::identity(n, n);
    for _ in 0..window {
        q += power.transpose() * &power;
        power = &a * &power;
    }
    q /= window as f64;
    let chol = q.cholesky()?;
    let t = chol.l().transpose();
    let t_inv = t.clone().try_inverse()?;
    let lambda = operator_norm(&(&t * m_s * t_inv));
    lambda.is_finite().then_some((t, lambda))
}

pub(crate) fn adapted_norm(m_s: &DMatrix<f64>, stable_radius: f64) -> Result<AdaptedNorm> {
    let n = m_s.nrows();
    if n == 0 {
        return Ok(AdaptedNorm {
            transform: DMatrix::zeros(0, 0),
            lambda: 0.0,
            window: 0,
        });
    }
    let rho = stable_radius.max(1e-6);
    let target = rho * (1.0 + 1e-3);
    let mut best: Option<AdaptedNorm> = None;
    let mut window = INITIAL_WINDOW;
    while window <= MAX_WINDOW {
        if let Some((t, lambda)) = build(m_s, rho, window) {
            if best.as_ref().is_none_or(|b| lambda < b.lambda) {
                best = Some(AdaptedNorm {
                    transform: t,
                    lambda,
                    window,
                });
            }
            if lambda <= target {
                break;
            }
        }
        window *= 2;
    }
    match best {
        // With ρ >= 1 no norm contracts; λ is still reported and the
        // fractal layer refuses to run.
        Some(mut b) if b.lambda < 1.0 || rho >= 1.0 => {
            // Absorb rounding in the singular value computation.
            b.lambda = (b.lambda * (1.0 + 1e-12)).max(f64::MIN_POSITIVE);
            Ok(b)
        }
        Some(b) => Err(Error::Convergence(format!(
            "no contracting norm found (best ratio {})",
            b.lambda
        ))),
        None => Err(Error::Convergence(
            "adapted norm construction failed".into(),
        )),
    }
}
