use std::fmt;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::subst::IntMatrix;

/// Monic integer polynomial, coefficients stored from the leading term down:
/// `coeffs[i]` multiplies `x^(d-i)`, so `coeffs[0] == 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<i64>,
}

impl CharPoly {
    pub fn from_coeffs(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.first() != Some(&1) {
            return Err(Error::Input("polynomial must be monic".into()));
        }
        Ok(CharPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    pub fn derivative_f64(&self, x: f64) -> f64 {
        let d = self.degree();
        self.coeffs[..d]
            .iter()
            .enumerate()
            .fold(0.0, |acc, (i, &c)| acc * x + (d - i) as f64 * c as f64)
    }

    fn eval_complex(&self, z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
        let mut p = Complex::new(0.0, 0.0);
        let mut dp = Complex::new(0.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                dp = dp * z + p;
            }
            p = p * z + c as f64;
        }
        (p, dp)
    }

    /// Evaluates `p(M)` exactly by Horner's scheme.
    pub fn eval_matrix(&self, m: &IntMatrix) -> Result<IntMatrix> {
        let n = m.dim();
        let mut acc = IntMatrix::zeros(n);
        for &c in &self.coeffs {
            acc = acc
                .checked_mul(m)?
                .checked_add(&IntMatrix::identity(n).checked_scale(c)?)?;
        }
        Ok(acc)
    }

    /// Number of roots equal to zero (trailing zero coefficients).
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|&&c| c == 0).count()
    }

    /// All complex roots. The factor `x^m` is removed exactly first; the rest
    /// come from companion-matrix eigenvalues polished by Newton steps on the
    /// full polynomial.
    pub fn roots(&self) -> Vec<Complex<f64>> {
        let zeros = self.zero_root_multiplicity();
        let reduced = &self.coeffs[..self.coeffs.len() - zeros];
        let mut roots = vec![Complex::new(0.0, 0.0); zeros];
        let approx = companion_roots(&reduced.iter().map(|&c| c as f64).collect::<Vec<_>>());
        roots.extend(approx.into_iter().map(|z| self.polish(z)));
        roots
    }

    /// Roots of `p(x) / (x - beta)`, where `beta` is a known real root.
    pub fn deflated_roots(&self, beta: f64) -> Vec<Complex<f64>> {
        let zeros = self.zero_root_multiplicity();
        let reduced = &self.coeffs[..self.coeffs.len() - zeros];
        let mut q = Vec::with_capacity(reduced.len() - 1);
        let mut acc = 0.0;
        for &c in &reduced[..reduced.len() - 1] {
            acc = acc * beta + c as f64;
            q.push(acc);
        }
        let mut roots = vec![Complex::new(0.0, 0.0); zeros];
        roots.extend(companion_roots(&q).into_iter().map(|z| self.polish(z)));
        roots
    }

    fn polish(&self, mut z: Complex<f64>) -> Complex<f64> {
        for _ in 0..8 {
            let (p, dp) = self.eval_complex(z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let next = z - step;
            if !next.re.is_finite() || !next.im.is_finite() {
                break;
            }
            // Newton near a multiple root can wander; only accept improvements.
            if self.eval_complex(next).0.norm() <= p.norm() {
                z = next;
            } else {
                break;
            }
        }
        z
    }
}

/// Roots of a monic float polynomial (leading coefficient first).
fn companion_roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let d = coeffs.len() - 1;
    match d {
        0 => Vec::new(),
        1 => vec![Complex::new(-coeffs[1] / coeffs[0], 0.0)],
        _ => {
            let mut c = DMatrix::<f64>::zeros(d, d);
            for j in 0..d {
                c[(0, j)] = -coeffs[j + 1] / coeffs[0];
            }
            for i in 1..d {
                c[(i, i - 1)] = 1.0;
            }
            c.complex_eigenvalues().iter().copied().collect()
        }
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let e = d - i;
            if c == 0 && !(first && e == 0) {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "x")?,
                (1, m) => write!(f, "{m}x")?,
                (e, 1) => write!(f, "x^{e}")?,
                (e, m) => write!(f, "{m}x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI - M)` by the Faddeev-LeVerrier
/// recurrence, in exact integer arithmetic.
///
/// `N_1 = I`, `c_{k} = -tr(M N_k) / k`, `N_{k+1} = M N_k + c_k I`;
/// every division is exact for integer matrices.
pub fn char_poly(m: &IntMatrix) -> Result<CharPoly> {
    let n = m.dim();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1i64);
    let mut aux = IntMatrix::identity(n);
    for k in 1..=n {
        let prod = m.checked_mul(&aux)?;
        let tr = prod.trace()?;
        if tr % k as i64 != 0 {
            return Err(Error::Input("Faddeev-LeVerrier division not exact".into()));
        }
        let c = -(tr / k as i64);
        coeffs.push(c);
        if k < n {
            aux = prod.checked_add(&IntMatrix::identity(n).checked_scale(c)?)?;
        }
    }
    Ok(CharPoly { coeffs })
}

fn divisors(n: i64) -> Vec<i64> {
    let a = n.unsigned_abs();
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= a {
        if a.is_multiple_of(i) {
            out.push(i as i64);
            if i * i != a {
                out.push((a / i) as i64);
            }
        }
        i += 1;
    }
    out.iter().flat_map(|&x| [x, -x]).collect()
}

fn isqrt_exact(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

fn has_integer_root(p: &CharPoly) -> bool {
    let c0 = *p.coeffs.last().unwrap();
    if c0 == 0 {
        return true;
    }
    divisors(c0).into_iter().any(|r| {
        // Horner in i128; candidate roots divide c0 so values stay small
        // enough for the degrees supported here.
        p.coeffs.iter().try_fold(0i128, |acc, &c| {
            acc.checked_mul(r as i128)?.checked_add(c as i128)
        }) == Some(0)
    })
}

/// Irreducibility over ℚ for monic integer polynomials of degree at most 4.
///
/// By Gauss's lemma a monic integer polynomial factors over ℚ iff it factors
/// into monic integer polynomials, so it suffices to look for an integer root
/// (a divisor of the constant term) and, in degree 4, for a factorization
/// `(x² + ax + b)(x² + cx + e)` with `b·e` equal to the constant term.
pub fn is_irreducible(p: &CharPoly) -> Result<bool> {
    let d = p.degree();
    if d > 4 {
        return Err(Error::Unsupported(format!(
            "irreducibility test limited to degree <= 4 (got {d})"
        )));
    }
    if d <= 1 {
        return Ok(true);
    }
    if has_integer_root(p) {
        return Ok(false);
    }
    if d < 4 {
        return Ok(true);
    }
    let [_, c3, c2, c1, c0] = [
        p.coeffs[0],
        p.coeffs[1],
        p.coeffs[2],
        p.coeffs[3],
        p.coeffs[4],
    ]
    .map(|c| c as i128);
    for b in divisors(c0 as i64).into_iter().map(|b| b as i128) {
        let e = c0 / b;
        // a + c = c3, a·c = c2 - b - e
        let s = c3;
        let prod = c2 - b - e;
        let disc = s * s - 4 * prod;
        let Some(root) = isqrt_exact(disc) else {
            continue;
        };
        if (s + root) % 2 != 0 {
            continue;
        }
        for a in [(s + root) / 2, (s - root) / 2] {
            let c = s - a;
            if a * e + b * c == c1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
