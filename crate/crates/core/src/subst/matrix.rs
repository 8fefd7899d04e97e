use std::fmt;

use super::word::AbelianVector;
use crate::error::{Error, Result};

/// Dense square integer matrix with overflow-checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("matrix rows must form a square".into()));
        }
        Ok(IntMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i64 = 0;
                for k in 0..n {
                    let t = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .and_then(|t| acc.checked_add(t))
                        .ok_or_else(|| Error::Overflow("matrix product".into()))?;
                    acc = t;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                a.checked_add(*b)
                    .ok_or_else(|| Error::Overflow("matrix sum".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { n: self.n, data })
    }

    pub fn checked_scale(&self, c: i64) -> Result<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|a| {
                a.checked_mul(c)
                    .ok_or_else(|| Error::Overflow("matrix scaling".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { n: self.n, data })
    }

    pub fn checked_mul_vec(&self, x: &[i64]) -> Result<AbelianVector> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n).try_fold(0i64, |acc, j| {
                    self.get(i, j)
                        .checked_mul(x[j])
                        .and_then(|t| acc.checked_add(t))
                        .ok_or_else(|| Error::Overflow("matrix-vector product".into()))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(AbelianVector)
    }

    pub fn checked_pow(&self, k: u32) -> Result<IntMatrix> {
        let mut acc = IntMatrix::identity(self.n);
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<i64> {
        (0..self.n).try_fold(0i64, |acc, i| {
            acc.checked_add(self.get(i, i))
                .ok_or_else(|| Error::Overflow("trace".into()))
        })
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&x| x > 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.n)
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i64> {
        let n = self.n;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j]
                        .checked_mul(a[k * n + k])
                        .and_then(|x| {
                            a[i * n + k]
                                .checked_mul(a[k * n + j])
                                .and_then(|y| x.checked_sub(y))
                        })
                        .ok_or_else(|| Error::Overflow("determinant".into()))?;
                    a[i * n + j] = v / prev;
                }
            }
            prev = a[k * n + k];
        }
        i64::try_from(sign * a[n * n - 1]).map_err(|_| Error::Overflow("determinant".into()))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smallest `k <= max_k` with `M^k` entrywise positive.
///
/// Powers are computed exactly; an overflow aborts with [`Error::Overflow`].
pub fn primitivity_exponent(m: &IntMatrix, max_k: usize) -> Result<Option<usize>> {
    if max_k == 0 {
        return Err(Error::Input("max_k must be at least 1".into()));
    }
    if !m.is_nonnegative() {
        return Err(Error::Input(
            "primitivity needs a nonnegative matrix".into(),
        ));
    }
    let mut power = m.clone();
    for k in 1..=max_k {
        if power.is_positive() {
            return Ok(Some(k));
        }
        if k < max_k {
            power = power.checked_mul(m)?;
        }
    }
    Ok(None)
}

/// Wielandt's bound `d^2 - 2d + 2` on the primitivity exponent.
pub fn wielandt_bound(d: usize) -> usize {
    d * d - 2 * d + 2
}
