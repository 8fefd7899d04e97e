//! Spectral data of a shared incidence matrix: Perron eigenpair, Pisot and
//! irreducibility verdicts, coordinates on the stable space `E_s`, the
//! projection onto `E_s` along the Perron direction, and a norm on `E_s` in
//! which the restricted matrix is a strict contraction.

mod norm;
mod perron;
mod poly;

pub use poly::{char_poly, is_irreducible, CharPoly};

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::subst::{primitivity_exponent, wielandt_bound, IntMatrix};

pub const DEFAULT_TOL: f64 = 1e-12;
/// Half-width of the band around modulus 1 (and 0) where the Pisot test
/// refuses to answer.
pub const PISOT_BAND: f64 = 1e-9;

/// Result of the Pisot test on the non-Perron eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct PisotReport {
    pub beta: f64,
    /// Moduli of the non-Perron eigenvalues, largest first.
    pub moduli: Vec<f64>,
    /// Eigenvalues that are exactly zero (read off the integer polynomial).
    pub zero_eigenvalues: usize,
    /// Every non-Perron eigenvalue has modulus < 1.
    pub contracting: bool,
}

impl PisotReport {
    /// Pisot in the strict sense: contracting and no zero eigenvalue.
    pub fn is_pisot(&self) -> bool {
        self.contracting && self.zero_eigenvalues == 0
    }
}

fn require_primitive(m: &IntMatrix) -> Result<usize> {
    if m.dim() < 2 {
        return Err(Error::Input("matrix must be at least 2x2".into()));
    }
    primitivity_exponent(m, wielandt_bound(m.dim()))?
        .ok_or_else(|| Error::Domain("incidence matrix is not primitive".into()))
}

fn to_dmatrix(m: &IntMatrix) -> DMatrix<f64> {
    let d = m.dim();
    DMatrix::from_fn(d, d, |i, j| m.get(i, j) as f64)
}

fn pisot_from_roots(
    beta: f64,
    poly: &CharPoly,
    roots: &[Complex<f64>],
    band: f64,
) -> Result<PisotReport> {
    let zero_eigenvalues = poly.zero_root_multiplicity();
    let mut moduli: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    if beta <= 1.0 + band {
        return Err(Error::Indeterminate(format!(
            "Perron eigenvalue {beta} is not clearly above 1"
        )));
    }
    for (i, &r) in moduli.iter().enumerate() {
        if (r - 1.0).abs() <= band {
            return Err(Error::Indeterminate(format!(
                "eigenvalue modulus {r} is within {band:e} of 1"
            )));
        }
        let exact_zero = i >= moduli.len() - zero_eigenvalues;
        if !exact_zero && r <= band {
            return Err(Error::Indeterminate(format!(
                "eigenvalue modulus {r} is within {band:e} of 0"
            )));
        }
    }
    let contracting = moduli.iter().all(|&r| r < 1.0);
    Ok(PisotReport {
        beta,
        moduli,
        zero_eigenvalues,
        contracting,
    })
}

/// Pisot test. The matrix must be primitive; roots are the eigenvalues of
/// the characteristic polynomial with the Perron root deflated.
pub fn pisot_report(m: &IntMatrix, tol: f64) -> Result<PisotReport> {
    let exponent = require_primitive(m)?;
    let poly = char_poly(m)?;
    let pair = perron::perron_pair(&to_dmatrix(m), &poly, exponent, DEFAULT_TOL)?;
    let roots = poly.deflated_roots(pair.beta);
    pisot_from_roots(pair.beta, &poly, &roots, tol)
}

pub fn is_pisot(m: &IntMatrix, tol: f64) -> Result<bool> {
    pisot_report(m, tol).map(|r| r.is_pisot())
}

/// Spectral data of a primitive integer matrix.
///
/// Stable coordinates: `B` is an orthonormal basis of `v^⊥` (`v` the left
/// Perron vector), which is the `M`-invariant complement of the Perron line.
/// The projection along `u` is `x ↦ x − (v·x) u` and its coordinates are
/// `P = Bᵀ (I − u vᵀ)`; the restriction of `M` is `M_s = Bᵀ M B`.
#[derive(Debug, Clone)]
pub struct SpectralData {
    matrix: IntMatrix,
    char_poly: CharPoly,
    primitivity_exponent: usize,
    pub beta: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    stable_roots: Vec<Complex<f64>>,
    stable_basis: DMatrix<f64>,
    proj: DMatrix<f64>,
    m_s: DMatrix<f64>,
    transform: DMatrix<f64>,
    transform_inv: DMatrix<f64>,
    pub lambda: f64,
    norm_window: usize,
    // Row-major copies for the hot loops.
    proj_flat: Vec<f64>,
    m_s_flat: Vec<f64>,
    transform_flat: Vec<f64>,
}

/// Householder reflection sending `v/|v|` to `e_1`; its other columns are an
/// orthonormal basis of `v^⊥`.
fn complement_basis(v: &[f64]) -> DMatrix<f64> {
    let d = v.len();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut w: Vec<f64> = v.iter().map(|x| x / norm).collect();
    // v is positive, so adding e_1 cannot cancel.
    w[0] += 1.0;
    let wn = w.iter().map(|x| x * x).sum::<f64>();
    let h = DMatrix::from_fn(d, d, |i, j| {
        (if i == j { 1.0 } else { 0.0 }) - 2.0 * w[i] * w[j] / wn
    });
    h.columns(1, d - 1).into_owned()
}

fn flatten(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

impl SpectralData {
    /// Computes spectral data. Fails with [`Error::Domain`] for a
    /// non-primitive matrix and [`Error::Convergence`] if the Perron
    /// iteration does not reach `tol`.
    pub fn new(m: &IntMatrix, tol: f64) -> Result<Self> {
        let exponent = require_primitive(m)?;
        let char_poly = char_poly(m)?;
        let dm = to_dmatrix(m);
        let pair = perron::perron_pair(&dm, &char_poly, exponent, tol)?;
        let d = m.dim();

        let stable_roots = char_poly.deflated_roots(pair.beta);
        let stable_radius = stable_roots.iter().map(|z| z.norm()).fold(0.0, f64::max);

        let basis = complement_basis(&pair.left);
        let u = nalgebra::DVector::from_column_slice(&pair.right);
        let v = nalgebra::DVector::from_column_slice(&pair.left);
        let along = DMatrix::<f64>::identity(d, d) - &u * v.transpose();
        let proj = basis.transpose() * along;
        let m_s = basis.transpose() * &dm * &basis;

        let adapted = norm::adapted_norm(&m_s, stable_radius)?;
        let transform_inv = adapted
            .transform
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Convergence("adapted norm transform is singular".into()))?;

        Ok(SpectralData {
            matrix: m.clone(),
            char_poly,
            primitivity_exponent: exponent,
            beta: pair.beta,
            proj_flat: flatten(&proj),
            m_s_flat: flatten(&m_s),
            transform_flat: flatten(&adapted.transform),
            u: pair.right,
            v: pair.left,
            stable_roots,
            stable_basis: basis,
            proj,
            m_s,
            transform: adapted.transform,
            transform_inv,
            lambda: adapted.lambda,
            norm_window: adapted.window,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn alphabet_size(&self) -> usize {
        self.matrix.dim()
    }

    /// Dimension of the stable space, `d - 1`.
    pub fn stable_dim(&self) -> usize {
        self.matrix.dim() - 1
    }

    pub fn char_poly(&self) -> &CharPoly {
        &self.char_poly
    }

    pub fn primitivity_exponent(&self) -> usize {
        self.primitivity_exponent
    }

    /// Non-Perron eigenvalues.
    pub fn stable_eigenvalues(&self) -> &[Complex<f64>] {
        &self.stable_roots
    }

    pub fn stable_radius(&self) -> f64 {
        self.stable_roots
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn pisot(&self, band: f64) -> Result<PisotReport> {
        pisot_from_roots(self.beta, &self.char_poly, &self.stable_roots, band)
    }

    pub fn stable_basis(&self) -> &DMatrix<f64> {
        &self.stable_basis
    }

    /// `(d-1) × d` matrix of stable coordinates.
    pub fn proj_coords(&self) -> &DMatrix<f64> {
        &self.proj
    }

    /// `M` restricted to `E_s`, in stable coordinates.
    pub fn m_s(&self) -> &DMatrix<f64> {
        &self.m_s
    }

    pub fn norm_transform(&self) -> &DMatrix<f64> {
        &self.transform
    }

    pub fn norm_transform_inverse(&self) -> &DMatrix<f64> {
        &self.transform_inv
    }

    /// Averaging window used to build the adapted norm.
    pub fn norm_window(&self) -> usize {
        self.norm_window
    }

    /// Stable coordinates of a real vector.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.stable_dim()];
        self.project_into(x, &mut out);
        out
    }

    pub fn project_into(&self, x: &[f64], out: &mut [f64]) {
        let d = self.matrix.dim();
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.proj_flat[i * d..(i + 1) * d];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// Stable coordinates of an integer vector (e.g. an abelianization).
    pub fn project_int(&self, x: &[i64]) -> Vec<f64> {
        let mut out = vec![0.0; self.stable_dim()];
        self.project_int_into(x, &mut out);
        out
    }

    pub fn project_int_into(&self, x: &[i64], out: &mut [f64]) {
        let d = self.matrix.dim();
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.proj_flat[i * d..(i + 1) * d];
            *o = row.iter().zip(x).map(|(a, &b)| a * b as f64).sum();
        }
    }

    /// `M_s · y` written into `out`.
    #[inline]
    pub fn apply_m_s(&self, y: &[f64], out: &mut [f64]) {
        let n = self.stable_dim();
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.m_s_flat[i * n..(i + 1) * n];
            *o = row.iter().zip(y).map(|(a, b)| a * b).sum();
        }
    }

    /// Maps stable coordinates to the frame where the adapted norm is Euclidean.
    #[inline]
    pub fn to_adapted(&self, y: &[f64], out: &mut [f64]) {
        let n = self.stable_dim();
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.transform_flat[i * n..(i + 1) * n];
            *o = row.iter().zip(y).map(|(a, b)| a * b).sum();
        }
    }

    /// The adapted norm `‖T y‖₂`; satisfies `N(M_s y) <= lambda · N(y)`.
    pub fn adapted_norm(&self, y: &[f64]) -> f64 {
        let mut t = vec![0.0; self.stable_dim()];
        self.to_adapted(y, &mut t);
        t.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Max-entry norm of `P M − M_s P`.
    pub fn commutation_residual(&self) -> f64 {
        let dm = to_dmatrix(&self.matrix);
        (&self.proj * dm - &self.m_s * &self.proj).amax()
    }

    /// Max-entry residuals of `M u − β u` and `vᵀ M − β vᵀ`.
    pub fn perron_residuals(&self) -> (f64, f64) {
        let dm = to_dmatrix(&self.matrix);
        let u = nalgebra::DVector::from_column_slice(&self.u);
        let v = nalgebra::DVector::from_column_slice(&self.v);
        (
            (&dm * &u - &u * self.beta).amax(),
            (dm.transpose() * &v - &v * self.beta).amax(),
        )
    }

    /// Generators of Γ: stable coordinates of `e_i − e_d`, `i < d`.
    pub fn gamma_generators(&self) -> GammaLattice {
        let d = self.matrix.dim();
        let generators = (0..d - 1)
            .map(|i| {
                let mut x = vec![0i64; d];
                x[i] = 1;
                x[d - 1] = -1;
                self.project_int(&x)
            })
            .collect();
        GammaLattice { generators }
    }
}

/// Γ: the projection of `{n ∈ ℤ^d : Σ n_i = 0}` onto the stable space.
#[derive(Debug, Clone)]
pub struct GammaLattice {
    pub generators: Vec<Vec<f64>>,
}

impl GammaLattice {
    pub fn point(&self, coeffs: &[i64]) -> Vec<f64> {
        let n = self.generators.first().map_or(0, |g| g.len());
        let mut out = vec![0.0; n];
        for (c, g) in coeffs.iter().zip(&self.generators) {
            for (o, x) in out.iter_mut().zip(g) {
                *o += *c as f64 * x;
            }
        }
        out
    }

    /// Coefficients of `y` in the generator basis (real; integral for lattice points).
    pub fn coordinates(&self, y: &[f64]) -> Option<Vec<f64>> {
        let n = self.generators.len();
        let g = DMatrix::from_fn(n, n, |i, j| self.generators[j][i]);
        let rhs = nalgebra::DVector::from_column_slice(y);
        g.lu().solve(&rhs).map(|c| c.iter().copied().collect())
    }

    pub fn determinant(&self) -> f64 {
        let n = self.generators.len();
        DMatrix::from_fn(n, n, |i, j| self.generators[j][i]).determinant()
    }
}
