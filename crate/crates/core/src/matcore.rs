//! Dense complex matrix foundation.
//!
//! Hermitian spectral decomposition, spectral matrix functions and the
//! positive polar factor `|A| = sqrt(A A^dag)`. Every entry point that
//! accepts a Hermitian matrix symmetrizes it as `(H + H^dag)/2` once the
//! asymmetry is known to be below tolerance.
//!
//! Eigenvalues whose magnitude is at most the clamp (by default
//! `1e-12 * ||H||`, spectral norm) are treated as exact zeros before a square
//! root or an inverse power is taken. Inverse powers act on the support only,
//! which gives Moore-Penrose pseudo-inverse semantics.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Dense complex column vector.
pub type ComplexVector = DVector<Complex64>;

/// Default hermiticity tolerance (absolute, on the largest entry asymmetry).
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Default relative tolerance for the eigensolver reconstruction check.
pub const SPECTRAL_TOL: f64 = 1e-12;

/// Default relative eigenvalue clamp.
pub const CLAMP_REL: f64 = 1e-12;

#[inline]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Real part of the trace.
pub fn trace_re(m: &ComplexMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// `max_ij |M_ij - conj(M_ji)|`.
pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `max |U^dag U - I|` and `max |U U^dag - I|`, whichever is larger.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    let id = ComplexMatrix::identity(n, n);
    max_abs(&(u.adjoint() * u - &id)).max(max_abs(&(u * u.adjoint() - &id)))
}

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c(0.5)
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// A Hermitian matrix. Construction validates and symmetrizes.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian(ComplexMatrix);

impl Hermitian {
    /// Validates against [`HERMITICITY_TOL`], scaled by the largest entry when it exceeds one.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let scale = max_abs(&m).max(1.0);
        Self::with_tolerance(m, HERMITICITY_TOL * scale)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        check_square(&m)?;
        let residual = hermiticity_residual(&m);
        if residual.is_nan() || residual > tol {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Hermitian(symmetrize(&m)))
    }

    /// Symmetrizes without a tolerance check. For products that are Hermitian
    /// in exact arithmetic.
    pub(crate) fn from_hermitian_product(m: ComplexMatrix) -> Self {
        Hermitian(symmetrize(&m))
    }

    pub fn identity(n: usize) -> Self {
        Hermitian(ComplexMatrix::identity(n, n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| c(x)));
        Hermitian(ComplexMatrix::from_diagonal(&v))
    }

    /// `|v><v|`.
    pub fn projector(v: &ComplexVector) -> Self {
        Hermitian(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        trace_re(&self.0)
    }

    pub fn scale(&self, k: f64) -> Hermitian {
        Hermitian(&self.0 * c(k))
    }

    /// Spectral decomposition with the default reconstruction tolerance.
    pub fn eigen(&self) -> Result<SpectralDecomposition> {
        spectral_decompose(self, SPECTRAL_TOL)
    }

    /// Principal square root with the default clamp.
    pub fn sqrt(&self) -> Result<Hermitian> {
        self.eigen()?.apply(SpectralMap::Sqrt, None)
    }

    /// Pseudo-inverse square root with the default clamp.
    pub fn inv_sqrt(&self) -> Result<Hermitian> {
        self.eigen()?.apply(SpectralMap::InverseSqrt, None)
    }
}

impl AsRef<ComplexMatrix> for Hermitian {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Scalar functions lifted to Hermitian matrices through the spectrum.
#[derive(Clone, Copy)]
pub enum SpectralMap<'a> {
    /// Principal square root; requires eigenvalues `>= -clamp`.
    Sqrt,
    /// `lambda^{-1/2}` on the support, zero elsewhere; requires eigenvalues `>= -clamp`.
    InverseSqrt,
    /// `1/lambda` on the support, zero elsewhere.
    Inverse,
    /// `|lambda|`.
    Abs,
    /// Any function, applied verbatim.
    Custom(&'a dyn Fn(f64) -> f64),
}

impl SpectralMap<'_> {
    fn needs_nonnegative(&self) -> bool {
        matches!(self, SpectralMap::Sqrt | SpectralMap::InverseSqrt)
    }
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Spectral norm.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// `CLAMP_REL * ||H||`.
    pub fn default_clamp(&self) -> f64 {
        CLAMP_REL * self.spectral_radius()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V diag(values) V^dag`.
    pub fn compose(&self, values: &[f64]) -> Hermitian {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &w) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(w);
        }
        Hermitian::from_hermitian_product(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> Hermitian {
        self.compose(&self.eigenvalues)
    }

    /// Projector onto eigenvectors whose eigenvalue exceeds `clamp`.
    pub fn support_projector(&self, clamp: f64) -> Hermitian {
        let mask: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| if l > clamp { 1.0 } else { 0.0 })
            .collect();
        self.compose(&mask)
    }

    /// Number of eigenvalues above `clamp`.
    pub fn rank(&self, clamp: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > clamp).count()
    }

    /// Applies `f` to the spectrum. `clamp = None` uses [`Self::default_clamp`].
    pub fn apply(&self, f: SpectralMap<'_>, clamp: Option<f64>) -> Result<Hermitian> {
        let clamp = clamp.unwrap_or_else(|| self.default_clamp());
        if f.needs_nonnegative() {
            let min = self.min_eigenvalue();
            if min < -clamp {
                return Err(Error::NotPositive {
                    min_eigenvalue: min,
                });
            }
        }
        let values: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| {
                let zero = l.abs() <= clamp;
                match f {
                    SpectralMap::Sqrt => {
                        if zero {
                            0.0
                        } else {
                            l.max(0.0).sqrt()
                        }
                    }
                    SpectralMap::InverseSqrt => {
                        if zero {
                            0.0
                        } else {
                            1.0 / l.sqrt()
                        }
                    }
                    SpectralMap::Inverse => {
                        if zero {
                            0.0
                        } else {
                            1.0 / l
                        }
                    }
                    SpectralMap::Abs => l.abs(),
                    SpectralMap::Custom(g) => g(l),
                }
            })
            .collect();
        Ok(self.compose(&values))
    }
}

/// Hermitian eigendecomposition, ascending eigenvalues.
///
/// Fails if the reconstruction residual (Frobenius) exceeds `tol * ||H||_F`.
pub fn spectral_decompose(h: &Hermitian, tol: f64) -> Result<SpectralDecomposition> {
    let n = h.dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = h.as_matrix().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    let dec = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    };
    if eigenvalues_finite(&dec) {
        let scale = frobenius(h.as_matrix());
        let residual = frobenius(&(dec.reconstruct().into_matrix() - h.as_matrix()));
        // Backward error of the symmetric QR iteration grows roughly with n.
        let allowed = tol.max(f64::EPSILON * 16.0 * n as f64) * scale;
        if residual <= allowed || scale == 0.0 {
            return Ok(dec);
        }
        return Err(Error::Numerical(format!(
            "eigendecomposition residual {residual:e} exceeds {allowed:e}"
        )));
    }
    Err(Error::Numerical("non-finite eigenvalues".into()))
}

fn eigenvalues_finite(dec: &SpectralDecomposition) -> bool {
    dec.eigenvalues.iter().all(|l| l.is_finite())
}

/// `f(H)` through the spectrum of `H`; see [`SpectralMap`] for clamp semantics.
pub fn hermitian_function(h: &Hermitian, f: SpectralMap<'_>, clamp: f64) -> Result<Hermitian> {
    spectral_decompose(h, SPECTRAL_TOL)?.apply(f, Some(clamp))
}

/// Singular values, descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = a
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Positive polar factor `|A| = sqrt(A A^dag)`, computed from the SVD
/// `A = U S V^dag` as `U S U^dag`.
pub fn polar_positive(a: &ComplexMatrix) -> Result<Hermitian> {
    check_square(a)?;
    let n = a.nrows();
    let svd = a.clone().svd(true, false);
    let u = svd
        .u
        .ok_or_else(|| Error::Numerical("SVD did not return U".into()))?;
    let mut scaled = u.clone();
    for j in 0..n {
        let s = svd.singular_values[j];
        if !s.is_finite() {
            return Err(Error::Numerical("non-finite singular value".into()));
        }
        scaled.column_mut(j).scale_mut(s);
    }
    Ok(Hermitian::from_hermitian_product(scaled * u.adjoint()))
}
