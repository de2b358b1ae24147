//! Fidelity, Bures distance and the geodesic between two density matrices.
//!
//! The geodesic from `rho1` to `rho2` is `rho(s) = M(s) rho1 M(s)` with
//! `M(s) = f(s) I + g(s) M*`, where `M*` is the geometric-mean operator
//! `rho1^{-1/2} sqrt(rho1^{1/2} rho2 rho1^{1/2}) rho1^{-1/2}` and
//! `f(s) = sin(s* - s)/sin s*`, `g(s) = sin s / sin s*`. The parameter `s` is
//! the Bures angle from `rho1`.
//!
//! Lifting `rho1` to a purification `A0` gives the horizontal curve
//! `A(s) = M(s) A0` in the bundle of purifications.

use crate::error::{Error, Result};
use crate::matcore::{
    c, max_abs, polar_positive, singular_values, trace_re, ComplexMatrix, ComplexVector, Hermitian,
    SpectralMap, CLAMP_REL,
};
use crate::states::{projection_residual, DensityMatrix, Purification, Validation};

/// `s*` below which the endpoints are treated as identical.
pub const DEGENERATE_TOL: f64 = 1e-8;

/// `cos s*` below which the endpoints are treated as orthogonal.
pub const ORTHOGONAL_TOL: f64 = 1e-8;

/// Largest admissible weight of `rho2` outside the support of `rho1`.
pub const SUPPORT_TOL: f64 = 1e-9;

/// Largest `|A0 A0^dag - rho1|` accepted by [`horizontal_lift`].
pub const FIBER_TOL: f64 = 1e-10;

fn check_dims(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

// Singular values below this are rounding noise of a product of two
// unit-trace square roots.
fn singular_floor(n: usize) -> f64 {
    4.0 * n as f64 * f64::EPSILON
}

fn nuclear_norm(a: &ComplexMatrix) -> f64 {
    let floor = singular_floor(a.nrows());
    singular_values(a)
        .into_iter()
        .filter(|&s| s > floor)
        .fold(0.0, |acc, s| acc + s)
        .clamp(0.0, 1.0)
}

/// `Tr sqrt(rho1^{1/2} rho2 rho1^{1/2})`, evaluated as the sum of singular
/// values of `sqrt(rho1) sqrt(rho2)` and clamped to `[0, 1]`.
pub fn root_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1, rho2)?;
    let s1 = rho1.as_hermitian().sqrt()?;
    let s2 = rho2.as_hermitian().sqrt()?;
    Ok(nuclear_norm(&(s1.as_matrix() * s2.as_matrix())))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BuresSummary {
    pub root_fidelity: f64,
    /// `arccos sqrt(F)`, radians.
    pub bures_angle: f64,
    /// `sqrt(2 - 2 sqrt(F))`.
    pub bures_distance: f64,
}

impl BuresSummary {
    pub fn from_root_fidelity(root_fidelity: f64) -> Self {
        BuresSummary {
            root_fidelity,
            bures_angle: root_fidelity.acos(),
            bures_distance: (2.0 - 2.0 * root_fidelity).max(0.0).sqrt(),
        }
    }
}

pub fn bures(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<BuresSummary> {
    Ok(BuresSummary::from_root_fidelity(root_fidelity(rho1, rho2)?))
}

/// Endpoints, geometric-mean operator and arclength of a Bures geodesic.
#[derive(Clone, Debug)]
pub struct GeodesicPath {
    rho1: DensityMatrix,
    rho2: DensityMatrix,
    m_star: Hermitian,
    s_star: f64,
    root_fidelity: f64,
    degenerate: bool,
    orthogonal: bool,
}

impl GeodesicPath {
    pub fn rho1(&self) -> &DensityMatrix {
        &self.rho1
    }

    pub fn rho2(&self) -> &DensityMatrix {
        &self.rho2
    }

    /// The operator with `M* rho1 M* = rho2`; `I` on a degenerate path.
    pub fn m_star(&self) -> &Hermitian {
        &self.m_star
    }

    pub fn s_star(&self) -> f64 {
        self.s_star
    }

    pub fn root_fidelity(&self) -> f64 {
        self.root_fidelity
    }

    /// `2 sin(s*/2)`. Accurate for nearby endpoints, where `sqrt(2 - 2 sqrt F)` is not.
    pub fn bures_distance(&self) -> f64 {
        2.0 * (self.s_star / 2.0).sin()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }

    pub fn dim(&self) -> usize {
        self.rho1.dim()
    }

    /// `(f(s), g(s))`.
    pub fn coefficients(&self, s: f64) -> (f64, f64) {
        if self.degenerate {
            return (1.0, 0.0);
        }
        let sin_star = self.s_star.sin();
        ((self.s_star - s).sin() / sin_star, s.sin() / sin_star)
    }

    /// `(f'(s), g'(s))`.
    pub fn coefficient_derivatives(&self, s: f64) -> (f64, f64) {
        if self.degenerate {
            return (0.0, 0.0);
        }
        let sin_star = self.s_star.sin();
        (-(self.s_star - s).cos() / sin_star, s.cos() / sin_star)
    }

    fn check_parameter(&self, s: f64) -> Result<()> {
        let hi = self.s_star * (1.0 + 1e-12);
        if !(0.0..=hi).contains(&s) {
            return Err(Error::OutOfRange {
                what: "s",
                value: s,
                lo: 0.0,
                hi: self.s_star,
            });
        }
        Ok(())
    }

    /// `K` equally spaced parameters `k s* / (K-1)`, endpoints exact.
    pub fn sample_parameters(&self, k: usize) -> Vec<f64> {
        match k {
            0 => vec![],
            1 => vec![0.0],
            _ => (0..k)
                .map(|i| {
                    if i == k - 1 {
                        self.s_star
                    } else {
                        self.s_star * i as f64 / (k - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

// Top eigenvector with its first nonzero component made real positive.
fn phase_fixed_state(rho: &DensityMatrix) -> Result<ComplexVector> {
    let dec = rho.eigen()?;
    let n = dec.dim();
    let mut v = dec.eigenvectors.column(n - 1).into_owned();
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(first) = v.iter().copied().find(|z| z.norm() > 1e-8 * scale) {
        let phase = first.conj() / first.norm();
        v *= phase;
    }
    Ok(v)
}

fn is_rank_one(rho: &DensityMatrix) -> Result<bool> {
    let dec = rho.eigen()?;
    Ok(dec.rank(dec.default_clamp()) == 1)
}

/// Builds the geodesic data from `rho1` to `rho2`.
///
/// Orthogonal endpoints are accepted only when both are pure, in which case
/// `M* = |psi2><psi1| + |psi1><psi2|`. Otherwise `rho2` must lie in the
/// support of `rho1`.
pub fn geometric_mean_operator(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<GeodesicPath> {
    check_dims(rho1, rho2)?;
    let n = rho1.dim();
    let dec1 = rho1.eigen()?;
    let clamp = CLAMP_REL * dec1.max_eigenvalue();
    let sqrt1 = dec1.apply(SpectralMap::Sqrt, Some(clamp))?;
    let sqrt2 = rho2.as_hermitian().sqrt()?;
    let cross = sqrt1.as_matrix() * sqrt2.as_matrix();
    let root_fidelity = nuclear_norm(&cross);

    if root_fidelity < ORTHOGONAL_TOL {
        if !(is_rank_one(rho1)? && is_rank_one(rho2)?) {
            return Err(Error::SingularTransport);
        }
        let psi1 = phase_fixed_state(rho1)?;
        let psi2 = phase_fixed_state(rho2)?;
        let m = &psi2 * psi1.adjoint() + &psi1 * psi2.adjoint();
        return Ok(GeodesicPath {
            rho1: rho1.clone(),
            rho2: rho2.clone(),
            m_star: Hermitian::from_hermitian_product(m),
            s_star: std::f64::consts::FRAC_PI_2,
            root_fidelity: 0.0,
            degenerate: false,
            orthogonal: true,
        });
    }

    let support = dec1.support_projector(clamp);
    let outside = ComplexMatrix::identity(n, n) - support.as_matrix();
    let residual = max_abs(&(outside * rho2.matrix()));
    if residual > SUPPORT_TOL {
        return Err(Error::SupportViolation { residual });
    }

    let inv_sqrt1 = dec1.apply(SpectralMap::InverseSqrt, Some(clamp))?;
    let root_tau = polar_positive(&cross)?;
    let m = Hermitian::from_hermitian_product(
        inv_sqrt1.as_matrix() * root_tau.as_matrix() * inv_sqrt1.as_matrix(),
    );
    let min = m.eigen()?.min_eigenvalue();
    if min < -1e-10 * m.eigen()?.spectral_radius().max(1.0) {
        return Err(Error::Numerical(format!(
            "geometric-mean operator is indefinite (min eigenvalue {min:e})"
        )));
    }

    // Bures distance without cancellation: D_B^2 = Tr[(M-I) rho1 (M-I)].
    let delta = m.as_matrix() - ComplexMatrix::identity(n, n);
    let db2 = trace_re(&(&delta * rho1.matrix() * delta.adjoint())).max(0.0);
    let s_star = 2.0 * (db2.sqrt() / 2.0).min(1.0).asin();

    if s_star < DEGENERATE_TOL {
        return Ok(GeodesicPath {
            rho1: rho1.clone(),
            rho2: rho2.clone(),
            m_star: Hermitian::identity(n),
            s_star,
            root_fidelity,
            degenerate: true,
            orthogonal: false,
        });
    }

    Ok(GeodesicPath {
        rho1: rho1.clone(),
        rho2: rho2.clone(),
        m_star: m,
        s_star,
        root_fidelity,
        degenerate: false,
        orthogonal: false,
    })
}

/// `M(s) = f(s) I + g(s) M*`; `I` on a degenerate path.
pub fn transport_operator(path: &GeodesicPath, s: f64) -> Result<Hermitian> {
    path.check_parameter(s)?;
    let n = path.dim();
    if path.degenerate {
        return Ok(Hermitian::identity(n));
    }
    let (f, g) = path.coefficients(s);
    Ok(Hermitian::from_hermitian_product(
        ComplexMatrix::identity(n, n) * c(f) + path.m_star.as_matrix() * c(g),
    ))
}

/// `rho(s) = M(s) rho1 M(s)`.
pub fn geodesic_point(path: &GeodesicPath, s: f64) -> Result<DensityMatrix> {
    let m = transport_operator(path, s)?;
    let m = m.as_matrix();
    let rho = Hermitian::from_hermitian_product(m * path.rho1.matrix() * m);
    DensityMatrix::from_hermitian(rho, &Validation::COMPUTED)
}

fn check_fiber(a0: &Purification, path: &GeodesicPath) -> Result<()> {
    if a0.dim() != path.dim() {
        return Err(Error::DimensionMismatch {
            expected: path.dim(),
            found: a0.dim(),
        });
    }
    let residual = projection_residual(a0.matrix(), &path.rho1);
    if residual.is_nan() || residual > FIBER_TOL {
        return Err(Error::WrongFiber { residual });
    }
    Ok(())
}

/// `A(s) = M(s) A0` for a purification `A0` of `rho1`.
pub fn horizontal_lift(a0: &Purification, path: &GeodesicPath, s: f64) -> Result<Purification> {
    check_fiber(a0, path)?;
    let m = transport_operator(path, s)?;
    let a = m.as_matrix() * a0.matrix();
    let target = geodesic_point(path, s)?;
    Ok(Purification::from_parts(a, target))
}

/// `A'(s) = (f'(s) I + g'(s) M*) A0`.
pub fn lift_velocity(a0: &Purification, path: &GeodesicPath, s: f64) -> Result<ComplexMatrix> {
    check_fiber(a0, path)?;
    path.check_parameter(s)?;
    if path.degenerate {
        return Err(Error::DegeneratePath);
    }
    let n = path.dim();
    let (fd, gd) = path.coefficient_derivatives(s);
    let mdot = ComplexMatrix::identity(n, n) * c(fd) + path.m_star.as_matrix() * c(gd);
    Ok(mdot * a0.matrix())
}

/// `G0 = (M* - I cos s*) / sin s*`, the generator of `A'(0) = G0 A0`.
pub fn initial_tangent(path: &GeodesicPath) -> Result<Hermitian> {
    if path.degenerate {
        return Err(Error::DegeneratePath);
    }
    let n = path.dim();
    let (cs, sn) = (path.s_star.cos(), path.s_star.sin());
    Ok(Hermitian::from_hermitian_product(
        (path.m_star.as_matrix() - ComplexMatrix::identity(n, n) * c(cs)) * c(1.0 / sn),
    ))
}

/// `max |A'^dag A - A^dag A'|`; zero exactly when `A'` is horizontal at `A`.
pub fn hlc_residual(a: &ComplexMatrix, adot: &ComplexMatrix) -> Result<f64> {
    if a.shape() != adot.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: adot.nrows(),
        });
    }
    let x = adot.adjoint() * a;
    Ok(max_abs(&(&x - x.adjoint())))
}

/// Tolerance on `|Tr drho|` (relative to the largest entry when above one).
pub const TRACELESS_TOL: f64 = 1e-10;

/// `(1/2) sum_ij |<i|drho|j>|^2 / (l_i + l_j)` in the eigenbasis of `rho`.
/// Pairs with `l_i + l_j` at or below the clamp are skipped.
pub fn hubner_metric(rho: &DensityMatrix, drho: &Hermitian) -> Result<f64> {
    if drho.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: drho.dim(),
        });
    }
    let trace = drho.trace();
    if trace.abs() > TRACELESS_TOL * max_abs(drho.as_matrix()).max(1.0) {
        return Err(Error::Traceful { trace });
    }
    let dec = rho.eigen()?;
    let v = &dec.eigenvectors;
    let d = v.adjoint() * drho.as_matrix() * v;
    let clamp = dec.default_clamp();
    let n = rho.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let denom = dec.eigenvalues[i] + dec.eigenvalues[j];
            if denom > clamp {
                sum += d[(i, j)].norm_sqr() / denom;
            }
        }
    }
    Ok(sum / 2.0)
}

/// `U = sqrt(rho1^{1/2} rho2 rho1^{1/2}) rho1^{-1/2} rho2^{-1/2}`, the
/// unitary that attains the fidelity: `Tr[U sqrt(rho2) sqrt(rho1)] = sqrt(F)`.
pub fn uhlmann_unitary(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<ComplexMatrix> {
    check_dims(rho1, rho2)?;
    let dec1 = rho1.eigen()?;
    let dec2 = rho2.eigen()?;
    for dec in [&dec1, &dec2] {
        if dec.min_eigenvalue() <= dec.default_clamp() {
            return Err(Error::RankDeficient {
                min_eigenvalue: dec.min_eigenvalue(),
            });
        }
    }
    let sqrt1 = dec1.apply(SpectralMap::Sqrt, None)?;
    let sqrt2 = dec2.apply(SpectralMap::Sqrt, None)?;
    let inv1 = dec1.apply(SpectralMap::InverseSqrt, None)?;
    let inv2 = dec2.apply(SpectralMap::InverseSqrt, None)?;
    let root_tau = polar_positive(&(sqrt1.as_matrix() * sqrt2.as_matrix()))?;
    Ok(root_tau.as_matrix() * inv1.as_matrix() * inv2.as_matrix())
}
