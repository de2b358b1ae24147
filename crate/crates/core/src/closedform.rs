//! Analytic geodesics for three families: maximally mixed to pure in any
//! dimension, the three-qubit GHZ/W Werner pair, and arbitrary qubit pairs.
//!
//! Each formula here is checked against the generic pipeline in [`crate::geodesy`]
//! in the tests. Conventions used by the qubit formulas:
//!
//! | quantity | form used |
//! |---|---|
//! | `sqrt(rho)` | `(a+ I + a- x^.sigma)/sqrt 2`, the positive semidefinite root |
//! | `tau` | `tau0 = (1 + x y_par)/4`, `tau_vec = ((x + y_par) x^ + sqrt(1-x^2) y_perp)/4` |
//! | eigenvectors of `tau` | `(tau3 +- |tau|, tau1 + i tau2)`, normalized |
//! | cross term | `rho_i = (I + (w_par + w_perp / sqrt(1-x^2)).sigma)/2` |
//! | Werner cross term | `(1-p)/4 I + (sqrt((1-p)(1+7p)) - (1-p))/4 (P_GHZ + P_W)` |
//!
//! with `a+- = sqrt((1 +- sqrt(1-x^2))/2)`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{c, ComplexMatrix, ComplexVector, Hermitian};
use crate::states::{ghz_state, w_state, DensityMatrix, Validation};

fn check_unit(psi: &ComplexVector) -> Result<()> {
    let norm = psi.norm();
    if norm.is_nan() || (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { trace: norm * norm });
    }
    Ok(())
}

fn check_range(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::OutOfRange {
            what,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}

/// `f(s) = sin(s* - s)/sin s*`, `g(s) = sin s / sin s*`.
pub fn interpolation_coefficients(s_star: f64, s: f64) -> (f64, f64) {
    let sn = s_star.sin();
    ((s_star - s).sin() / sn, s.sin() / sn)
}

/// Arclength from `I/N` to any pure state, `arccos(1/sqrt N)`.
pub fn maxmixed_s_star(n: usize) -> f64 {
    (1.0 / (n as f64).sqrt()).acos()
}

/// `rho(s) = f^2 I/N + (g^2 + 2 f g / sqrt N) |psi><psi|`.
pub fn maxmixed_to_pure(n: usize, psi: &ComplexVector, s: f64) -> Result<DensityMatrix> {
    if psi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: psi.len(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidDimension {
            dim: n,
            min: 2,
            max: usize::MAX,
        });
    }
    check_unit(psi)?;
    let s_star = maxmixed_s_star(n);
    check_range("s", s, 0.0, s_star)?;
    let (f, g) = interpolation_coefficients(s_star, s);
    let rn = (n as f64).sqrt();
    let m = ComplexMatrix::identity(n, n) * c(f * f / n as f64)
        + (psi * psi.adjoint()) * c(g * g + 2.0 * f * g / rn);
    DensityMatrix::validated(m, &Validation::COMPUTED)
}

/// Root fidelity between the GHZ Werner state at `p` and the W Werner state at `q`.
pub fn werner_root_fidelity(p: f64, q: f64) -> Result<f64> {
    check_range("p", p, 0.0, 1.0)?;
    check_range("q", q, 0.0, 1.0)?;
    Ok((6.0 * ((1.0 - p) * (1.0 - q)).sqrt()
        + ((1.0 - p) * (1.0 + 7.0 * q)).sqrt()
        + ((1.0 - q) * (1.0 + 7.0 * p)).sqrt())
        / 8.0)
}

fn projector(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// `M*` from the GHZ Werner state to the W Werner state at equal `p < 1`:
/// `(I - P_GHZ - P_W) + sqrt((1-p)/(1+7p)) P_GHZ + sqrt((1+7p)/(1-p)) P_W`.
pub fn werner_transport_star(p: f64) -> Result<Hermitian> {
    check_range("p", p, 0.0, 1.0)?;
    if p == 1.0 {
        return Err(Error::SingularTransport);
    }
    let pg = projector(&ghz_state());
    let pw = projector(&w_state());
    let a = ((1.0 - p) / (1.0 + 7.0 * p)).sqrt();
    let m = ComplexMatrix::identity(8, 8) + &pg * c(a - 1.0) + &pw * c(1.0 / a - 1.0);
    Ok(Hermitian::from_hermitian_product(m))
}

/// `M* rho_GHZ + rho_GHZ M*` at equal `p`; continuous at `p = 1`, where it is zero.
pub fn werner_crossterm(p: f64) -> Result<Hermitian> {
    check_range("p", p, 0.0, 1.0)?;
    let pg = projector(&ghz_state());
    let pw = projector(&w_state());
    let q = 1.0 - p;
    let root = (q * (1.0 + 7.0 * p)).sqrt();
    let m = ComplexMatrix::identity(8, 8) * c(q / 4.0) + (pg + pw) * c((root - q) / 4.0);
    Ok(Hermitian::from_hermitian_product(m))
}

/// Point on the geodesic between orthogonal pure states, in vector form.
#[derive(Clone, Debug)]
pub struct OrthogonalGeodesicPoint {
    /// `cos s |psi1> + sin s |psi2>`.
    pub state: ComplexVector,
    pub rho: DensityMatrix,
}

/// Largest overlap accepted as orthogonal.
pub const OVERLAP_TOL: f64 = 1e-10;

fn check_orthogonal(psi1: &ComplexVector, psi2: &ComplexVector) -> Result<()> {
    if psi1.len() != psi2.len() {
        return Err(Error::DimensionMismatch {
            expected: psi1.len(),
            found: psi2.len(),
        });
    }
    check_unit(psi1)?;
    check_unit(psi2)?;
    let overlap = psi1.dotc(psi2).norm();
    if overlap > OVERLAP_TOL {
        return Err(Error::NotOrthogonal { overlap });
    }
    Ok(())
}

/// `M = |psi1><psi2| + |psi2><psi1|`, which maps `|psi1>` to `|psi2>`.
pub fn orthogonal_transport(psi1: &ComplexVector, psi2: &ComplexVector) -> Result<Hermitian> {
    check_orthogonal(psi1, psi2)?;
    Ok(Hermitian::from_hermitian_product(
        psi1 * psi2.adjoint() + psi2 * psi1.adjoint(),
    ))
}

pub fn orthogonal_pure_geodesic(
    psi1: &ComplexVector,
    psi2: &ComplexVector,
    s: f64,
) -> Result<OrthogonalGeodesicPoint> {
    check_orthogonal(psi1, psi2)?;
    check_range("s", s, 0.0, FRAC_PI_2)?;
    let state = psi1 * c(s.cos()) + psi2 * c(s.sin());
    let rho = DensityMatrix::validated(&state * state.adjoint(), &Validation::COMPUTED)?;
    Ok(OrthogonalGeodesicPoint { state, rho })
}

type Vec3 = [f64; 3];

fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

fn scale3(k: f64, a: &Vec3) -> Vec3 {
    [k * a[0], k * a[1], k * a[2]]
}

fn add3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// `c0 I + v.sigma`.
pub fn pauli_combination(c0: f64, v: &Vec3) -> Hermitian {
    let i = Complex64::i();
    let m = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            c(c0 + v[2]),
            c(v[0]) - i * v[1],
            c(v[0]) + i * v[1],
            c(c0 - v[2]),
        ],
    );
    Hermitian::from_hermitian_product(m)
}

/// `(I + x.sigma)/2`.
pub fn qubit_state(x: &Vec3) -> Result<DensityMatrix> {
    check_closed_ball(x)?;
    DensityMatrix::validated(
        pauli_combination(0.5, &scale3(0.5, x)).into_matrix(),
        &Validation::COMPUTED,
    )
}

fn check_open_ball(x: &Vec3) -> Result<f64> {
    let r = norm3(x);
    if r.is_nan() || r >= 1.0 {
        return Err(Error::OutOfRange {
            what: "|x|",
            value: r,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(r)
}

fn check_closed_ball(y: &Vec3) -> Result<f64> {
    let r = norm3(y);
    if r.is_nan() || r > 1.0 + 1e-12 {
        return Err(Error::OutOfRange {
            what: "|y|",
            value: r,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(r)
}

/// `(sqrt(rho), rho^{-1/2})` for `rho = (I + x.sigma)/2`, `|x| < 1`.
pub fn qubit_root(x: &Vec3) -> Result<(Hermitian, Hermitian)> {
    let r = check_open_ball(x)?;
    let root_det2 = (1.0 - r * r).sqrt();
    let ap = ((1.0 + root_det2) / 2.0).sqrt();
    let am = ((1.0 - root_det2) / 2.0).sqrt();
    let xhat = if r > 0.0 {
        scale3(1.0 / r, x)
    } else {
        [0.0; 3]
    };
    let k = std::f64::consts::FRAC_1_SQRT_2;
    let sqrt = pauli_combination(k * ap, &scale3(k * am, &xhat));
    let w = 2f64.sqrt() / root_det2;
    let inv = pauli_combination(w * ap, &scale3(-w * am, &xhat));
    Ok((sqrt, inv))
}

/// `tau = sqrt(rho1) rho2 sqrt(rho1) = tau0 I + tau_vec.sigma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitTau {
    pub tau0: f64,
    pub tau_vec: Vec3,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl QubitTau {
    pub fn matrix(&self) -> Hermitian {
        pauli_combination(self.tau0, &self.tau_vec)
    }
}

fn direction(x: &Vec3, y: &Vec3) -> Vec3 {
    let rx = norm3(x);
    if rx >= 1e-12 {
        return scale3(1.0 / rx, x);
    }
    let ry = norm3(y);
    if ry >= 1e-12 {
        return scale3(1.0 / ry, y);
    }
    [0.0, 0.0, 1.0]
}

pub fn qubit_tau(x: &Vec3, y: &Vec3) -> Result<QubitTau> {
    let rx = check_open_ball(x)?;
    check_closed_ball(y)?;
    let xhat = direction(x, y);
    let y_par = dot3(y, &xhat);
    let y_perp = add3(y, &scale3(-y_par, &xhat));
    let tau0 = (1.0 + rx * y_par) / 4.0;
    let tau_vec = scale3(
        0.25,
        &add3(
            &scale3(rx + y_par, &xhat),
            &scale3((1.0 - rx * rx).sqrt(), &y_perp),
        ),
    );
    let t = norm3(&tau_vec);
    Ok(QubitTau {
        tau0,
        tau_vec,
        lambda_plus: tau0 + t,
        lambda_minus: tau0 - t,
    })
}

/// `sqrt(Lambda+) + sqrt(Lambda-)`.
pub fn qubit_fidelity(x: &Vec3, y: &Vec3) -> Result<f64> {
    let tau = qubit_tau(x, y)?;
    Ok((tau.lambda_plus.max(0.0).sqrt() + tau.lambda_minus.max(0.0).sqrt()).clamp(0.0, 1.0))
}

// Eigenvectors of tau_vec.sigma for +|tau| and -|tau|, from the closed form
// when it is well conditioned and from the eigensolver otherwise.
fn tau_eigenvectors(tau: &QubitTau) -> Result<[ComplexVector; 2]> {
    let [t1, t2, t3] = tau.tau_vec;
    let t = norm3(&tau.tau_vec);
    let lower = Complex64::new(t1, t2);
    let closed = |sign: f64| -> Option<ComplexVector> {
        let denom = 2.0 * t * (t + sign * t3);
        if t < 1e-14 || (t + sign * t3) < 1e-8 * t {
            return None;
        }
        let k = 1.0 / denom.sqrt();
        Some(ComplexVector::from_vec(vec![
            c((t3 + sign * t) * k),
            lower * k,
        ]))
    };
    match (closed(1.0), closed(-1.0)) {
        (Some(p), Some(m)) => Ok([p, m]),
        _ => {
            let dec = tau.matrix().eigen()?;
            Ok([
                dec.eigenvectors.column(1).into_owned(),
                dec.eigenvectors.column(0).into_owned(),
            ])
        }
    }
}

fn bloch_of_vector(v: &ComplexVector) -> Vec3 {
    let (a, b) = (v[0], v[1]);
    let off = a.conj() * b;
    [2.0 * off.re, 2.0 * off.im, a.norm_sqr() - b.norm_sqr()]
}

/// Bloch vector `r(s)` of the geodesic from `(I + x.sigma)/2` to
/// `(I + y.sigma)/2`, with `s` the Bures angle from the start.
pub fn qubit_orbit(x: &Vec3, y: &Vec3, s: f64) -> Result<Vec3> {
    let rx = check_open_ball(x)?;
    check_closed_ball(y)?;
    let fid = qubit_fidelity(x, y)?;
    let s_star = fid.acos();
    check_range("s", s, 0.0, s_star * (1.0 + 1e-12))?;
    if s_star < crate::geodesy::DEGENERATE_TOL {
        return Ok(*x);
    }
    let (f, g) = interpolation_coefficients(s_star, s);
    let tau = qubit_tau(x, y)?;
    let vecs = tau_eigenvectors(&tau)?;
    let xhat = direction(x, y);
    let stretch = 1.0 / (1.0 - rx * rx).sqrt();
    let mut cross = [0.0; 3];
    for (lambda, v) in [tau.lambda_plus, tau.lambda_minus]
        .into_iter()
        .zip(vecs.iter())
    {
        let w = bloch_of_vector(v);
        let w_par = scale3(dot3(&w, &xhat), &xhat);
        let w_perp = add3(&w, &scale3(-1.0, &w_par));
        let term = add3(&w_par, &scale3(stretch, &w_perp));
        cross = add3(&cross, &scale3(lambda.max(0.0).sqrt(), &term));
    }
    Ok(add3(
        &add3(&scale3(f * f, x), &scale3(g * g, y)),
        &scale3(2.0 * f * g, &cross),
    ))
}
