//! Density matrices, generalized Bloch coordinates, the three-qubit Werner
//! families and purifications.
//!
//! A purification is kept in state-matrix form: a square `A` with
//! `A A^dag = rho`. The bipartite state-vector form is available through
//! [`Purification::to_state_vector`] and [`reduced_state`].

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matcore::{
    c, max_abs, trace_re, unitarity_residual, ComplexMatrix, ComplexVector, Hermitian,
    SpectralDecomposition, HERMITICITY_TOL,
};
use crate::sun::GeneratorBasis;

/// Tolerances applied when admitting a matrix as a density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validation {
    pub hermiticity: f64,
    pub trace: f64,
    /// Most negative eigenvalue allowed.
    pub psd: f64,
}

impl Default for Validation {
    fn default() -> Self {
        Validation {
            hermiticity: HERMITICITY_TOL,
            trace: 1e-12,
            psd: 1e-12,
        }
    }
}

impl Validation {
    /// For states produced by products of validated operators.
    pub const COMPUTED: Validation = Validation {
        hermiticity: HERMITICITY_TOL,
        trace: 1e-10,
        psd: 1e-10,
    };

    /// Every check at the same tolerance.
    pub fn uniform(tol: f64) -> Self {
        Validation {
            hermiticity: tol,
            trace: tol,
            psd: tol,
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Hermitian);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::validated(m, &Validation::default())
    }

    pub fn validated(m: ComplexMatrix, v: &Validation) -> Result<Self> {
        let h = Hermitian::with_tolerance(m, v.hermiticity)?;
        Self::from_hermitian(h, v)
    }

    pub fn from_hermitian(h: Hermitian, v: &Validation) -> Result<Self> {
        let trace = h.trace();
        if trace.is_nan() || (trace - 1.0).abs() > v.trace {
            return Err(Error::NotNormalized { trace });
        }
        let min = h.eigen()?.min_eigenvalue();
        if min < -v.psd {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(DensityMatrix(h))
    }

    /// `I/N`.
    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix(Hermitian::from_real_diagonal(&vec![1.0 / n as f64; n]))
    }

    /// `|psi><psi|`; `psi` must be normalized within `1e-10`.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if norm.is_nan() || (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { trace: norm * norm });
        }
        Ok(DensityMatrix(Hermitian::projector(psi)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_hermitian(&self) -> &Hermitian {
        &self.0
    }

    pub fn into_hermitian(self) -> Hermitian {
        self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.as_matrix()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        let m = self.matrix();
        m.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigen(&self) -> Result<SpectralDecomposition> {
        self.0.eigen()
    }

    /// Returns the state vector when `rho` is rank one within `tol`
    /// (largest eigenvalue `>= 1 - tol`).
    pub fn pure_state_vector(&self, tol: f64) -> Result<Option<ComplexVector>> {
        let dec = self.eigen()?;
        let n = dec.dim();
        if n == 0 || dec.max_eigenvalue() < 1.0 - tol {
            return Ok(None);
        }
        Ok(Some(dec.eigenvectors.column(n - 1).into_owned()))
    }
}

/// Real coordinates of `rho = (I + x.sigma)/N` in a generator basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    dim: usize,
    coords: Vec<f64>,
}

impl BlochVector {
    /// Checks the length `N^2 - 1` and the pure-state radius bound
    /// `|x|^2 <= N(N-1)/2`.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        let expected = dim * dim - 1;
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coords.len(),
            });
        }
        let bound = (dim * (dim - 1)) as f64 / 2.0;
        let r2: f64 = coords.iter().map(|x| x * x).sum();
        if r2 > bound + 1e-10 {
            return Err(Error::OutOfRange {
                what: "|x|^2",
                value: r2,
                lo: 0.0,
                hi: bound,
            });
        }
        Ok(BlochVector { dim, coords })
    }

    pub fn zero(dim: usize) -> Self {
        BlochVector {
            dim,
            coords: vec![0.0; dim * dim - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum()
    }
}

/// Most negative eigenvalue accepted by [`density_from_bloch`].
pub const BLOCH_PSD_TOL: f64 = 1e-10;

/// `rho = (I + sum_i x_i sigma_i)/N`, rejected when it leaves the state body.
pub fn density_from_bloch(x: &BlochVector, basis: &GeneratorBasis) -> Result<DensityMatrix> {
    let n = basis.dim();
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.dim(),
        });
    }
    let h = basis.combine(1.0, x.coords()).scale(1.0 / n as f64);
    let min = h.eigen()?.min_eigenvalue();
    if min < -BLOCH_PSD_TOL {
        return Err(Error::NotAState {
            min_eigenvalue: min,
        });
    }
    DensityMatrix::from_hermitian(
        h,
        &Validation {
            psd: BLOCH_PSD_TOL,
            ..Validation::COMPUTED
        },
    )
}

/// `x_i = (N/2) Tr[rho sigma_i]`.
pub fn bloch_from_density(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<BlochVector> {
    let n = basis.dim();
    if rho.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.dim(),
        });
    }
    let coords = basis.coefficients(rho.as_hermitian());
    let half = n as f64 / 2.0;
    Ok(BlochVector {
        dim: n,
        coords: coords.into_iter().map(|v| v * half).collect(),
    })
}

/// Pure component of a three-qubit Werner state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WernerKind {
    Ghz,
    W,
}

/// `(|000> + |111>)/sqrt 2`, basis index `4a + 2b + c` for `|abc>`.
pub fn ghz_state() -> ComplexVector {
    let mut v = DVector::zeros(8);
    let a = c(std::f64::consts::FRAC_1_SQRT_2);
    v[0] = a;
    v[7] = a;
    v
}

/// `(|001> + |010> + |100>)/sqrt 3`.
pub fn w_state() -> ComplexVector {
    let mut v = DVector::zeros(8);
    let a = c(1.0 / 3f64.sqrt());
    v[1] = a;
    v[2] = a;
    v[4] = a;
    v
}

/// `(1-p) I/8 + p |Phi><Phi|`.
pub fn werner(kind: WernerKind, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let phi = match kind {
        WernerKind::Ghz => ghz_state(),
        WernerKind::W => w_state(),
    };
    let m = ComplexMatrix::identity(8, 8) * c((1.0 - p) / 8.0) + (&phi * phi.adjoint()) * c(p);
    Ok(DensityMatrix(Hermitian::from_hermitian_product(m)))
}

/// Square matrix `A` with `A A^dag = target`.
#[derive(Clone, Debug)]
pub struct Purification {
    matrix: ComplexMatrix,
    target: DensityMatrix,
}

impl Purification {
    /// Wraps `a` and records its projection.
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        let target = project(&a)?;
        Ok(Purification { matrix: a, target })
    }

    pub(crate) fn from_parts(matrix: ComplexMatrix, target: DensityMatrix) -> Self {
        Purification { matrix, target }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn target(&self) -> &DensityMatrix {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Bipartite vector `sum_nk A_nk |n>|k>`, system index major.
    pub fn to_state_vector(&self) -> ComplexVector {
        let n = self.matrix.nrows();
        let k = self.matrix.ncols();
        DVector::from_fn(n * k, |idx, _| self.matrix[(idx / k, idx % k)])
    }
}

/// Partial trace over the environment of a system-major bipartite vector.
pub fn reduced_state(psi: &ComplexVector, system_dim: usize) -> Result<DensityMatrix> {
    if system_dim == 0 || !psi.len().is_multiple_of(system_dim) {
        return Err(Error::DimensionMismatch {
            expected: system_dim,
            found: psi.len(),
        });
    }
    let env = psi.len() / system_dim;
    let a = ComplexMatrix::from_fn(system_dim, env, |n, k| psi[n * env + k]);
    DensityMatrix::validated(a.clone() * a.adjoint(), &Validation::COMPUTED)
}

/// Tolerance on `||U^dag U - I||` for gauge unitaries.
pub const GAUGE_TOL: f64 = 1e-10;

/// `A = sqrt(rho) U` (`U = I` without a gauge).
pub fn canonical_purification(
    rho: &DensityMatrix,
    gauge: Option<&ComplexMatrix>,
) -> Result<Purification> {
    let root = rho.as_hermitian().sqrt()?.into_matrix();
    let matrix = match gauge {
        None => root,
        Some(u) => {
            if u.nrows() != rho.dim() || u.ncols() != rho.dim() {
                return Err(Error::DimensionMismatch {
                    expected: rho.dim(),
                    found: u.nrows(),
                });
            }
            let residual = unitarity_residual(u);
            if residual > GAUGE_TOL {
                return Err(Error::NotUnitary { residual });
            }
            root * u
        }
    };
    Ok(Purification {
        matrix,
        target: rho.clone(),
    })
}

/// `pi(A) = A A^dag`, validated as a density matrix.
pub fn project(a: &ComplexMatrix) -> Result<DensityMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let rho = a * a.adjoint();
    let trace = trace_re(&rho);
    if trace.is_nan() || (trace - 1.0).abs() > Validation::COMPUTED.trace {
        return Err(Error::NotNormalized { trace });
    }
    DensityMatrix::validated(rho, &Validation::COMPUTED)
}

/// Largest entry of `A A^dag - rho`.
pub fn projection_residual(a: &ComplexMatrix, rho: &DensityMatrix) -> f64 {
    max_abs(&(a * a.adjoint() - rho.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn werner_zero_is_maximally_mixed() {
        let r = werner(WernerKind::Ghz, 0.0).unwrap();
        assert!(max_abs(&(r.matrix() - DensityMatrix::maximally_mixed(8).matrix())) < 1e-16);
    }

    #[test]
    fn werner_spectrum() {
        for kind in [WernerKind::Ghz, WernerKind::W] {
            for k in 0..=10 {
                let p = k as f64 / 10.0;
                let ev = werner(kind, p).unwrap().eigen().unwrap().eigenvalues;
                let low = (1.0 - p) / 8.0;
                for &l in &ev[..7] {
                    assert!((l - low).abs() < 1e-12, "{kind:?} p={p}");
                }
                assert!((ev[7] - (1.0 + 7.0 * p) / 8.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn werner_pure_is_projector() {
        let r = werner(WernerKind::Ghz, 1.0).unwrap();
        let g = ghz_state();
        assert!(max_abs(&(r.matrix() - &g * g.adjoint())) < 1e-16);
        assert!((r.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn werner_rejects_bad_p() {
        assert!(matches!(
            werner(WernerKind::W, 1.5),
            Err(Error::OutOfRange { .. })
        ));
        assert!(werner(WernerKind::W, -0.01).is_err());
    }

    #[test]
    fn werner_grid_is_valid() {
        for k in 0..=100 {
            let p = k as f64 / 100.0;
            for kind in [WernerKind::Ghz, WernerKind::W] {
                let r = werner(kind, p).unwrap();
                assert!((r.trace() - 1.0).abs() < 1e-12);
                assert!(r.eigen().unwrap().min_eigenvalue() >= -1e-12);
            }
        }
    }

    #[test]
    fn ghz_w_orthogonal() {
        let o = ghz_state().dotc(&w_state());
        assert!(o.norm() <= 1e-15);
    }

    #[test]
    fn purification_of_maximally_mixed_qubit() {
        let p = canonical_purification(&DensityMatrix::maximally_mixed(2), None).unwrap();
        let expected = ComplexMatrix::identity(2, 2) * c(std::f64::consts::FRAC_1_SQRT_2);
        assert!(max_abs(&(p.matrix() - expected)) < 1e-15);
    }

    #[test]
    fn canonical_root_is_hermitian_square_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(2, &mut rng);
        let a = canonical_purification(&rho, None).unwrap();
        let m = a.matrix();
        assert!(max_abs(&(m - m.adjoint())) < 1e-15);
        assert!(max_abs(&(m * m - rho.matrix())) < 1e-14);
    }

    #[test]
    fn gauge_invariance_of_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density(4, &mut rng);
        let u = random_unitary(4, &mut rng);
        let a = canonical_purification(&rho, Some(&u)).unwrap();
        let b = canonical_purification(&rho, None).unwrap();
        let pa = project(a.matrix()).unwrap();
        let pb = project(b.matrix()).unwrap();
        assert!(max_abs(&(pa.matrix() - pb.matrix())) < 1e-14);
        assert!(max_abs(&(pa.matrix() - rho.matrix())) < 1e-14);
    }

    #[test]
    fn rejects_non_unitary_gauge() {
        let rho = DensityMatrix::maximally_mixed(2);
        let g = ComplexMatrix::identity(2, 2) * c(1.1);
        match canonical_purification(&rho, Some(&g)) {
            Err(Error::NotUnitary { residual }) => assert!((residual - 0.21).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn project_scaled_identity() {
        let a = ComplexMatrix::identity(3, 3) * c(1.0 / 3f64.sqrt());
        let r = project(&a).unwrap();
        assert!(max_abs(&(r.matrix() - DensityMatrix::maximally_mixed(3).matrix())) < 1e-15);
    }

    #[test]
    fn project_rejects_unnormalized() {
        let a = ComplexMatrix::identity(2, 2);
        assert!(matches!(project(&a), Err(Error::NotNormalized { trace }) if trace == 2.0));
    }

    #[test]
    fn state_vector_reduces_to_rho() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density(3, &mut rng);
        let u = random_unitary(3, &mut rng);
        let a = canonical_purification(&rho, Some(&u)).unwrap();
        let psi = a.to_state_vector();
        assert!((psi.norm() - 1.0).abs() < 1e-14);
        let back = reduced_state(&psi, 3).unwrap();
        assert!(max_abs(&(back.matrix() - rho.matrix())) < 1e-14);
    }

    #[test]
    fn density_rejects_bad_trace_and_negative() {
        let m = ComplexMatrix::identity(2, 2);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotNormalized { .. })
        ));
        let m = Hermitian::from_real_diagonal(&[1.2, -0.2]).into_matrix();
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotPositive { .. })
        ));
    }
}
