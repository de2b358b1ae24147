//! Generalized Gell-Mann basis of su(N), structure constants, and the linear
//! systems for the tangent generator `G` in `rho_dot = G rho + rho G`.
//!
//! Generator order: symmetric off-diagonal pairs `(j,k)`, `j < k`, in
//! lexicographic order, then the antisymmetric pairs in the same order, then
//! the `N-1` diagonal generators. For `N = 2` this is `(sx, sy, sz)`.
//!
//! The tensors `f` and `d` are dense `(N^2-1)^3` arrays built on first use.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{c, max_abs, ComplexMatrix, Hermitian};
use crate::states::{BlochVector, DensityMatrix};

/// Largest supported dimension.
pub const MAX_DIM: usize = 16;

/// Condition number above which the tangent system is reported singular.
pub const CONDITION_LIMIT: f64 = 1e14;

type Entries = Vec<(usize, usize, Complex64)>;

#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    dim: usize,
    entries: Vec<Entries>,
    tensors: OnceLock<(Vec<f64>, Vec<f64>)>,
}

/// Builds the basis for `2 <= n <= 16`.
pub fn generator_basis(n: usize) -> Result<GeneratorBasis> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(Error::InvalidDimension {
            dim: n,
            min: 2,
            max: MAX_DIM,
        });
    }
    let one = c(1.0);
    let i = Complex64::i();
    let mut entries = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in j + 1..n {
            entries.push(vec![(j, k, one), (k, j, one)]);
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            entries.push(vec![(j, k, -i), (k, j, i)]);
        }
    }
    for l in 1..n {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut e: Entries = (0..l).map(|m| (m, m, c(norm))).collect();
        e.push((l, l, c(-(l as f64) * norm)));
        entries.push(e);
    }
    Ok(GeneratorBasis {
        dim: n,
        entries,
        tensors: OnceLock::new(),
    })
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `N^2 - 1`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sigma(&self, i: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for &(r, col, v) in &self.entries[i] {
            m[(r, col)] += v;
        }
        m
    }

    pub fn sigmas(&self) -> Vec<ComplexMatrix> {
        (0..self.len()).map(|i| self.sigma(i)).collect()
    }

    /// `c0 I + sum_i coeffs_i sigma_i`.
    pub fn combine(&self, c0: f64, coeffs: &[f64]) -> Hermitian {
        let mut m = ComplexMatrix::identity(self.dim, self.dim) * c(c0);
        for (e, &w) in self.entries.iter().zip(coeffs) {
            if w != 0.0 {
                for &(r, col, v) in e {
                    m[(r, col)] += v * w;
                }
            }
        }
        Hermitian::from_hermitian_product(m)
    }

    /// `Re Tr[H sigma_i]` for every generator.
    pub fn coefficients(&self, h: &Hermitian) -> Vec<f64> {
        let m = h.as_matrix();
        self.entries
            .iter()
            .map(|e| e.iter().map(|&(r, col, v)| (m[(col, r)] * v).re).sum())
            .collect()
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.len();
        (i * n + j) * n + k
    }

    /// `f_ijk = (1/4i) Tr[[s_i, s_j] s_k]`.
    pub fn f(&self, i: usize, j: usize, k: usize) -> f64 {
        self.f_tensor()[self.index(i, j, k)]
    }

    /// `d_ijk = (1/4) Tr[{s_i, s_j} s_k]`.
    pub fn d(&self, i: usize, j: usize, k: usize) -> f64 {
        self.d_tensor()[self.index(i, j, k)]
    }

    pub fn f_tensor(&self) -> &[f64] {
        &self.tensors.get_or_init(|| self.structure_tensors()).0
    }

    pub fn d_tensor(&self) -> &[f64] {
        &self.tensors.get_or_init(|| self.structure_tensors()).1
    }

    // T_ijk = Tr[s_i s_j s_k] satisfies T_jik = conj(T_ijk), so
    // f = Im T / 2 and d = Re T / 2.
    fn structure_tensors(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim;
        let len = self.len();
        // Generators with a nonzero (b, a) entry, for Tr[P s_k] = sum P_ab (s_k)_ba.
        let mut by_entry: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n * n];
        for (k, e) in self.entries.iter().enumerate() {
            for &(r, col, v) in e {
                by_entry[r * n + col].push((k, v));
            }
        }
        let mut f = vec![0.0; len * len * len];
        let mut d = vec![0.0; len * len * len];
        let mut prod = vec![Complex64::new(0.0, 0.0); n * n];
        let mut seen = vec![false; n * n];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..len {
            for j in 0..len {
                for &(a, m, vi) in &self.entries[i] {
                    for &(m2, b, vj) in &self.entries[j] {
                        if m == m2 {
                            let idx = a * n + b;
                            if !seen[idx] {
                                seen[idx] = true;
                                touched.push(idx);
                            }
                            prod[idx] += vi * vj;
                        }
                    }
                }
                let base = (i * len + j) * len;
                for &idx in &touched {
                    let (a, b) = (idx / n, idx % n);
                    let p = prod[idx];
                    for &(k, vk) in &by_entry[b * n + a] {
                        let t = p * vk;
                        f[base + k] += t.im / 2.0;
                        d[base + k] += t.re / 2.0;
                    }
                    prod[idx] = Complex64::new(0.0, 0.0);
                    seen[idx] = false;
                }
                touched.clear();
            }
        }
        (f, d)
    }

    /// `D_kj = sum_i x_i d_ikj`.
    pub fn d_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        self.contract(self.d_tensor(), x)
    }

    /// `D~_kj = sum_i x_i f_ijk`.
    pub fn f_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.len();
        let t = self.f_tensor();
        DMatrix::from_fn(n, n, |k, j| {
            x.iter()
                .enumerate()
                .map(|(i, &xi)| xi * t[self.index(i, j, k)])
                .sum()
        })
    }

    fn contract(&self, t: &[f64], x: &[f64]) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for k in 0..n {
                for j in 0..n {
                    m[(k, j)] += xi * t[self.index(i, k, j)];
                }
            }
        }
        m
    }

    /// `I + X(x) + D(x)` with `X_kj = -(2/N) x_k x_j`.
    pub fn tangent_system(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.len();
        let two_over_n = 2.0 / self.dim as f64;
        let mut m = self.d_matrix(x);
        for k in 0..n {
            m[(k, k)] += 1.0;
            for j in 0..n {
                m[(k, j)] -= two_over_n * x[k] * x[j];
            }
        }
        m
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: v.len(),
            });
        }
        Ok(())
    }

    fn check_bloch(&self, x: &BlochVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }
}

/// `G = (1/N)(g0 I + g . sigma)`.
#[derive(Clone, Debug)]
pub struct TangentGenerator {
    pub g0: f64,
    pub g: Vec<f64>,
    matrix: Hermitian,
}

impl TangentGenerator {
    pub fn new(g0: f64, g: Vec<f64>, basis: &GeneratorBasis) -> Result<Self> {
        basis.check_len(&g)?;
        let matrix = basis.combine(g0, &g).scale(1.0 / basis.dim() as f64);
        Ok(TangentGenerator { g0, g, matrix })
    }

    pub fn as_matrix(&self) -> &Hermitian {
        &self.matrix
    }
}

/// Result of [`solve_tangent_g`].
#[derive(Clone, Debug)]
pub struct TangentSolution {
    pub generator: TangentGenerator,
    /// 2-norm condition number of `I + X + D`.
    pub condition: f64,
    /// `max |G rho + rho G - rho_dot|`.
    pub residual: f64,
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `(I + X + D) g = (N/2) x_dot`, `g0 = -(2/N) x.g`, and reports the
/// reconstruction residual of `G rho + rho G = rho_dot`.
pub fn solve_tangent_g(
    x: &BlochVector,
    xdot: &[f64],
    basis: &GeneratorBasis,
) -> Result<TangentSolution> {
    basis.check_bloch(x)?;
    basis.check_len(xdot)?;
    let rho = crate::states::density_from_bloch(x, basis)?;
    let n = basis.dim() as f64;
    let a = basis.tangent_system(x.coords());
    let condition = condition_number(&a);
    if condition.is_nan() || condition > CONDITION_LIMIT {
        return Err(Error::SingularSystem { condition });
    }
    let rhs = DVector::from_iterator(xdot.len(), xdot.iter().map(|v| v * n / 2.0));
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularSystem { condition })?;
    let g: Vec<f64> = sol.iter().copied().collect();
    let g0 = -(2.0 / n) * dot(x.coords(), &g);
    let generator = TangentGenerator::new(g0, g, basis)?;
    let residual = anticommutator_residual(&generator, &rho, xdot, basis);
    Ok(TangentSolution {
        generator,
        condition,
        residual,
    })
}

/// `max |G rho + rho G - (1/N) x_dot . sigma|`.
pub fn anticommutator_residual(
    g: &TangentGenerator,
    rho: &DensityMatrix,
    xdot: &[f64],
    basis: &GeneratorBasis,
) -> f64 {
    let gm = g.as_matrix().as_matrix();
    let r = rho.matrix();
    let target = basis.combine(0.0, xdot).scale(1.0 / basis.dim() as f64);
    max_abs(&(gm * r + r * gm - target.as_matrix()))
}

/// Generator of a unitary flow: `g = D~ y`, `g0 = 0`.
///
/// The resulting `G` makes `G rho + rho G` proportional to `i[rho, Y]`, so the
/// flow preserves trace and spectrum to first order.
pub fn unitary_tangent(
    y: &[f64],
    x: &BlochVector,
    basis: &GeneratorBasis,
) -> Result<TangentGenerator> {
    basis.check_bloch(x)?;
    basis.check_len(y)?;
    let m = basis.f_matrix(x.coords());
    let g: Vec<f64> = (&m * DVector::from_column_slice(y))
        .iter()
        .copied()
        .collect();
    TangentGenerator::new(0.0, g, basis)
}

/// `B` and its split along `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianField {
    pub b: Vec<f64>,
    pub b_par: Vec<f64>,
    pub b_perp: Vec<f64>,
}

/// `B = (I + X + D) y`, `B_par = (B.x^) x^`, `B_perp = B - B_par`.
pub fn hamiltonian_from_y(
    y: &[f64],
    x: &BlochVector,
    basis: &GeneratorBasis,
) -> Result<HamiltonianField> {
    basis.check_bloch(x)?;
    basis.check_len(y)?;
    let a = basis.tangent_system(x.coords());
    let b: Vec<f64> = (&a * DVector::from_column_slice(y))
        .iter()
        .copied()
        .collect();
    let xn = x.norm_sq().sqrt();
    let b_par: Vec<f64> = if xn == 0.0 {
        vec![0.0; b.len()]
    } else {
        let proj = dot(&b, x.coords()) / (xn * xn);
        x.coords().iter().map(|xi| proj * xi).collect()
    };
    let b_perp = b.iter().zip(&b_par).map(|(u, v)| u - v).collect();
    Ok(HamiltonianField { b, b_par, b_perp })
}

/// Elementary symmetric polynomials `S_1..S_N` of the spectrum, from power
/// traces through Newton's identities.
pub fn characteristic_invariants(rho: &DensityMatrix) -> Vec<f64> {
    let n = rho.dim();
    let m = rho.matrix();
    let mut powers = Vec::with_capacity(n);
    let mut p = m.clone();
    for j in 1..=n {
        if j > 1 {
            p = &p * m;
        }
        powers.push(p.trace().re);
    }
    let mut s = vec![1.0];
    for k in 1..=n {
        let mut acc = 0.0;
        for j in 1..=k {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * s[k - j] * powers[j - 1];
        }
        s.push(acc / k as f64);
    }
    s.remove(0);
    s
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

/// Worst-case deviations of the basis from the su(N) algebra identities.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraReport {
    pub dim: usize,
    /// `max |Tr[s_i s_j] - 2 delta_ij|`.
    pub trace_orthogonality: f64,
    /// Largest violation of total antisymmetry of `f`.
    pub f_antisymmetry: f64,
    /// Largest violation of total symmetry of `d`.
    pub d_symmetry: f64,
    /// Completeness relation, entrywise.
    pub completeness: f64,
    /// `s_i s_j = (2/N) delta_ij I + (d_ijk + i f_ijk) s_k`, entrywise.
    pub closure: f64,
    /// Largest generator trace and hermiticity defect.
    pub traceless_hermitian: f64,
}

impl AlgebraReport {
    pub fn worst(&self) -> f64 {
        [
            self.trace_orthogonality,
            self.f_antisymmetry,
            self.d_symmetry,
            self.completeness,
            self.closure,
            self.traceless_hermitian,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Checks every algebra identity with dense matrix products.
pub fn algebra_report(basis: &GeneratorBasis) -> AlgebraReport {
    let n = basis.dim();
    let len = basis.len();
    let sig = basis.sigmas();

    let mut traceless_hermitian = 0.0f64;
    for s in &sig {
        traceless_hermitian = traceless_hermitian
            .max(s.trace().norm())
            .max(max_abs(&(s - s.adjoint())));
    }

    let mut trace_orthogonality = 0.0f64;
    let mut closure = 0.0f64;
    let id = ComplexMatrix::identity(n, n);
    for i in 0..len {
        for j in 0..len {
            let p = &sig[i] * &sig[j];
            let delta = if i == j { 1.0 } else { 0.0 };
            trace_orthogonality = trace_orthogonality.max((p.trace() - c(2.0 * delta)).norm());
            let mut rhs = &id * c(2.0 * delta / n as f64);
            for (k, sk) in sig.iter().enumerate() {
                let w = Complex64::new(basis.d(i, j, k), basis.f(i, j, k));
                if w != Complex64::new(0.0, 0.0) {
                    rhs += sk * w;
                }
            }
            closure = closure.max(max_abs(&(p - rhs)));
        }
    }

    let mut f_antisymmetry = 0.0f64;
    let mut d_symmetry = 0.0f64;
    for i in 0..len {
        for j in 0..len {
            for k in 0..len {
                let f = basis.f(i, j, k);
                let d = basis.d(i, j, k);
                for (a, b, cc, sign) in [
                    (j, i, k, -1.0),
                    (i, k, j, -1.0),
                    (k, j, i, -1.0),
                    (j, k, i, 1.0),
                    (k, i, j, 1.0),
                ] {
                    f_antisymmetry = f_antisymmetry.max((f - sign * basis.f(a, b, cc)).abs());
                    d_symmetry = d_symmetry.max((d - basis.d(a, b, cc)).abs());
                }
            }
        }
    }

    let mut completeness = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    let sum: Complex64 = sig.iter().map(|s| s[(a, b)] * s[(cc, d)]).sum();
                    let kd = |u: usize, v: usize| if u == v { 1.0 } else { 0.0 };
                    let expected =
                        2.0 * kd(a, d) * kd(b, cc) - 2.0 / n as f64 * kd(a, b) * kd(cc, d);
                    completeness = completeness.max((sum - c(expected)).norm());
                }
            }
        }
    }

    AlgebraReport {
        dim: n,
        trace_orthogonality,
        f_antisymmetry,
        d_symmetry,
        completeness,
        closure,
        traceless_hermitian,
    }
}
