//! Seeded random fixtures: Ginibre density matrices, Haar-ish unitaries,
//! pure states and Bloch vectors. Used by the CLI `--seed` paths, the
//! benches and the test suites.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::{c, ComplexMatrix, ComplexVector, Hermitian};
use crate::states::DensityMatrix;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Hermitian {
    let g = ginibre(n, rng);
    Hermitian::new((&g + g.adjoint()) * c(0.5)).expect("symmetrized by construction")
}

/// `G G^dag / Tr` for a Ginibre `G`; full rank with probability one.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(n, rng);
    let w = &g * g.adjoint();
    let t = w.trace().re;
    DensityMatrix::new(w * c(1.0 / t)).expect("Ginibre product is a state")
}

/// Unit vector with i.i.d. complex Gaussian components.
pub fn random_pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    let v = DVector::from_fn(n, |_, _| gaussian(rng));
    let norm = v.norm();
    v * c(1.0 / norm)
}

/// Unitary from the QR factorization of a Ginibre matrix, with the phases
/// of `R`'s diagonal absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Point in the 3-ball of radius `max_radius`, uniform in volume.
pub fn random_bloch_ball<R: Rng + ?Sized>(max_radius: f64, rng: &mut R) -> [f64; 3] {
    loop {
        let p: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        if r2 <= 1.0 && r2 > 0.0 {
            return [p[0] * max_radius, p[1] * max_radius, p[2] * max_radius];
        }
    }
}
