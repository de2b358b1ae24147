//! Bures geodesics between density matrices.
//!
//! The geodesic between two states is built from the matrix geometric mean
//! `M* = rho1^{-1/2} sqrt(rho1^{1/2} rho2 rho1^{1/2}) rho1^{-1/2}`; the crate also
//! provides Uhlmann fidelity and Bures distances, horizontal lifts to
//! purifications, the su(N) machinery for tangent generators, and analytic
//! geodesics for a few families of states.
//!
//! ```
//! use buresgeo_core::{geodesic_point, geometric_mean_operator, root_fidelity, DensityMatrix};
//!
//! let a = DensityMatrix::maximally_mixed(2);
//! let b = DensityMatrix::new(buresgeo_core::Hermitian::from_real_diagonal(&[1.0, 0.0]).into_matrix()).unwrap();
//! let path = geometric_mean_operator(&a, &b).unwrap();
//! let mid = geodesic_point(&path, path.s_star() / 2.0).unwrap();
//! let f = root_fidelity(&a, &mid).unwrap();
//! assert!((f - (path.s_star() / 2.0).cos()).abs() < 1e-12);
//! ```

pub mod closedform;
pub mod error;
pub mod geodesy;
pub mod matcore;
pub mod random;
pub mod states;
pub mod sun;

pub use error::{Error, Result};
pub use geodesy::{
    bures, geodesic_point, geometric_mean_operator, hlc_residual, horizontal_lift, hubner_metric,
    initial_tangent, lift_velocity, root_fidelity, transport_operator, uhlmann_unitary,
    BuresSummary, GeodesicPath,
};
pub use matcore::{
    hermitian_function, polar_positive, spectral_decompose, ComplexMatrix, ComplexVector,
    Hermitian, SpectralDecomposition, SpectralMap,
};
pub use num_complex::Complex64;
pub use states::{
    bloch_from_density, canonical_purification, density_from_bloch, project, werner, BlochVector,
    DensityMatrix, Purification, Validation, WernerKind,
};
pub use sun::{
    characteristic_invariants, generator_basis, hamiltonian_from_y, solve_tangent_g,
    unitary_tangent, GeneratorBasis, HamiltonianField, TangentGenerator, TangentSolution,
};
