//! Seeded fixtures shared by the benchmarks.

use buresgeo_core::random::random_density;
use buresgeo_core::DensityMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible pair of random full-rank `n x n` states.
pub fn state_pair(n: usize, seed: u64) -> (DensityMatrix, DensityMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_density(n, &mut rng), random_density(n, &mut rng))
}

/// `steps` points evenly spaced on `[0, 1]`.
pub fn unit_grid(steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect(),
    }
}
