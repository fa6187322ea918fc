use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::economy::Economy;
use crate::matrix::SquareMatrix;

/// Coefficients for generated economies are drawn from this range.
pub const COEFFICIENT_RANGE: (f64, f64) = (0.5, 1.5);

/// A strongly connected economy: the ring `i -> i+1` plus each other entry
/// with probability `density`.
pub fn random_economy(n: usize, density: f64, seed: u64) -> Economy {
    assert!(n > 0, "at least one player");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = COEFFICIENT_RANGE;
    let mut a = SquareMatrix::zeros(n);
    for j in 0..n {
        for i in 0..n {
            let ring = i == (j + 1) % n;
            if ring || rng.gen_bool(density.clamp(0.0, 1.0)) {
                a[(i, j)] = rng.gen_range(lo..hi);
            }
        }
    }
    Economy::from_matrix(a).expect("ring keeps the economy valid")
}

/// Positive starting amounts in `[0.5, 2)`.
pub fn random_amounts(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..n).map(|_| rng.gen_range(0.5..2.0)).collect()
}
