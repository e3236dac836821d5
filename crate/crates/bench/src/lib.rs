//! Seeded inputs shared by the benchmarks.

use csets_core::{IPGenerators, RationalMatrix, WindowSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_set(rng: &mut ChaCha8Rng, window: usize, density: f64) -> WindowSet {
    WindowSet::from_members(window, (1..=window).filter(|_| rng.gen_bool(density))).expect("members lie in the window")
}

pub fn random_gens(rng: &mut ChaCha8Rng, k: usize, m: usize, bound: i64) -> IPGenerators {
    let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..m).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    IPGenerators::from_i64(&refs).expect("rows share a dimension")
}

/// A `p × q` integer matrix whose first `q − 1` columns are random and whose
/// last column cancels them, so the columns condition holds.
pub fn regular_matrix(rng: &mut ChaCha8Rng, p: usize, q: usize) -> RationalMatrix {
    let rows: Vec<Vec<i64>> = (0..p)
        .map(|_| {
            let mut row: Vec<i64> = (0..q - 1).map(|_| rng.gen_range(-4..=4)).collect();
            row.push(-row.iter().sum::<i64>());
            row
        })
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    RationalMatrix::from_integers(&refs).expect("rectangular")
}
