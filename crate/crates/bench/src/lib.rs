//! Shared fixtures for the benchmarks.

use lqlab_core::ensembles::sample_batch;
use lqlab_core::{EnsembleSpec, SampleBatch};

pub fn gaussian_batch(d: usize, n: usize, seed: u64) -> SampleBatch {
    sample_batch(&EnsembleSpec::gaussian(d), n, seed).expect("valid fixture")
}

/// Deterministic pseudo-random point cloud in `[-1, 1]^d`.
pub fn point_cloud(count: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let batch = gaussian_batch(d, count, seed);
    batch
        .rows()
        .map(|r| r.iter().map(|x| x.tanh()).collect())
        .collect()
}
