//! Rayon drivers. Thread count follows `RAYON_NUM_THREADS`; results never depend on it.

use capillum_core::oracle::{McEstimate, Rng, MIN_MC_SAMPLES};
use capillum_core::search::{sweep, BoundReport, SweepConfig};
use capillum_core::Result;
use rayon::prelude::*;
use std::time::Instant;

/// Upper limit on the number of independent streams a Monte Carlo run is split into.
pub const MAX_STREAMS: u64 = 64;

/// One sweep per dimension, evaluated concurrently and returned in input order.
pub fn sweep_many(dims: &[usize], config: &SweepConfig) -> Result<Vec<BoundReport>> {
    dims.par_iter().map(|&n| sweep(n, config)).collect()
}

/// [`sweep_many`] with the wall-clock seconds spent on each dimension.
pub fn sweep_many_timed(dims: &[usize], config: &SweepConfig) -> Result<Vec<(BoundReport, f64)>> {
    dims.par_iter()
        .map(|&n| {
            let start = Instant::now();
            sweep(n, config).map(|r| (r, start.elapsed().as_secs_f64()))
        })
        .collect()
}

/// Splits `samples` into a fixed number of chunks, each on stream `k` of `seed`, and pools
/// the chunk estimates. The split depends only on `samples`.
pub fn parallel_estimate<F>(samples: u64, seed: u64, estimate: F) -> Result<McEstimate>
where
    F: Fn(u64, &mut Rng) -> Result<McEstimate> + Sync,
{
    let streams = (samples / MIN_MC_SAMPLES).clamp(1, MAX_STREAMS);
    let base = samples / streams;
    let extra = samples % streams;
    let root = Rng::new(seed);
    let parts: Vec<McEstimate> = (0..streams)
        .into_par_iter()
        .map(|k| {
            let mut rng = root.split(k);
            estimate(base + u64::from(k < extra), &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().reduce(McEstimate::merge).expect("at least one stream"))
}
