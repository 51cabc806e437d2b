use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::Rng;
use crate::error::{domain, Result};
use crate::vector::norm;

/// Fewest samples accepted by [`mc_estimate_measure`].
pub const MIN_MC_SAMPLES: u64 = 10_000;

fn fill_unit(rng: &mut Rng, out: &mut [f64]) {
    loop {
        for v in out.iter_mut() {
            *v = rng.standard_normal();
        }
        let r = norm(out);
        if r > 1e-300 {
            for v in out.iter_mut() {
                *v /= r;
            }
            return;
        }
    }
}

/// `count` independent uniform points on `S^{n-1}`.
pub fn sample_sphere(n: usize, count: usize, rng: &mut Rng) -> Result<Vec<Vec<f64>>> {
    if n < 2 {
        return Err(domain!("sphere sampling needs n >= 2 (got {n})"));
    }
    Ok((0..count)
        .map(|_| {
            let mut p = vec![0.0; n];
            fill_unit(rng, &mut p);
            p
        })
        .collect())
}

/// A Haar-distributed element of `O(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation(DMatrix<f64>);

impl Rotation {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.0[(i, j)] * x[j]).sum()).collect()
    }
}

/// QR factorization of a Gaussian matrix, with columns of `Q` flipped so that `R` has a
/// positive diagonal.
pub fn random_rotation(n: usize, rng: &mut Rng) -> Result<Rotation> {
    if n < 2 {
        return Err(domain!("rotations need n >= 2 (got {n})"));
    }
    let g = DMatrix::from_fn(n, n, |_, _| rng.standard_normal());
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(Rotation(q))
}

/// Monte Carlo estimate of a spherical measure.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McEstimate {
    pub estimate: f64,
    /// Binomial standard error `√(p(1-p)/S)`.
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

impl McEstimate {
    pub fn from_counts(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        McEstimate { estimate: p, std_error: libm::sqrt(p * (1.0 - p) / samples as f64), hits, samples }
    }

    /// Pools two estimates taken from independent streams.
    pub fn merge(self, other: McEstimate) -> Self {
        Self::from_counts(self.hits + other.hits, self.samples + other.samples)
    }

    /// `|estimate - value| ≤ k · max(SE, 1/S)`; the floor keeps zero-variance runs testable.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.std_error.max(1.0 / self.samples as f64)
    }
}

/// Fraction of `samples` uniform sphere points satisfying `predicate`.
pub fn mc_estimate_measure<P: FnMut(&[f64]) -> bool>(
    n: usize,
    mut predicate: P,
    samples: u64,
    rng: &mut Rng,
) -> Result<McEstimate> {
    if n < 2 {
        return Err(domain!("sphere sampling needs n >= 2 (got {n})"));
    }
    if samples < MIN_MC_SAMPLES {
        return Err(domain!("at least {MIN_MC_SAMPLES} samples are required (got {samples})"));
    }
    let mut point = vec![0.0; n];
    let mut hits = 0u64;
    for _ in 0..samples {
        fill_unit(rng, &mut point);
        if predicate(&point) {
            hits += 1;
        }
    }
    Ok(McEstimate::from_counts(hits, samples))
}
