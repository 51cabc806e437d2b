//! Monte Carlo estimates of the measures computed analytically in [`crate::sphere`].

use alloc::vec;
use alloc::vec::Vec;

use super::{mc_estimate_measure, McEstimate, Rng};
use crate::error::{domain, Result};
use crate::sphere::{generate_points, Angle, Family, VertexFamily};
use crate::vector::dot;

/// Fraction of the sphere within `theta` of `e_1`.
pub fn mc_cap_measure(n: usize, theta: Angle, samples: u64, rng: &mut Rng) -> Result<McEstimate> {
    let c = libm::cos(theta.radians());
    mc_estimate_measure(n, |p| p[0] >= c, samples, rng)
}

/// Fraction of the sphere inside both caps of radius `alpha` centred at
/// `(cos β, ±sin β, 0, …)`, which are `2β` apart.
pub fn mc_intersection_measure(
    n: usize,
    alpha: Angle,
    beta: Angle,
    samples: u64,
    rng: &mut Rng,
) -> Result<McEstimate> {
    if n < 2 {
        return Err(domain!("intersection estimate needs n >= 2 (got {n})"));
    }
    let c = libm::cos(alpha.radians());
    let (cb, sb) = (libm::cos(beta.radians()), libm::sin(beta.radians()));
    mc_estimate_measure(n, |p| cb * p[0] + sb * p[1] >= c && cb * p[0] - sb * p[1] >= c, samples, rng)
}

/// Fraction of the sphere within `theta` of some point of `family`.
pub fn mc_union_measure(family: &VertexFamily, theta: Angle, samples: u64, rng: &mut Rng) -> Result<McEstimate> {
    let c = libm::cos(theta.radians());
    match family.family() {
        Family::CrossPolytope => mc_estimate_measure(
            family.dim(),
            |p| p.iter().any(|v| v.abs() >= c),
            samples,
            rng,
        ),
        Family::Simplex => {
            let points: Vec<Vec<f64>> = generate_points(family);
            mc_estimate_measure(family.dim(), |p| points.iter().any(|q| dot(p, q) >= c), samples, rng)
        }
    }
}

/// Frequency, over `trials` random rotations of `family`, with which the cap `C[e_1, φ]`
/// receives no rotated point inside `C[-e_1, π/2 - φ]`.
pub fn mc_miss_frequency(family: &VertexFamily, phi: f64, trials: u64, rng: &mut Rng) -> Result<McEstimate> {
    if trials == 0 {
        return Err(domain!("at least one trial is required"));
    }
    let n = family.dim();
    let points = generate_points(family);
    let threshold = libm::cos(core::f64::consts::FRAC_PI_2 - phi);
    let mut target = vec![0.0; n];
    target[0] = -1.0;
    let mut misses = 0u64;
    for _ in 0..trials {
        let rot = super::random_rotation(n, rng)?;
        let hit = points.iter().any(|p| dot(&rot.apply(p), &target) > threshold);
        if !hit {
            misses += 1;
        }
    }
    Ok(McEstimate::from_counts(misses, trials))
}
