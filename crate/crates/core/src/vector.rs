//! Small dense-vector helpers shared by the geometric code.

use alloc::vec::Vec;

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub(crate) fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// Geodesic distance between two unit vectors.
#[inline]
pub(crate) fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    libm::acos(dot(a, b).clamp(-1.0, 1.0))
}
