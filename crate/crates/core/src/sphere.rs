//! Measures of spherical caps and of unions of equal caps.
//!
//! All measures are normalized (the whole sphere `S^{n-1}` has measure 1). Values tagged
//! [`MeasureKind::UpperBound`] or [`MeasureKind::LowerBound`] are certified in the
//! direction stated, up to binary64 rounding of the final sums; no interval arithmetic
//! is used.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{domain, Result};
use crate::quadrature;
use crate::special::regularized_incomplete_beta;

/// A geodesic angle in radians, restricted to `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const RIGHT: Angle = Angle(FRAC_PI_2);
    pub const QUARTER: Angle = Angle(FRAC_PI_4);

    pub fn new(radians: f64) -> Result<Self> {
        if radians.is_finite() && (0.0..=PI).contains(&radians) {
            Ok(Angle(radians))
        } else {
            Err(domain!("angle {radians} is outside [0, pi]"))
        }
    }

    /// `arccos(x)`; `x` must lie in `[-1, 1]`.
    pub fn acos(x: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(domain!("arccos argument {x} is outside [-1, 1]"));
        }
        Ok(Angle(libm::acos(x)))
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// `π/2 - self`, defined for angles up to `π/2`.
    pub fn complement(self) -> Result<Self> {
        Angle::new(FRAC_PI_2 - self.0)
    }
}

impl TryFrom<f64> for Angle {
    type Error = crate::Error;
    fn try_from(value: f64) -> Result<Self> {
        Angle::new(value)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

/// Which guarantee a [`CapMeasure`] value carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MeasureKind {
    Exact,
    UpperBound,
    LowerBound,
}

/// A normalized spherical measure in `[0, 1]` together with its guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CapMeasure {
    pub value: f64,
    pub kind: MeasureKind,
}

impl CapMeasure {
    fn new(value: f64, kind: MeasureKind) -> Self {
        CapMeasure { value: value.clamp(0.0, 1.0), kind }
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, MeasureKind::Exact)
    }
}

/// Regular simplex or cross-polytope vertices inscribed in the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Family {
    /// `n + 1` points with pairwise inner product `-1/n`.
    Simplex,
    /// The `2n` points `±e_k`.
    CrossPolytope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexFamily {
    family: Family,
    dim: usize,
}

impl VertexFamily {
    pub fn new(family: Family, dim: usize) -> Result<Self> {
        if dim < 3 {
            return Err(domain!("vertex families need dimension >= 3 (got {dim})"));
        }
        Ok(VertexFamily { family, dim })
    }

    pub fn simplex(dim: usize) -> Result<Self> {
        Self::new(Family::Simplex, dim)
    }

    pub fn cross_polytope(dim: usize) -> Result<Self> {
        Self::new(Family::CrossPolytope, dim)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points in the family.
    pub fn len(&self) -> usize {
        match self.family {
            Family::Simplex => self.dim + 1,
            Family::CrossPolytope => 2 * self.dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of unordered pairs of points at the minimal distance.
    pub fn closest_pairs(&self) -> usize {
        let n = self.dim;
        match self.family {
            Family::Simplex => n * (n + 1) / 2,
            // Every point is orthogonal to all others except its antipode.
            Family::CrossPolytope => 2 * n * (n - 1),
        }
    }

    /// Half of the minimal geodesic distance between two points of the family.
    pub fn half_separation(&self) -> f64 {
        match self.family {
            Family::Simplex => 0.5 * libm::acos(-1.0 / self.dim as f64),
            Family::CrossPolytope => FRAC_PI_4,
        }
    }

    /// Upper end of the inclusion–exclusion regime: `arccos(1/3)` for the simplex,
    /// `arccos(1/√3)` for the cross-polytope.
    ///
    /// For the cross-polytope this is where three caps first meet. Simplex triples meet
    /// earlier, at [`VertexFamily::triple_contact_radius`]; between the two the pairwise
    /// formula is no longer exact but remains a lower bound (Bonferroni).
    pub fn pairwise_limit(&self) -> f64 {
        match self.family {
            Family::Simplex => libm::acos(1.0 / 3.0),
            Family::CrossPolytope => libm::acos(1.0 / libm::sqrt(3.0)),
        }
    }

    /// Smallest radius at which three caps share a point: the angle from three vertices
    /// to their normalized sum.
    pub fn triple_contact_radius(&self) -> f64 {
        let n = self.dim as f64;
        match self.family {
            Family::Simplex => libm::acos(libm::sqrt((n - 2.0) / (3.0 * n))),
            Family::CrossPolytope => libm::acos(1.0 / libm::sqrt(3.0)),
        }
    }

    /// Smallest radius for which the caps cover the whole sphere.
    pub fn covering_radius(&self) -> f64 {
        let n = self.dim as f64;
        match self.family {
            Family::Simplex => libm::acos(1.0 / n),
            Family::CrossPolytope => libm::acos(1.0 / libm::sqrt(n)),
        }
    }
}

/// Step count and tolerance used for pairwise intersection measures.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureConfig {
    /// Number of equidistant steps in the Riemann-sum upper bound.
    pub steps: usize,
    /// Absolute tolerance of the adaptive quadrature for the exact value.
    pub abs_tol: f64,
}

impl QuadratureConfig {
    pub fn new(steps: usize, abs_tol: f64) -> Result<Self> {
        if steps == 0 {
            return Err(domain!("step count must be at least 1"));
        }
        if !(abs_tol > 0.0) {
            return Err(domain!("quadrature tolerance must be positive (got {abs_tol})"));
        }
        Ok(QuadratureConfig { steps, abs_tol })
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { steps: 200, abs_tol: 1e-10 }
    }
}

/// Normalized measure of a closed cap of radius `theta` on `S^{n-1}`:
/// `½ I_{sin²θ}((n-1)/2, ½)`.
pub fn cap_measure(n: usize, theta: Angle) -> Result<CapMeasure> {
    if n < 3 {
        return Err(domain!("cap measure needs n >= 3 (got {n})"));
    }
    let t = theta.radians();
    if t > FRAC_PI_2 {
        return Err(domain!("cap measure needs theta <= pi/2 (got {t})"));
    }
    if t == FRAC_PI_2 {
        return Ok(CapMeasure::exact(0.5));
    }
    let s = libm::sin(t);
    let value = 0.5 * regularized_incomplete_beta(s * s, 0.5 * (n as f64 - 1.0), 0.5)?;
    Ok(CapMeasure::exact(value))
}

/// Closed-form sandwich on the cap measure.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CapBounds {
    /// `sin^{n-1}θ / √(2πn)`.
    pub lower: f64,
    /// `sin^{n-1}θ / (√(2π(n-1)) cos θ)`, only valid for `θ ≤ arccos(1/√n)`.
    pub upper: Option<f64>,
}

pub fn cap_measure_bounds(n: usize, theta: Angle) -> Result<CapBounds> {
    if n < 3 {
        return Err(domain!("cap bounds need n >= 3 (got {n})"));
    }
    let t = theta.radians();
    if !(t > 0.0 && t <= FRAC_PI_2) {
        return Err(domain!("cap bounds need 0 < theta <= pi/2 (got {t})"));
    }
    let nf = n as f64;
    let sin_pow = libm::pow(libm::sin(t), nf - 1.0);
    let lower = sin_pow / libm::sqrt(2.0 * PI * nf);
    let upper = (t <= libm::acos(1.0 / libm::sqrt(nf)))
        .then(|| sin_pow / (libm::sqrt(2.0 * PI * (nf - 1.0)) * libm::cos(t)));
    Ok(CapBounds { lower, upper })
}

fn check_pair(n: usize, radius: Angle, half: Angle) -> Result<()> {
    if n < 4 {
        return Err(domain!("intersection measures need n >= 4 (got {n})"));
    }
    let (a, b) = (radius.radians(), half.radians());
    if a > FRAC_PI_2 {
        return Err(domain!("cap radius {a} exceeds pi/2"));
    }
    if b > a {
        return Err(domain!("half-distance {b} exceeds the cap radius {a}"));
    }
    Ok(())
}

#[inline]
fn radial_weight(n: usize, r: f64) -> f64 {
    // (1 - r^2)^{(n-4)/2}; integer powers where possible so n = 4 gives exactly 1.
    let base = (1.0 - r * r).max(0.0);
    if n % 2 == 0 {
        powi(base, (n - 4) / 2)
    } else {
        powi(base, (n - 5) / 2) * libm::sqrt(base)
    }
}

#[inline]
fn powi(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, _| acc * x)
}

/// Measure of `C[x, α] ∩ C[y, α]` for two caps of radius `alpha` whose centres are at
/// geodesic distance `2·beta`, by adaptive quadrature of
///
/// `(n-2)/π ∫_{cos α / cos β}^1 (1-r²)^{(n-4)/2} (arccos(cos α / r) - β) r dr`.
///
/// Only used as a reference value; the bound pipeline uses [`intersection_measure_upper`].
pub fn intersection_measure_exact(
    n: usize,
    alpha: Angle,
    beta: Angle,
    cfg: &QuadratureConfig,
) -> Result<CapMeasure> {
    check_pair(n, alpha, beta)?;
    let (a, b) = (alpha.radians(), beta.radians());
    if a == b {
        return Ok(CapMeasure::exact(0.0));
    }
    let cos_a = libm::cos(a);
    let r0 = cos_a / libm::cos(b);
    let integrand = |r: f64| {
        let angle = libm::acos((cos_a / r).clamp(-1.0, 1.0)) - b;
        radial_weight(n, r) * angle.max(0.0) * r
    };
    let scale = (n as f64 - 2.0) / PI;
    let integral = quadrature::integrate(integrand, r0, 1.0, cfg.abs_tol / scale)?;
    Ok(CapMeasure::exact(scale * integral.value))
}

/// Right-endpoint Riemann-sum upper bound on the pairwise intersection measure with
/// `steps` equidistant nodes `r_j = r_0 + j·h`, `r_0 = cos α / cos β`, `h = (1 - r_0)/steps`.
///
/// The decreasing factor `(1-r²)^{(n-4)/2}` is evaluated at `r_{j-1}` and the increasing
/// factors at `r_j`, so every summand dominates the integral over `[r_{j-1}, r_j]`.
pub fn intersection_measure_upper(n: usize, alpha: Angle, beta: Angle, steps: usize) -> Result<CapMeasure> {
    check_pair(n, alpha, beta)?;
    if steps == 0 {
        return Err(domain!("step count must be at least 1"));
    }
    let (a, b) = (alpha.radians(), beta.radians());
    if a == b {
        return Ok(CapMeasure::new(0.0, MeasureKind::UpperBound));
    }
    let cos_a = libm::cos(a);
    let r0 = cos_a / libm::cos(b);
    let h = (1.0 - r0) / steps as f64;
    let mut sum = 0.0;
    for j in 1..=steps {
        let left = r0 + (j - 1) as f64 * h;
        let right = r0 + j as f64 * h;
        let angle = libm::acos((cos_a / right).clamp(-1.0, 1.0)) - b;
        sum += radial_weight(n, left) * angle * right;
    }
    let value = sum * h * (n as f64 - 2.0) / PI;
    Ok(CapMeasure::new(value, MeasureKind::UpperBound))
}

/// Inclusion–exclusion value `k·A(θ) - P·A_{steps}(θ, half)`; a lower bound on the union.
fn inclusion_exclusion(family: &VertexFamily, theta: Angle, steps: usize) -> Result<f64> {
    let n = family.dim();
    let cap = cap_measure(n, theta)?.value;
    let half = Angle::new(family.half_separation())?;
    let pair = intersection_measure_upper(n, theta, half, steps)?.value;
    Ok(family.len() as f64 * cap - family.closest_pairs() as f64 * pair)
}

/// Measure of the union of caps of radius `theta` centred at the points of `family`.
///
/// Four regimes, by radius:
/// * disjoint caps: `k·A_n(θ)`, exact;
/// * up to [`VertexFamily::pairwise_limit`]: `k·A_n(θ)` minus the Riemann upper bound on
///   every closest-pair intersection, a lower bound by the Bonferroni inequality;
/// * beyond it: the value at the pairwise limit, a lower bound by monotonicity of the
///   union in `θ`;
/// * at or beyond the covering radius: exactly 1.
///
/// Lower bounds on the union are the conservative direction for non-illumination
/// probabilities `1 - σ`. For `n = 3` only the first and last regimes are available.
pub fn union_measure_upper(family: &VertexFamily, theta: Angle, steps: usize) -> Result<CapMeasure> {
    let t = theta.radians();
    if !(t > 0.0 && t <= FRAC_PI_2) {
        return Err(domain!("union measure needs 0 < theta <= pi/2 (got {t})"));
    }
    let n = family.dim();
    if t >= family.covering_radius() {
        return Ok(CapMeasure::exact(1.0));
    }
    let triple = family.pairwise_limit();
    if t >= triple {
        let value = inclusion_exclusion(family, Angle::new(triple)?, steps)?;
        return Ok(CapMeasure::new(value, MeasureKind::LowerBound));
    }
    if t > family.half_separation() {
        let value = inclusion_exclusion(family, theta, steps)?;
        return Ok(CapMeasure::new(value, MeasureKind::LowerBound));
    }
    let cap = cap_measure(n, theta)?.value;
    Ok(CapMeasure::exact(family.len() as f64 * cap))
}

/// The points of `family` as unit vectors in `R^n`.
pub fn generate_points(family: &VertexFamily) -> Vec<Vec<f64>> {
    let n = family.dim();
    match family.family() {
        Family::CrossPolytope => {
            let mut points = Vec::with_capacity(2 * n);
            for k in 0..n {
                for sign in [1.0, -1.0] {
                    let mut p = vec![0.0; n];
                    p[k] = sign;
                    points.push(p);
                }
            }
            points
        }
        Family::Simplex => {
            // v_i = a e_i + b 1 for i < n and v_n = 1/√n, with a² = 1 + 1/n and
            // a + n b = -1/√n.
            let nf = n as f64;
            let a = libm::sqrt((nf + 1.0) / nf);
            let b = (-1.0 / libm::sqrt(nf) - a) / nf;
            let mut points = Vec::with_capacity(n + 1);
            for i in 0..n {
                let mut p = vec![b; n];
                p[i] += a;
                points.push(p);
            }
            points.push(vec![1.0 / libm::sqrt(nf); n]);
            points
        }
    }
}
