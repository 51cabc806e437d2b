//! Closed-form illumination bound from rotated cross-polytopes alone.
//!
//! With `p = A_n(π/4)` and `q = A_n(π/2 - arccos(1/√n))`, illuminating with `x` random
//! cross-polytopes leaves at most `(1 - 2np)^x / q` medium caps dark, so
//!
//! ```text
//! f(x) = (1 - 2np)^x / q + 2n·x + n + 1
//! ```
//!
//! directions suffice. [`bound_chain`] evaluates every step from `min_{x ∈ Z+} f(x)` down
//! to the closed form `n + 7 + (√2)^n √(πn) (1 + 3/n + ½ n ln(n/2) + ln(2/√(n-1)))`.

use core::f64::consts::{FRAC_PI_2, LN_2, PI};

use crate::error::{domain, Result};
use crate::sphere::{cap_measure, Angle};

/// Largest dimension accepted by the functions in this module.
pub const MAX_DIMENSION: usize = 200;
/// Smallest dimension for which the closed form is claimed.
pub const CLOSED_FORM_MIN_DIMENSION: usize = 9;

fn check(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_DIMENSION {
        return Err(domain!("dimension {n} outside [{min}, {MAX_DIMENSION}]"));
    }
    Ok(())
}

/// The two cap measures `p` and `q`, plus `ln(1 - 2np)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CapParameters {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    /// `ln(1 - 2np)`, negative.
    pub log_miss: f64,
}

impl CapParameters {
    pub fn new(n: usize) -> Result<Self> {
        check(n, 4)?;
        let p = cap_measure(n, Angle::QUARTER)?.value;
        let q_angle = FRAC_PI_2 - libm::acos(1.0 / libm::sqrt(n as f64));
        let q = cap_measure(n, Angle::new(q_angle)?)?.value;
        let two_np = 2.0 * n as f64 * p;
        if !(two_np < 1.0) {
            return Err(domain!("2np = {two_np} is not below 1 for n = {n}"));
        }
        Ok(CapParameters { n, p, q, log_miss: libm::log1p(-two_np) })
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn f(&self, x: f64) -> f64 {
        let n = self.nf();
        libm::exp(x * self.log_miss - libm::log(self.q)) + 2.0 * n * x + n + 1.0
    }

    pub fn f_prime(&self, x: f64) -> f64 {
        libm::exp(x * self.log_miss - libm::log(self.q)) * self.log_miss + 2.0 * self.nf()
    }

    /// Unique stationary point of `f`.
    pub fn x0(&self) -> f64 {
        let rate = -self.log_miss;
        (libm::log(rate) - libm::log(2.0 * self.nf() * self.q)) / rate
    }

    /// `g(t) = f'(x0 + t) = 2n (1 - (1 - 2np)^t)`.
    pub fn g(&self, t: f64) -> f64 {
        -2.0 * self.nf() * libm::expm1(t * self.log_miss)
    }

    /// `4n²p / (1 - 2np)`, the bound on `|f'|` within distance 1 of `x0`.
    pub fn slope_bound(&self) -> f64 {
        let n = self.nf();
        4.0 * n * n * self.p / (1.0 - 2.0 * n * self.p)
    }
}

pub fn f_value(n: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain!("f is evaluated at x >= 0 (got {x})"));
    }
    Ok(CapParameters::new(n)?.f(x))
}

pub fn minimizer_x0(n: usize) -> Result<f64> {
    let x0 = CapParameters::new(n)?.x0();
    if !(x0 > 0.0) {
        return Err(domain!("stationary point {x0} is not positive for n = {n}"));
    }
    Ok(x0)
}

/// Closed-form estimates of `p` and `q` from the cap-area sandwich.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PqBounds {
    /// `(1/√2)^n / √(πn)`.
    pub p_lower: f64,
    /// `(1/√2)^n √(2/(π(n-1)))`.
    pub p_upper: f64,
    /// `(1/√n)^n / √(2π)`.
    pub q_lower: f64,
}

pub fn pq_bounds(n: usize) -> Result<PqBounds> {
    check(n, 4)?;
    let nf = n as f64;
    let half_pow = libm::exp(-0.5 * nf * LN_2);
    Ok(PqBounds {
        p_lower: half_pow / libm::sqrt(PI * nf),
        p_upper: half_pow * libm::sqrt(2.0 / (PI * (nf - 1.0))),
        q_lower: libm::exp(-0.5 * nf * libm::log(nf)) / libm::sqrt(2.0 * PI),
    })
}

/// `n + 7 + (√2)^n √(πn) (1 + 3/n + ½ n ln(n/2) + ln(2/√(n-1)))`, evaluated in log space.
pub fn rhs_eq1(n: usize) -> Result<f64> {
    check(n, CLOSED_FORM_MIN_DIMENSION)?;
    let nf = n as f64;
    let ln_prefactor = 0.5 * nf * LN_2 + 0.5 * libm::log(PI * nf);
    let bracket = 1.0 + 3.0 / nf + 0.5 * nf * libm::log(nf / 2.0) + libm::log(2.0 / libm::sqrt(nf - 1.0));
    Ok(nf + 7.0 + libm::exp(ln_prefactor + libm::log(bracket)))
}

/// `n + 7 + (1/p_lower)(1 + ln(p_upper/q_lower) + 3/n)`: the last stage of
/// [`BoundChain`] with `p` and `q` replaced by their closed-form estimates. Algebraically
/// equal to [`rhs_eq1`], evaluated independently of it.
pub fn rhs_from_pq_bounds(n: usize) -> Result<f64> {
    check(n, CLOSED_FORM_MIN_DIMENSION)?;
    let nf = n as f64;
    let ln_p_lower = -0.5 * nf * LN_2 - 0.5 * libm::log(PI * nf);
    let ln_p_upper = -0.5 * nf * LN_2 + 0.5 * libm::log(2.0 / (PI * (nf - 1.0)));
    let ln_q_lower = -0.5 * nf * libm::log(nf) - 0.5 * libm::log(2.0 * PI);
    Ok(nf + 7.0 + libm::exp(-ln_p_lower) * (1.0 + ln_p_upper - ln_q_lower + 3.0 / nf))
}

/// `rhs_eq1(n) < 2^n - 1`.
pub fn threshold_check(n: usize) -> Result<bool> {
    Ok(rhs_eq1(n)? < libm::exp2(n as f64) - 1.0)
}

/// The two integer neighbours of `x0` (at least 1, since some rotation is always used).
fn integer_candidates(params: &CapParameters) -> (f64, f64) {
    let x0 = params.x0();
    (libm::floor(x0).max(1.0), libm::ceil(x0).max(1.0))
}

/// `min(f(⌊x0⌋), f(⌈x0⌉))` with exact `p` and `q`: an illumination-count bound that the
/// closed form only majorizes.
pub fn explicit_direction_count(n: usize) -> Result<f64> {
    check(n, CLOSED_FORM_MIN_DIMENSION)?;
    let params = CapParameters::new(n)?;
    let (lo, hi) = integer_candidates(&params);
    Ok(params.f(lo).min(params.f(hi)))
}

/// Successive upper bounds, each at least the previous one.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundChain {
    /// `min(f(⌊x0⌋), f(⌈x0⌉))`.
    pub integer_min: f64,
    /// `4n²p/(1-2np) + f(x0)`.
    pub slope_majorant: f64,
    /// `n + 7 + (1/p)(1 + ln(p/q) - ln(1-2np))`.
    pub log_relaxed: f64,
    /// `n + 7 + (1/p)(1 + ln(p/q) + 3/n)`.
    pub three_over_n: f64,
    /// The closed form [`rhs_eq1`].
    pub closed_form: f64,
}

impl BoundChain {
    pub fn as_array(&self) -> [f64; 5] {
        [self.integer_min, self.slope_majorant, self.log_relaxed, self.three_over_n, self.closed_form]
    }

    pub fn is_monotone(&self) -> bool {
        self.as_array().windows(2).all(|w| w[0] <= w[1])
    }
}

pub fn bound_chain(n: usize) -> Result<BoundChain> {
    check(n, CLOSED_FORM_MIN_DIMENSION)?;
    let params = CapParameters::new(n)?;
    let nf = n as f64;
    let (p, q) = (params.p, params.q);
    let log_ratio = libm::log(p / q);
    Ok(BoundChain {
        integer_min: explicit_direction_count(n)?,
        slope_majorant: params.slope_bound() + params.f(params.x0()),
        log_relaxed: nf + 7.0 + (1.0 + log_ratio - params.log_miss) / p,
        three_over_n: nf + 7.0 + (1.0 + log_ratio + 3.0 / nf) / p,
        closed_form: rhs_eq1(n)?,
    })
}

/// Everything the explicit bound needs for one dimension.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExplicitReport {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub p_lower: f64,
    pub p_upper: f64,
    pub q_lower: f64,
    pub x0: f64,
    pub f_floor: f64,
    pub f_ceil: f64,
    pub direction_count: f64,
    pub chain: BoundChain,
    pub rhs_eq1: f64,
    /// The closed form recomputed from [`PqBounds`] alone.
    pub rhs_from_pq_bounds: f64,
    /// `rhs_eq1 < 2^n`.
    pub passes_2n: bool,
    /// `rhs_eq1 < 2^n - 1`.
    pub passes_2n_minus_1: bool,
}

pub fn explicit_report(n: usize) -> Result<ExplicitReport> {
    check(n, CLOSED_FORM_MIN_DIMENSION)?;
    let params = CapParameters::new(n)?;
    let bounds = pq_bounds(n)?;
    let (lo, hi) = integer_candidates(&params);
    let chain = bound_chain(n)?;
    let two_n = libm::exp2(n as f64);
    Ok(ExplicitReport {
        n,
        p: params.p,
        q: params.q,
        p_lower: bounds.p_lower,
        p_upper: bounds.p_upper,
        q_lower: bounds.q_lower,
        x0: params.x0(),
        f_floor: params.f(lo),
        f_ceil: params.f(hi),
        direction_count: chain.integer_min,
        rhs_eq1: chain.closed_form,
        rhs_from_pq_bounds: rhs_from_pq_bounds(n)?,
        passes_2n: chain.closed_form < two_n,
        passes_2n_minus_1: chain.closed_form < two_n - 1.0,
        chain,
    })
}
