//! Regularized incomplete beta function.

use crate::error::{domain, Error, Result};

const MAX_ITER: usize = 500;
const TINY: f64 = 1e-300;

/// Natural log of the complete beta function `B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

/// Regularized incomplete beta function `I_z(a, b) = B(z; a, b) / B(a, b)`.
///
/// Evaluated with the modified Lentz continued fraction, switching to
/// `1 - I_{1-z}(b, a)` when `z > (a + 1) / (a + b + 2)` so the fraction converges fast.
pub fn regularized_incomplete_beta(z: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(domain!("incomplete beta needs a, b > 0 (got a = {a}, b = {b})"));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(domain!("incomplete beta needs z in [0, 1] (got {z})"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == 1.0 {
        return Ok(1.0);
    }
    let value = if z > (a + 1.0) / (a + b + 2.0) {
        1.0 - continued_fraction(1.0 - z, b, a)?
    } else {
        continued_fraction(z, a, b)?
    };
    Ok(value.clamp(0.0, 1.0))
}

fn continued_fraction(z: f64, a: f64, b: f64) -> Result<f64> {
    let ln_prefix = a * libm::log(z) + b * libm::log1p(-z) - ln_beta(a, b);
    let prefix = libm::exp(ln_prefix) / a;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * z / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut f = d;

    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let even = m * (b - m) * z / ((qam + m2) * (a + m2));
        d = 1.0 + even * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + even / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        f *= d * c;

        let odd = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2));
        d = 1.0 + odd * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + odd / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        f *= delta;

        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(prefix * f);
        }
    }
    Err(Error::NoConvergence("incomplete beta continued fraction"))
}
