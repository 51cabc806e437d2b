//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Upper limit on the number of subintervals kept by [`integrate`].
pub const MAX_SEGMENTS: usize = 10_000;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of `|K15 - G7|` over the final partition.
    pub error_estimate: f64,
    pub segments: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (k, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[lo, hi]` until the summed Kronrod–Gauss difference is below `abs_tol`.
///
/// The interval with the largest error estimate is bisected at each step. Endpoint
/// singularities of square-root type are handled by the refinement; the integrand is
/// never evaluated at the endpoints themselves.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, abs_tol: f64) -> Result<Integral> {
    if !(abs_tol > 0.0) {
        return Err(domain!("quadrature tolerance must be positive (got {abs_tol})"));
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(domain!("quadrature bounds must be finite"));
    }
    if lo == hi {
        return Ok(Integral { value: 0.0, error_estimate: 0.0, segments: 0 });
    }
    let (lo, hi, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };

    let mut segments: Vec<Segment> = Vec::with_capacity(64);
    segments.push(kronrod(&f, lo, hi));
    loop {
        let total_error: f64 = segments.iter().map(|s| s.error).sum();
        if total_error <= abs_tol {
            let value: f64 = segments.iter().map(|s| s.value).sum();
            return Ok(Integral {
                value: sign * value,
                error_estimate: total_error,
                segments: segments.len(),
            });
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::NoConvergence("adaptive quadrature"));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, s)| if s.error > acc.1 { (i, s.error) } else { acc });
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            // Interval cannot be split further in binary64.
            return Err(Error::NoConvergence("adaptive quadrature"));
        }
        segments.push(kronrod(&f, seg.lo, mid));
        segments.push(kronrod(&f, mid, seg.hi));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x + 2.0 * x + 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((r.value - 14.0).abs() < 1e-13);
        assert_eq!(r.segments, 1);
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        // int_0^1 sqrt(x) dx = 2/3, and int_0^1 sqrt(1-x^2) dx = pi/4.
        let r = integrate(libm::sqrt, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-11);
        let r = integrate(|x| libm::sqrt(1.0 - x * x), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let r = integrate(libm::sin, PI, 0.0, 1e-12).unwrap();
        assert!((r.value + 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, 1e-10).unwrap().value, 0.0);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert!(integrate(|x| x, 0.0, 1.0, 0.0).is_err());
    }
}
