//! Certified upper bounds on the illumination number of cap bodies.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`special`] and [`quadrature`]: the incomplete beta function and an adaptive
//!   Gauss–Kronrod integrator.
//! * [`sphere`]: measures of spherical caps, of pairwise intersections of equal caps,
//!   and of unions of caps centred at simplex or cross-polytope vertices.
//! * [`lp`] and [`ilp`]: a dense simplex solver and the two-constraint integer program
//!   that bounds the expected number of unilluminated caps.
//! * [`search`]: the `(s, l)` sweep over rotated simplices / cross-polytopes.
//! * [`explicit`]: the closed-form bound for large dimensions.
//! * [`oracle`]: Monte Carlo estimators, random rotations, a concrete cap-body model
//!   and an illumination verifier used to cross-check everything above.
#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod explicit;
pub mod ilp;
pub mod lp;
pub mod oracle;
pub mod quadrature;
pub mod search;
pub mod special;
pub mod sphere;
pub(crate) mod vector;

pub use error::{Error, Result};
