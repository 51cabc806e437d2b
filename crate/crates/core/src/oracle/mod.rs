//! Independent numerical checks: Monte Carlo measure estimates, Haar-random rotations,
//! a concrete cap-body model and an illumination verifier.

mod body;
mod measures;
mod rng;
mod sampling;

pub use body::{
    check_packing_lemma, illuminate, illuminate_with, positive_hull_spans, verify_illumination, CapBody,
    DirectionSet, IlluminationVerdict, Provenance, DEFAULT_RETRIES, SPAN_MARGIN,
};
pub use measures::{mc_cap_measure, mc_intersection_measure, mc_miss_frequency, mc_union_measure};
pub use rng::Rng;
pub use sampling::{mc_estimate_measure, random_rotation, sample_sphere, McEstimate, Rotation, MIN_MC_SAMPLES};
