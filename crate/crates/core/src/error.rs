use alloc::string::String;

/// Errors reported by the computations in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative method did not converge.
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    /// Exhaustive enumeration was asked to visit more lattice points than allowed.
    #[error("search space of {points:.3e} lattice points exceeds the limit of {limit:.0e}")]
    SearchSpaceTooLarge { points: f64, limit: f64 },
    /// A linear program has no feasible point.
    #[error("linear program is infeasible")]
    Infeasible,
    /// A linear program is unbounded.
    #[error("linear program is unbounded")]
    Unbounded,
    /// The vertex list does not describe a cap body.
    #[error("invalid cap body: {0}")]
    InvalidBody(String),
    /// Every attempt at building an illuminating direction set left too many caps dark.
    #[error("illumination failed after {attempts} attempts (best attempt left {uncovered} caps over budget {budget})")]
    IlluminationFailed {
        attempts: usize,
        uncovered: usize,
        budget: usize,
    },
    /// No pair with non-negative inner product exists among `n + 2` points.
    #[error("no pair with non-negative inner product among {0} points")]
    PackingCounterexample(usize),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::Error::Domain(alloc::format!($($arg)*))
    };
}
pub(crate) use domain;
