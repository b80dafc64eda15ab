use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid kernel spec: {0}")]
    InvalidSpec(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("index overflow: requested {requested} terms, list holds {available}")]
    IndexOverflow { requested: usize, available: usize },

    #[error("point {z} lies within {distance:.3e} of pole {pole}")]
    PoleProximity {
        z: Complex64,
        pole: Complex64,
        distance: f64,
    },

    #[error("tail bound {bound:.3e} cannot reach target {target:.3e} within {max_terms} terms")]
    TailNotConvergent {
        bound: f64,
        target: f64,
        max_terms: usize,
    },

    #[error("exponent {exponent} does not exceed the convergence index {index}")]
    ExponentBelowConvergenceIndex { exponent: u32, index: f64 },

    #[error("constant term |{value:.3e}| does not exceed its error bound {bound:.3e}")]
    ZeroConstantTerm { value: f64, bound: f64 },

    #[error("derivative order {requested} exceeds the configured ceiling {ceiling}")]
    DerivativeOrder { requested: u32, ceiling: u32 },

    #[error("quadrature not converged after {points} points: {detail}")]
    QuadratureNotConverged { points: usize, detail: String },

    #[error("zero refinement diverged: {0}")]
    RefinementDiverged(String),

    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { got: usize, need: usize },

    #[error("insufficient radius grid: {0}")]
    InsufficientGrid(String),

    #[error("M_1 = {value:.3e} does not exceed its error bound {bound:.3e}")]
    M1Zero { value: f64, bound: f64 },

    #[error("a zero lies at the origin")]
    ZeroAtOrigin,

    #[error("evaluation point {z} coincides with a zero or pole")]
    Collision { z: Complex64 },

    #[error("{0}")]
    SampleCollision(String),
}

impl Error {
    /// Numerical non-convergence, as opposed to a rejected input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::TailNotConvergent { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::RefinementDiverged(_)
                | Error::ZeroConstantTerm { .. }
                | Error::M1Zero { .. }
                | Error::SampleCollision(_)
                | Error::PoleProximity { .. }
                | Error::Collision { .. }
        )
    }
}
