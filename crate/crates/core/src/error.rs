use thiserror::Error;

/// Errors surfaced by state, channel and optimization constructors.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("density matrix is not Hermitian: |m01 - conj(m10)| = {0:.3e}")]
    NotHermitian(f64),
    #[error("density matrix trace deviates from 1 by {0:.3e}")]
    BadTrace(f64),
    #[error("density matrix is not positive semidefinite (det = {0:.3e})")]
    NotPositive(f64),
    #[error("state is not normalized: |amp|^2 = {0}")]
    NotNormalized(f64),
    #[error("ancilla vectors violate the channel constraints: {0}")]
    InvalidAncilla(String),
    #[error("Gram parameters infeasible: |z|^2 = {z_sq:.6e} exceeds x*y = {xy:.6e}")]
    InfeasibleGram { z_sq: f64, xy: f64 },
    #[error("guess polar angle {0} lies outside the upper hemisphere [0, pi/2]")]
    GuessOutOfRange(f64),
    #[error("target map pieces do not partition [0, pi]: {0}")]
    InvalidMap(String),
    #[error("quadrature spec requires at least 4 nodes per axis (got {0})")]
    QuadratureTooCoarse(usize),
    #[error("fidelity functional fit residual {0:.3e} exceeds tolerance; map is outside the representable family")]
    FunctionalResidual(f64),
    #[error("delta = {0} outside the valid range {1}")]
    ParameterOutOfRange(f64, &'static str),
    #[error("no sign change of f - g on [{lo}, {hi}]; curves do not cross")]
    NoCrossing { lo: f64, hi: f64 },
    #[error("chi is undefined: optimum is not at x = y = 1 (x = {x}, y = {y})")]
    ChiUndefined { x: f64, y: f64 },
    #[error("scheme {0} is not available in the {1} family")]
    SchemeUnavailable(&'static str, &'static str),
    #[error("sweep range is empty or inverted: [{lo}, {hi}] with {n} points")]
    EmptySweep { lo: f64, hi: f64, n: usize },
    #[error("missing parameter {0} for the {1} family")]
    MissingParameter(&'static str, &'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
