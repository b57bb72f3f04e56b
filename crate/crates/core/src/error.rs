use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one failure class
/// that callers (and the CLI exit-code table) need to distinguish.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A function evaluation returned NaN or infinity.
    #[error("non-finite function value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    /// Quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}")]
    Accuracy { estimate: f64, error: f64 },

    /// The effective reorganization energy is not positive, so the Marcus
    /// barrier form built on it is singular.
    #[error("effective reorganization energy non-positive ({lambda_eff} eV)")]
    SingularRegime { lambda_eff: f64 },

    /// The lower adiabat does not have the well structure the operation needs.
    #[error("surface topology: {0}")]
    SurfaceTopology(String),

    /// Arguments outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or inconsistent input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
