use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point ({x}, {y}) is not on the unit circle (|p| - 1 = {deviation:e})")]
    NotOnCircle { x: f64, y: f64, deviation: f64 },

    #[error("apex ({x}, {y}) is not strictly inside the unit circle")]
    ApexOutside { x: f64, y: f64 },

    #[error("degenerate sector: sweep {sweep:e} rad")]
    DegenerateSector { sweep: f64 },

    #[error("quadrature did not converge: achieved error estimate {achieved:e}, target {target:e}")]
    Quadrature { achieved: f64, target: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}: expected {expected}")]
    Parse { line: usize, expected: String },

    #[error("Bezout number {bezout} exceeds the path budget {budget}; raise the budget to track every path")]
    BudgetExceeded { bezout: u128, budget: u128 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("singular Jacobian after {iterations} iterations")]
    SingularJacobian { iterations: usize, best: Vec<f64> },

    #[error("Newton did not converge in {iterations} iterations (best residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
