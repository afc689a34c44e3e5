use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Jacobi parameters alpha={alpha}, beta={beta}: both must exceed -1")]
    InvalidParams { alpha: f64, beta: f64 },

    #[error("argument t={0} lies outside [-1, 1]")]
    Domain(f64),

    #[error("quadrature rule needs at least one node, got {0}")]
    InvalidNodeCount(usize),

    #[error("tridiagonal eigensolve did not converge for eigenvalue {index} of {size}")]
    EigenNoConvergence { index: usize, size: usize },

    #[error("exponent {name}={value} outside its valid range {range}")]
    InvalidExponent {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("weight sequence {id} is not positive at index {index} (value {value})")]
    NonPositiveWeight { id: String, index: usize, value: f64 },

    #[error("coefficient {index} is negative ({value}); the synthesis bounds require non-negative coefficients")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("coefficient sequences must be non-empty with finite entries")]
    InvalidCoefficients,

    #[error("function {id} is not in L_{p}(w) for alpha={alpha}, beta={beta}")]
    NotIntegrable {
        id: String,
        p: f64,
        alpha: f64,
        beta: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("grid maximum {grid} exceeds endpoint value {endpoint} at N={n}")]
    Inconsistency { n: usize, grid: f64, endpoint: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}
