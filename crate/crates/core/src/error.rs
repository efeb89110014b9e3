use thiserror::Error;

/// Failures reported by the geometry, group and optimizer layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is not on the hyperboloid (Minkowski product {product})")]
    InvalidPoint { product: f64 },

    #[error("signature (2,{p1},{p2}) is not hyperbolic: need 1/p1 + 1/p2 < 1/2")]
    NonHyperbolic { p1: u32, p2: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("translation class {class} is not admissible for (2,{p1},{p2}){detail}")]
    InadmissibleClass {
        p1: u32,
        p2: u32,
        class: String,
        detail: String,
    },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("quadrature exceeded {evaluations} evaluations (error estimate {estimate:e})")]
    QuadratureBudget { evaluations: usize, estimate: f64 },

    #[error("no admissible solution for (2,{p1},{p2}) class {class}: {reason}")]
    Unsolved {
        p1: u32,
        p2: u32,
        class: String,
        reason: String,
    },

    #[error("overlapping configuration: image {word} at distance {distance:.9} < 2*rho = {required:.9}")]
    Overlap {
        word: String,
        distance: f64,
        required: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
