use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input function or parameter produced a value outside its domain
    /// (non-finite samples, negative radii, out-of-range widths, ...).
    #[error("input outside domain: {0}")]
    InputDomain(String),

    /// A quadrature could not reach the requested accuracy.
    #[error("quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tolerance:e}")]
    Tolerance { estimate: f64, tolerance: f64 },

    #[error("mode index {0} is out of range (expected 1..=4)")]
    ModeIndex(usize),

    /// The evaluation point lies on the source ring, where the retarded
    /// kernels are singular.
    #[error("evaluation point ({x}, {y}, {z}) lies on the source ring")]
    Singular { x: f64, y: f64, z: f64 },

    #[error("radius {0} must exceed the source radius 1")]
    InsideSource(f64),

    #[error("Wallis J is only defined for odd exponents, got {0}")]
    EvenExponent(u32),

    /// The analytic profile has no value on the symmetry axis.
    #[error("profile undefined on the axis r = 0")]
    UndefinedOnAxis,

    #[error("degenerate point: {0}")]
    Degenerate(String),

    #[error("inconclusive: {degenerate} of {total} samples were degenerate")]
    Inconclusive { degenerate: usize, total: usize },

    #[error("decay fit needs at least 3 records at distinct radii, got {0}")]
    TooFewRecords(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
