use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("point ({0}, {1}) lies outside the mesh bounds")]
    OutOfDomain(f64, f64),

    #[error("basis index {0} out of range for order {1}")]
    BasisIndex(usize, usize),

    #[error("exact solution has zero norm; relative error undefined")]
    UndefinedNorm,

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    #[error("charge density not neutral: mean residual {0:e}")]
    Compatibility(f64),

    #[error("operator assembly failed: singular {0} matrix")]
    SingularMatrix(&'static str),

    #[error("unsupported order {0}: {1}")]
    UnsupportedOrder(usize, &'static str),

    #[error("cell mean {0:e} is negative beyond tolerance; positivity violated upstream")]
    NegativeMean(f64),

    #[error("non-finite value encountered in cell ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("fractional shift {0} outside [0, 1]")]
    FracOutOfRange(f64),

    #[error("scenario '{0}' has no exact solution")]
    NoExactSolution(String),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
