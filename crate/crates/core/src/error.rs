use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix {which} is not Hermitian: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { which: &'static str, residual: f64, tolerance: f64 },

    #[error("matrix B is not positive semidefinite: eigenvalue {min_eigenvalue:e} below -{tolerance:e}")]
    NotPsd { min_eigenvalue: f64, tolerance: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("characteristic polynomial interpolation ill-conditioned: residual {residual:e}")]
    IllConditioned { residual: f64 },

    #[error(
        "no certified contour radius after {doublings} doublings (last tried {radius:e}); \
         either two asymptotic labels (a_jj, b_j) nearly coincide, which is harmless, \
         or the instance is too ill-conditioned for double precision tracking"
    )]
    RadiusOverflow { doublings: usize, radius: f64 },

    #[error("branch tracking ambiguous at {nodes} contour nodes")]
    TrackingAmbiguous { nodes: usize },

    #[error("contour quadrature at t = {t} did not converge (last change {change:e})")]
    QuadratureNotConverged { t: f64, change: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("matrices do not commute")]
    NotCommuting,

    #[error("x = {x} lies outside the open interval ({b1}, {b2})")]
    OutOfSupport { x: f64, b1: f64, b2: f64 },

    #[error("t = {0} lies on the branch cut")]
    OnBranchCut(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
