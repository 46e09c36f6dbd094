use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("anisotropy tensor is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("frame matrix is degenerate (determinant {det:e})")]
    DegenerateFrame { det: f64 },

    #[error("tensor field has no samples")]
    EmptyField,

    #[error("exponent p = {0} must be even and at least 2")]
    OddP(u32),

    #[error("exponent p = {p} exceeds the supported maximum {max}")]
    PTooLarge { p: u32, max: u32 },

    #[error("exponent sum {0} is too large for exact factorial moments")]
    Overflow(u32),

    #[error("triangle is degenerate")]
    DegenerateTriangle,

    #[error("constraint system is numerically degenerate (|det| = {det:e})")]
    NearDegenerate { det: f64 },

    #[error("half-space system does not bound a polytope")]
    UnboundedPolytope,

    #[error("domain is empty")]
    EmptyDomain,

    #[error("invalid seed set: {0}")]
    InvalidSeeds(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("energy contribution is not finite")]
    NonFiniteEnergy,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: face is not a triangle ({vertices} vertices)")]
    NonTriangleFace { line: usize, vertices: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors that come from the numerics rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NearDegenerate { .. }
                | Error::NonFiniteEnergy
                | Error::DegenerateTriangle
                | Error::DegenerateFrame { .. }
        )
    }
}
