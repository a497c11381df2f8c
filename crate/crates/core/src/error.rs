use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural mismatch: {0}")]
    Structural(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid curve germ: {0}")]
    InvalidCurve(String),
    #[error("restriction space did not stabilize below quasi-degree {cap}")]
    NonStabilization { cap: u32 },
    #[error("vector field is not tangent to the germ: {0}")]
    InvalidSymmetry(String),
    #[error("normal-form constraint violated: {0}")]
    Constraint(String),
    #[error("degenerate tangent frame: {0}")]
    DegenerateFrame(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
