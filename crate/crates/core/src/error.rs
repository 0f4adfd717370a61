use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate segment: both endpoints are ({0})")]
    DegenerateSegment(String),

    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    /// Fewer than three distinct points remain; the winding field of such a
    /// curve is identically zero.
    #[error("degenerate curve: only {0} distinct points remain")]
    DegenerateCurve(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("p = {0} is outside [1, 2)")]
    POutOfRange(f64),

    #[error("q = {q} is outside [1, 2/p) for p = {p}")]
    QOutOfRange { p: f64, q: f64 },

    #[error("q = {0} must be at least 1")]
    QBelowOne(f64),

    #[error("point ({0}) lies on the curve; the winding number is undefined there")]
    OnCurve(String),

    #[error("zeta argument s = {0} is too close to (or below) the pole at 1")]
    ZetaDomain(f64),

    #[error("removal index {0} is the basepoint or out of range")]
    BadRemovalIndex(usize),

    /// A removable point promised by the existence theorem was not found.
    /// This is never expected and always indicates a bug.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("invalid family spec: {0}")]
    InvalidFamily(String),

    #[error("unknown curve family '{0}'")]
    UnknownFamily(String),

    #[error("division by zero")]
    DivisionByZero,
}
