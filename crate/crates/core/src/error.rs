use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: wrong dimensions, empty lists, points off the curve.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The two coefficient quadruples are proportional (every Plücker minor vanishes).
    #[error("degenerate pencil: coefficient rows are linearly dependent")]
    DegeneratePencil,

    /// Some Plücker minor vanishes, so the intersection is singular.
    #[error("singular curve: some Plücker minor d_ij is zero")]
    SingularCurve,

    #[error("prime {p} is of bad reduction for this curve")]
    BadPrime { p: u64 },

    /// A parameter lies outside the range where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded at B = {bound}: {detail}")]
    Resource { bound: BigInt, detail: String },

    /// An exact statement that must always hold was observed to fail.
    #[error("theorem violation (this is a bug): {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
