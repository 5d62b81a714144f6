use core::fmt;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A label, slot, eigenvalue or other argument lies outside its valid range.
    Domain(&'static str),
    /// Two kets or operators disagree on particle count or single-particle dimension.
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// A ket vanished (zero norm, or total cancellation in a projection).
    DegenerateState,
    /// The conditioning proposition has (numerically) zero probability.
    ConditioningOnNull { probability: f64 },
    /// The dimension is too small for the requested construction.
    Dimension { required: usize, found: usize },
    /// An operation's precondition on its inputs does not hold.
    Contract(&'static str),
    /// A result that is mathematically impossible was observed.
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Shape { expected, found } => write!(
                f,
                "shape mismatch: expected (d={}, n={}), found (d={}, n={})",
                expected.0, expected.1, found.0, found.1
            ),
            Error::DegenerateState => write!(f, "degenerate state: the ket is zero"),
            Error::ConditioningOnNull { probability } => write!(
                f,
                "conditioning on a null proposition (probability {probability:e})"
            ),
            Error::Dimension { required, found } => write!(
                f,
                "single-particle dimension {found} is too small (need at least {required})"
            ),
            Error::Contract(what) => write!(f, "contract violation: {what}"),
            Error::Internal(what) => write!(f, "internal consistency error: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
