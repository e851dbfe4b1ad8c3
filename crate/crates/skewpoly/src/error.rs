//! Error type shared by the whole crate.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The modulus `p` is not prime.
    NotPrime(u64),
    /// A defining polynomial failed its irreducibility check.
    NotIrreducible,
    /// Malformed construction input (degree/length/range violations).
    BadInput(String),
    /// Two operands belong to different towers or have incompatible shapes.
    TowerMismatch,
    /// Division by the zero polynomial or zero element.
    DivisionByZero,
    /// A square matrix turned out to be singular.
    SingularMatrix,
    /// A linear system has no solution (dependent points, bad targets).
    InconsistentSystem,
    /// An element that had to be invertible is a zero divisor. Carries a
    /// short tag naming the object (e.g. a leading coefficient in an etale
    /// algebra); callers usually resample.
    NotInvertible(&'static str),
    /// A randomized search exceeded its retry budget.
    RetryExhausted(&'static str),
    /// The sampled norm does not generate the auxiliary extension, so the
    /// would-be modulus is unusable; callers resample.
    ModulusUnsuitable,
    /// An input family of field elements is K-linearly dependent.
    DependentPoints,
    /// A degree precondition was violated (e.g. small-degree multiplication
    /// called with degree sum >= r).
    DegreeTooLarge { got: usize, bound: usize },
    /// Text parse error with 1-based position information.
    Parse { line: usize, col: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::NotIrreducible => write!(f, "polynomial is not irreducible"),
            Error::BadInput(m) => write!(f, "bad input: {m}"),
            Error::TowerMismatch => write!(f, "operands belong to different towers"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::SingularMatrix => write!(f, "singular matrix"),
            Error::InconsistentSystem => write!(f, "inconsistent linear system"),
            Error::NotInvertible(what) => write!(f, "{what} is not invertible"),
            Error::RetryExhausted(what) => write!(f, "retry budget exhausted: {what}"),
            Error::ModulusUnsuitable => write!(f, "sampled norm does not generate the extension"),
            Error::DependentPoints => write!(f, "evaluation points are linearly dependent"),
            Error::DegreeTooLarge { got, bound } => {
                write!(f, "degree {got} exceeds bound {bound}")
            }
            Error::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
