use alloc::string::String;
use core::fmt;

/// Errors raised by the exact-arithmetic routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The modulus is not prime, or is smaller than 5.
    InvalidPrime(u64),
    /// Working precision must be at least 1 (2 for user-facing configuration).
    InvalidPrecision(u32),
    /// A sum of two quantities whose valuations differ by a half-integer was requested;
    /// such a sum does not have unit part in `Z_p`.
    MixedParity,
    /// Division by an exact zero.
    DivisionByZero,
    /// `log_L` is not defined at 0.
    LogOfZero,
    /// A product would produce a term of degree two in the formal symbol `L`.
    EllOverflow,
    /// A derivative was requested at a point where it does not exist.
    SingularDerivative { exponent: u32, order: u32 },
    /// A matrix that should be invertible is singular.
    SingularMatrix,
    /// Canonicalization produced a cofactor outside `IZ`; indicates an internal bug.
    NotInIwahori,
    /// A value outside an operation's stated domain.
    OutOfRange(String),
    /// The function violates the poly-log degree condition.
    DegreeCondition { degree: i64 },
    /// A Galois descriptor cannot be brought to the shape the Iwahori LLC expects.
    Normalization(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPrime(p) => write!(f, "{p} is not a prime >= 5"),
            Error::InvalidPrecision(n) => write!(f, "invalid precision {n}"),
            Error::MixedParity => {
                f.write_str("cannot add quantities whose valuations differ by a half-integer")
            }
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::LogOfZero => f.write_str("log_L is undefined at 0"),
            Error::EllOverflow => f.write_str("product is quadratic in L"),
            Error::SingularDerivative { exponent, order } => write!(
                f,
                "derivative of order {order} of z^{exponent} log_L(z) is singular at its center"
            ),
            Error::SingularMatrix => f.write_str("matrix is not invertible"),
            Error::NotInIwahori => f.write_str("cofactor is not in IZ (canonicalizer bug)"),
            Error::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            Error::DegreeCondition { degree } => {
                write!(f, "polynomial part has degree {degree}, not below r/2")
            }
            Error::Normalization(msg) => write!(f, "cannot normalize descriptor: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
