use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by parameter validation and the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violated its domain, e.g. `sigma <= 0`.
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// Evaluation time outside the admissible interval.
    TimeOutOfRange { t: f64, lower: f64, upper: f64 },
    /// Two objects that must share a grid do not.
    GridMismatch { expected: usize, found: usize },
    /// A denominator vanished in floating point.
    Degenerate(&'static str),
    /// A linear system could not be solved (zero pivot).
    Singular,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                constraint,
            } => write!(
                f,
                "invalid parameter {name} = {value}: must satisfy {constraint}"
            ),
            Error::TimeOutOfRange { t, lower, upper } => {
                write!(f, "time {t} outside [{lower}, {upper}]")
            }
            Error::GridMismatch { expected, found } => {
                write!(f, "grid mismatch: expected {expected} steps, found {found}")
            }
            Error::Degenerate(what) => write!(f, "degenerate computation: {what}"),
            Error::Singular => write!(f, "singular linear system"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn ensure(
    cond: bool,
    name: &'static str,
    value: f64,
    constraint: &'static str,
) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint,
        })
    }
}
