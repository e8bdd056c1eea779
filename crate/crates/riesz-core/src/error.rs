//! Crate-wide error type.
//!
//! Errors are partitioned into two kinds: *invalid requests* (a caller
//! violated a documented precondition) and *numerical failures* (a
//! computation that is legitimate to attempt did not succeed).  Binary
//! front-ends map the former to exit code 2 and the latter to exit code 3,
//! so the distinction is part of the public contract.

use alloc::string::String;
use core::fmt;

/// All failure modes of the toolkit.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Derivative order outside the admissible open interval (1, 2).
    OrderOutOfRange {
        /// The rejected order.
        alpha: f64,
    },
    /// A caller-supplied argument violates a documented precondition.
    InvalidArgument(String),
    /// The requested combination (family, approximation order, ...) is not
    /// implemented.
    Unsupported(String),
    /// The leading series coefficient vanishes; a fractional power of the
    /// series is undefined.
    SeriesHeadZero,
    /// The requested truncation length cannot support the requested output.
    TruncationTooShort {
        /// Minimum length the request needs.
        needed: usize,
        /// Length actually supplied.
        got: usize,
    },
    /// An iterative numerical procedure failed to drive its residual below
    /// tolerance (generator construction, eigensolver sweeps, ...).
    IllConditioned {
        /// The residual that failed to meet the tolerance.
        residual: f64,
    },
    /// A linear system was numerically singular.
    SingularSystem,
    /// A dense operator would exceed the configured unknown-count cap.
    CapExceeded {
        /// Unknowns the request implies.
        unknowns: usize,
        /// The configured cap.
        cap: usize,
    },
    /// Adaptive quadrature could not reach the requested tolerance.
    QuadratureFailure {
        /// The tolerance that was requested.
        requested: f64,
    },
    /// Two fields or grids that must coincide do not.
    GridMismatch,
}

impl Error {
    /// True when the error reflects an invalid request rather than a
    /// numerical failure.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::OrderOutOfRange { .. }
                | Error::InvalidArgument(_)
                | Error::Unsupported(_)
                | Error::SeriesHeadZero
                | Error::TruncationTooShort { .. }
                | Error::GridMismatch
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OrderOutOfRange { alpha } => {
                write!(f, "derivative order {alpha} lies outside the admissible interval (1, 2)")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported request: {msg}"),
            Error::SeriesHeadZero => write!(f, "leading series coefficient is zero"),
            Error::TruncationTooShort { needed, got } => {
                write!(f, "truncation too short: need at least {needed} terms, got {got}")
            }
            Error::IllConditioned { residual } => {
                write!(f, "numerical procedure failed to converge (residual {residual:e})")
            }
            Error::SingularSystem => write!(f, "linear system is numerically singular"),
            Error::CapExceeded { unknowns, cap } => {
                write!(f, "{unknowns} unknowns exceed the dense-matrix cap of {cap}")
            }
            Error::QuadratureFailure { requested } => {
                write!(f, "adaptive quadrature failed to reach tolerance {requested:e}")
            }
            Error::GridMismatch => write!(f, "fields are defined on different grids"),
        }
    }
}

impl core::error::Error for Error {}
