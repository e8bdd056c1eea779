//! High-order fractional-compact approximations of the Riesz derivative
//! and Crank-Nicolson solvers for Riesz spatial fractional
//! reaction-dispersion equations in one and two dimensions.
//!
//! The crate is organized bottom-up:
//!
//! - [`coefficients`]: generating functions of the approximating sums,
//!   their Taylor coefficients (three independent evaluation routes),
//!   and the expansion coefficients that drive the compact corrections.
//! - [`operators`]: grids, truncated approximating sums, the
//!   second-, third-, and fourth-order compact formulas, and the dense
//!   matrix forms (1D and Kronecker-assembled 2D).
//! - [`analytic`]: closed-form Riesz derivatives of polynomial profiles,
//!   an independent quadrature evaluation, and the bundled manufactured
//!   problems.
//! - [`solver1d`] / [`solver2d`]: Crank-Nicolson schemes built from the
//!   compact operators, with energy diagnostics.
//! - [`linalg`]: the small dense linear-algebra kernel backing the
//!   solvers (LU, Thomas, Jacobi eigenvalues, Kronecker products).
//!
//! The library is `no_std` (with `alloc`); all floating-point special
//! functions come from `libm`, so results are reproducible across
//! platforms.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod analytic;
pub mod coefficients;
mod dd;
pub mod error;
pub mod linalg;
pub mod operators;
mod series;
pub mod solver1d;
pub mod solver2d;

pub use coefficients::FractionalOrder;
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Validation guard for scale parameters: strictly positive and finite,
/// rejecting NaN.
pub(crate) fn positive_finite(x: f64) -> bool {
    x.is_finite() && x > 0.0
}
