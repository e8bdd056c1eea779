//! Command-line companion to `riesz-core`: convergence-table runners,
//! golden reference values for the bundled example problems, and the
//! text formatting shared by the `riesz` binary and the test suites.

#![deny(unsafe_code)]
#![warn(missing_docs)]

pub mod harness;
pub mod io;
pub mod reference;
