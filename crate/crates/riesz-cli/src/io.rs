//! Output formatting: fixed-precision scientific notation and the
//! CSV/JSON emitters shared by the subcommands.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Formats a float in scientific notation with six significant digits
/// and a two-digit signed exponent (`1.377134e-04`), the fixed-width
/// style of the convergence tables.  The output is a pure function of
/// the bits of `x`, so reports are bit-identical across runs.
pub fn fmt_sci6(x: f64) -> String {
    if x == 0.0 {
        return "0.000000e+00".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.6e}", x);
    // Rust prints `1.377134e-4`; widen the exponent to two digits with an
    // explicit sign.
    let (mantissa, exponent) = s.split_once('e').expect("always present in {:e} output");
    let (sign, digits) = match exponent.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exponent),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

/// Formats a fitted order with four decimals (`3.0045`), the table style.
pub fn fmt_order(x: f64) -> String {
    format!("{x:.4}")
}

/// Writes `content` to `path` when given, else to standard output.
pub fn emit(path: Option<&Path>, content: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}
