//! Formal power-series helpers.
//!
//! Two precision tiers live here.  The fractional power of a polynomial —
//! the workhorse behind every coefficient family — runs in compensated
//! double-double arithmetic (see [`crate::dd`]) because its recurrence can
//! amplify rounding noise.  The short series used for asymptotic-expansion
//! coefficients involve a handful of benign terms and run in plain f64.

use alloc::vec;
use alloc::vec::Vec;

use crate::dd::Dd;
use crate::error::Error;

/// First `n` Taylor coefficients of `poly(z)^alpha` in compensated
/// arithmetic, seeded with `w_0 = poly[0]^alpha`.
///
/// Uses the standard power recurrence for `f^alpha` (from
/// `alpha f' w = f w'`):
///
/// ```text
/// w_m = (1 / (a_0 m)) * sum_{i=1}^{min(m,p)} ((alpha+1) i - m) a_i w_{m-i}
/// ```
///
/// The head must be strictly positive so the real fractional power exists.
pub(crate) fn power_series_dd(poly: &[Dd], alpha: f64, n: usize) -> Result<Vec<Dd>, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("requested zero series terms".into()));
    }
    let head = match poly.first() {
        Some(a0) => a0.value(),
        None => return Err(Error::SeriesHeadZero),
    };
    if head == 0.0 {
        return Err(Error::SeriesHeadZero);
    }
    if head < 0.0 || !head.is_finite() {
        return Err(Error::InvalidArgument(
            "series head must be positive and finite for a real fractional power".into(),
        ));
    }

    let degree = poly.len() - 1;
    let alpha_plus_1 = Dd::new(alpha).add(Dd::ONE);
    let mut w = vec![Dd::ZERO; n];
    w[0] = Dd::new(libm::pow(head, alpha));
    for m in 1..n {
        let mut acc = Dd::ZERO;
        let top = m.min(degree);
        for i in 1..=top {
            let factor = alpha_plus_1.mul_f64(i as f64).sub(Dd::new(m as f64));
            acc = acc.add(factor.mul(poly[i]).mul(w[m - i]));
        }
        w[m] = acc.div(poly[0].mul_f64(m as f64));
    }
    Ok(w)
}

/// Plain f64 variant of the power recurrence (small truncation lengths).
pub(crate) fn power_series_f64(poly: &[f64], alpha: f64, n: usize) -> Result<Vec<f64>, Error> {
    let dd: Vec<Dd> = poly.iter().map(|&c| Dd::new(c)).collect();
    Ok(power_series_dd(&dd, alpha, n)?.into_iter().map(Dd::value).collect())
}

/// Truncated Cauchy product of two series, `n` output terms.
pub(crate) fn mul_series(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Series of `1 - exp(-z)`: term `m` is `-(-1)^m / m!` for `m >= 1`.
pub(crate) fn one_minus_exp_neg_series(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    let mut factorial = 1.0;
    let mut sign = 1.0;
    for (m, slot) in out.iter_mut().enumerate().skip(1) {
        factorial *= m as f64;
        *slot = sign / factorial;
        sign = -sign;
    }
    out
}

/// Series of `exp(-s z)`: term `m` is `(-s)^m / m!`.
pub(crate) fn exp_neg_series(s: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    let mut term = 1.0;
    out[0] = 1.0;
    for (m, slot) in out.iter_mut().enumerate().skip(1) {
        term *= -s / m as f64;
        *slot = term;
    }
    out
}

/// Evaluates `sum_{k=1}^{p} c_k w(z)^k` for a series `w` with `w(0) = 0`,
/// where `coeffs[k-1] = c_k`.  Horner form in `w`.
pub(crate) fn polynomial_of_series(coeffs: &[f64], w: &[f64], n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n];
    for &c in coeffs.iter().rev() {
        acc[0] += c;
        acc = mul_series(&acc, w, n);
    }
    acc
}
