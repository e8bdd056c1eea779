//! Closed-form reference quantities: Riesz derivatives of polynomial
//! profiles via the one-sided derivative of shifted monomials, an
//! independent quadrature evaluation of the defining integral, and the
//! exact solutions / manufactured sources of the bundled example
//! problems.
//!
//! The left Riemann-Liouville derivative of x^nu is
//! Gamma(nu+1)/Gamma(nu+1-alpha) x^(nu-alpha), and mirrored powers of
//! (L - x) feed the right derivative the same way, so any polynomial
//! vanishing to second order at both endpoints has a closed-form Riesz
//! derivative.  The manufactured sources are rebuilt from the exact
//! solutions through the PDE, never transcribed, so the
//! solution/source pair satisfies the equation to round-off by
//! construction.

use alloc::vec::Vec;

use crate::coefficients::FractionalOrder;
use crate::error::Error;

/// Integer power by repeated multiplication (exponents here are small).
fn powu(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut v = 1.0;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// A polynomial on [0, L] vanishing to second order at both endpoints,
/// stored as two complete expansions of the same function: coefficients
/// of powers of x (driving the left derivative) and coefficients of
/// powers of (L - x) (driving the right derivative).
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    length: f64,
    left: Vec<(f64, u32)>,
    right: Vec<(f64, u32)>,
}

impl PolySpec {
    /// Wraps explicit expansions.  Every power must be at least 2 (so the
    /// function and its first derivative vanish at the endpoints and the
    /// gamma arguments stay off the poles), and the two expansions must
    /// describe the same function.
    pub fn new(
        length: f64,
        left: Vec<(f64, u32)>,
        right: Vec<(f64, u32)>,
    ) -> Result<Self, Error> {
        if !crate::positive_finite(length) {
            return Err(Error::InvalidArgument("domain length must be positive".into()));
        }
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidArgument("expansions must be non-empty".into()));
        }
        for &(c, nu) in left.iter().chain(right.iter()) {
            if !c.is_finite() {
                return Err(Error::InvalidArgument("coefficients must be finite".into()));
            }
            if nu < 2 {
                return Err(Error::InvalidArgument(
                    "powers below 2 break the endpoint conditions".into(),
                ));
            }
        }
        let spec = PolySpec { length, left, right };
        // The two expansions are redundant; verify they agree.
        let mut scale = 1.0f64;
        for &(c, nu) in spec.left.iter().chain(spec.right.iter()) {
            scale = f64::max(scale, libm::fabs(c) * powu(f64::max(1.0, length), nu));
        }
        for frac in [0.21f64, 0.5, 0.83] {
            let x = frac * length;
            let l = spec.eval(x);
            let r = spec.eval_right(x);
            if libm::fabs(l - r) > 1e-10 * scale {
                return Err(Error::InvalidArgument(
                    "left and right expansions disagree; they must describe one function".into(),
                ));
            }
        }
        Ok(spec)
    }

    /// The symmetric profile x^k (L - x)^k, expanded on both sides.
    pub fn symmetric_product(length: f64, k: u32) -> Result<Self, Error> {
        if k < 2 {
            return Err(Error::InvalidArgument(
                "symmetric profiles need k >= 2 for the endpoint conditions".into(),
            ));
        }
        let terms: Vec<(f64, u32)> = (0..=k)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                (sign * binomial(k, m) * powu(length, k - m), k + m)
            })
            .collect();
        PolySpec::new(length, terms.clone(), terms)
    }

    /// Domain length L.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Function value (left expansion).
    pub fn eval(&self, x: f64) -> f64 {
        self.left.iter().map(|&(c, nu)| c * powu(x, nu)).sum()
    }

    fn eval_right(&self, x: f64) -> f64 {
        self.right.iter().map(|&(c, nu)| c * powu(self.length - x, nu)).sum()
    }

    /// First derivative.
    pub fn deriv1(&self, x: f64) -> f64 {
        self.left
            .iter()
            .map(|&(c, nu)| c * nu as f64 * powu(x, nu - 1))
            .sum()
    }

    /// Second derivative.
    pub fn deriv2(&self, x: f64) -> f64 {
        self.left
            .iter()
            .map(|&(c, nu)| c * (nu * (nu - 1)) as f64 * powu(x, nu - 2))
            .sum()
    }
}

/// The quartic profile x^2 (1 - x)^2 on [0, 1].
pub fn quartic_profile() -> PolySpec {
    PolySpec::symmetric_product(1.0, 2).expect("valid by construction")
}

/// The sextic profile x^6 (1 - x)^6 on [0, 1] used by the example
/// problems.
pub fn sextic_profile() -> PolySpec {
    PolySpec::symmetric_product(1.0, 6).expect("valid by construction")
}

/// Closed-form Riesz derivative of a [`PolySpec`] at `x`:
///
/// ```text
/// prefactor * ( sum_left  c Gamma(nu+1)/Gamma(nu+1-alpha) x^(nu-alpha)
///             + sum_right c Gamma(nu+1)/Gamma(nu+1-alpha) (L-x)^(nu-alpha) )
/// ```
pub fn riesz_poly(spec: &PolySpec, order: &FractionalOrder, x: f64) -> Result<f64, Error> {
    if !(0.0..=spec.length).contains(&x) {
        return Err(Error::InvalidArgument(
            "evaluation point must lie inside the domain".into(),
        ));
    }
    let alpha = order.alpha();
    let mut acc = 0.0;
    for &(c, nu) in &spec.left {
        acc += c * monomial_derivative(nu, alpha, x)?;
    }
    for &(c, nu) in &spec.right {
        acc += c * monomial_derivative(nu, alpha, spec.length - x)?;
    }
    Ok(order.prefactor() * acc)
}

/// One-sided derivative of the monomial y^nu at distance y from its
/// endpoint.
fn monomial_derivative(nu: u32, alpha: f64, y: f64) -> Result<f64, Error> {
    let arg = nu as f64 + 1.0 - alpha;
    // Unreachable for validated specs (nu >= 2, alpha < 2), but the gamma
    // pole is fatal enough to guard explicitly.
    if arg <= 0.0 {
        return Err(Error::Unsupported(
            "gamma pole: power too small for this derivative order".into(),
        ));
    }
    let ratio = libm::tgamma(nu as f64 + 1.0) / libm::tgamma(arg);
    Ok(ratio * libm::pow(y, nu as f64 - alpha))
}

/// Riesz derivative of a [`PolySpec`] evaluated through the defining
/// integral instead of the closed form: each one-sided derivative is
/// reduced to a proper integral of the second derivative,
///
/// ```text
/// D_left u(x) = (1/Gamma(2-alpha)) [ (1-alpha) x^(-alpha) u(0)
///             + x^(1-alpha) u'(0) + int_0^x t^(1-alpha) u''(x-t) dt ]
/// ```
///
/// and the weakly singular integral is regularized by the substitution
/// t = v^(1/(2-alpha)), which makes the integrand bounded; adaptive
/// Simpson quadrature then evaluates it to the requested tolerance.
/// This shares no code with [`riesz_poly`], serving as its oracle.
pub fn riesz_quadrature(
    spec: &PolySpec,
    order: &FractionalOrder,
    x: f64,
    tol: f64,
) -> Result<f64, Error> {
    if !(0.0..=spec.length).contains(&x) {
        return Err(Error::InvalidArgument(
            "evaluation point must lie inside the domain".into(),
        ));
    }
    if !crate::positive_finite(tol) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let left = one_sided_quadrature(|y| spec.deriv2(y), order, x, tol)?;
    let length = spec.length;
    let right = one_sided_quadrature(|y| spec.deriv2(length - y), order, length - x, tol)?;
    Ok(order.prefactor() * (left + right))
}

/// Left-sided derivative at distance `x` from the endpoint for a function
/// with u(0) = u'(0) = 0 given by its second derivative.
fn one_sided_quadrature(
    d2: impl Fn(f64) -> f64,
    order: &FractionalOrder,
    x: f64,
    tol: f64,
) -> Result<f64, Error> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let alpha = order.alpha();
    let q = 2.0 - alpha;
    // int_0^x t^(1-alpha) u''(x-t) dt = (1/q) int_0^(x^q) u''(x - v^(1/q)) dv
    let integrand = |v: f64| d2(x - libm::pow(v, 1.0 / q));
    let upper = libm::pow(x, q);
    let integral = adaptive_simpson(&integrand, 0.0, upper, tol)? / q;
    Ok(integral / libm::tgamma(q))
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, Error> {
    let mid = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(mid);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, Error> {
    let mid = 0.5 * (a + b);
    let lm = 0.5 * (a + mid);
    let rm = 0.5 * (mid + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if libm::fabs(delta) <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure { requested: tol });
    }
    let half = 0.5 * tol;
    Ok(simpson_step(f, a, mid, fa, flm, fm, left, half, depth - 1)?
        + simpson_step(f, mid, b, fm, frm, fb, right, half, depth - 1)?)
}

/// Identifies one of the two bundled manufactured problems; the tags
/// mirror the CLI grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleId {
    /// 1D reaction-dispersion problem with exact solution
    /// u(x, t) = e^t x^6 (1-x)^6 and dispersion coefficient e^{-12}.
    Ex2,
    /// 2D problem with exact solution
    /// u(x, y, t) = e^{2t} x^6 (1-x)^6 y^6 (1-y)^6 and coefficients
    /// pi^{-8} in both directions.
    Ex3,
}

/// Dispersion coefficient of the 1D example, stored as the exact
/// expression e^{-12}.
pub fn example2_diffusivity() -> f64 {
    libm::exp(-12.0)
}

/// Dispersion coefficient of the 2D example (both directions), stored as
/// the exact expression pi^{-8}.
pub fn example3_diffusivity() -> f64 {
    libm::pow(core::f64::consts::PI, -8.0)
}

fn check_point(example: ExampleId, point: &[f64]) -> Result<(), Error> {
    let expected = match example {
        ExampleId::Ex2 => 1,
        ExampleId::Ex3 => 2,
    };
    if point.len() != expected {
        return Err(Error::InvalidArgument(alloc::format!(
            "example expects {expected} coordinate(s), got {}",
            point.len()
        )));
    }
    if point.iter().any(|c| !(0.0..=1.0).contains(c)) {
        return Err(Error::InvalidArgument("point must lie in the unit domain".into()));
    }
    Ok(())
}

/// Exact solution of a bundled example at `point` and time `t`.
pub fn example_exact(example: ExampleId, point: &[f64], t: f64) -> Result<f64, Error> {
    check_point(example, point)?;
    let profile = sextic_profile();
    match example {
        ExampleId::Ex2 => Ok(libm::exp(t) * profile.eval(point[0])),
        ExampleId::Ex3 => {
            Ok(libm::exp(2.0 * t) * profile.eval(point[0]) * profile.eval(point[1]))
        }
    }
}

/// Manufactured source of a bundled example, rebuilt from the exact
/// solution through the PDE `u_t = K * Riesz u - u + f`:
///
/// ```text
/// 1D: f = e^t (2 P(x) - K_alpha RzP(x))
/// 2D: f = e^{2t} (3 P(x) P(y) - K (P(y) RzP(x) + P(x) RzP(y)))
/// ```
///
/// where P is the sextic profile and RzP its closed-form Riesz
/// derivative at the given order(s).
pub fn example_sources(
    example: ExampleId,
    orders: &[FractionalOrder],
    point: &[f64],
    t: f64,
) -> Result<f64, Error> {
    check_point(example, point)?;
    let expected_orders = match example {
        ExampleId::Ex2 => 1,
        ExampleId::Ex3 => 2,
    };
    if orders.len() != expected_orders {
        return Err(Error::InvalidArgument(alloc::format!(
            "example expects {expected_orders} derivative order(s), got {}",
            orders.len()
        )));
    }
    let profile = sextic_profile();
    match example {
        ExampleId::Ex2 => {
            let x = point[0];
            let k = example2_diffusivity();
            let rz = riesz_poly(&profile, &orders[0], x)?;
            Ok(libm::exp(t) * (2.0 * profile.eval(x) - k * rz))
        }
        ExampleId::Ex3 => {
            let (x, y) = (point[0], point[1]);
            let k = example3_diffusivity();
            let px = profile.eval(x);
            let py = profile.eval(y);
            let rz_x = riesz_poly(&profile, &orders[0], x)?;
            let rz_y = riesz_poly(&profile, &orders[1], y)?;
            Ok(libm::exp(2.0 * t) * (3.0 * px * py - k * (py * rz_x + px * rz_y)))
        }
    }
}
