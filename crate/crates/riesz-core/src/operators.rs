//! Discrete fractional operators on a bounded interval: the truncated
//! left/right one-sided sums, the compact tridiagonal correction
//! operators, dense matrix assembly (including the 2D Kronecker forms),
//! and the pointwise third-/fourth-order Riesz-derivative evaluation
//! formulas together with the generalized shifted evaluator.
//!
//! Conventions: a grid splits [a, b] into M cells of width h = (b - a)/M;
//! fields carry M + 1 node values; the fractional sums assume homogeneous
//! boundary values (zero extension beyond the interval), and all sums use
//! the index limits floor((x - a)/h) - s on the left and the mirrored
//! limit on the right, truncating any term whose node leaves [a, b].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::coefficients::{
    coefficient_table, expansion_coefficient_2, expansion_coefficient_3, CoefficientTable,
    Family, FractionalOrder, Method,
};
use crate::error::Error;
use crate::linalg::{kron, solve_tridiagonal, DenseMatrix, LuDecomposition};

/// Largest dense system (in unknowns) the assembly routines will build;
/// requests beyond it refuse rather than thrash.
pub const DENSE_CAP: usize = 4096;

/// Uniform grid on [a, b] with M cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    m: usize,
    h: f64,
}

impl Grid1D {
    /// Validates `b > a` and `m >= 4` and fixes `h = (b - a)/m`.
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self, Error> {
        if !a.is_finite() || !b.is_finite() || b <= a {
            return Err(Error::InvalidArgument("grid requires finite b > a".into()));
        }
        if m < 4 {
            return Err(Error::InvalidArgument(format!(
                "grid requires at least 4 cells, got {m}"
            )));
        }
        Ok(Grid1D { a, b, m, h: (b - a) / m as f64 })
    }

    /// Left endpoint.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Right endpoint.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of cells; the grid has `m + 1` nodes.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Cell width `(b - a)/m`.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node `x_i = a + i h` for `i` in `0..=m`.
    pub fn node(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h
    }
}

/// Node values on a [`Grid1D`].  The `homogeneous` flag records whether
/// both boundary values are exactly zero, which the fractional sums
/// require (they zero-extend the field beyond the interval).
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    grid: Grid1D,
    values: Vec<f64>,
    homogeneous: bool,
}

impl Field1D {
    /// Wraps `values` (length must be `m + 1`).
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self, Error> {
        if values.len() != grid.m() + 1 {
            return Err(Error::GridMismatch);
        }
        let homogeneous = values[0] == 0.0 && values[grid.m()] == 0.0;
        Ok(Field1D { grid, values, homogeneous })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..=grid.m()).map(|i| f(grid.node(i))).collect();
        Field1D::new(grid, values).expect("length matches by construction")
    }

    /// The underlying grid.
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// All node values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at node `i`.
    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Whether both boundary values are exactly zero.
    pub fn homogeneous(&self) -> bool {
        self.homogeneous
    }
}

/// Selects which coefficient family drives the truncated sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SumFamily {
    /// Third-order family with shift -1.
    TypeI,
    /// Third-order family with shift +1.
    TypeII,
    /// Generalized family; the shift must sit on the grid (integer `s`).
    Generalized {
        /// Approximation order of the family.
        p: u32,
        /// Shift parameter (must round to an integer for grid sums).
        s: f64,
    },
}

fn family_tag_and_shift(family: SumFamily) -> Result<(Family, i64), Error> {
    match family {
        SumFamily::TypeI => Ok((Family::Kappa2, -1)),
        SumFamily::TypeII => Ok((Family::Kappa2Tilde, 1)),
        SumFamily::Generalized { p, s } => {
            let rounded = libm::round(s);
            if libm::fabs(s - rounded) > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "grid-aligned sums require an integer shift, got s = {s}"
                )));
            }
            Ok((Family::Mu { p, s: rounded }, rounded as i64))
        }
    }
}

/// Applies the truncated double-sided fractional sum to a
/// homogeneous-boundary field, returning
/// `prefactor * (left-sum + right-sum) / h^alpha` at every interior node
/// (boundary slots are zero).  For the type-I family this equals the
/// matrix product `(1/h^alpha) * D * u` on the interior.
pub fn riesz_apply(
    u: &Field1D,
    order: &FractionalOrder,
    family: SumFamily,
) -> Result<Field1D, Error> {
    if !u.homogeneous() {
        return Err(Error::InvalidArgument(
            "fractional sums zero-extend the field; boundary values must be zero".into(),
        ));
    }
    let (tag, shift) = family_tag_and_shift(family)?;
    let m = u.grid().m();
    let needed = (m as i64 - shift).max(1) as usize;
    let table = coefficient_table(tag, order, needed, Method::Recursion)?;
    let sums = truncated_sums(u, &table, shift)?;
    let scale = order.prefactor() / libm::pow(u.grid().h(), order.alpha());
    let mut values = vec![0.0; m + 1];
    for j in 1..m {
        values[j] = scale * sums[j];
    }
    Field1D::new(*u.grid(), values)
}

/// Raw left+right sums (no prefactor, no h-power) at each node; interior
/// entries only, boundary slots zero.
fn truncated_sums(u: &Field1D, table: &CoefficientTable, shift: i64) -> Result<Vec<f64>, Error> {
    let m = u.grid().m() as i64;
    let weights = table.values();
    let needed = (m - shift).max(1) as usize;
    if weights.len() < needed {
        return Err(Error::TruncationTooShort { needed, got: weights.len() });
    }
    let uv = u.values();
    let mut out = vec![0.0; m as usize + 1];
    for j in 1..m {
        let mut acc = 0.0;
        // Left sum: nodes x_j - (ell + s) h while they stay inside [a, b].
        let lim_left = j - shift;
        for ell in 0..=lim_left.max(-1) {
            let idx = j - ell - shift;
            if !(0..=m).contains(&idx) {
                continue;
            }
            acc += weights[ell as usize] * uv[idx as usize];
        }
        // Right sum: nodes x_j + (ell + s) h, mirrored limit.
        let lim_right = m - j - shift;
        for ell in 0..=lim_right.max(-1) {
            let idx = j + ell + shift;
            if !(0..=m).contains(&idx) {
                continue;
            }
            acc += weights[ell as usize] * uv[idx as usize];
        }
        out[j as usize] = acc;
    }
    Ok(out)
}

/// Kind tag for a compact correction operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompactKind {
    /// `1 + sigma_2 h^2 d2` paired with the type-I sums.
    TypeI,
    /// The type-II counterpart.
    TypeII,
    /// The plain generalized operator of order `p` at shift `s` (identity
    /// compact part).
    Shifted {
        /// Approximation order of the family.
        p: u32,
        /// Shift parameter.
        s: f64,
    },
    /// The fourth-order combination of two shifted second-order operators.
    Combined {
        /// First shift.
        s1: f64,
        /// Second shift.
        s2: f64,
    },
}

/// A compact operator `v_j = a0 u_j + a1 (u_{j+1} - 2 u_j + u_{j-1})`;
/// the `h^2` of the written form cancels against the divided second
/// difference, so only the plain second difference appears.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactSpec {
    kind: CompactKind,
    a0: f64,
    a1: f64,
}

impl CompactSpec {
    /// Compact operator paired with the type-I sums: `a0 = 1`,
    /// `a1 = rho_2` at shift -1.
    pub fn type_i(order: &FractionalOrder) -> Self {
        CompactSpec {
            kind: CompactKind::TypeI,
            a0: 1.0,
            a1: expansion_coefficient_2(order.alpha(), -1.0),
        }
    }

    /// Compact operator paired with the type-II sums: `a0 = 1`,
    /// `a1 = rho_2` at shift +1.
    pub fn type_ii(order: &FractionalOrder) -> Self {
        CompactSpec {
            kind: CompactKind::TypeII,
            a0: 1.0,
            a1: expansion_coefficient_2(order.alpha(), 1.0),
        }
    }

    /// The generalized order-`p` operator at shift `s` used bare: its
    /// compact part is the identity.
    pub fn shifted(p: u32, s: f64) -> Self {
        CompactSpec { kind: CompactKind::Shifted { p, s }, a0: 1.0, a1: 0.0 }
    }

    /// Fourth-order combination of the shift-`s1` and shift-`s2`
    /// second-order operators:
    ///
    /// ```text
    /// a0 = rho_3(s2) - rho_3(s1)
    /// a1 = rho_2(s1) rho_3(s2) - rho_2(s2) rho_3(s1)
    /// ```
    ///
    /// For `(s1, s2) = (-1, 1)` the identity weight reduces to
    /// `(22 alpha^2 + 8) / (12 alpha^2) > 0`.
    pub fn combined(order: &FractionalOrder, s1: f64, s2: f64) -> Result<Self, Error> {
        if s1 == s2 {
            return Err(Error::InvalidArgument(
                "the fourth-order combination needs two distinct shifts".into(),
            ));
        }
        let alpha = order.alpha();
        let rho2_1 = expansion_coefficient_2(alpha, s1);
        let rho2_2 = expansion_coefficient_2(alpha, s2);
        let rho3_1 = expansion_coefficient_3(alpha, s1);
        let rho3_2 = expansion_coefficient_3(alpha, s2);
        let a0 = rho3_2 - rho3_1;
        let a1 = rho2_1 * rho3_2 - rho2_2 * rho3_1;
        if a0 == 0.0 {
            return Err(Error::IllConditioned { residual: a0 });
        }
        Ok(CompactSpec { kind: CompactKind::Combined { s1, s2 }, a0, a1 })
    }

    /// Arbitrary weights, for diagnostics and tests.
    pub fn with_weights(kind: CompactKind, a0: f64, a1: f64) -> Self {
        CompactSpec { kind, a0, a1 }
    }

    /// The kind tag.
    pub fn kind(&self) -> CompactKind {
        self.kind
    }

    /// Identity weight.
    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Second-difference weight.
    pub fn a1(&self) -> f64 {
        self.a1
    }
}

/// Applies a compact operator to a full-grid field.  Interior nodes get
/// `a0 u_j + a1 (u_{j+1} - 2 u_j + u_{j-1})`; the endpoints, which have no
/// second difference, carry only the identity part.
pub fn compact_apply(u: &Field1D, spec: &CompactSpec) -> Field1D {
    let m = u.grid().m();
    let uv = u.values();
    let mut values = vec![0.0; m + 1];
    values[0] = spec.a0 * uv[0];
    values[m] = spec.a0 * uv[m];
    for j in 1..m {
        values[j] = spec.a0 * uv[j] + spec.a1 * (uv[j + 1] - 2.0 * uv[j] + uv[j - 1]);
    }
    Field1D::new(*u.grid(), values).expect("length preserved")
}

/// Selects a compact evaluation formula.  The tags mirror the CLI
/// grammar: `F7`/`F8` are the two third-order compact formulas built on
/// the type-I and type-II sums, `F9` the fourth-order combination of two
/// shifted second-order operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompactFormula {
    /// Third-order formula on the type-I sums.
    F7,
    /// Third-order formula on the type-II sums.
    F8,
    /// Fourth-order combination of two shifted second-order operators.
    F9 {
        /// First shift.
        s1: f64,
        /// Second shift.
        s2: f64,
    },
}

impl CompactFormula {
    /// The compact operator appearing on the left-hand side of the
    /// formula.
    pub fn compact_spec(&self, order: &FractionalOrder) -> Result<CompactSpec, Error> {
        match *self {
            CompactFormula::F7 => Ok(CompactSpec::type_i(order)),
            CompactFormula::F8 => Ok(CompactSpec::type_ii(order)),
            CompactFormula::F9 { s1, s2 } => CompactSpec::combined(order, s1, s2),
        }
    }
}

/// The right-hand side of a compact formula: the weighted truncated sums
/// that approximate `compact_spec` applied to the Riesz derivative.
pub fn compact_rhs(
    u: &Field1D,
    order: &FractionalOrder,
    formula: CompactFormula,
) -> Result<Field1D, Error> {
    match formula {
        CompactFormula::F7 => riesz_apply(u, order, SumFamily::TypeI),
        CompactFormula::F8 => riesz_apply(u, order, SumFamily::TypeII),
        CompactFormula::F9 { s1, s2 } => {
            let alpha = order.alpha();
            let rho3_1 = expansion_coefficient_3(alpha, s1);
            let rho3_2 = expansion_coefficient_3(alpha, s2);
            let first = riesz_apply(u, order, SumFamily::Generalized { p: 2, s: s1 })?;
            let second = riesz_apply(u, order, SumFamily::Generalized { p: 2, s: s2 })?;
            let values = first
                .values()
                .iter()
                .zip(second.values().iter())
                .map(|(a, b)| rho3_2 * a - rho3_1 * b)
                .collect();
            Field1D::new(*u.grid(), values)
        }
    }
}

/// Evaluates the Riesz derivative of a homogeneous-boundary field through
/// a compact formula by solving the tridiagonal compact system
/// `(a0 I + a1 tridiag(1, -2, 1)) d = RHS`.
///
/// When the analytic derivative values at the two endpoints are supplied
/// the interior system closes exactly and is solved by banded
/// elimination (diagonally dominant for all supported formulas).
/// Otherwise the endpoint rows are closed by quadratic one-sided
/// extrapolation of `d` and the bordered system is solved densely.
pub fn riesz_derivative_compact(
    u: &Field1D,
    order: &FractionalOrder,
    formula: CompactFormula,
    boundary: Option<(f64, f64)>,
) -> Result<Field1D, Error> {
    let spec = formula.compact_spec(order)?;
    let rhs_field = compact_rhs(u, order, formula)?;
    let m = u.grid().m();
    let rhs = rhs_field.values();

    match boundary {
        Some((d_left, d_right)) => {
            let n = m - 1;
            let diag = vec![spec.a0() - 2.0 * spec.a1(); n];
            let off = vec![spec.a1(); n - 1];
            let mut b: Vec<f64> = rhs[1..m].to_vec();
            b[0] -= spec.a1() * d_left;
            b[n - 1] -= spec.a1() * d_right;
            let interior = solve_tridiagonal(&off, &diag, &off, &b)?;
            let mut values = Vec::with_capacity(m + 1);
            values.push(d_left);
            values.extend_from_slice(&interior);
            values.push(d_right);
            Field1D::new(*u.grid(), values)
        }
        None => {
            if m - 1 > DENSE_CAP {
                return Err(Error::CapExceeded { unknowns: m - 1, cap: DENSE_CAP });
            }
            let n = m + 1;
            let mut a = DenseMatrix::zeros(n, n);
            // Quadratic one-sided extrapolation rows close the ends.
            a.set(0, 0, 1.0);
            a.set(0, 1, -3.0);
            a.set(0, 2, 3.0);
            a.set(0, 3, -1.0);
            a.set(m, m, 1.0);
            a.set(m, m - 1, -3.0);
            a.set(m, m - 2, 3.0);
            a.set(m, m - 3, -1.0);
            for j in 1..m {
                a.set(j, j, spec.a0() - 2.0 * spec.a1());
                a.set(j, j - 1, spec.a1());
                a.set(j, j + 1, spec.a1());
            }
            let mut b = rhs.to_vec();
            b[0] = 0.0;
            b[m] = 0.0;
            let solved = LuDecomposition::factor(&a)?.solve(&b);
            Field1D::new(*u.grid(), solved)
        }
    }
}

/// Pointwise generalized evaluator: approximates the Riesz derivative of
/// a function `f` with compact support on `[a, b]` at an arbitrary point
/// `x` using the order-`p` family at shift `s`:
///
/// ```text
/// prefactor * (sum_l mu_l f(x - (l + s) h) + sum_l mu_l f(x + (l + s) h)) / h^alpha
/// ```
///
/// Terms whose evaluation point leaves `[a, b]` are dropped (zero
/// extension).  Unlike the grid-aligned sums, `s` may be fractional.
pub fn shifted_riesz(
    p: u32,
    s: f64,
    order: &FractionalOrder,
    f: impl Fn(f64) -> f64,
    support: (f64, f64),
    x: f64,
    h: f64,
) -> Result<f64, Error> {
    let (a, b) = support;
    if !a.is_finite() || !b.is_finite() || b <= a {
        return Err(Error::InvalidArgument("support requires finite b > a".into()));
    }
    if !crate::positive_finite(h) {
        return Err(Error::InvalidArgument(format!("step must be positive, got h = {h}")));
    }
    if !x.is_finite() {
        return Err(Error::InvalidArgument("evaluation point must be finite".into()));
    }
    // Largest l with x -+ (l + s) h still inside [a, b].
    let lim_left = libm::floor((x - a) / h - s);
    let lim_right = libm::floor((b - x) / h - s);
    let count = f64::max(f64::max(lim_left, lim_right) + 1.0, 1.0) as usize;
    let table = coefficient_table(Family::Mu { p, s }, order, count, Method::Recursion)?;
    let weights = table.values();

    let mut acc = 0.0;
    if lim_left >= 0.0 {
        for (ell, &w) in weights.iter().enumerate().take(lim_left as usize + 1) {
            let point = x - (ell as f64 + s) * h;
            if point < a || point > b {
                continue;
            }
            acc += w * f(point);
        }
    }
    if lim_right >= 0.0 {
        for (ell, &w) in weights.iter().enumerate().take(lim_right as usize + 1) {
            let point = x + (ell as f64 + s) * h;
            if point < a || point > b {
                continue;
            }
            acc += w * f(point);
        }
    }
    Ok(order.prefactor() * acc / libm::pow(h, order.alpha()))
}

/// The dense matrices of a 1D scheme on the interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrices {
    /// Toeplitz band of the one-sided sum: entry `(i, j)` holds the
    /// family coefficient at index `i - j - s` (type I: one superdiagonal
    /// of the head coefficient, lower-Hessenberg).
    pub e: DenseMatrix,
    /// Compact tridiagonal `I + rho_2 tridiag(1, -2, 1)`.
    pub c: DenseMatrix,
    /// Symmetrized Riesz matrix `prefactor * (E + E^T)`.
    pub d: DenseMatrix,
}

/// Assembles the interior matrices for the type-I or type-II family on an
/// `m`-cell grid; the matrices have size `(m - 1) x (m - 1)`.
pub fn build_matrices(
    order: &FractionalOrder,
    m: usize,
    family: SumFamily,
) -> Result<OperatorMatrices, Error> {
    if m < 4 {
        return Err(Error::InvalidArgument(format!(
            "matrix assembly requires at least 4 cells, got {m}"
        )));
    }
    if m - 1 > DENSE_CAP {
        return Err(Error::CapExceeded { unknowns: m - 1, cap: DENSE_CAP });
    }
    let (tag, shift) = match family {
        SumFamily::TypeI | SumFamily::TypeII => family_tag_and_shift(family)?,
        SumFamily::Generalized { .. } => {
            return Err(Error::Unsupported(
                "matrix assembly covers the type-I and type-II families".into(),
            ))
        }
    };
    let n = m - 1;
    let table = coefficient_table(tag, order, m + 1, Method::Recursion)?;
    let weights = table.values();
    let e = DenseMatrix::from_fn(n, n, |r, c| {
        // Interior node indices are r + 1 and c + 1; the left sum hits
        // u_{c+1} with the coefficient at index (r + 1) - (c + 1) - s.
        let idx = r as i64 - c as i64 - shift;
        if idx >= 0 {
            weights[idx as usize]
        } else {
            0.0
        }
    });
    let s = match family {
        SumFamily::TypeI => -1.0,
        SumFamily::TypeII => 1.0,
        SumFamily::Generalized { .. } => unreachable!(),
    };
    let rho2 = expansion_coefficient_2(order.alpha(), s);
    let c = DenseMatrix::from_fn(n, n, |r, col| {
        if r == col {
            1.0 - 2.0 * rho2
        } else if r.abs_diff(col) == 1 {
            rho2
        } else {
            0.0
        }
    });
    let d = e.add_scaled(&e.transpose(), 1.0).scaled(order.prefactor());
    Ok(OperatorMatrices { e, c, d })
}

/// The Kronecker-assembled 2D matrices on the interior grid, ordered
/// x-fastest (unknown index = (j - 1)(M_a - 1) + (i - 1)).
#[derive(Debug, Clone, PartialEq)]
pub struct Matrices2D {
    /// Compact product `C_b (x) C_a`; symmetric positive definite.
    pub t: DenseMatrix,
    /// Dispersion matrix
    /// `(K_a/h_a^alpha)(C_b (x) D_a) + (K_b/h_b^beta)(D_b (x) C_a)`;
    /// symmetric semi-negative definite.
    pub s: DenseMatrix,
}

/// Assembles the 2D matrices from the per-direction type-I operators.
pub fn build_2d(
    order_a: &FractionalOrder,
    order_b: &FractionalOrder,
    grid_a: &Grid1D,
    grid_b: &Grid1D,
    k_alpha: f64,
    k_beta: f64,
) -> Result<Matrices2D, Error> {
    let unknowns = (grid_a.m() - 1) * (grid_b.m() - 1);
    if unknowns > DENSE_CAP {
        return Err(Error::CapExceeded { unknowns, cap: DENSE_CAP });
    }
    if !crate::positive_finite(k_alpha) || !crate::positive_finite(k_beta) {
        return Err(Error::InvalidArgument("dispersion coefficients must be positive".into()));
    }
    let mats_a = build_matrices(order_a, grid_a.m(), SumFamily::TypeI)?;
    let mats_b = build_matrices(order_b, grid_b.m(), SumFamily::TypeI)?;
    let scale_a = k_alpha / libm::pow(grid_a.h(), order_a.alpha());
    let scale_b = k_beta / libm::pow(grid_b.h(), order_b.alpha());
    let t = kron(&mats_b.c, &mats_a.c);
    let s = kron(&mats_b.c, &mats_a.d)
        .scaled(scale_a)
        .add_scaled(&kron(&mats_b.d, &mats_a.c), scale_b);
    Ok(Matrices2D { t, s })
}

/// Centered `p`-th difference `(1/h^p) sum_m (-1)^m C(p, m) f(x + (p/2 - m) h)`;
/// a second-order approximation of the `p`-th derivative for smooth `f`.
pub fn central_difference_p(
    f: impl Fn(f64) -> f64,
    p: u32,
    x: f64,
    h: f64,
) -> Result<f64, Error> {
    if p == 0 {
        return Err(Error::InvalidArgument("difference order must be at least 1".into()));
    }
    if !crate::positive_finite(h) {
        return Err(Error::InvalidArgument(format!("step must be positive, got h = {h}")));
    }
    let mut acc = 0.0;
    let mut coeff = 1.0;
    for m in 0..=p {
        let offset = p as f64 / 2.0 - m as f64;
        acc += coeff * f(x + offset * h);
        // (-1)^m C(p, m) updated incrementally.
        coeff *= -((p - m) as f64) / (m as f64 + 1.0);
    }
    Ok(acc / libm::pow(h, p as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn unit_grid(m: usize) -> Grid1D {
        Grid1D::new(0.0, 1.0, m).unwrap()
    }

    fn quartic_field(m: usize) -> Field1D {
        Field1D::from_fn(unit_grid(m), |x| x * x * (1.0 - x) * (1.0 - x))
    }

    #[test]
    fn grid_arithmetic_is_exact() {
        let g = unit_grid(20);
        assert_eq!(g.h(), 0.05);
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(20), 1.0);
        assert!(Grid1D::new(0.0, 1.0, 3).is_err());
        assert!(Grid1D::new(1.0, 1.0, 8).is_err());
    }

    #[test]
    fn field_length_is_checked() {
        let g = unit_grid(8);
        assert!(matches!(Field1D::new(g, vec![0.0; 8]), Err(Error::GridMismatch)));
        let f = Field1D::new(g, vec![0.0; 9]).unwrap();
        assert!(f.homogeneous());
        let mut vals = vec![0.0; 9];
        vals[8] = 0.5;
        assert!(!Field1D::new(g, vals).unwrap().homogeneous());
    }

    #[test]
    fn riesz_apply_is_linear_and_annihilates_zero() {
        let order = FractionalOrder::new(1.5).unwrap();
        let zero = Field1D::new(unit_grid(16), vec![0.0; 17]).unwrap();
        let out = riesz_apply(&zero, &order, SumFamily::TypeI).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn riesz_apply_rejects_nonhomogeneous_fields() {
        let order = FractionalOrder::new(1.5).unwrap();
        let mut vals = vec![0.0; 17];
        vals[0] = 1.0;
        let field = Field1D::new(unit_grid(16), vals).unwrap();
        assert!(matches!(
            riesz_apply(&field, &order, SumFamily::TypeI),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn type_i_sums_equal_the_matrix_path() {
        let order = FractionalOrder::new(1.5).unwrap();
        let m = 32;
        let mut rng = StdRng::seed_from_u64(3);
        let mut vals = vec![0.0; m + 1];
        for v in vals.iter_mut().take(m).skip(1) {
            *v = rng.gen_range(-1.0..1.0);
        }
        let field = Field1D::new(unit_grid(m), vals.clone()).unwrap();
        let via_sums = riesz_apply(&field, &order, SumFamily::TypeI).unwrap();
        let mats = build_matrices(&order, m, SumFamily::TypeI).unwrap();
        let h_alpha = field.grid().h().powf(order.alpha());
        let via_matrix = mats.d.mat_vec(&vals[1..m]);
        for j in 1..m {
            let a = via_sums.value(j);
            let b = via_matrix[j - 1] / h_alpha;
            assert!(
                (a - b).abs() <= 1e-13 * b.abs().max(1.0),
                "node {j}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn generalized_family_reproduces_the_named_sums() {
        let order = FractionalOrder::new(1.3).unwrap();
        let field = quartic_field(20);
        let named = riesz_apply(&field, &order, SumFamily::TypeI).unwrap();
        let general =
            riesz_apply(&field, &order, SumFamily::Generalized { p: 2, s: -1.0 }).unwrap();
        assert_eq!(named.values(), general.values());
        assert!(matches!(
            riesz_apply(&field, &order, SumFamily::Generalized { p: 2, s: 0.25 }),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn compact_apply_matches_hand_expansions() {
        let g = unit_grid(10);
        let order = FractionalOrder::new(1.5).unwrap();

        // Identity weights pass fields through untouched.
        let f = Field1D::from_fn(g, |x| x.sin());
        let id = CompactSpec::with_weights(CompactKind::TypeI, 1.0, 0.0);
        assert_eq!(compact_apply(&f, &id).values(), f.values());

        // The second difference annihilates constants on interior nodes.
        let c = Field1D::new(g, vec![3.25; 11]).unwrap();
        let spec = CompactSpec::type_i(&order);
        let out = compact_apply(&c, &spec);
        for j in 1..10 {
            assert!((out.value(j) - spec.a0() * 3.25).abs() < 1e-15);
        }

        // On u = x^2 the second difference is exactly 2 h^2.
        let q = Field1D::from_fn(g, |x| x * x);
        let out = compact_apply(&q, &spec);
        let h = g.h();
        for j in 1..10 {
            let x = g.node(j);
            let expected = x * x + spec.a1() * 2.0 * h * h;
            assert!((out.value(j) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn combined_spec_identity_weight_matches_its_closed_form() {
        for alpha in [1.1, 1.5, 1.9] {
            let order = FractionalOrder::new(alpha).unwrap();
            let spec = CompactSpec::combined(&order, -1.0, 1.0).unwrap();
            let expected = (22.0 * alpha * alpha + 8.0) / (12.0 * alpha * alpha);
            assert!((spec.a0() - expected).abs() < 1e-13);
            assert!(spec.a0() > 0.0);
        }
        let order = FractionalOrder::new(1.5).unwrap();
        assert!(CompactSpec::combined(&order, 1.0, 1.0).is_err());
    }

    #[test]
    fn derivative_of_zero_field_is_zero() {
        let order = FractionalOrder::new(1.7).unwrap();
        let zero = Field1D::new(unit_grid(12), vec![0.0; 13]).unwrap();
        for formula in [
            CompactFormula::F7,
            CompactFormula::F8,
            CompactFormula::F9 { s1: -1.0, s2: 1.0 },
        ] {
            let d = riesz_derivative_compact(&zero, &order, formula, None).unwrap();
            assert!(d.values().iter().all(|&v| v.abs() < 1e-14));
            let d = riesz_derivative_compact(&zero, &order, formula, Some((0.0, 0.0))).unwrap();
            assert!(d.values().iter().all(|&v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn shifted_evaluator_agrees_with_grid_sums_at_shift_minus_one() {
        let order = FractionalOrder::new(1.5).unwrap();
        let m = 20;
        let field = quartic_field(m);
        let grid_result = riesz_apply(&field, &order, SumFamily::TypeI).unwrap();
        let f = |x: f64| x * x * (1.0 - x) * (1.0 - x);
        for j in 1..m {
            let x = field.grid().node(j);
            let pointwise =
                shifted_riesz(2, -1.0, &order, f, (0.0, 1.0), x, field.grid().h()).unwrap();
            let expected = grid_result.value(j);
            assert!(
                (pointwise - expected).abs() <= 1e-13 * expected.abs().max(1.0),
                "node {j}: {pointwise} vs {expected}"
            );
        }
    }

    #[test]
    fn shifted_evaluator_at_first_order_is_the_classical_sum() {
        let order = FractionalOrder::new(1.4).unwrap();
        let m = 16;
        let field = quartic_field(m);
        let f = |x: f64| x * x * (1.0 - x) * (1.0 - x);
        let grid_result =
            riesz_apply(&field, &order, SumFamily::Generalized { p: 1, s: 0.0 }).unwrap();
        for j in 1..m {
            let x = field.grid().node(j);
            let pointwise =
                shifted_riesz(1, 0.0, &order, f, (0.0, 1.0), x, field.grid().h()).unwrap();
            let expected = grid_result.value(j);
            assert!(
                (pointwise - expected).abs() <= 1e-13 * expected.abs().max(1.0),
                "node {j}: {pointwise} vs {expected}"
            );
        }
    }

    #[test]
    fn matrix_invariants_hold() {
        let order = FractionalOrder::new(1.5).unwrap();
        let m = 16;
        let mats = build_matrices(&order, m, SumFamily::TypeI).unwrap();

        // C is symmetric by construction, with the known spectrum.
        let n = m - 1;
        for r in 0..n {
            for c in 0..n {
                assert_eq!(mats.c.get(r, c), mats.c.get(c, r));
            }
        }
        let sigma2 = expansion_coefficient_2(1.5, -1.0);
        let eigs = crate::linalg::symmetric_eigenvalues(&mats.c).unwrap();
        let mut expected: Vec<f64> = (1..m)
            .map(|j| {
                let s = (j as f64 * std::f64::consts::PI / (2.0 * m as f64)).sin();
                1.0 - 4.0 * sigma2 * s * s
            })
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in eigs.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        let floor = 4.0 * 6.0f64.sqrt() / 3.0 - 3.0;
        assert!(eigs[0] >= floor - 1e-12);

        // D is symmetric semi-negative definite.
        let d_eigs = crate::linalg::symmetric_eigenvalues(&mats.d).unwrap();
        assert!(*d_eigs.last().unwrap() <= 1e-10);

        // E carries the head coefficient on the superdiagonal.
        let head = mats.e.get(1, 2);
        assert!(head > 0.0);
        assert_eq!(mats.e.get(0, 1), head);
        assert_eq!(mats.e.get(0, 2), 0.0);
    }

    #[test]
    fn compact_quadratic_form_is_sandwiched() {
        let order = FractionalOrder::new(1.8).unwrap();
        let m = 24;
        let mats = build_matrices(&order, m, SumFamily::TypeI).unwrap();
        let mut rng = StdRng::seed_from_u64(19);
        let floor = 4.0 * 6.0f64.sqrt() / 3.0 - 3.0;
        for _ in 0..20 {
            let u: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm2: f64 = u.iter().map(|v| v * v).sum();
            let cu = mats.c.mat_vec(&u);
            let energy: f64 = cu.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
            assert!(energy >= floor * norm2 - 1e-10);
            assert!(energy <= norm2 + 1e-10);

            let du = mats.d.mat_vec(&u);
            let d_energy: f64 = du.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
            assert!(d_energy <= 1e-10 * norm2);
        }
    }

    #[test]
    fn kronecker_assembly_is_symmetric() {
        let order_a = FractionalOrder::new(1.7).unwrap();
        let order_b = FractionalOrder::new(1.4).unwrap();
        let ga = unit_grid(8);
        let gb = unit_grid(8);
        let mats = build_2d(&order_a, &order_b, &ga, &gb, 1.0, 1.0).unwrap();
        let n = mats.s.rows();
        for r in 0..n {
            for c in 0..n {
                assert!((mats.s.get(r, c) - mats.s.get(c, r)).abs() <= 1e-12);
                assert!((mats.t.get(r, c) - mats.t.get(c, r)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn dense_cap_is_enforced() {
        let order = FractionalOrder::new(1.5).unwrap();
        let ga = Grid1D::new(0.0, 1.0, 80).unwrap();
        let gb = Grid1D::new(0.0, 1.0, 80).unwrap();
        assert!(matches!(
            build_2d(&order, &order, &ga, &gb, 1.0, 1.0),
            Err(Error::CapExceeded { unknowns: 6241, cap: DENSE_CAP })
        ));
    }

    #[test]
    fn central_differences_match_known_values() {
        let two = central_difference_p(|x| x * x, 2, 0.3, 0.1).unwrap();
        assert!((two - 2.0).abs() < 1e-12);
        let one = central_difference_p(|x| x, 1, 0.7, 0.25).unwrap();
        assert!((one - 1.0).abs() < 1e-13);
        let third = central_difference_p(|x| x.sin(), 3, 1.0, 1e-2).unwrap();
        assert!((third + 1.0f64.cos()).abs() < 1e-4);
        assert!(central_difference_p(|x| x, 0, 0.0, 0.1).is_err());
        assert!(central_difference_p(|x| x, 2, 0.0, 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn shifted_evaluator_matches_type_ii_on_the_grid(alpha in 1.05f64..1.95) {
            let order = FractionalOrder::new(alpha).unwrap();
            let m = 16usize;
            let field = quartic_field(m);
            let grid_result = riesz_apply(&field, &order, SumFamily::TypeII).unwrap();
            let f = |x: f64| x * x * (1.0 - x) * (1.0 - x);
            for j in 1..m {
                let x = field.grid().node(j);
                let pointwise =
                    shifted_riesz(2, 1.0, &order, f, (0.0, 1.0), x, field.grid().h()).unwrap();
                let expected = grid_result.value(j);
                prop_assert!(
                    (pointwise - expected).abs() <= 1e-13 * expected.abs().max(1.0),
                    "node {}: {} vs {}", j, pointwise, expected
                );
            }
        }
    }
}
