//! Crank-Nicolson time stepping for the 1D Riesz reaction-dispersion
//! problem
//!
//! ```text
//! u_t = K d^alpha u / d|x|^alpha - u + f(x, t)   on (0, L) x (0, T],
//! u(0, t) = u(L, t) = 0,                         u(x, 0) = u0(x),
//! ```
//!
//! discretized in space by the third-order fractional-compact operator
//! (type-I family plus the tridiagonal compact mass matrix) and in time
//! by the trapezoidal rule.  Both step matrices are time-independent, so
//! the implicit matrix is factorized once and reused across all steps.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::analytic::{example2_diffusivity, example_exact, example_sources, ExampleId};
use crate::coefficients::FractionalOrder;
use crate::error::Error;
use crate::linalg::{DenseMatrix, LuDecomposition};
use crate::operators::{build_matrices, Field1D, Grid1D, SumFamily, DENSE_CAP};

/// Source or exact-solution callback `(x, t) -> value`.
pub type SpaceTimeFn = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Initial-profile callback `x -> value`.
pub type SpaceFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// The continuous 1D problem: dispersion coefficient, derivative order,
/// domain, horizon, source, initial profile, and (optionally) the exact
/// solution for error reporting.
pub struct Problem1D {
    order: FractionalOrder,
    diffusivity: f64,
    length: f64,
    final_time: f64,
    source: SpaceTimeFn,
    initial: SpaceFn,
    exact: Option<SpaceTimeFn>,
}

impl Problem1D {
    /// Validates and wraps a problem description.  The dispersion
    /// coefficient, domain length, and horizon must be positive, and the
    /// initial profile must (numerically) satisfy the homogeneous
    /// boundary conditions.
    pub fn new(
        order: FractionalOrder,
        diffusivity: f64,
        length: f64,
        final_time: f64,
        source: SpaceTimeFn,
        initial: SpaceFn,
        exact: Option<SpaceTimeFn>,
    ) -> Result<Self, Error> {
        if !crate::positive_finite(diffusivity) {
            return Err(Error::InvalidArgument(
                "dispersion coefficient must be positive".into(),
            ));
        }
        if !crate::positive_finite(length) {
            return Err(Error::InvalidArgument("domain length must be positive".into()));
        }
        if !crate::positive_finite(final_time) {
            return Err(Error::InvalidArgument("final time must be positive".into()));
        }
        if libm::fabs(initial(0.0)) > 1e-12 || libm::fabs(initial(length)) > 1e-12 {
            return Err(Error::InvalidArgument(
                "initial profile must vanish at both boundaries".into(),
            ));
        }
        Ok(Problem1D { order, diffusivity, length, final_time, source, initial, exact })
    }

    /// The bundled manufactured problem: exact solution
    /// `u = e^t x^6 (1-x)^6` on [0, 1] with dispersion coefficient
    /// `e^{-12}` and the source rebuilt from the PDE.
    pub fn example2(order: FractionalOrder, final_time: f64) -> Result<Self, Error> {
        let source_order = order;
        let source: SpaceTimeFn = Box::new(move |x, t| {
            let x = x.clamp(0.0, 1.0);
            example_sources(ExampleId::Ex2, &[source_order], &[x], t)
                .expect("in-domain evaluation")
        });
        let initial: SpaceFn = Box::new(|x| {
            let x = x.clamp(0.0, 1.0);
            example_exact(ExampleId::Ex2, &[x], 0.0).expect("in-domain evaluation")
        });
        let exact: SpaceTimeFn = Box::new(|x, t| {
            let x = x.clamp(0.0, 1.0);
            example_exact(ExampleId::Ex2, &[x], t).expect("in-domain evaluation")
        });
        Problem1D::new(
            order,
            example2_diffusivity(),
            1.0,
            final_time,
            source,
            initial,
            Some(exact),
        )
    }

    /// Derivative order.
    pub fn order(&self) -> &FractionalOrder {
        &self.order
    }

    /// Dispersion coefficient.
    pub fn diffusivity(&self) -> f64 {
        self.diffusivity
    }

    /// Domain length L.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Time horizon T.
    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    /// Source value f(x, t).
    pub fn source_at(&self, x: f64, t: f64) -> f64 {
        (self.source)(x, t)
    }

    /// Initial profile u0(x).
    pub fn initial_at(&self, x: f64) -> f64 {
        (self.initial)(x)
    }

    /// Exact solution, when the problem carries one.
    pub fn exact_at(&self, x: f64, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|u| u(x, t))
    }
}

/// An assembled scheme: grid, step counts, the compact mass matrix, the
/// two step matrices, and the one-time factorization of the implicit one.
pub struct Scheme1D {
    grid: Grid1D,
    n: usize,
    tau: f64,
    c: DenseMatrix,
    a_plus: DenseMatrix,
    a_minus: DenseMatrix,
    factor: LuDecomposition,
}

impl Scheme1D {
    /// Number of spatial cells M.
    pub fn m(&self) -> usize {
        self.grid.m()
    }

    /// Number of time steps N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Time step tau = T/N.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Spatial step h = L/M.
    pub fn h(&self) -> f64 {
        self.grid.h()
    }

    /// The spatial grid.
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Compact mass matrix C (interior nodes).
    pub fn mass(&self) -> &DenseMatrix {
        &self.c
    }

    /// Implicit step matrix `A_+ = (1 + tau/2) C - tau K/(2 h^alpha) D`.
    pub fn a_plus(&self) -> &DenseMatrix {
        &self.a_plus
    }

    /// Explicit step matrix `A_- = (1 - tau/2) C + tau K/(2 h^alpha) D`.
    pub fn a_minus(&self) -> &DenseMatrix {
        &self.a_minus
    }

    /// One Crank-Nicolson step: solves
    /// `A_+ u^{k+1} = A_- u^k + tau C f^{k+1/2}` for the next interior
    /// state.  `state` and `forcing` hold interior-node values (length
    /// M - 1); the forcing is the source sampled at the half step.
    ///
    /// Panics on length mismatches (caller bug, like the matrix layer).
    pub fn step(&self, state: &[f64], forcing: &[f64]) -> Vec<f64> {
        let unknowns = self.grid.m() - 1;
        assert_eq!(state.len(), unknowns, "state length must be M - 1");
        assert_eq!(forcing.len(), unknowns, "forcing length must be M - 1");
        let mut rhs = self.a_minus.mat_vec(state);
        let weighted = self.c.mat_vec(forcing);
        for (r, w) in rhs.iter_mut().zip(weighted.iter()) {
            *r += self.tau * w;
        }
        self.factor.solve(&rhs)
    }

    /// The compact energy `(C u, u)` of an interior state; the scheme is
    /// stable in the norm this quadratic form induces.
    pub fn compact_energy(&self, state: &[f64]) -> f64 {
        let cu = self.c.mat_vec(state);
        cu.iter().zip(state.iter()).map(|(a, b)| a * b).sum()
    }
}

/// Builds the scheme for `problem` on an M-cell grid with N time steps:
/// assembles the compact and dispersion matrices, forms
/// `A_{+/-} = (1 +/- tau/2) C -/+ tau K/(2 h^alpha) D`, and factorizes
/// the implicit matrix once.
pub fn assemble1d(problem: &Problem1D, m: usize, n: usize) -> Result<Scheme1D, Error> {
    if m < 4 {
        return Err(Error::InvalidArgument(alloc::format!(
            "at least 4 spatial cells are required, got {m}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("at least one time step is required".into()));
    }
    if m - 1 > DENSE_CAP {
        return Err(Error::CapExceeded { unknowns: m - 1, cap: DENSE_CAP });
    }
    let grid = Grid1D::new(0.0, problem.length, m)?;
    let tau = problem.final_time / n as f64;
    let mats = build_matrices(&problem.order, m, SumFamily::TypeI)?;
    let scale = tau * problem.diffusivity / (2.0 * libm::pow(grid.h(), problem.order.alpha()));
    let a_plus = mats.c.scaled(1.0 + 0.5 * tau).add_scaled(&mats.d, -scale);
    let a_minus = mats.c.scaled(1.0 - 0.5 * tau).add_scaled(&mats.d, scale);
    let factor = LuDecomposition::factor(&a_plus)?;
    Ok(Scheme1D { grid, n, tau, c: mats.c, a_plus, a_minus, factor })
}

/// Samples the initial profile on the grid, clamping the boundary nodes
/// to exactly zero (the continuous conditions hold there by the problem
/// invariant).
pub fn initial_state(problem: &Problem1D, grid: &Grid1D) -> Field1D {
    let m = grid.m();
    let mut values: Vec<f64> = (0..=m).map(|i| problem.initial_at(grid.node(i))).collect();
    values[0] = 0.0;
    values[m] = 0.0;
    Field1D::new(*grid, values).expect("length matches by construction")
}

/// Runs the scheme from the initial data to the final time and returns
/// the terminal field (boundary nodes included, held at zero).
pub fn run1d(scheme: &Scheme1D, problem: &Problem1D) -> Result<Field1D, Error> {
    let grid = *scheme.grid();
    let m = grid.m();
    let start = initial_state(problem, &grid);
    let mut state: Vec<f64> = start.values()[1..m].to_vec();
    let mut forcing = vec![0.0; m - 1];
    for k in 0..scheme.n {
        let t_mid = (k as f64 + 0.5) * scheme.tau;
        for (j, slot) in forcing.iter_mut().enumerate() {
            *slot = problem.source_at(grid.node(j + 1), t_mid);
        }
        state = scheme.step(&state, &forcing);
    }
    let mut values = vec![0.0; m + 1];
    values[1..m].copy_from_slice(&state);
    Field1D::new(grid, values)
}

/// Max and discrete-L2 norms of the difference between two fields on the
/// same grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    /// `max_j |e_j|` over all nodes.
    pub max_abs: f64,
    /// `sqrt(h sum_j e_j^2)`.
    pub discrete_l2: f64,
}

/// Compares a numeric field against exact samples on the same grid.
pub fn error_norms(numeric: &Field1D, exact: &Field1D) -> Result<ErrorNorms, Error> {
    if numeric.grid() != exact.grid() {
        return Err(Error::GridMismatch);
    }
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0f64;
    for (a, b) in numeric.values().iter().zip(exact.values().iter()) {
        let e = a - b;
        max_abs = f64::max(max_abs, libm::fabs(e));
        sum_sq += e * e;
    }
    Ok(ErrorNorms { max_abs, discrete_l2: libm::sqrt(numeric.grid().h() * sum_sq) })
}

/// Samples a problem's exact solution on a grid at time `t`; `None` when
/// the problem does not carry one.
pub fn exact_field(problem: &Problem1D, grid: &Grid1D, t: f64) -> Option<Field1D> {
    problem.exact.as_ref()?;
    let values: Vec<f64> = (0..=grid.m())
        .map(|i| problem.exact_at(grid.node(i), t).expect("checked above"))
        .collect();
    Some(Field1D::new(*grid, values).expect("length matches by construction"))
}
