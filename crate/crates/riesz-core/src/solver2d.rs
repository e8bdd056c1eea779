//! Crank-Nicolson time stepping for the 2D Riesz reaction-dispersion
//! problem
//!
//! ```text
//! u_t = K_a d^alpha u / d|x|^alpha + K_b d^beta u / d|y|^beta - u + f
//! ```
//!
//! on a rectangle with homogeneous Dirichlet boundaries, discretized by
//! the per-direction fractional-compact operators assembled into
//! Kronecker products: `T = C_b (x) C_a` plays the role of the compact
//! mass matrix and `S` collects both dispersion terms.  Unknowns are
//! ordered x-fastest, so `C_b (x) D_a` applies the 1D dispersion matrix
//! along x within each row of the grid.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::analytic::{example3_diffusivity, example_exact, example_sources, ExampleId};
use crate::coefficients::FractionalOrder;
use crate::error::Error;
use crate::linalg::{DenseMatrix, LuDecomposition};
use crate::operators::{build_2d, Grid1D};
use crate::solver1d::ErrorNorms;

/// Source or exact-solution callback `(x, y, t) -> value`.
pub type SpaceTimeFn2 = Box<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
/// Initial-profile callback `(x, y) -> value`.
pub type SpaceFn2 = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A scalar field on the full tensor grid, stored x-fastest:
/// `value(i, j)` lives at flat index `j (M_a + 1) + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    grid_a: Grid1D,
    grid_b: Grid1D,
    values: Vec<f64>,
}

impl Field2D {
    /// Wraps values on the tensor grid; the length must be
    /// `(M_a + 1)(M_b + 1)`.
    pub fn new(grid_a: Grid1D, grid_b: Grid1D, values: Vec<f64>) -> Result<Self, Error> {
        if values.len() != (grid_a.m() + 1) * (grid_b.m() + 1) {
            return Err(Error::GridMismatch);
        }
        Ok(Field2D { grid_a, grid_b, values })
    }

    /// Samples a function on the tensor grid.
    pub fn from_fn(grid_a: Grid1D, grid_b: Grid1D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity((grid_a.m() + 1) * (grid_b.m() + 1));
        for j in 0..=grid_b.m() {
            for i in 0..=grid_a.m() {
                values.push(f(grid_a.node(i), grid_b.node(j)));
            }
        }
        Field2D { grid_a, grid_b, values }
    }

    /// Grid along x.
    pub fn grid_a(&self) -> &Grid1D {
        &self.grid_a
    }

    /// Grid along y.
    pub fn grid_b(&self) -> &Grid1D {
        &self.grid_b
    }

    /// Flat value storage (x-fastest).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at node (x_i, y_j).
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.grid_a.m() + 1) + i]
    }
}

/// The continuous 2D problem.
pub struct Problem2D {
    order_a: FractionalOrder,
    order_b: FractionalOrder,
    k_alpha: f64,
    k_beta: f64,
    length_a: f64,
    length_b: f64,
    final_time: f64,
    source: SpaceTimeFn2,
    initial: SpaceFn2,
    exact: Option<SpaceTimeFn2>,
}

impl Problem2D {
    /// Validates and wraps a problem description: positive coefficients,
    /// domain sides, and horizon, and an initial profile that
    /// (numerically) vanishes on the boundary of the rectangle.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        orders: (FractionalOrder, FractionalOrder),
        diffusivities: (f64, f64),
        lengths: (f64, f64),
        final_time: f64,
        source: SpaceTimeFn2,
        initial: SpaceFn2,
        exact: Option<SpaceTimeFn2>,
    ) -> Result<Self, Error> {
        let (k_alpha, k_beta) = diffusivities;
        let (length_a, length_b) = lengths;
        for k in [k_alpha, k_beta] {
            if !crate::positive_finite(k) {
                return Err(Error::InvalidArgument(
                    "dispersion coefficients must be positive".into(),
                ));
            }
        }
        for l in [length_a, length_b] {
            if !crate::positive_finite(l) {
                return Err(Error::InvalidArgument("domain sides must be positive".into()));
            }
        }
        if !crate::positive_finite(final_time) {
            return Err(Error::InvalidArgument("final time must be positive".into()));
        }
        for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let x = frac * length_a;
            let y = frac * length_b;
            if libm::fabs(initial(x, 0.0)) > 1e-12
                || libm::fabs(initial(x, length_b)) > 1e-12
                || libm::fabs(initial(0.0, y)) > 1e-12
                || libm::fabs(initial(length_a, y)) > 1e-12
            {
                return Err(Error::InvalidArgument(
                    "initial profile must vanish on the boundary".into(),
                ));
            }
        }
        Ok(Problem2D {
            order_a: orders.0,
            order_b: orders.1,
            k_alpha,
            k_beta,
            length_a,
            length_b,
            final_time,
            source,
            initial,
            exact,
        })
    }

    /// The bundled manufactured problem: exact solution
    /// `u = e^{2t} x^6 (1-x)^6 y^6 (1-y)^6` on the unit square with both
    /// dispersion coefficients `pi^{-8}` and the source rebuilt from the
    /// PDE.
    pub fn example3(
        order_a: FractionalOrder,
        order_b: FractionalOrder,
        final_time: f64,
    ) -> Result<Self, Error> {
        let orders = [order_a, order_b];
        let source: SpaceTimeFn2 = Box::new(move |x, y, t| {
            let p = [x.clamp(0.0, 1.0), y.clamp(0.0, 1.0)];
            example_sources(ExampleId::Ex3, &orders, &p, t).expect("in-domain evaluation")
        });
        let initial: SpaceFn2 = Box::new(|x, y| {
            let p = [x.clamp(0.0, 1.0), y.clamp(0.0, 1.0)];
            example_exact(ExampleId::Ex3, &p, 0.0).expect("in-domain evaluation")
        });
        let exact: SpaceTimeFn2 = Box::new(|x, y, t| {
            let p = [x.clamp(0.0, 1.0), y.clamp(0.0, 1.0)];
            example_exact(ExampleId::Ex3, &p, t).expect("in-domain evaluation")
        });
        let k = example3_diffusivity();
        Problem2D::new(
            (order_a, order_b),
            (k, k),
            (1.0, 1.0),
            final_time,
            source,
            initial,
            Some(exact),
        )
    }

    /// Derivative orders (x, y).
    pub fn orders(&self) -> (&FractionalOrder, &FractionalOrder) {
        (&self.order_a, &self.order_b)
    }

    /// Dispersion coefficients (x, y).
    pub fn diffusivities(&self) -> (f64, f64) {
        (self.k_alpha, self.k_beta)
    }

    /// Domain side lengths (x, y).
    pub fn lengths(&self) -> (f64, f64) {
        (self.length_a, self.length_b)
    }

    /// Time horizon T.
    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    /// Source value f(x, y, t).
    pub fn source_at(&self, x: f64, y: f64, t: f64) -> f64 {
        (self.source)(x, y, t)
    }

    /// Initial profile u0(x, y).
    pub fn initial_at(&self, x: f64, y: f64) -> f64 {
        (self.initial)(x, y)
    }

    /// Exact solution, when the problem carries one.
    pub fn exact_at(&self, x: f64, y: f64, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|u| u(x, y, t))
    }
}

/// An assembled 2D scheme with the Kronecker matrices and the one-time
/// factorization of the implicit step matrix.
pub struct Scheme2D {
    grid_a: Grid1D,
    grid_b: Grid1D,
    n: usize,
    tau: f64,
    t_mat: DenseMatrix,
    s_mat: DenseMatrix,
    a_plus: DenseMatrix,
    a_minus: DenseMatrix,
    factor: LuDecomposition,
}

impl Scheme2D {
    /// Cells along x.
    pub fn m_a(&self) -> usize {
        self.grid_a.m()
    }

    /// Cells along y.
    pub fn m_b(&self) -> usize {
        self.grid_b.m()
    }

    /// Time steps N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Time step tau = T/N.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Grid along x.
    pub fn grid_a(&self) -> &Grid1D {
        &self.grid_a
    }

    /// Grid along y.
    pub fn grid_b(&self) -> &Grid1D {
        &self.grid_b
    }

    /// Compact product matrix `T = C_b (x) C_a`.
    pub fn t_mat(&self) -> &DenseMatrix {
        &self.t_mat
    }

    /// Dispersion matrix
    /// `S = K_a/h_a^alpha (C_b (x) D_a) + K_b/h_b^beta (D_b (x) C_a)`.
    pub fn s_mat(&self) -> &DenseMatrix {
        &self.s_mat
    }

    /// Implicit step matrix `A_+ = (1 + tau/2) T - (tau/2) S`.
    pub fn a_plus(&self) -> &DenseMatrix {
        &self.a_plus
    }

    /// Explicit step matrix `A_- = (1 - tau/2) T + (tau/2) S`.
    pub fn a_minus(&self) -> &DenseMatrix {
        &self.a_minus
    }

    /// One Crank-Nicolson step:
    /// `A_+ u^{k+1} = A_- u^k + tau T f^{k+1/2}` on interior unknowns
    /// ordered x-fastest (length `(M_a - 1)(M_b - 1)`).
    ///
    /// Panics on length mismatches (caller bug, like the matrix layer).
    pub fn step(&self, state: &[f64], forcing: &[f64]) -> Vec<f64> {
        let unknowns = (self.grid_a.m() - 1) * (self.grid_b.m() - 1);
        assert_eq!(state.len(), unknowns, "state length must be (M_a - 1)(M_b - 1)");
        assert_eq!(forcing.len(), unknowns, "forcing length must be (M_a - 1)(M_b - 1)");
        let mut rhs = self.a_minus.mat_vec(state);
        let weighted = self.t_mat.mat_vec(forcing);
        for (r, w) in rhs.iter_mut().zip(weighted.iter()) {
            *r += self.tau * w;
        }
        self.factor.solve(&rhs)
    }

    /// The T-weighted energy `(T u, u)` of an interior state; the scheme
    /// is stable in the norm this quadratic form induces.
    pub fn t_energy(&self, state: &[f64]) -> f64 {
        let tu = self.t_mat.mat_vec(state);
        tu.iter().zip(state.iter()).map(|(a, b)| a * b).sum()
    }
}

/// Builds the 2D scheme on an `m_a x m_b` cell grid with `n` time steps.
pub fn assemble2d(
    problem: &Problem2D,
    m_a: usize,
    m_b: usize,
    n: usize,
) -> Result<Scheme2D, Error> {
    if m_a < 4 || m_b < 4 {
        return Err(Error::InvalidArgument(alloc::format!(
            "at least 4 cells are required per direction, got {m_a} x {m_b}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("at least one time step is required".into()));
    }
    let grid_a = Grid1D::new(0.0, problem.length_a, m_a)?;
    let grid_b = Grid1D::new(0.0, problem.length_b, m_b)?;
    let tau = problem.final_time / n as f64;
    let mats = build_2d(
        &problem.order_a,
        &problem.order_b,
        &grid_a,
        &grid_b,
        problem.k_alpha,
        problem.k_beta,
    )?;
    let a_plus = mats.t.scaled(1.0 + 0.5 * tau).add_scaled(&mats.s, -0.5 * tau);
    let a_minus = mats.t.scaled(1.0 - 0.5 * tau).add_scaled(&mats.s, 0.5 * tau);
    let factor = LuDecomposition::factor(&a_plus)?;
    Ok(Scheme2D {
        grid_a,
        grid_b,
        n,
        tau,
        t_mat: mats.t,
        s_mat: mats.s,
        a_plus,
        a_minus,
        factor,
    })
}

/// Runs the scheme from the initial data to the final time and returns
/// the terminal field on the full grid (boundary held at zero).
pub fn run2d(scheme: &Scheme2D, problem: &Problem2D) -> Result<Field2D, Error> {
    let (m_a, m_b) = (scheme.m_a(), scheme.m_b());
    let unknowns = (m_a - 1) * (m_b - 1);
    let mut state = vec![0.0; unknowns];
    for j in 1..m_b {
        for i in 1..m_a {
            state[(j - 1) * (m_a - 1) + (i - 1)] =
                problem.initial_at(scheme.grid_a.node(i), scheme.grid_b.node(j));
        }
    }
    let mut forcing = vec![0.0; unknowns];
    for k in 0..scheme.n {
        let t_mid = (k as f64 + 0.5) * scheme.tau;
        for j in 1..m_b {
            let y = scheme.grid_b.node(j);
            for i in 1..m_a {
                forcing[(j - 1) * (m_a - 1) + (i - 1)] =
                    problem.source_at(scheme.grid_a.node(i), y, t_mid);
            }
        }
        state = scheme.step(&state, &forcing);
    }
    let mut values = vec![0.0; (m_a + 1) * (m_b + 1)];
    for j in 1..m_b {
        for i in 1..m_a {
            values[j * (m_a + 1) + i] = state[(j - 1) * (m_a - 1) + (i - 1)];
        }
    }
    Field2D::new(scheme.grid_a, scheme.grid_b, values)
}

/// Samples a problem's exact solution on the tensor grid at time `t`;
/// `None` when the problem does not carry one.
pub fn exact_field2d(
    problem: &Problem2D,
    grid_a: &Grid1D,
    grid_b: &Grid1D,
    t: f64,
) -> Option<Field2D> {
    problem.exact.as_ref()?;
    Some(Field2D::from_fn(*grid_a, *grid_b, |x, y| {
        problem.exact_at(x, y, t).expect("checked above")
    }))
}

/// Max and discrete-L2 norms of the difference between two fields on the
/// same tensor grid (`L2 = sqrt(h_a h_b sum e^2)`).
pub fn error_norms2d(numeric: &Field2D, exact: &Field2D) -> Result<ErrorNorms, Error> {
    if numeric.grid_a != exact.grid_a || numeric.grid_b != exact.grid_b {
        return Err(Error::GridMismatch);
    }
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0f64;
    for (a, b) in numeric.values.iter().zip(exact.values.iter()) {
        let e = a - b;
        max_abs = f64::max(max_abs, libm::fabs(e));
        sum_sq += e * e;
    }
    let l2 = libm::sqrt(numeric.grid_a.h() * numeric.grid_b.h() * sum_sq);
    Ok(ErrorNorms { max_abs, discrete_l2: l2 })
}
