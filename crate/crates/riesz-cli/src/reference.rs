//! Golden convergence results for the bundled example problems.
//!
//! These are the expected absolute errors and fitted orders of the five
//! standard studies the `table` subcommand reproduces: the three
//! stationary operator studies on the quartic profile (third-order
//! type-I, third-order type-II, fourth-order combined) and the two
//! time-dependent studies on the manufactured 1D/2D problems.  The
//! regression suite compares fresh runs against these values; the table
//! runner also consults them to decide which error metric a study is
//! reported under.

/// A row of the stationary studies over the five-step ladder
/// h = 1/20 .. 1/320 (tables 1 and 2).
#[derive(Debug, Clone, Copy)]
pub struct SpatialRow {
    /// Derivative order.
    pub alpha: f64,
    /// Absolute errors per refinement level.
    pub errors: [f64; 5],
    /// Fitted orders between consecutive levels.
    pub orders: [f64; 4],
}

/// A row of the fourth-order stationary study over the four-step ladder
/// h = 1/20 .. 1/160 (table 3).
#[derive(Debug, Clone, Copy)]
pub struct SpatialRow4 {
    /// Derivative order.
    pub alpha: f64,
    /// Absolute errors per refinement level.
    pub errors: [f64; 4],
    /// Fitted orders between consecutive levels.
    pub orders: [f64; 3],
}

/// A row of the 1D time-dependent study over the coupled ladder
/// (tau, h) = (1/4, 1/4) .. (1/256, 1/64) (table 4).
#[derive(Debug, Clone, Copy)]
pub struct TimeSpaceRow {
    /// Derivative order.
    pub alpha: f64,
    /// Max-norm errors at the final time per level.
    pub errors: [f64; 5],
    /// Temporal convergence orders between consecutive levels.
    pub tco: [f64; 4],
    /// Spatial convergence orders between consecutive levels.
    pub sco: [f64; 4],
}

/// A row of the 2D time-dependent study over the coupled ladder
/// truncated at h = 1/32 (table 5).
#[derive(Debug, Clone, Copy)]
pub struct TimeSpaceRow2D {
    /// Derivative order along x.
    pub alpha: f64,
    /// Derivative order along y.
    pub beta: f64,
    /// Max-norm errors at the final time per level.
    pub errors: [f64; 4],
    /// Temporal convergence orders between consecutive levels.
    pub tco: [f64; 3],
    /// Spatial convergence orders between consecutive levels.
    pub sco: [f64; 3],
}

/// Third-order type-I operator on the quartic profile at x = 1/2.
pub const TABLE1: [SpatialRow; 5] = [
    SpatialRow {
        alpha: 1.1,
        errors: [1.740717e-04, 2.185595e-05, 2.742123e-06, 3.434158e-07, 4.296784e-08],
        orders: [2.9936, 2.9947, 2.9973, 2.9986],
    },
    SpatialRow {
        alpha: 1.3,
        errors: [1.756079e-04, 2.198613e-05, 2.751417e-06, 3.441531e-07, 4.303416e-08],
        orders: [2.9977, 2.9983, 2.9991, 2.9995],
    },
    SpatialRow {
        alpha: 1.5,
        errors: [1.377134e-04, 1.716087e-05, 2.143372e-06, 2.678606e-07, 3.348027e-08],
        orders: [3.0045, 3.0012, 3.0003, 3.0001],
    },
    SpatialRow {
        alpha: 1.7,
        errors: [7.211650e-05, 8.991024e-06, 1.123719e-06, 1.404937e-07, 1.756457e-08],
        orders: [3.0038, 3.0002, 2.9997, 2.9998],
    },
    SpatialRow {
        alpha: 1.9,
        errors: [1.056422e-05, 1.364672e-06, 1.735867e-07, 2.189369e-08, 2.749249e-09],
        orders: [2.9526, 2.9748, 2.9871, 2.9934],
    },
];

/// Third-order type-II operator on the quartic profile at x = 1/2.
pub const TABLE2: [SpatialRow; 5] = [
    SpatialRow {
        alpha: 1.1,
        errors: [5.290778e-02, 6.548041e-03, 8.150577e-04, 1.016718e-04, 1.269602e-05],
        orders: [3.0143, 3.0061, 3.0030, 3.0015],
    },
    SpatialRow {
        alpha: 1.3,
        errors: [2.033985e-02, 2.512801e-03, 3.117365e-04, 3.881109e-05, 4.841522e-06],
        orders: [3.0169, 3.0109, 3.0058, 3.0029],
    },
    SpatialRow {
        alpha: 1.5,
        errors: [1.263828e-02, 1.583605e-03, 1.966563e-04, 2.448135e-05, 3.053477e-06],
        orders: [2.9965, 3.0095, 3.0059, 3.0032],
    },
    SpatialRow {
        alpha: 1.7,
        errors: [7.701877e-03, 9.893186e-04, 1.233352e-04, 1.537077e-05, 1.917897e-06],
        orders: [2.9607, 3.0039, 3.0043, 3.0026],
    },
    SpatialRow {
        alpha: 1.9,
        errors: [2.787724e-03, 3.697284e-04, 4.637689e-05, 5.791288e-06, 7.231609e-07],
        orders: [2.9145, 2.9950, 3.0014, 3.0015],
    },
];

/// Fourth-order combined operator (shifts -1, 1) on the quartic profile
/// at x = 1/2, evaluated at half the labeled step.
pub const TABLE3: [SpatialRow4; 5] = [
    SpatialRow4 {
        alpha: 1.1,
        errors: [8.281680e-07, 5.167207e-08, 3.218255e-09, 2.007975e-10],
        orders: [4.0025, 4.0050, 4.0025],
    },
    SpatialRow4 {
        alpha: 1.3,
        errors: [8.898742e-07, 5.777396e-08, 3.654194e-09, 2.294926e-10],
        orders: [3.9451, 3.9828, 3.9930],
    },
    SpatialRow4 {
        alpha: 1.5,
        errors: [5.084772e-07, 3.725522e-08, 2.454356e-09, 1.567338e-10],
        orders: [3.7707, 3.9240, 3.9690],
    },
    SpatialRow4 {
        alpha: 1.7,
        errors: [1.822972e-07, 1.692478e-08, 1.191028e-09, 7.878076e-11],
        orders: [3.4291, 3.8289, 3.9182],
    },
    SpatialRow4 {
        alpha: 1.9,
        errors: [9.867011e-08, 7.533874e-09, 5.041596e-10, 3.322587e-11],
        orders: [3.7111, 3.9014, 3.9235],
    },
];

/// 1D manufactured problem, max-norm error at the final time.
pub const TABLE4: [TimeSpaceRow; 5] = [
    TimeSpaceRow {
        alpha: 1.1,
        errors: [2.984674e-06, 3.613655e-07, 4.685713e-08, 5.813993e-09, 7.321694e-10],
        tco: [2.0307, 1.9647, 2.0071, 1.9929],
        sco: [3.0460, 2.9471, 3.0107, 2.9893],
    },
    TimeSpaceRow {
        alpha: 1.3,
        errors: [2.984597e-06, 3.617522e-07, 4.690406e-08, 5.819491e-09, 7.328387e-10],
        tco: [2.0296, 1.9648, 2.0072, 1.9929],
        sco: [3.0445, 2.9472, 3.0107, 2.9893],
    },
    TimeSpaceRow {
        alpha: 1.5,
        errors: [2.981516e-06, 3.616854e-07, 4.690789e-08, 5.819848e-09, 7.328573e-10],
        tco: [2.0288, 1.9646, 2.0072, 1.9929],
        sco: [3.0432, 2.9468, 3.0108, 2.9894],
    },
    TimeSpaceRow {
        alpha: 1.7,
        errors: [2.974813e-06, 3.609314e-07, 4.683820e-08, 5.811874e-09, 7.318735e-10],
        tco: [2.0287, 1.9640, 2.0071, 1.9929],
        sco: [3.0430, 2.9460, 3.0106, 2.9893],
    },
    TimeSpaceRow {
        alpha: 1.9,
        errors: [2.963689e-06, 3.593385e-07, 4.668265e-08, 5.795636e-09, 7.300171e-10],
        tco: [2.0293, 1.9629, 2.0066, 1.9926],
        sco: [3.0440, 2.9444, 3.0098, 2.9890],
    },
];

/// 2D manufactured problem, max-norm error at the final time.
pub const TABLE5: [TimeSpaceRow2D; 5] = [
    TimeSpaceRow2D {
        alpha: 1.1,
        beta: 1.8,
        errors: [7.150284e-09, 8.680618e-10, 1.155609e-10, 1.428060e-11],
        tco: [2.0281, 1.9394, 2.0110],
        sco: [3.0421, 2.9091, 3.0165],
    },
    TimeSpaceRow2D {
        alpha: 1.3,
        beta: 1.6,
        errors: [7.221370e-09, 8.805609e-10, 1.168858e-10, 1.442860e-11],
        tco: [2.0239, 1.9422, 2.0121],
        sco: [3.0358, 2.9133, 3.0181],
    },
    TimeSpaceRow2D {
        alpha: 1.5,
        beta: 1.5,
        errors: [7.219848e-09, 8.823037e-10, 1.171206e-10, 1.445519e-11],
        tco: [2.0217, 1.9422, 2.0122],
        sco: [3.0326, 2.9133, 3.0183],
    },
    TimeSpaceRow2D {
        alpha: 1.7,
        beta: 1.4,
        errors: [7.181389e-09, 8.771397e-10, 1.165997e-10, 1.439652e-11],
        tco: [2.0223, 1.9408, 2.0118],
        sco: [3.0334, 2.9112, 3.0178],
    },
    TimeSpaceRow2D {
        alpha: 1.9,
        beta: 1.2,
        errors: [7.102704e-09, 8.628679e-10, 1.150916e-10, 1.423779e-11],
        tco: [2.0274, 1.9376, 2.0100],
        sco: [3.0412, 2.9064, 3.0150],
    },
];

/// Expected golden error for a (table, alpha, level) triple, used by the
/// metric chooser; `None` when the combination is off the golden grid.
pub fn expected_error(table: u8, alpha: f64, beta: Option<f64>, level: usize) -> Option<f64> {
    let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
    match table {
        1 => TABLE1
            .iter()
            .find(|r| close(r.alpha, alpha))
            .and_then(|r| r.errors.get(level).copied()),
        2 => TABLE2
            .iter()
            .find(|r| close(r.alpha, alpha))
            .and_then(|r| r.errors.get(level).copied()),
        3 => TABLE3
            .iter()
            .find(|r| close(r.alpha, alpha))
            .and_then(|r| r.errors.get(level).copied()),
        4 => TABLE4
            .iter()
            .find(|r| close(r.alpha, alpha))
            .and_then(|r| r.errors.get(level).copied()),
        5 => TABLE5
            .iter()
            .find(|r| close(r.alpha, alpha) && beta.is_none_or(|b| close(r.beta, b)))
            .and_then(|r| r.errors.get(level).copied()),
        _ => None,
    }
}
