//! Small dense linear-algebra kernel used by the operator assembly and the
//! Crank-Nicolson solvers.
//!
//! The systems in this crate are modest (a few thousand unknowns at most,
//! enforced by an explicit cap) and are factored once per run and solved
//! for many right-hand sides, so a plain row-major dense matrix with an
//! LU decomposition under partial pivoting is the right tool.  A Thomas
//! solve covers the tridiagonal compact systems, and a cyclic Jacobi
//! iteration provides symmetric eigenvalues for spectral diagnostics.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// Row-major dense matrix.
///
/// Shape mismatches in arithmetic are programming errors and panic;
/// data-dependent failures (singular pivots, non-converging iterations)
/// surface as [`Error`] values.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// The zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix entrywise from `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at (row, col).
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    /// Overwrites the entry at (row, col).
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    /// Matrix-vector product.
    pub fn mat_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "mat_vec shape mismatch");
        let mut y = vec![0.0; self.rows];
        for (r, slot) in y.iter_mut().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            *slot = acc;
        }
        y
    }

    /// The transpose.
    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Entrywise `self + scale * other`.
    pub fn add_scaled(&self, other: &DenseMatrix, scale: f64) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape mismatch");
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + scale * b)
            .collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise scaling.
    pub fn scaled(&self, scale: f64) -> DenseMatrix {
        let data = self.data.iter().map(|a| a * scale).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &v| f64::max(m, libm::fabs(v)))
    }
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = DenseMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.get(i, j);
            if aij == 0.0 {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// LU factorization with partial pivoting, reusable across right-hand
/// sides.
#[derive(Debug, Clone)]
pub struct LuDecomposition {
    n: usize,
    lu: Vec<f64>,
    pivots: Vec<usize>,
}

impl LuDecomposition {
    /// Factors a square matrix.  A pivot falling below `n * eps` times the
    /// largest entry of the input is treated as singular.
    pub fn factor(matrix: &DenseMatrix) -> Result<Self, Error> {
        assert_eq!(matrix.rows(), matrix.cols(), "LU requires a square matrix");
        let n = matrix.rows();
        let scale = matrix.max_abs();
        if scale == 0.0 {
            return Err(Error::SingularSystem);
        }
        let threshold = scale * (n as f64) * f64::EPSILON;
        let mut lu = matrix.data.clone();
        let mut pivots = Vec::with_capacity(n);
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = libm::fabs(lu[col * n + col]);
            for row in (col + 1)..n {
                let mag = libm::fabs(lu[row * n + col]);
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = row;
                }
            }
            if pivot_mag <= threshold {
                return Err(Error::SingularSystem);
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
            }
            pivots.push(pivot_row);
            let pivot = lu[col * n + col];
            for row in (col + 1)..n {
                let factor = lu[row * n + col] / pivot;
                lu[row * n + col] = factor;
                for j in (col + 1)..n {
                    lu[row * n + j] -= factor * lu[col * n + j];
                }
            }
        }
        Ok(LuDecomposition { n, lu, pivots })
    }

    /// Solves `A x = rhs` using the stored factorization.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, rhs.len(), "solve shape mismatch");
        let n = self.n;
        let mut x = rhs.to_vec();
        for (col, &pivot_row) in self.pivots.iter().enumerate() {
            x.swap(col, pivot_row);
        }
        // Forward substitution with the unit-diagonal L factor.
        for row in 1..n {
            let dot: f64 = self.lu[row * n..row * n + row]
                .iter()
                .zip(&x[..row])
                .map(|(l, v)| l * v)
                .sum();
            x[row] -= dot;
        }
        // Back substitution with U.
        for row in (0..n).rev() {
            let dot: f64 = self.lu[row * n + row + 1..row * n + n]
                .iter()
                .zip(&x[row + 1..])
                .map(|(u, v)| u * v)
                .sum();
            x[row] = (x[row] - dot) / self.lu[row * n + row];
        }
        x
    }
}

/// Thomas algorithm for a tridiagonal system.
///
/// `lower` holds the subdiagonal (length `n - 1`, entry `i` multiplying
/// `x[i]` in row `i + 1`), `diag` the diagonal (length `n`), `upper` the
/// superdiagonal (length `n - 1`).  No pivoting is performed, so callers
/// must pass diagonally dominant systems; a vanishing pivot reports
/// [`Error::SingularSystem`].
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>, Error> {
    let n = diag.len();
    assert_eq!(lower.len(), n.saturating_sub(1), "subdiagonal length mismatch");
    assert_eq!(upper.len(), n.saturating_sub(1), "superdiagonal length mismatch");
    assert_eq!(rhs.len(), n, "right-hand side length mismatch");
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if libm::fabs(pivot) < f64::MIN_POSITIVE {
        return Err(Error::SingularSystem);
    }
    c[0] = upper.first().copied().unwrap_or(0.0) / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if libm::fabs(pivot) < f64::MIN_POSITIVE {
            return Err(Error::SingularSystem);
        }
        if i < n - 1 {
            c[i] = upper[i] / pivot;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi iteration,
/// returned in ascending order.  Only the symmetric part of the input is
/// seen: entries are read as `(a_ij + a_ji) / 2`.
pub fn symmetric_eigenvalues(matrix: &DenseMatrix) -> Result<Vec<f64>, Error> {
    assert_eq!(matrix.rows(), matrix.cols(), "eigenvalues require a square matrix");
    let n = matrix.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = DenseMatrix::from_fn(n, n, |r, c| 0.5 * (matrix.get(r, c) + matrix.get(c, r)));
    let frobenius = {
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                acc += a.get(r, c) * a.get(r, c);
            }
        }
        libm::sqrt(acc)
    };
    if frobenius == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut off = off_diagonal_norm(&a);
    for _sweep in 0..100 {
        if off <= 1e-14 * frobenius {
            let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
            return Ok(eigs);
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if libm::fabs(apq) <= 1e-300 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                // Rotate rows p and q, then the matching columns.
                for k in 0..n {
                    let akp = a.get(p, k);
                    let akq = a.get(q, k);
                    a.set(p, k, c * akp - s * akq);
                    a.set(q, k, s * akp + c * akq);
                }
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
            }
        }
        off = off_diagonal_norm(&a);
    }
    Err(Error::IllConditioned { residual: off })
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += a.get(r, c) * a.get(r, c);
            }
        }
    }
    libm::sqrt(acc)
}
