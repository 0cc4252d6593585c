//! Small dense linear algebra.
//!
//! The whole library operates on matrices no larger than 8×8, so this
//! module implements exactly what is needed — row-major [`Mat`] with
//! multiplication, LU determinant/solve, and a Jacobi eigenvalue solver
//! for symmetric matrices (used for operator norms and structure tests).
//! Keeping it in-crate gives the classification code exact control over
//! pivoting and convergence tolerances, which the certificates depend on.

use crate::tolerances::{JACOBI_MAX_SWEEPS, JACOBI_OFFDIAG};

/// Maximum supported ambient dimension.
pub const MAX_DIM: usize = 8;

/// Dense row-major square matrix of runtime size `n ≤ MAX_DIM`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    // Fixed backing store keeps Mat Copy-free but allocation-free.
    a: [f64; MAX_DIM * MAX_DIM],
}

impl Mat {
    /// Zero matrix of size `n`. Panics if `n` is 0 or exceeds [`MAX_DIM`].
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_DIM, "matrix size {n} out of range 1..={MAX_DIM}");
        Mat { n, a: [0.0; MAX_DIM * MAX_DIM] }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from row-major slices; all rows must have length `rows.len()`.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Mat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has length {} in a {n}×{n} matrix", row.len());
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Builds an `n`×`n` matrix from a flat row-major slice of length `n²`.
    ///
    /// Returns `None` when the slice length is not `n²` or `n` exceeds the
    /// supported maximum.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Option<Self> {
        if n == 0 || n > MAX_DIM || entries.len() != n * n {
            return None;
        }
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, entries[i * n + j]);
            }
        }
        Some(m)
    }

    /// Side length.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry at `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.n && j < self.n);
        self.a[i * MAX_DIM + j]
    }

    /// Sets the entry at `(i, j)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.n && j < self.n);
        self.a[i * MAX_DIM + j] = v;
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j).is_finite()))
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "size mismatch in matrix product");
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let s = self.get(i, k);
                if s == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.set(i, j, out.get(i, j) + s * rhs.get(k, j));
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "size mismatch in matrix–vector product");
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Transpose.
    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Scales every entry by `s`.
    pub fn scale(&self, s: f64) -> Mat {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j) * s);
            }
        }
        out
    }

    /// Entry-wise difference `self − rhs`.
    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "size mismatch in matrix difference");
        let mut out = Mat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j) - rhs.get(i, j));
            }
        }
        out
    }

    /// Frobenius norm (root of the sum of squared entries).
    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                acc += v * v;
            }
        }
        acc.sqrt()
    }

    /// Largest absolute entry; zero matrix gives 0.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max(self.get(i, j).abs());
            }
        }
        m
    }

    /// `k`-th matrix power (`k ≥ 1`).
    pub fn pow(&self, k: usize) -> Mat {
        assert!(k >= 1, "matrix power requires k >= 1");
        let mut out = self.clone();
        for _ in 1..k {
            out = out.mul(self);
        }
        out
    }

    /// Determinant by LU factorisation with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut lu = self.clone();
        let mut det = 1.0;
        for col in 0..n {
            // Partial pivot: largest magnitude on or below the diagonal.
            let mut pivot_row = col;
            let mut pivot_mag = lu.get(col, col).abs();
            for r in (col + 1)..n {
                let mag = lu.get(r, col).abs();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag == 0.0 {
                return 0.0;
            }
            if pivot_row != col {
                for j in 0..n {
                    let tmp = lu.get(col, j);
                    lu.set(col, j, lu.get(pivot_row, j));
                    lu.set(pivot_row, j, tmp);
                }
                det = -det;
            }
            let pivot = lu.get(col, col);
            det *= pivot;
            for r in (col + 1)..n {
                let factor = lu.get(r, col) / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    lu.set(r, j, lu.get(r, j) - factor * lu.get(col, j));
                }
            }
        }
        det
    }

    /// Solves `self · x = b` by Gaussian elimination with partial
    /// pivoting. Returns `None` when a pivot vanishes (singular matrix).
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.n;
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut aug = self.clone();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = aug.get(col, col).abs();
            for r in (col + 1)..n {
                let mag = aug.get(r, col).abs();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag == 0.0 {
                return None;
            }
            if pivot_row != col {
                for j in 0..n {
                    let tmp = aug.get(col, j);
                    aug.set(col, j, aug.get(pivot_row, j));
                    aug.set(pivot_row, j, tmp);
                }
                rhs.swap(col, pivot_row);
            }
            let pivot = aug.get(col, col);
            for r in (col + 1)..n {
                let factor = aug.get(r, col) / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    aug.set(r, j, aug.get(r, j) - factor * aug.get(col, j));
                }
                rhs[r] -= factor * rhs[col];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            for j in (i + 1)..n {
                s -= aug.get(i, j) * x[j];
            }
            x[i] = s / aug.get(i, i);
        }
        Some(x)
    }

    /// Eigenvalues of a **symmetric** matrix by cyclic Jacobi rotations,
    /// ascending. The caller asserts symmetry; inputs here are Gram
    /// matrices `AᵀA`, symmetric by construction.
    pub fn sym_eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let mut m = self.clone();
        for _ in 0..JACOBI_MAX_SWEEPS {
            let mut off = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off.max(m.get(i, j).abs());
                }
            }
            if off <= JACOBI_OFFDIAG {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m.get(p, q);
                    if apq.abs() <= JACOBI_OFFDIAG {
                        continue;
                    }
                    let app = m.get(p, p);
                    let aqq = m.get(q, q);
                    // Rotation angle satisfying tan(2φ) = 2·apq / (app − aqq);
                    // atan2 handles the equal-diagonal case (φ = π/4).
                    let phi = 0.5 * (2.0 * apq).atan2(app - aqq);
                    let (s, c) = phi.sin_cos();
                    for k in 0..n {
                        let mkp = m.get(k, p);
                        let mkq = m.get(k, q);
                        m.set(k, p, c * mkp + s * mkq);
                        m.set(k, q, -s * mkp + c * mkq);
                    }
                    for k in 0..n {
                        let mpk = m.get(p, k);
                        let mqk = m.get(q, k);
                        m.set(p, k, c * mpk + s * mqk);
                        m.set(q, k, -s * mpk + c * mqk);
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
        eig.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        eig
    }

    /// Singular values, ascending: square roots of the eigenvalues of
    /// `AᵀA` (clamped at zero against rounding).
    pub fn singular_values(&self) -> Vec<f64> {
        let gram = self.transpose().mul(self);
        gram.sym_eigenvalues().iter().map(|&l| l.max(0.0).sqrt()).collect()
    }

    /// Largest singular value (the operator norm as a map on Euclidean
    /// space).
    pub fn operator_norm(&self) -> f64 {
        *self
            .singular_values()
            .last()
            .expect("matrix has at least one singular value")
    }
}
