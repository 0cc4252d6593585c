//! Invertible affine contractions `x ↦ Ax + b` on R^m and their
//! similarity diagnostics.
//!
//! Every map is validated on construction: the linear part must be square,
//! finite, dimension-matched with the translation, and nonsingular (the
//! analysis in this crate is meaningless for rank-deficient maps). All
//! higher-level modules rely on those invariants holding.

use crate::error::{Error, Result};
use crate::linalg::{Mat, MAX_DIM};
use crate::tolerances;

/// Threshold below which `|det A|` is treated as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// An invertible affine map `x ↦ Ax + b` on R^m, `1 ≤ m ≤ 8`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    linear: Mat,
    translation: Vec<f64>,
    label: Option<String>,
}

/// Outcome of testing whether a linear part is a scalar multiple of an
/// orthogonal matrix.
#[derive(Debug, Clone)]
pub struct SimilarityTest {
    /// Whether `AᵀA` is within tolerance of `ratio²·I`.
    pub is_similarity: bool,
    /// The candidate similarity ratio `|det A|^{1/m}` (always reported).
    pub ratio: f64,
    /// `A / ratio`, populated only when the test passes.
    pub orthogonal_part: Option<Mat>,
    /// Frobenius norm of `AᵀA − ratio²·I`.
    pub residual: f64,
}

impl AffineMap {
    /// Builds a validated affine map from its linear part and translation.
    pub fn new(linear: Mat, translation: Vec<f64>) -> Result<Self> {
        let m = linear.size();
        if m == 0 || m > MAX_DIM {
            return Err(Error::InvalidSystem(format!(
                "ambient dimension must be between 1 and {MAX_DIM}, got {m}"
            )));
        }
        if translation.len() != m {
            return Err(Error::InvalidSystem(format!(
                "translation length {} does not match a {m}x{m} linear part",
                translation.len()
            )));
        }
        if !linear.is_finite() || translation.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidSystem(
                "map entries must be finite".to_string(),
            ));
        }
        let det = linear.det();
        if det.abs() <= SINGULAR_DET {
            return Err(Error::SingularMap { index: 0, det });
        }
        Ok(Self {
            linear,
            translation,
            label: None,
        })
    }

    /// Convenience constructor from a row-major matrix slice.
    pub fn from_parts(matrix: &[f64], translation: &[f64]) -> Result<Self> {
        let m = translation.len();
        if matrix.len() != m * m {
            return Err(Error::InvalidSystem(format!(
                "matrix has {} entries but translation dimension {m} needs {}",
                matrix.len(),
                m * m
            )));
        }
        let linear = Mat::from_row_major(m, matrix).ok_or_else(|| {
            Error::InvalidSystem("matrix entries do not form a square matrix".to_string())
        })?;
        Self::new(linear, translation.to_vec())
    }

    /// Attaches a human-readable label (used in reports and exports).
    #[must_use]
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Ambient dimension m.
    pub fn dimension(&self) -> usize {
        self.linear.size()
    }

    /// The linear part A.
    pub fn linear(&self) -> &Mat {
        &self.linear
    }

    /// The translation b.
    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    /// The optional label.
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Evaluates `Ax + b`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.linear.mul_vec(x);
        for (yi, bi) in y.iter_mut().zip(&self.translation) {
            *yi += bi;
        }
        y
    }

    /// Evaluates `Ax + b` into a fixed-size buffer without allocating.
    ///
    /// Only the first `m` entries of `x` and `out` are used.
    pub fn apply_into(&self, x: &[f64; MAX_DIM], out: &mut [f64; MAX_DIM]) {
        let m = self.dimension();
        for i in 0..m {
            let mut acc = self.translation[i];
            for j in 0..m {
                acc += self.linear.get(i, j) * x[j];
            }
            out[i] = acc;
        }
    }

    /// The composite `outer ∘ inner`, i.e. `x ↦ outer(inner(x))`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.dimension() != inner.dimension() {
            return Err(Error::InvalidSystem(format!(
                "cannot compose maps of dimensions {} and {}",
                outer.dimension(),
                inner.dimension()
            )));
        }
        let linear = outer.linear.mul(&inner.linear);
        let mut translation = outer.linear.mul_vec(&inner.translation);
        for (t, b) in translation.iter_mut().zip(&outer.translation) {
            *t += b;
        }
        Self::new(linear, translation)
    }

    /// The n-fold composite `f ∘ f ∘ … ∘ f` (n ≥ 1).
    pub fn iterate(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSystem(
                "iterate count must be at least 1".to_string(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = Self::compose(self, &acc)?;
        }
        Ok(acc)
    }

    /// Determinant of the linear part.
    pub fn det(&self) -> f64 {
        self.linear.det()
    }

    /// Singular values of the linear part in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv = self.linear.singular_values();
        sv.reverse();
        sv
    }

    /// Operator (spectral) norm of the linear part.
    pub fn operator_norm(&self) -> f64 {
        self.linear.operator_norm()
    }

    /// The unique fixed point `z = (I − A)⁻¹ b`.
    ///
    /// Errors when `I − A` is singular (eigenvalue 1), in which case the map
    /// has no unique fixed point.
    pub fn fixed_point(&self) -> Result<Vec<f64>> {
        let m = self.dimension();
        let i_minus_a = Mat::identity(m).sub(&self.linear);
        i_minus_a.solve(&self.translation).ok_or_else(|| {
            Error::InvalidSystem(
                "map has no unique fixed point (I - A is singular)".to_string(),
            )
        })
    }

    /// Tests whether A is a similarity, i.e. a scalar multiple of an
    /// orthogonal matrix.
    ///
    /// The candidate ratio is `|det A|^{1/m}`; the test passes when
    /// `‖AᵀA − ratio²·I‖_F ≤ tol·max(1, ratio²)`. The ratio and residual are
    /// reported even on failure so callers can show how far off a map is.
    pub fn similarity_test(&self, tol: f64) -> SimilarityTest {
        let m = self.dimension();
        let ratio = self.det().abs().powf(1.0 / m as f64);
        let gram = self.linear.transpose().mul(&self.linear);
        let deviation = gram.sub(&Mat::identity(m).scale(ratio * ratio));
        let residual = deviation.frobenius_norm();
        let is_similarity = residual <= tol * f64::max(1.0, ratio * ratio);
        let orthogonal_part = if is_similarity {
            Some(self.linear.scale(1.0 / ratio))
        } else {
            None
        };
        SimilarityTest {
            is_similarity,
            ratio,
            orthogonal_part,
            residual,
        }
    }

    /// Shorthand for `similarity_test` at the default structural tolerance.
    pub fn similarity_default(&self) -> SimilarityTest {
        self.similarity_test(tolerances::STRUCTURAL)
    }

    /// True when the map is a similarity contraction (ratio < 1).
    pub fn is_similarity_contraction(&self) -> bool {
        let t = self.similarity_default();
        t.is_similarity && t.ratio < 1.0
    }
}
