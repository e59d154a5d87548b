//! Tridiagonal matrices and the Thomas algorithm.

use crate::error::SolverError;

/// Row-wise tridiagonal matrix. `lower[i]` multiplies `x[i-1]` and
/// `upper[i]` multiplies `x[i+1]`; `lower[0]` and `upper[n-1]` are unused
/// and kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.lower[i] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.upper[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// `y = A x` for a matrix with zero row sums, evaluated as
    /// `lower (x[i-1] - x[i]) + upper (x[i+1] - x[i])` so that constants map
    /// to exactly zero. Rows with zero off-diagonals give zero.
    pub fn apply_differences(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = 0.0;
            if i > 0 {
                acc += self.lower[i] * (x[i - 1] - x[i]);
            }
            if i + 1 < n {
                acc += self.upper[i] * (x[i + 1] - x[i]);
            }
            y[i] = acc;
        }
    }

    /// `I + s A`.
    pub fn shifted_identity(&self, s: f64) -> Self {
        Self {
            lower: self.lower.iter().map(|v| s * v).collect(),
            diag: self.diag.iter().map(|v| 1.0 + s * v).collect(),
            upper: self.upper.iter().map(|v| s * v).collect(),
        }
    }

    /// Z-matrix with positive diagonal and nonnegative row sums.
    ///
    /// Such a matrix is a nonsingular M-matrix when it is also irreducibly
    /// (or strictly) diagonally dominant; its inverse is then entrywise
    /// nonnegative.
    pub fn has_m_matrix_signs(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let off_ok = (i == 0 || self.lower[i] <= 0.0) && (i + 1 == n || self.upper[i] <= 0.0);
            let sum =
                self.diag[i] + if i > 0 { self.lower[i] } else { 0.0 } + if i + 1 < n { self.upper[i] } else { 0.0 };
            self.diag[i] > 0.0 && off_ok && sum >= -1e-12 * self.diag[i]
        })
    }

    /// LU factorization without pivoting.
    pub fn factor(&self) -> Result<TridiagonalLu, SolverError> {
        let n = self.len();
        let mut pivots = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut prev = 0.0;
        for i in 0..n {
            let p = if i == 0 {
                self.diag[0]
            } else {
                mult[i] = self.lower[i] / prev;
                self.diag[i] - mult[i] * self.upper[i - 1]
            };
            if p == 0.0 || !p.is_finite() {
                return Err(SolverError::Singular { row: i });
            }
            pivots[i] = p;
            prev = p;
        }
        Ok(TridiagonalLu {
            upper: self.upper.clone(),
            pivots,
            mult,
        })
    }
}

/// Factored form `A = L U` of a [`Tridiagonal`] matrix.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    upper: Vec<f64>,
    pivots: Vec<f64>,
    mult: Vec<f64>,
}

impl TridiagonalLu {
    /// Overwrites `rhs` with the solution of `A x = rhs`.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.pivots.len();
        assert_eq!(rhs.len(), n);
        for i in 1..n {
            rhs[i] -= self.mult[i] * rhs[i - 1];
        }
        rhs[n - 1] /= self.pivots[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.upper[i] * rhs[i + 1]) / self.pivots[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn solve_inverts_diagonally_dominant_systems(
            n in 2usize..40,
            seed in prop::collection::vec(-1.0f64..1.0, 160),
        ) {
            let mut a = Tridiagonal::zeros(n);
            for i in 0..n {
                a.lower[i] = if i > 0 { seed[i] } else { 0.0 };
                a.upper[i] = if i + 1 < n { seed[40 + i] } else { 0.0 };
                a.diag[i] = 2.5 + seed[80 + i];
            }
            let x: Vec<f64> = (0..n).map(|i| seed[120 + i]).collect();
            let mut b = vec![0.0; n];
            a.apply(&x, &mut b);
            a.factor().unwrap().solve_in_place(&mut b);
            for (got, want) in b.iter().zip(&x) {
                prop_assert!((got - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let mut a = Tridiagonal::zeros(3);
        a.diag = vec![1.0, 1.0, 1.0];
        a.upper[0] = 1.0;
        a.lower[1] = 1.0;
        assert!(matches!(a.factor(), Err(SolverError::Singular { row: 1 })));
    }
}
