//! Matrix-valued polynomials with complex coefficient matrices.

use crate::error::{Error, Result};
use crate::linalg::{is_hermitian, CMatrix, HERM_TOL};

/// `P(x) = Σ_k x^k C_k` with square complex coefficient matrices `C_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPoly {
    coeffs: Vec<CMatrix>,
}

impl MatrixPoly {
    pub fn new(coeffs: Vec<CMatrix>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a matrix polynomial needs at least one coefficient".into(),
            ));
        }
        let n = coeffs[0].nrows();
        for c in &coeffs {
            if c.nrows() != n || c.ncols() != n {
                return Err(Error::InvalidArgument(
                    "all coefficients must be square and of equal size".into(),
                ));
            }
        }
        Ok(Self { coeffs })
    }

    pub fn constant(m: CMatrix) -> Self {
        Self { coeffs: vec![m] }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coeffs: vec![CMatrix::zeros(dim, dim)],
        }
    }

    /// `x^k I`.
    pub fn monomial(dim: usize, k: usize) -> Self {
        let mut coeffs = vec![CMatrix::zeros(dim, dim); k + 1];
        coeffs[k] = CMatrix::identity(dim, dim);
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    /// Degree after trimming trailing (numerically) zero coefficients.
    pub fn degree(&self) -> usize {
        for k in (0..self.coeffs.len()).rev() {
            if self.coeffs[k].iter().any(|z| z.norm() > 0.0) {
                return k;
            }
        }
        0
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero matrix beyond the stored degree).
    pub fn coeff(&self, k: usize) -> CMatrix {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.dim(), self.dim()))
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, x: f64) -> CMatrix {
        let mut acc = self.coeffs.last().unwrap().clone();
        for k in (0..self.coeffs.len() - 1).rev() {
            acc = acc.map(|z| z * x) + &self.coeffs[k];
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidArgument("dimension mismatch".into()));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            coeffs.push(self.coeff(k) + other.coeff(k).map(|z| z * sign));
        }
        Ok(Self { coeffs })
    }

    /// `A · P(x)`, coefficientwise left multiplication.
    pub fn mul_matrix_left(&self, a: &CMatrix) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| a * c).collect(),
        }
    }

    /// `P(x) · A`, coefficientwise right multiplication.
    pub fn mul_matrix_right(&self, a: &CMatrix) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// `L · P(x) · R`.
    pub fn conjugate_by(&self, l: &CMatrix, r: &CMatrix) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| l * c * r).collect(),
        }
    }

    /// `x^k P(x)`.
    pub fn times_x_pow(&self, k: usize) -> Self {
        let dim = self.dim();
        let mut coeffs = vec![CMatrix::zeros(dim, dim); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Coefficientwise adjoint; equals `x ↦ P(x)*` for real `x`.
    pub fn adjoint(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.adjoint()).collect(),
        }
    }

    /// All coefficients Hermitian, hence `P(x)` Hermitian for every real `x`.
    pub fn is_hermitian(&self) -> bool {
        self.coeffs.iter().all(|c| is_hermitian(c, HERM_TOL))
    }

    /// Largest coefficient entry in absolute value.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(crate::linalg::max_abs_entry)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_horner_matches_direct() {
        // P(x) = [[1,0],[0,0]] + x [[0,1],[1,0]] + x² [[0,0],[0,2]]
        let c0 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let c1 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let c2 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let p = MatrixPoly::new(vec![c0, c1, c2]).unwrap();
        let x = 0.7;
        let v = p.eval(x);
        assert_abs_diff_eq!(v[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[(0, 1)].re, x, epsilon = 1e-15);
        assert_abs_diff_eq!(v[(1, 1)].re, 2.0 * x * x, epsilon = 1e-15);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn monomial_and_shift() {
        let m = MatrixPoly::monomial(2, 3);
        assert_eq!(m.degree(), 3);
        let v = m.eval(2.0);
        assert_abs_diff_eq!(v[(0, 0)].re, 8.0, epsilon = 1e-15);
        let shifted = MatrixPoly::monomial(2, 1).times_x_pow(2);
        assert_eq!(shifted.degree(), 3);
    }

    #[test]
    fn degree_trims_zero_tail() {
        let z = CMatrix::zeros(2, 2);
        let p = MatrixPoly::new(vec![CMatrix::identity(2, 2), z.clone(), z]).unwrap();
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn adjoint_matches_pointwise() {
        let c0 = CMatrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.0, 0.0)]);
        let p = MatrixPoly::new(vec![c0]).unwrap();
        let x = 1.3;
        assert_eq!(p.adjoint().eval(x), p.eval(x).adjoint());
    }
}
