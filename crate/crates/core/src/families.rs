//! Built-in weight families and their exact reference data.
//!
//! Three families are provided: a 2×2 polynomial weight on `[0, 1]` whose
//! reducibility is non-unitary, the matrix-valued Gegenbauer weights on
//! `[-1, 1]` with their closed-form squared norms, and a q-deformed family
//! for which only the closed-form norm sequence is available (the weight
//! itself is not constructed).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::measure::{BaseMeasure, GammaLabel, GammaSequence, MatrixWeight};
use crate::poly::MatrixPoly;
use crate::special::{factorial, gegenbauer_coeffs, ln_gamma, pochhammer, q_pochhammer_pair};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Parameters of the matrix Gegenbauer family: a half-integer `ℓ`
/// (stored as `2ℓ ∈ ℕ`, so the matrix size is `N = 2ℓ+1`) and `ν > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParams {
    two_ell: usize,
    nu: f64,
}

impl GegenbauerParams {
    pub fn new(ell: f64, nu: f64) -> Result<Self> {
        let two_ell = (2.0 * ell).round();
        if !(ell.is_finite() && ell >= 0.0) || (2.0 * ell - two_ell).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "ℓ must be a non-negative half-integer, got {ell}"
            )));
        }
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidArgument(format!("ν must be positive, got {nu}")));
        }
        Ok(Self {
            two_ell: two_ell as usize,
            nu,
        })
    }

    pub fn ell(&self) -> f64 {
        self.two_ell as f64 / 2.0
    }

    pub fn two_ell(&self) -> usize {
        self.two_ell
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Matrix size `N = 2ℓ + 1`.
    pub fn size(&self) -> usize {
        self.two_ell + 1
    }
}

/// Parameters of the q-deformed family: half-integer `ℓ` and `0 < q < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParams {
    two_ell: usize,
    q: f64,
}

impl QParams {
    pub fn new(ell: f64, q: f64) -> Result<Self> {
        let two_ell = (2.0 * ell).round();
        if !(ell.is_finite() && ell >= 0.0) || (2.0 * ell - two_ell).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "ℓ must be a non-negative half-integer, got {ell}"
            )));
        }
        if !(q.is_finite() && q > 0.0 && q < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "q must lie in (0, 1), got {q}"
            )));
        }
        Ok(Self {
            two_ell: two_ell as usize,
            q,
        })
    }

    pub fn ell(&self) -> f64 {
        self.two_ell as f64 / 2.0
    }

    pub fn two_ell(&self) -> usize {
        self.two_ell
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn size(&self) -> usize {
        self.two_ell + 1
    }
}

/// The expansion coefficient of entry `(m, n)` (for `n ≥ m`) of the matrix
/// Gegenbauer weight in the Gegenbauer polynomial basis.
fn alpha_coeff(params: &GegenbauerParams, m: usize, n: usize, t: usize) -> f64 {
    let two_ell = params.two_ell;
    let nu = params.nu;
    // the lower summation bound keeps every factorial argument
    // non-negative; asserted rather than assumed
    assert!(m <= n && n <= two_ell, "entry indices out of range");
    assert!(
        t >= (n + m).saturating_sub(two_ell) && t <= m,
        "expansion index t = {t} outside [max(0, n+m-2ℓ), m]"
    );
    let (mf, nf) = (m as f64, n as f64);
    let tf = t as f64;
    let deg = m + n - 2 * t;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * factorial(n) * factorial(m) * factorial(deg)
        / (factorial(t) * pochhammer(2.0 * nu, deg) * pochhammer(nu, n + m - t))
        * pochhammer(nu, n - t) * pochhammer(nu, m - t)
        / (factorial(n - t) * factorial(m - t))
        * (nf + mf - 2.0 * tf + nu)
        / (nf + mf - tf + nu)
        * factorial(two_ell - m)
        * pochhammer(nf - two_ell as f64, m - t)
        * pochhammer(-(two_ell as f64) - nu, t)
        * (two_ell as f64 + nu)
        / factorial(two_ell)
}

/// The `(2ℓ+1)×(2ℓ+1)` matrix Gegenbauer weight over the base
/// `(1-x²)^{ν-1/2} dx` on `[-1, 1]`. Entries are real polynomials; the
/// lower triangle is the mirror of the upper one.
pub fn gegenbauer_weight(params: &GegenbauerParams) -> Result<MatrixWeight> {
    let size = params.size();
    let two_ell = params.two_ell;
    // entry (m, n) has degree max(m+n-2t) ≤ 2ℓ on the admissible range
    let max_deg = two_ell;
    let mut coeffs = vec![CMatrix::zeros(size, size); max_deg + 1];
    for m in 0..size {
        for n in m..size {
            let t_min = (n + m).saturating_sub(two_ell);
            let mut entry = vec![0.0f64; max_deg + 1];
            for t in t_min..=m {
                let deg = m + n - 2 * t;
                let alpha = alpha_coeff(params, m, n, t);
                for (p, &c) in gegenbauer_coeffs(params.nu, deg).iter().enumerate() {
                    entry[p] += alpha * c;
                }
            }
            for (p, &c) in entry.iter().enumerate() {
                coeffs[p][(m, n)] = real(c);
                if n != m {
                    coeffs[p][(n, m)] = real(c);
                }
            }
        }
    }
    MatrixWeight::new(
        MatrixPoly::new(coeffs)?,
        BaseMeasure::Gegenbauer { nu: params.nu },
    )
}

/// Closed-form squared norm `H_n` of the monic matrix Gegenbauer family:
/// a strictly positive diagonal matrix.
pub fn gegenbauer_norms_closed(params: &GegenbauerParams, n: usize) -> CMatrix {
    let size = params.size();
    let two_ell = params.two_ell as f64;
    let nu = params.nu;
    let ell = params.ell();
    let nf = n as f64;
    let prefactor = std::f64::consts::PI.sqrt() * (ln_gamma(nu + 0.5) - ln_gamma(nu + 1.0)).exp()
        * nu * (two_ell + nu + nf)
        / (nu + nf);
    let mut h = CMatrix::zeros(size, size);
    for k in 0..size {
        let kf = k as f64;
        let val = prefactor
            * factorial(n) * pochhammer(ell + 0.5 + nu, n) * pochhammer(two_ell + nu, n)
            / (pochhammer(nu + kf, n)
                * pochhammer(two_ell + 2.0 * nu + nf, n)
                * pochhammer(two_ell + nu - kf, n))
            * factorial(k) * pochhammer(ell + nu, n) * factorial(params.two_ell - k)
            * pochhammer(nf + nu + 1.0, params.two_ell)
            / (pochhammer(two_ell + nu + 1.0, n)
                * factorial(params.two_ell)
                * pochhammer(nf + nu + 1.0, k)
                * pochhammer(nf + nu + 1.0, params.two_ell - k));
        h[(k, k)] = real(val);
    }
    h
}

/// Closed-form squared norm `H_n` of the q-deformed family: a strictly
/// positive diagonal matrix.
pub fn q_norms_closed(params: &QParams, n: usize) -> Result<CMatrix> {
    let size = params.size();
    let q = params.q;
    let two_ell = params.two_ell as i32;
    let q2 = q * q;
    let numerator = q.powi(-two_ell)
        * 0.25f64.powi(n as i32)
        * q_pochhammer_pair(q2, q.powi(2 * two_ell + 4), q2, n)?.powi(2)
        * (1.0 - q.powi(2 * two_ell + 2)).powi(2);
    let mut h = CMatrix::zeros(size, size);
    for i in 0..size {
        let ii = i as i32;
        let denominator = q_pochhammer_pair(
            q.powi(2 * ii + 2),
            q.powi(2 * two_ell - 2 * ii + 2),
            q2,
            n,
        )?
        .powi(2)
            * (1.0 - q.powi(2 * n as i32 + 2 * ii + 2))
            * (1.0 - q.powi(2 * two_ell - 2 * ii + 2 * n as i32 + 2));
        h[(i, i)] = real(numerator / denominator);
    }
    Ok(h)
}

/// The first `count` closed-form norms of the q-deformed family as a
/// Γ-sequence. The weight itself is not modeled; downstream analyses are
/// restricted to the norm sequence.
pub fn q_norm_sequence(params: &QParams, count: usize) -> Result<GammaSequence> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    let mats = (0..count)
        .map(|n| q_norms_closed(params, n))
        .collect::<Result<Vec<_>>>()?;
    GammaSequence::new(GammaLabel::Norms, mats)
}

/// Exact reference data for [`tirao_variant_weight`], printed constants in
/// double precision.
#[derive(Debug, Clone)]
pub struct TiraoReference {
    /// Zeroth moment `M₀`.
    pub m0: CMatrix,
    /// Positive definite square root `S` of `M₀`.
    pub s: CMatrix,
    /// The non-scalar generator `[[1, -√6/3], [0, 0]]` of the symmetry space.
    pub sym_generator: CMatrix,
    /// The Hermitian generator `[[√6/6, 1], [1, 0]]` of the `M₀`-commutant.
    pub commutant_generator: CMatrix,
    /// The matrix `K` with `iK` spanning the non-Hermitian direction of the
    /// `M₀`-star-intertwiner space.
    pub skew_generator: CMatrix,
    /// `E = S⁻¹ (commutant_generator) S`, a fixed point of the conjugation.
    pub e: CMatrix,
    /// `F = S⁻¹ (sym_generator) S`.
    pub f: CMatrix,
    /// `G = i S⁻¹ (skew_generator) S`.
    pub g: CMatrix,
    /// Coefficients of the normalized weight `S⁻¹ W(x) S⁻¹` (x² and x).
    pub normalized_coeff_x2: CMatrix,
    pub normalized_coeff_x1: CMatrix,
    /// Expected dimensions: (dim_ℝ 𝒜, dim_ℂ A, dim_ℝ 𝒜^{M₀}, dim_ℂ A^{M₀}).
    pub expected_dims: (usize, usize, usize, usize),
}

/// The 2×2 weight `L diag(x², x) L^T` on `[0, 1]` with
/// `L = [[1, √6/3], [0, 1]]`, together with its exact reference data.
///
/// Expanded form: `[[x² + 2x/3, √6 x/3], [√6 x/3, x]]`.
pub fn tirao_variant_weight() -> (MatrixWeight, TiraoReference) {
    let s6 = 6.0f64.sqrt();
    let dim = 2;
    let zero = CMatrix::zeros(dim, dim);
    let c1 = CMatrix::from_row_slice(
        dim,
        dim,
        &[real(2.0 / 3.0), real(s6 / 3.0), real(s6 / 3.0), real(1.0)],
    );
    let c2 = CMatrix::from_row_slice(dim, dim, &[real(1.0), real(0.0), real(0.0), real(0.0)]);
    let weight = MatrixWeight::new(
        MatrixPoly::new(vec![zero, c1, c2]).unwrap(),
        BaseMeasure::Lebesgue { a: 0.0, b: 1.0 },
    )
    .unwrap();

    let m0 = CMatrix::from_row_slice(
        dim,
        dim,
        &[real(2.0 / 3.0), real(s6 / 6.0), real(s6 / 6.0), real(0.5)],
    );
    let s = CMatrix::from_row_slice(
        dim,
        dim,
        &[
            real((s6 + 9.0) / 15.0),
            real((3.0 * s6 - 3.0) / 15.0),
            real((3.0 * s6 - 3.0) / 15.0),
            real((1.5 * s6 + 6.0) / 15.0),
        ],
    );
    let sym_generator = CMatrix::from_row_slice(
        dim,
        dim,
        &[real(1.0), real(-s6 / 3.0), real(0.0), real(0.0)],
    );
    let commutant_generator = CMatrix::from_row_slice(
        dim,
        dim,
        &[real(s6 / 6.0), real(1.0), real(1.0), real(0.0)],
    );
    let skew_generator = CMatrix::from_row_slice(
        dim,
        dim,
        &[real(1.0), real(-2.0 * s6 / 3.0), real(s6 / 2.0), real(-1.0)],
    );
    let e = commutant_generator.clone();
    let f = CMatrix::from_row_slice(
        dim,
        dim,
        &[
            real((11.0 + 4.0 * s6) / 25.0),
            real(-(2.0 + 3.0 * s6) / 25.0),
            real(-(2.0 + 3.0 * s6) / 25.0),
            real((14.0 - 4.0 * s6) / 25.0),
        ],
    );
    let g = CMatrix::from_row_slice(
        dim,
        dim,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    );
    let normalized_coeff_x2 = CMatrix::from_row_slice(
        dim,
        dim,
        &[
            real((33.0 + 12.0 * s6) / 25.0),
            real(-(6.0 + 9.0 * s6) / 25.0),
            real(-(6.0 + 9.0 * s6) / 25.0),
            real((42.0 - 12.0 * s6) / 25.0),
        ],
    );
    let normalized_coeff_x1 = CMatrix::from_row_slice(
        dim,
        dim,
        &[
            real((28.0 - 8.0 * s6) / 25.0),
            real((4.0 + 6.0 * s6) / 25.0),
            real((4.0 + 6.0 * s6) / 25.0),
            real((22.0 + 8.0 * s6) / 25.0),
        ],
    );

    let reference = TiraoReference {
        m0,
        s,
        sym_generator,
        commutant_generator,
        skew_generator,
        e,
        f,
        g,
        normalized_coeff_x2,
        normalized_coeff_x1,
        expected_dims: (2, 1, 4, 2),
    };
    (weight, reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalue_range, flip_matrix, hermitian_eig};
    use approx::assert_abs_diff_eq;

    #[test]
    fn gegenbauer_params_validate() {
        assert!(GegenbauerParams::new(0.5, 1.0).is_ok());
        assert!(GegenbauerParams::new(0.3, 1.0).is_err());
        assert!(GegenbauerParams::new(1.0, 0.0).is_err());
        assert!(QParams::new(1.0, 1.0).is_err());
        assert!(QParams::new(1.0, 0.5).is_ok());
        assert_eq!(GegenbauerParams::new(1.5, 1.0).unwrap().size(), 4);
    }

    #[test]
    fn weight_corner_entry_is_constant() {
        // entry (0,0) equals 2ℓ + ν identically in x
        for &(ell, nu) in &[(0.5, 1.0), (1.0, 0.5), (1.5, 2.3), (2.0, 1.0)] {
            let p = GegenbauerParams::new(ell, nu).unwrap();
            let w = gegenbauer_weight(&p).unwrap();
            for &x in &[-0.7, 0.0, 0.4] {
                let v = w.eval(x);
                assert_abs_diff_eq!(v[(0, 0)].re, 2.0 * ell + nu, epsilon = 1e-12);
                assert_abs_diff_eq!(v[(0, 0)].im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn smallest_weight_in_closed_form() {
        // ℓ = 1/2 collapses to (1+ν) [[1, x], [x, 1]]
        let p = GegenbauerParams::new(0.5, 1.3).unwrap();
        let w = gegenbauer_weight(&p).unwrap();
        for &x in &[-0.5, 0.2, 0.9] {
            let v = w.eval(x);
            assert_abs_diff_eq!(v[(0, 0)].re, 2.3, epsilon = 1e-12);
            assert_abs_diff_eq!(v[(1, 1)].re, 2.3, epsilon = 1e-12);
            assert_abs_diff_eq!(v[(0, 1)].re, 2.3 * x, epsilon = 1e-12);
            assert_abs_diff_eq!(v[(1, 0)].re, 2.3 * x, epsilon = 1e-12);
        }
    }

    #[test]
    fn weight_positive_definite_inside() {
        for &(ell, nu) in &[(0.5, 0.5), (1.0, 1.0), (1.5, 2.3), (2.0, 0.5)] {
            let p = GegenbauerParams::new(ell, nu).unwrap();
            let w = gegenbauer_weight(&p).unwrap();
            for i in 0..50 {
                let x = (std::f64::consts::PI * (2 * i + 1) as f64 / 100.0).cos();
                let (lo, _) = eigenvalue_range(&w.eval(x)).unwrap();
                assert!(lo > 0.0, "ℓ={ell} ν={nu} x={x}: min eigenvalue {lo}");
            }
        }
    }

    #[test]
    fn weight_commutes_with_flip_pointwise() {
        for &(ell, nu) in &[(0.5, 1.0), (1.0, 2.3), (1.5, 0.5)] {
            let p = GegenbauerParams::new(ell, nu).unwrap();
            let w = gegenbauer_weight(&p).unwrap();
            let j = flip_matrix(p.size());
            for &x in &[-0.8, -0.1, 0.3, 0.77] {
                let v = w.eval(x);
                let r = (&j * &v * &j - &v).norm();
                assert!(r < 1e-10, "ℓ={ell} ν={nu} x={x}: ‖JWJ - W‖ = {r}");
            }
        }
    }

    #[test]
    fn entry_parity_under_reflection() {
        // entry (m, n) mixes Gegenbauer polynomials of parity m+n, so
        // W(-x) = D W(x) D with D = diag((-1)^m); checked at x = 0.3
        for &(ell, nu) in &[(0.5, 1.0), (1.0, 1.0), (1.5, 2.3)] {
            let p = GegenbauerParams::new(ell, nu).unwrap();
            let w = gegenbauer_weight(&p).unwrap();
            let size = p.size();
            let d = CMatrix::from_fn(size, size, |i, j| {
                if i == j {
                    real(if i % 2 == 0 { 1.0 } else { -1.0 })
                } else {
                    real(0.0)
                }
            });
            let x = 0.3;
            let lhs = w.eval(-x);
            let rhs = &d * w.eval(x) * &d;
            assert!((lhs - rhs).norm() < 1e-12, "ℓ={ell} ν={nu}");
        }
    }

    #[test]
    fn closed_norm_smallest_case_is_pi() {
        let p = GegenbauerParams::new(0.5, 1.0).unwrap();
        let h0 = gegenbauer_norms_closed(&p, 0);
        assert_abs_diff_eq!(h0[(0, 0)].re, std::f64::consts::PI, epsilon = 1e-12);
        assert_abs_diff_eq!(h0[(1, 1)].re, std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn closed_norms_palindromic_and_positive() {
        for &(ell, nu) in &[(0.5, 0.5), (1.0, 1.0), (1.5, 2.3), (2.0, 1.0)] {
            let p = GegenbauerParams::new(ell, nu).unwrap();
            for n in 0..=4 {
                let h = gegenbauer_norms_closed(&p, n);
                let size = p.size();
                for k in 0..size {
                    let a = h[(k, k)].re;
                    let b = h[(size - 1 - k, size - 1 - k)].re;
                    assert!(a > 0.0);
                    assert!((a - b).abs() <= 1e-12 * a.abs(), "palindrome at k={k}");
                }
            }
        }
    }

    #[test]
    fn q_norm_smallest_case_closed_form() {
        // ℓ = 1/2, n = 0, entry (0,0) reduces to q⁻¹(1 + q²)
        for &q in &[0.3, 0.5, 0.7] {
            let p = QParams::new(0.5, q).unwrap();
            let h0 = q_norms_closed(&p, 0).unwrap();
            assert_abs_diff_eq!(h0[(0, 0)].re, (1.0 + q * q) / q, epsilon = 1e-12);
        }
    }

    #[test]
    fn q_norms_palindromic_positive_diagonal() {
        for &ell in &[0.5, 1.0, 2.0] {
            for &q in &[0.3, 0.7] {
                let p = QParams::new(ell, q).unwrap();
                for n in 0..=4 {
                    let h = q_norms_closed(&p, n).unwrap();
                    let size = p.size();
                    for i in 0..size {
                        let a = h[(i, i)].re;
                        assert!(a > 0.0);
                        let b = h[(size - 1 - i, size - 1 - i)].re;
                        assert!((a - b).abs() <= 1e-12 * a.abs());
                        for j in 0..size {
                            if i != j {
                                assert_eq!(h[(i, j)].norm(), 0.0);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn q_norm_sequence_is_valid_gamma() {
        let p = QParams::new(1.0, 0.7).unwrap();
        let seq = q_norm_sequence(&p, 5).unwrap();
        assert_eq!(seq.len(), 5);
        assert_eq!(seq.dim(), 3);
    }

    #[test]
    fn tirao_weight_matches_reference_m0() {
        let (w, reference) = tirao_variant_weight();
        let m0 = w.moment(0).unwrap();
        assert!((m0.clone() - &reference.m0).norm() < 1e-13);
        // second moment [[11/30, √6/12], [√6/12, 1/4]]
        let s6 = 6.0f64.sqrt();
        let m2 = w.moment(2).unwrap();
        assert_abs_diff_eq!(m2[(0, 0)].re, 11.0 / 30.0, epsilon = 1e-13);
        assert_abs_diff_eq!(m2[(0, 1)].re, s6 / 12.0, epsilon = 1e-13);
        assert_abs_diff_eq!(m2[(1, 1)].re, 0.25, epsilon = 1e-13);
    }

    #[test]
    fn tirao_reference_s_is_sqrt_of_m0() {
        let (_, reference) = tirao_variant_weight();
        let s2 = &reference.s * &reference.s;
        assert!((s2 - &reference.m0).norm() < 1e-13);
        let eig = hermitian_eig(&reference.s).unwrap();
        assert!(eig.values.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn tirao_reference_conjugations() {
        // E is fixed by S-conjugation, F and G are the conjugated
        // generators; everything is expressible in double precision
        let (_, r) = tirao_variant_weight();
        let s_inv = r.s.clone().try_inverse().unwrap();
        let e = &s_inv * &r.commutant_generator * &r.s;
        assert!((e - &r.e).norm() < 1e-12);
        let f = &s_inv * &r.sym_generator * &r.s;
        assert!((f - &r.f).norm() < 1e-12);
        let g = (&s_inv * &r.skew_generator * &r.s).map(|z| z * Complex64::new(0.0, 1.0));
        assert!((g - &r.g).norm() < 1e-12);
    }

    #[test]
    fn tirao_factorization_consistency() {
        // W(x) = L diag(x², x) L^T with L = [[1, √6/3], [0, 1]]
        let s6 = 6.0f64.sqrt();
        let (w, _) = tirao_variant_weight();
        let l = CMatrix::from_row_slice(2, 2, &[real(1.0), real(s6 / 3.0), real(0.0), real(1.0)]);
        for &x in &[0.2, 0.5, 0.9] {
            let d = CMatrix::from_row_slice(2, 2, &[real(x * x), real(0.0), real(0.0), real(x)]);
            let expect = &l * d * l.adjoint();
            assert!((w.eval(x) - expect).norm() < 1e-14);
        }
        assert_eq!(w.poly_degree(), 2);
        assert!(w.validate().is_ok());
    }

    #[test]
    fn tirao_normalized_weight_reference_coeffs() {
        let (w, r) = tirao_variant_weight();
        let s_inv = r.s.clone().try_inverse().unwrap();
        let normalized = w.conjugated(&s_inv).unwrap();
        let x = 0.5;
        let expect =
            r.normalized_coeff_x2.map(|z| z * (x * x)) + r.normalized_coeff_x1.map(|z| z * x);
        assert!((normalized.eval(x) - expect).norm() < 1e-10);
    }

    #[test]
    fn identity_weight_norms_are_unitless() {
        let p = GegenbauerParams::new(0.0, 1.0).unwrap();
        let w = gegenbauer_weight(&p).unwrap();
        assert_eq!(w.dim(), 1);
        // scalar case: W ≡ ν = 1 constant
        assert_abs_diff_eq!(w.eval(0.3)[(0, 0)].re, 1.0, epsilon = 1e-14);
    }
}
