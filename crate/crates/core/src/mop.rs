//! Monic matrix-valued orthogonal polynomials.
//!
//! The primary construction solves the block-Hankel moment equations
//! `Σ_{k<n} P^n_k M_{k+m} = -M_{n+m}` for `m < n`; the norms follow as
//! `H_n = Σ_{k≤n} P^n_k M_{k+n}` and the three-term recurrence
//! coefficients by comparing polynomial coefficients. A quadrature
//! Gram-Schmidt construction of the same family serves as an independent
//! cross-check.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, hermitize, CMatrix};
use crate::measure::{GammaLabel, GammaSequence, MatrixWeight};
use crate::poly::MatrixPoly;

/// Condition-number cap on the block-Hankel moment matrix.
pub const HANKEL_COND_CAP: f64 = 1e12;
/// Default and maximal construction degree.
pub const DEFAULT_MAX_DEGREE: usize = 6;
pub const MAX_DEGREE_CAP: usize = 20;

/// Monic family data up to a maximal degree: polynomials `P_0 … P_{n_max}`,
/// squared norms `H_0 … H_{n_max}`, recurrence coefficients
/// `B_0 … B_{n_max-1}` and `C_1 … C_{n_max-1}` for
/// `x P_n = P_{n+1} + B_n P_n + C_n P_{n-1}`.
#[derive(Debug, Clone)]
pub struct MopData {
    polys: Vec<MatrixPoly>,
    norms: Vec<CMatrix>,
    b: Vec<CMatrix>,
    c: Vec<CMatrix>,
}

impl MopData {
    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> &MatrixPoly {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[MatrixPoly] {
        &self.polys
    }

    pub fn norm(&self, n: usize) -> &CMatrix {
        &self.norms[n]
    }

    pub fn norms(&self) -> &[CMatrix] {
        &self.norms
    }

    /// `B_n`, defined for `n < n_max`.
    pub fn b(&self, n: usize) -> &CMatrix {
        &self.b[n]
    }

    pub fn bs(&self) -> &[CMatrix] {
        &self.b
    }

    /// `C_n`, defined for `1 ≤ n ≤ n_max - 1`.
    pub fn c(&self, n: usize) -> &CMatrix {
        &self.c[n - 1]
    }

    pub fn cs(&self) -> &[CMatrix] {
        &self.c
    }
}

/// A squared norm must be positive definite relative to its own spectrum
/// (legitimate norms shrink fast with the degree) and must not collapse
/// outright against the scale of `H_0`.
fn validate_norm(h: &CMatrix, h0_scale: f64, n: usize) -> Result<()> {
    let eig = hermitian_eig(h)?;
    let lo = eig.values[0];
    let hi = *eig.values.last().unwrap();
    if hi <= 3e-14 * h0_scale {
        return Err(Error::Inconsistent(format!(
            "moment problem degenerate: squared norm H_{n} collapsed to ~{hi:.3e}"
        )));
    }
    if lo <= 1e-10 * hi {
        return Err(Error::Inconsistent(format!(
            "squared norm H_{n} lost positive definiteness (min eigenvalue {lo:.3e})"
        )));
    }
    Ok(())
}

fn check_degree(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(Error::InvalidArgument(
            "the maximal degree must be at least 1".into(),
        ));
    }
    if n_max > MAX_DEGREE_CAP {
        return Err(Error::ResourceLimit(format!(
            "maximal degree {n_max} exceeds cap {MAX_DEGREE_CAP}"
        )));
    }
    Ok(())
}

/// Solves the block-Hankel system for `P_n` given moments `M_0 … M_{2n-1}`.
fn hankel_coefficients(moments: &[CMatrix], n: usize, dim: usize) -> Result<Vec<CMatrix>> {
    let size = n * dim;
    let mut h = CMatrix::zeros(size, size);
    for k in 0..n {
        for m in 0..n {
            h.view_mut((k * dim, m * dim), (dim, dim))
                .copy_from(&moments[k + m]);
        }
    }
    // the Hankel block matrix is the Gram matrix of the monomials, so it
    // is Hermitian positive definite; its spectrum provides the
    // conditioning diagnostic
    let eig = hermitian_eig(&hermitize(&h))?;
    let lo = eig.values[0];
    let hi = *eig.values.last().unwrap();
    if lo <= 0.0 {
        return Err(Error::IllConditioned {
            degree: n,
            cond: f64::INFINITY,
            cap: HANKEL_COND_CAP,
        });
    }
    let cond = hi / lo;
    if cond > HANKEL_COND_CAP {
        return Err(Error::IllConditioned {
            degree: n,
            cond,
            cap: HANKEL_COND_CAP,
        });
    }

    // X H = -[M_n … M_{2n-1}]  ⇔  H X* = -[M_n; …; M_{2n-1}] (H Hermitian)
    let mut rhs = CMatrix::zeros(size, dim);
    for m in 0..n {
        rhs.view_mut((m * dim, 0), (dim, dim))
            .copy_from(&moments[n + m].map(|z| -z));
    }
    let lu = h.lu();
    let y = lu.solve(&rhs).ok_or(Error::IllConditioned {
        degree: n,
        cond,
        cap: HANKEL_COND_CAP,
    })?;
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        let block: CMatrix = y.view((k * dim, 0), (dim, dim)).into_owned();
        coeffs.push(block.adjoint());
    }
    Ok(coeffs)
}

fn recurrence_from_polys(
    polys: &[MatrixPoly],
    norms: &[CMatrix],
    dim: usize,
) -> Result<(Vec<CMatrix>, Vec<CMatrix>)> {
    let n_max = polys.len() - 1;
    // B_n = P^n_{n-1} - P^{n+1}_n (with P^0_{-1} = 0)
    let mut b = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let low = if n == 0 {
            CMatrix::zeros(dim, dim)
        } else {
            polys[n].coeff(n - 1)
        };
        b.push(low - polys[n + 1].coeff(n));
    }
    // C_n = H_n H_{n-1}^{-1}
    let mut c = Vec::with_capacity(n_max.saturating_sub(1));
    for n in 1..n_max {
        let inv = norms[n - 1].clone().try_inverse().ok_or_else(|| {
            Error::Inconsistent(format!("squared norm H_{} is numerically singular", n - 1))
        })?;
        c.push(&norms[n] * inv);
    }
    Ok((b, c))
}

/// Monic family via the block-Hankel moment equations.
///
/// Needs the moments `M_0 … M_{2 n_max}`; refuses when the Hankel system's
/// condition number exceeds [`HANKEL_COND_CAP`].
pub fn monic_mops(w: &MatrixWeight, n_max: usize) -> Result<MopData> {
    check_degree(n_max)?;
    let dim = w.dim();
    let moments: Vec<CMatrix> = (0..=2 * n_max)
        .map(|n| w.moment(n))
        .collect::<Result<Vec<_>>>()?;

    let mut polys = vec![MatrixPoly::monomial(dim, 0)];
    let mut norms = vec![moments[0].clone()];
    let h0_scale = hermitian_eig(&moments[0])?.values.last().copied().unwrap_or(1.0);
    for n in 1..=n_max {
        let mut coeffs = hankel_coefficients(&moments, n, dim)?;
        coeffs.push(CMatrix::identity(dim, dim));
        let poly = MatrixPoly::new(coeffs)?;
        // H_n = Σ_{k≤n} P^n_k M_{k+n}
        let mut h = CMatrix::zeros(dim, dim);
        for k in 0..=n {
            h += poly.coeff(k) * &moments[k + n];
        }
        let h = hermitize(&h);
        validate_norm(&h, h0_scale, n)?;
        polys.push(poly);
        norms.push(h);
    }
    let (b, c) = recurrence_from_polys(&polys, &norms, dim)?;
    Ok(MopData { polys, norms, b, c })
}

/// Independent construction: Gram-Schmidt on quadrature inner products.
/// Slower and numerically distinct from the Hankel route; used as the
/// cross-check oracle.
pub fn monic_mops_gram_schmidt(w: &MatrixWeight, n_max: usize) -> Result<MopData> {
    check_degree(n_max)?;
    let dim = w.dim();
    let mut polys: Vec<MatrixPoly> = vec![MatrixPoly::monomial(dim, 0)];
    let mut norms: Vec<CMatrix> = vec![w.inner_product(&polys[0], &polys[0])?];
    let h0_scale = hermitian_eig(&norms[0])?.values.last().copied().unwrap_or(1.0);
    for n in 1..=n_max {
        let xn = MatrixPoly::monomial(dim, n);
        let mut p = xn.clone();
        for k in 0..n {
            let inv = norms[k].clone().try_inverse().ok_or_else(|| {
                Error::Inconsistent(format!("squared norm H_{k} is numerically singular"))
            })?;
            let coeff = w.inner_product(&xn, &polys[k])? * inv;
            p = p.sub(&polys[k].mul_matrix_left(&coeff))?;
        }
        let h = hermitize(&w.inner_product(&p, &p)?);
        validate_norm(&h, h0_scale, n)?;
        polys.push(p);
        norms.push(h);
    }
    let (b, c) = recurrence_from_polys(&polys, &norms, dim)?;
    Ok(MopData { polys, norms, b, c })
}

/// Worst residual of the three-term recurrence
/// `x P_n - P_{n+1} - B_n P_n - C_n P_{n-1}`, coefficientwise, over all
/// degrees covered by the data.
pub fn recurrence_residual(mops: &MopData) -> Result<f64> {
    let n_max = mops.max_degree();
    let mut worst = 0.0f64;
    for n in 0..n_max {
        let lhs = mops.poly(n).times_x_pow(1);
        let mut rhs = mops.poly(n + 1).add(&mops.poly(n).mul_matrix_left(mops.b(n)))?;
        if n >= 1 {
            rhs = rhs.add(&mops.poly(n - 1).mul_matrix_left(mops.c(n)))?;
        }
        let diff = lhs.sub(&rhs)?;
        for k in 0..=n + 1 {
            worst = worst.max(diff.coeff(k).norm());
        }
    }
    Ok(worst)
}

/// Worst orthogonality residual `‖⟨P_n, x^m I⟩‖` over `m < n ≤ n_max`.
pub fn orthogonality_residual(w: &MatrixWeight, mops: &MopData) -> Result<f64> {
    let dim = w.dim();
    let mut worst = 0.0f64;
    for n in 1..=mops.max_degree() {
        for m in 0..n {
            let xm = MatrixPoly::monomial(dim, m);
            let ip = w.inner_product(mops.poly(n), &xm)?;
            worst = worst.max(ip.norm());
        }
    }
    Ok(worst)
}

/// Residual families of the intertwining identities satisfied by a member
/// `T` of the symmetry space:
/// operator symmetry `⟨PT, Q⟩ = ⟨P, QT⟩`, `T P_n = P_n T`,
/// `T H_n = H_n T*`, `T M_n = M_n T*`, `T B_n = B_n T`, `T C_n = C_n T`.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryResiduals {
    pub operator_symmetry: f64,
    pub poly_commute: f64,
    pub norm_intertwine: f64,
    pub moment_intertwine: f64,
    pub recurrence_commute: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.operator_symmetry
            .max(self.poly_commute)
            .max(self.norm_intertwine)
            .max(self.moment_intertwine)
            .max(self.recurrence_commute)
    }
}

/// Evaluates all five residual families for each symmetry-space basis
/// element and returns the worst case over the basis.
pub fn intertwining_residuals(
    w: &MatrixWeight,
    mops: &MopData,
    basis: &[CMatrix],
) -> Result<SymmetryResiduals> {
    let dim = w.dim();
    let n_max = mops.max_degree();
    let moments: Vec<CMatrix> = (0..=2 * n_max)
        .map(|n| w.moment(n))
        .collect::<Result<Vec<_>>>()?;

    let mut out = SymmetryResiduals {
        operator_symmetry: 0.0,
        poly_commute: 0.0,
        norm_intertwine: 0.0,
        moment_intertwine: 0.0,
        recurrence_commute: 0.0,
    };
    for t in basis {
        let t_adj = t.adjoint();
        // (1) right multiplication by T is symmetric for the pairing:
        // ⟨x^a T, x^b⟩ = ⟨x^a, x^b T⟩ over the monomial grid
        for a in 0..=n_max {
            for b in 0..=n_max {
                let pa = MatrixPoly::monomial(dim, a).mul_matrix_right(t);
                let qb = MatrixPoly::monomial(dim, b);
                let lhs = w.inner_product(&pa, &qb)?;
                let rhs = w.inner_product(
                    &MatrixPoly::monomial(dim, a),
                    &qb.mul_matrix_right(t),
                )?;
                out.operator_symmetry = out.operator_symmetry.max((lhs - rhs).norm());
            }
        }
        for n in 0..=n_max {
            // (2) T P_n = P_n T, coefficientwise
            for k in 0..=n {
                let ck = mops.poly(n).coeff(k);
                out.poly_commute = out.poly_commute.max((t * &ck - ck * t).norm());
            }
            // (3) T H_n = H_n T*
            let h = mops.norm(n);
            out.norm_intertwine = out.norm_intertwine.max((t * h - h * &t_adj).norm());
        }
        // (4) T M_n = M_n T*
        for m in &moments {
            out.moment_intertwine = out.moment_intertwine.max((t * m - m * &t_adj).norm());
        }
        // (5) T B_n = B_n T and T C_n = C_n T
        for n in 0..n_max {
            let bn = mops.b(n);
            out.recurrence_commute = out.recurrence_commute.max((t * bn - bn * t).norm());
        }
        for n in 1..n_max {
            let cn = mops.c(n);
            out.recurrence_commute = out.recurrence_commute.max((t * cn - cn * t).norm());
        }
    }
    Ok(out)
}

/// The computed squared norms as a Γ-sequence.
pub fn gamma_from_mops(mops: &MopData) -> Result<GammaSequence> {
    GammaSequence::new(GammaLabel::Norms, mops.norms.clone())
}

/// The even moments `M_0, M_2, …, M_{2(count-1)}` as a Γ-sequence.
pub fn gamma_from_moments(w: &MatrixWeight, count: usize) -> Result<GammaSequence> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    let mats = (0..count)
        .map(|n| w.moment(2 * n))
        .collect::<Result<Vec<_>>>()?;
    GammaSequence::new(GammaLabel::MomentsEven, mats)
}

/// Largest relative deviation between two constructions of the same
/// family (polynomial coefficients, compared entrywise).
pub fn construction_deviation(a: &MopData, b: &MopData) -> f64 {
    let n_max = a.max_degree().min(b.max_degree());
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        for k in 0..=n {
            let ca = a.poly(n).coeff(k);
            let cb = b.poly(n).coeff(k);
            let scale = 1.0 + ca.norm().max(cb.norm());
            worst = worst.max((ca - cb).norm() / scale);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gegenbauer_weight, tirao_variant_weight, GegenbauerParams};
    use crate::linalg::identity;
    use crate::measure::BaseMeasure;
    use approx::assert_abs_diff_eq;

    fn legendre_weight() -> MatrixWeight {
        MatrixWeight::new(
            MatrixPoly::constant(identity(1)),
            BaseMeasure::Lebesgue { a: -1.0, b: 1.0 },
        )
        .unwrap()
    }

    #[test]
    fn scalar_legendre_family() {
        let w = legendre_weight();
        let mops = monic_mops(&w, 3).unwrap();
        // P_1 = x, H_0 = 2, H_1 = 2/3, H_2 = 8/45, C_1 = 1/3, B_n = 0
        assert_abs_diff_eq!(mops.poly(1).coeff(0)[(0, 0)].re, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(mops.norm(0)[(0, 0)].re, 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(mops.norm(1)[(0, 0)].re, 2.0 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(mops.norm(2)[(0, 0)].re, 8.0 / 45.0, epsilon = 1e-13);
        assert_abs_diff_eq!(mops.c(1)[(0, 0)].re, 1.0 / 3.0, epsilon = 1e-13);
        for n in 0..3 {
            assert!(mops.b(n).norm() < 1e-13);
        }
    }

    #[test]
    fn tirao_h0_is_m0() {
        let (w, r) = tirao_variant_weight();
        let mops = monic_mops(&w, 2).unwrap();
        assert!((mops.norm(0).clone() - &r.m0).norm() < 1e-13);
    }

    #[test]
    fn gegenbauer_h0_smallest_case() {
        let p = GegenbauerParams::new(0.5, 1.0).unwrap();
        let w = gegenbauer_weight(&p).unwrap();
        let mops = monic_mops(&w, 1).unwrap();
        let h0 = mops.norm(0);
        assert_abs_diff_eq!(h0[(0, 0)].re, std::f64::consts::PI, epsilon = 1e-12);
        assert!(h0[(0, 1)].norm() < 1e-13);
    }

    #[test]
    fn orthogonality_and_recurrence_hold() {
        let (w, _) = tirao_variant_weight();
        let mops = monic_mops(&w, 5).unwrap();
        assert!(orthogonality_residual(&w, &mops).unwrap() < 1e-9);
        assert!(recurrence_residual(&mops).unwrap() < 1e-9);
    }

    #[test]
    fn hankel_and_gram_schmidt_agree() {
        let (w, _) = tirao_variant_weight();
        let a = monic_mops(&w, 5).unwrap();
        let b = monic_mops_gram_schmidt(&w, 5).unwrap();
        assert!(construction_deviation(&a, &b) < 1e-8);

        let p = GegenbauerParams::new(1.0, 1.0).unwrap();
        let wg = gegenbauer_weight(&p).unwrap();
        let a = monic_mops(&wg, 5).unwrap();
        let b = monic_mops_gram_schmidt(&wg, 5).unwrap();
        assert!(construction_deviation(&a, &b) < 1e-8);
    }

    #[test]
    fn degenerate_moment_matrix_is_refused() {
        // a single atom supports polynomials of degree 0 only; the norm
        // collapse is the first diagnostic to fire
        let w = MatrixWeight::new(
            MatrixPoly::constant(identity(1)),
            BaseMeasure::Atoms {
                points: vec![(0.5, 1.0)],
            },
        )
        .unwrap();
        assert!(matches!(
            monic_mops(&w, 2),
            Err(Error::IllConditioned { .. } | Error::Inconsistent(_))
        ));
    }

    #[test]
    fn hilbert_type_conditioning_is_refused() {
        // moments of dx on [0, 1] form a Hilbert matrix; the condition cap
        // trips near degree 10
        let w = MatrixWeight::new(
            MatrixPoly::constant(identity(1)),
            BaseMeasure::Lebesgue { a: 0.0, b: 1.0 },
        )
        .unwrap();
        assert!(monic_mops(&w, 6).is_ok());
        assert!(matches!(
            monic_mops(&w, 12),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn symmetry_residuals_for_identity_are_zero() {
        let (w, _) = tirao_variant_weight();
        let mops = monic_mops(&w, 3).unwrap();
        let rep = intertwining_residuals(&w, &mops, &[identity(2)]).unwrap();
        assert!(rep.max() < 1e-12);
    }

    #[test]
    fn symmetry_residuals_distinguish_adjoint_relation() {
        // T = [[1, -√6/3], [0, 0]] intertwines with an adjoint
        // (T H_n = H_n T*) but does not commute (T H_n ≠ H_n T)
        let (w, r) = tirao_variant_weight();
        let mops = monic_mops(&w, 3).unwrap();
        let t = r.sym_generator.clone();
        let rep = intertwining_residuals(&w, &mops, std::slice::from_ref(&t)).unwrap();
        assert!(rep.norm_intertwine < 1e-9, "{:?}", rep);
        assert!(rep.moment_intertwine < 1e-9);
        let h1 = mops.norm(1);
        assert!((&t * h1 - h1 * &t).norm() > 1e-3);
    }

    #[test]
    fn gamma_extraction() {
        let (w, _) = tirao_variant_weight();
        let mops = monic_mops(&w, 3).unwrap();
        let norms = gamma_from_mops(&mops).unwrap();
        assert_eq!(norms.len(), 4);
        let evens = gamma_from_moments(&w, 2).unwrap();
        assert_eq!(evens.len(), 2);
        // M_2 = [[11/30, √6/12], [√6/12, 1/4]]
        let s6 = 6.0f64.sqrt();
        let m2 = evens.get(1).unwrap();
        assert_abs_diff_eq!(m2[(0, 0)].re, 11.0 / 30.0, epsilon = 1e-13);
        assert_abs_diff_eq!(m2[(0, 1)].re, s6 / 12.0, epsilon = 1e-13);
    }

    #[test]
    fn degree_bounds() {
        let (w, _) = tirao_variant_weight();
        assert!(monic_mops(&w, 0).is_err());
        assert!(monic_mops(&w, 21).is_err());
    }
}
