//! Matrix-valued measures `Θ(X) = ∫_X W(x) dμ(x)`.
//!
//! A weight is a Hermitian matrix polynomial `W` over a scalar base
//! measure `μ`. Moments and matrix-valued inner products are computed by
//! Gaussian quadrature sized to be exact on polynomial integrands; the
//! partial measure `Θ([a,b])` on subintervals falls back to a
//! double-exponential rule where the base density is not polynomial.

use crate::error::{Error, Result};
use crate::linalg::{eigenvalue_range, hermitize, is_positive_definite, CMatrix, PD_TOL};
use crate::poly::MatrixPoly;
use crate::special::ln_gamma;

/// Hard cap on the polynomial exactness degree of generated rules.
pub const MAX_QUADRATURE_DEGREE: usize = 2000;

/// Extra exactness margin added to automatically sized rules (two extra
/// nodes guard against rounding).
const SAFETY_DEGREE: usize = 4;

/// Scalar base measure on the real line.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseMeasure {
    /// Lebesgue measure `dx` on `[a, b]`.
    Lebesgue { a: f64, b: f64 },
    /// `(1 - x²)^{ν - 1/2} dx` on `[-1, 1]`, `ν > 0`.
    Gegenbauer { nu: f64 },
    /// Finitely many atoms `(point, mass)` with strictly positive masses.
    Atoms { points: Vec<(f64, f64)> },
}

impl BaseMeasure {
    pub fn validate(&self) -> Result<()> {
        match self {
            BaseMeasure::Lebesgue { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(Error::InvalidArgument(format!(
                        "interval requires finite a < b, got [{a}, {b}]"
                    )));
                }
            }
            BaseMeasure::Gegenbauer { nu } => {
                if !(nu.is_finite() && *nu > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "Gegenbauer base requires ν > 0, got {nu}"
                    )));
                }
            }
            BaseMeasure::Atoms { points } => {
                if points.is_empty() {
                    return Err(Error::InvalidArgument("no atoms given".into()));
                }
                for (x, w) in points {
                    if !(x.is_finite() && w.is_finite() && *w > 0.0) {
                        return Err(Error::InvalidArgument(format!(
                            "atom ({x}, {w}) must have a finite point and positive mass"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Smallest interval carrying the measure.
    pub fn support(&self) -> (f64, f64) {
        match self {
            BaseMeasure::Lebesgue { a, b } => (*a, *b),
            BaseMeasure::Gegenbauer { .. } => (-1.0, 1.0),
            BaseMeasure::Atoms { points } => {
                let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
        }
    }
}

/// Nodes and positive weights of a quadrature rule.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)` accumulated in ascending node order.
    pub fn integrate_matrix(&self, dim: usize, f: impl Fn(f64) -> CMatrix) -> CMatrix {
        let mut acc = CMatrix::zeros(dim, dim);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(x).map(|z| z * w);
        }
        acc
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Golub–Welsch nodes/weights for the symmetric Jacobi weight
/// `(1-x)^α (1+x)^α` on `[-1, 1]` with total mass `mu0`.
fn golub_welsch_symmetric(n_nodes: usize, alpha: f64, mu0: f64) -> QuadratureRule {
    assert!(n_nodes >= 1);
    if n_nodes == 1 {
        return QuadratureRule {
            nodes: vec![0.0],
            weights: vec![mu0],
        };
    }
    let mut jac = nalgebra::DMatrix::<f64>::zeros(n_nodes, n_nodes);
    let ab = 2.0 * alpha;
    for idx in 0..n_nodes - 1 {
        let k = (idx + 1) as f64;
        let denom = 2.0 * k + ab;
        let off = 2.0 / denom
            * (k * (k + alpha) * (k + alpha) * (k + ab) / ((denom + 1.0) * (denom - 1.0))).sqrt();
        jac[(idx, idx + 1)] = off;
        jac[(idx + 1, idx)] = off;
    }
    let eig = jac.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n_nodes)
        .map(|i| {
            let q0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * q0 * q0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Total mass `∫ (1-x²)^{ν-1/2} dx = √π Γ(ν+1/2)/Γ(ν+1)`.
pub fn gegenbauer_total_mass(nu: f64) -> f64 {
    std::f64::consts::PI.sqrt() * (ln_gamma(nu + 0.5) - ln_gamma(nu + 1.0)).exp()
}

/// A rule integrating scalar polynomials up to `degree_exact` exactly
/// against the base measure. Gauss rules use `⌈(degree_exact+1)/2⌉`
/// nodes; a discrete base returns its atoms unchanged.
pub fn quadrature_rule(base: &BaseMeasure, degree_exact: usize) -> Result<QuadratureRule> {
    base.validate()?;
    if degree_exact > MAX_QUADRATURE_DEGREE {
        return Err(Error::ResourceLimit(format!(
            "requested exactness degree {degree_exact} exceeds cap {MAX_QUADRATURE_DEGREE}"
        )));
    }
    let n_nodes = (degree_exact + 2) / 2;
    let n_nodes = n_nodes.max(1);
    match base {
        BaseMeasure::Lebesgue { a, b } => {
            let raw = golub_welsch_symmetric(n_nodes, 0.0, 2.0);
            let mid = 0.5 * (a + b);
            let rad = 0.5 * (b - a);
            Ok(QuadratureRule {
                nodes: raw.nodes.iter().map(|t| mid + rad * t).collect(),
                weights: raw.weights.iter().map(|w| w * rad).collect(),
            })
        }
        BaseMeasure::Gegenbauer { nu } => Ok(golub_welsch_symmetric(
            n_nodes,
            nu - 0.5,
            gegenbauer_total_mass(*nu),
        )),
        BaseMeasure::Atoms { points } => Ok(QuadratureRule {
            nodes: points.iter().map(|p| p.0).collect(),
            weights: points.iter().map(|p| p.1).collect(),
        }),
    }
}

/// Double-exponential (tanh-sinh) integration of a matrix-valued function
/// over `[a, b]`. Handles integrable endpoint behavior; refinement stops
/// once two successive levels agree to ~1e-13 relative.
fn tanh_sinh_matrix(dim: usize, a: f64, b: f64, f: impl Fn(f64) -> CMatrix) -> CMatrix {
    if b <= a {
        return CMatrix::zeros(dim, dim);
    }
    let mid = 0.5 * (a + b);
    let rad = 0.5 * (b - a);
    let half_pi = 0.5 * std::f64::consts::PI;
    const T_MAX: f64 = 3.9;
    let mut prev: Option<CMatrix> = None;
    for level in 0..=11u32 {
        let h = 1.0 / (1u64 << level) as f64;
        let jmax = (T_MAX / h).floor() as i64;
        let mut acc = CMatrix::zeros(dim, dim);
        for j in -jmax..=jmax {
            let t = j as f64 * h;
            let s = half_pi * t.sinh();
            let u = s.tanh();
            let w = h * half_pi * t.cosh() / (s.cosh() * s.cosh());
            if w == 0.0 || !w.is_finite() {
                continue;
            }
            acc += f(mid + rad * u).map(|z| z * w);
        }
        let val = acc.map(|z| z * rad);
        if let Some(p) = &prev {
            if (&val - p).norm() <= 1e-13 * (1.0 + val.norm()) {
                return val;
            }
        }
        prev = Some(val);
    }
    prev.unwrap()
}

/// Hermitian matrix weight `W(x)` paired with a base measure.
#[derive(Debug, Clone)]
pub struct MatrixWeight {
    poly: MatrixPoly,
    base: BaseMeasure,
}

impl MatrixWeight {
    /// Requires Hermitian coefficient matrices (so `W(x)* = W(x)` for all
    /// real `x`) and a valid base measure.
    pub fn new(poly: MatrixPoly, base: BaseMeasure) -> Result<Self> {
        base.validate()?;
        if !poly.is_hermitian() {
            return Err(Error::NotHermitian {
                deviation: poly
                    .coeffs()
                    .iter()
                    .map(crate::linalg::hermitian_deviation)
                    .fold(0.0, f64::max),
                tol: crate::linalg::HERM_TOL * (1.0 + poly.max_abs_coeff()),
            });
        }
        Ok(Self { poly, base })
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn poly_degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn poly(&self) -> &MatrixPoly {
        &self.poly
    }

    pub fn base(&self) -> &BaseMeasure {
        &self.base
    }

    pub fn eval(&self, x: f64) -> CMatrix {
        self.poly.eval(x)
    }

    /// Rule exact for `W(x) · (polynomial of degree extra)` plus margin.
    pub fn rule_for(&self, extra_degree: usize) -> Result<QuadratureRule> {
        quadrature_rule(&self.base, self.poly_degree() + extra_degree + SAFETY_DEGREE)
    }

    /// `M_n = ∫ x^n W(x) dμ(x)`.
    pub fn moment(&self, n: usize) -> Result<CMatrix> {
        let rule = self.rule_for(n)?;
        let dim = self.dim();
        let m = rule.integrate_matrix(dim, |x| self.eval(x).map(|z| z * x.powi(n as i32)));
        Ok(hermitize(&m))
    }

    /// `⟨P, Q⟩ = ∫ P(x) W(x) Q(x)* dμ(x)`.
    pub fn inner_product(&self, p: &MatrixPoly, q: &MatrixPoly) -> Result<CMatrix> {
        let dim = self.dim();
        if p.dim() != dim || q.dim() != dim {
            return Err(Error::InvalidArgument(format!(
                "inner product dimension mismatch: weight {}, P {}, Q {}",
                dim,
                p.dim(),
                q.dim()
            )));
        }
        let rule = self.rule_for(p.degree() + q.degree())?;
        Ok(rule.integrate_matrix(dim, |x| p.eval(x) * self.eval(x) * q.eval(x).adjoint()))
    }

    /// `Θ([lo, hi]) = ∫_{[lo,hi] ∩ supp} W dμ`, clipped to the support.
    /// An empty intersection yields the zero matrix.
    pub fn theta_of(&self, lo: f64, hi: f64) -> Result<CMatrix> {
        let dim = self.dim();
        let (s_lo, s_hi) = self.base.support();
        let a = lo.max(s_lo);
        let b = hi.min(s_hi);
        if a >= b {
            // a point carries no mass for the continuous bases; atoms are
            // handled below with inclusive bounds
            if let BaseMeasure::Atoms { points } = &self.base {
                let mut acc = CMatrix::zeros(dim, dim);
                for &(x, m) in points {
                    if x >= lo && x <= hi {
                        acc += self.eval(x).map(|z| z * m);
                    }
                }
                return Ok(hermitize(&acc));
            }
            return Ok(CMatrix::zeros(dim, dim));
        }
        match &self.base {
            BaseMeasure::Lebesgue { .. } => {
                let sub = BaseMeasure::Lebesgue { a, b };
                let rule = quadrature_rule(&sub, self.poly_degree() + SAFETY_DEGREE)?;
                Ok(hermitize(&rule.integrate_matrix(dim, |x| self.eval(x))))
            }
            BaseMeasure::Gegenbauer { nu } => {
                if a <= s_lo && b >= s_hi {
                    return self.moment(0);
                }
                // substitute x = sin θ: the integrand becomes
                // W(sin θ) cos(θ)^{2ν}, continuous up to the endpoints
                let t_lo = a.clamp(-1.0, 1.0).asin();
                let t_hi = b.clamp(-1.0, 1.0).asin();
                let two_nu = 2.0 * nu;
                let val = tanh_sinh_matrix(dim, t_lo, t_hi, |t| {
                    let c = t.cos().max(0.0);
                    self.eval(t.sin()).map(|z| z * c.powf(two_nu))
                });
                Ok(hermitize(&val))
            }
            BaseMeasure::Atoms { points } => {
                let mut acc = CMatrix::zeros(dim, dim);
                for &(x, m) in points {
                    if x >= lo && x <= hi {
                        acc += self.eval(x).map(|z| z * m);
                    }
                }
                Ok(hermitize(&acc))
            }
        }
    }

    /// Conjugated weight `x ↦ T W(x) T*`.
    pub fn conjugated(&self, t: &CMatrix) -> Result<MatrixWeight> {
        if t.nrows() != self.dim() || t.ncols() != self.dim() {
            return Err(Error::InvalidArgument(
                "conjugating matrix must match the weight dimension".into(),
            ));
        }
        let poly = MatrixPoly::new(
            self.poly
                .coeffs()
                .iter()
                .map(|c| hermitize(&(t * c * t.adjoint())))
                .collect(),
        )?;
        MatrixWeight::new(poly, self.base.clone())
    }

    /// Checks that the weight is positive semi-definite at every
    /// quadrature node (up to a small slack) and that `Θ` of the full
    /// support is strictly positive definite.
    pub fn validate(&self) -> Result<()> {
        let rule = self.rule_for(0)?;
        let scale = 1.0 + self.poly.max_abs_coeff();
        for &x in &rule.nodes {
            let w = self.eval(x);
            let (lo, _hi) = eigenvalue_range(&w)?;
            if lo < -1e-12 * scale {
                return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
            }
        }
        let m0 = self.moment(0)?;
        if !is_positive_definite(&m0)? {
            let (lo, _) = eigenvalue_range(&m0)?;
            return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
        }
        Ok(())
    }

    /// Interior nodes where the weight is strictly positive definite:
    /// Chebyshev-distributed candidates, degenerate points skipped.
    pub fn strict_nodes(&self, count: usize) -> Result<Vec<f64>> {
        let (a, b) = self.base.support();
        let mid = 0.5 * (a + b);
        let rad = 0.5 * (b - a);
        let mut nodes = Vec::with_capacity(count);
        match &self.base {
            BaseMeasure::Atoms { points } => {
                for &(x, _) in points {
                    let w = self.eval(x);
                    if is_positive_definite(&w)? {
                        nodes.push(x);
                    }
                }
            }
            _ => {
                let scale = 1.0 + self.poly.max_abs_coeff();
                for i in 0..count {
                    let t = (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * count) as f64).cos();
                    let x = mid + rad * t;
                    let w = self.eval(x);
                    let (lo, _) = eigenvalue_range(&w)?;
                    if lo > PD_TOL * scale {
                        nodes.push(x);
                    }
                }
                nodes.sort_by(|p, q| p.partial_cmp(q).unwrap());
            }
        }
        Ok(nodes)
    }
}

/// Label describing where a Γ-sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaLabel {
    MomentsEven,
    Norms,
    Custom,
}

impl std::fmt::Display for GammaLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GammaLabel::MomentsEven => write!(f, "moments-even"),
            GammaLabel::Norms => write!(f, "norms"),
            GammaLabel::Custom => write!(f, "custom"),
        }
    }
}

/// Finite sequence of strictly positive definite matrices.
#[derive(Debug, Clone)]
pub struct GammaSequence {
    label: GammaLabel,
    matrices: Vec<CMatrix>,
}

impl GammaSequence {
    pub fn new(label: GammaLabel, matrices: Vec<CMatrix>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidArgument("empty Γ-sequence".into()));
        }
        let dim = matrices[0].nrows();
        for (n, g) in matrices.iter().enumerate() {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::InvalidArgument(
                    "Γ-sequence members must be square and of equal size".into(),
                ));
            }
            if !is_positive_definite(g)? {
                let (lo, _) = eigenvalue_range(g)?;
                return Err(Error::InvalidArgument(format!(
                    "Γ_{n} is not positive definite (min eigenvalue {lo:.3e})"
                )));
            }
        }
        Ok(Self { label, matrices })
    }

    pub fn label(&self) -> GammaLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn get(&self, n: usize) -> Result<&CMatrix> {
        self.matrices.get(n).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "Γ-sequence index {n} out of range (length {})",
                self.matrices.len()
            ))
        })
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }
}
