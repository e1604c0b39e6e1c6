//! Symmetry spaces and commutants of matrix weights.
//!
//! For a weight `W` the symmetry space is the real span of all `T` with
//! `T W(x) = W(x) T*` almost everywhere, and the commutant is the complex
//! algebra of all `T` with `T W(x) = W(x) T`. Both are computed as joint
//! kernels over finitely many strictly positive definite samples `W(x_i)`;
//! since a matrix polynomial identity of degree `d` that vanishes at `d+1`
//! distinct points vanishes identically, `polyDegree + 1` valid nodes pin
//! the answer. The same kernel machinery applied to a Γ-sequence yields
//! the star-intertwiner spaces `{T | T Γ_n = Γ_n T*}` and their commutant
//! analogues.
//!
//! The star-invariance test on these spaces decides whether every
//! reduction of the measure can be realized unitarily.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitize, is_hermitian, real_kernel_basis, skew_part, to_real_vec, CMatrix, IntertwinerKind,
    RealLinearSystem, RealVector, ScalarField, SymSpace,
};
use crate::measure::{GammaSequence, MatrixWeight};
use crate::rng::SplitMix64;

/// Seed for the deterministic extra verification nodes.
const VERIFY_SEED: u64 = 0x6d61_7472_6564_5f76;
const VERIFY_NODES: usize = 5;

/// Tolerances shared by the space computations.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative singular-value cutoff for kernel ranks.
    pub kernel: f64,
    /// Span-membership tolerance (looser: orthonormalization compounds error).
    pub span: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            kernel: crate::linalg::DEFAULT_KERNEL_TOL,
            span: crate::linalg::DEFAULT_SPAN_TOL,
        }
    }
}

fn solve_space(
    kind: IntertwinerKind,
    constraints: Vec<CMatrix>,
    field: ScalarField,
    provenance: String,
    tol: f64,
) -> Result<SymSpace> {
    let dim = constraints[0].nrows();
    let sys = RealLinearSystem::new(kind, constraints)?;
    let kb = real_kernel_basis(&sys, tol)?;
    Ok(SymSpace::from_orthonormal(
        dim,
        kb.matrices,
        field,
        provenance,
        tol,
        kb.tolerance_sensitive,
    ))
}

/// Nodes used to sample a weight: `sampling` strictly positive definite
/// interior Chebyshev points, of which at least `polyDegree + 1` must
/// survive to pin the polynomial identity. A discrete base is sampled at
/// its atoms instead — the almost-everywhere condition lives only there.
fn sampled_constraints(w: &MatrixWeight, sampling: usize) -> Result<Vec<CMatrix>> {
    let needed = match w.base() {
        crate::measure::BaseMeasure::Atoms { .. } => 1,
        _ => w.poly_degree() + 1,
    };
    if sampling < needed {
        return Err(Error::InvalidArgument(format!(
            "sampling {sampling} is below the {needed} nodes needed to pin a degree-{} identity",
            w.poly_degree()
        )));
    }
    let nodes = w.strict_nodes(sampling)?;
    if nodes.len() < needed {
        return Err(Error::InvalidArgument(format!(
            "only {} of {sampling} sample nodes are strictly positive definite, {needed} required",
            nodes.len()
        )));
    }
    Ok(nodes.iter().map(|&x| w.eval(x)).collect())
}

/// Extra nodes for residual verification: pseudo-random interior points
/// for continuous bases, the atoms themselves for discrete ones.
fn verification_nodes(w: &MatrixWeight, count: usize) -> Vec<f64> {
    if let crate::measure::BaseMeasure::Atoms { points } = w.base() {
        return points.iter().map(|p| p.0).collect();
    }
    let (a, b) = w.base().support();
    let width = b - a;
    let mut rng = SplitMix64::new(VERIFY_SEED);
    (0..count)
        .map(|_| a + width * (0.05 + 0.9 * rng.next_f64()))
        .collect()
}

fn verify_weight_relation(
    w: &MatrixWeight,
    space: &SymSpace,
    kind: IntertwinerKind,
    tol: f64,
) -> bool {
    let scale = 1.0 + w.poly().max_abs_coeff();
    for x in verification_nodes(w, VERIFY_NODES) {
        let wx = w.eval(x);
        for t in space.basis() {
            let r = match kind {
                IntertwinerKind::Star => (t * &wx - &wx * t.adjoint()).norm(),
                IntertwinerKind::Commutant => (t * &wx - &wx * t).norm(),
            };
            if r > 100.0 * tol * scale {
                return false;
            }
        }
    }
    true
}

fn weight_space(
    w: &MatrixWeight,
    sampling: usize,
    kind: IntertwinerKind,
    field: ScalarField,
    label: &str,
    tol: f64,
) -> Result<SymSpace> {
    let constraints = sampled_constraints(w, sampling)?;
    let mut space = solve_space(
        kind,
        constraints,
        field,
        format!("{label} of weight (N={}, nodes={sampling})", w.dim()),
        tol,
    )?;
    // dimension must be stable against extra sample nodes and the basis
    // must satisfy the relation away from the sample set
    let recheck = solve_space(
        kind,
        sampled_constraints(w, sampling + 3)?,
        field,
        String::new(),
        tol,
    )?;
    if recheck.real_dim() != space.real_dim() || !verify_weight_relation(w, &space, kind, tol) {
        space.set_tolerance_sensitive(true);
    }
    Ok(space)
}

/// The real symmetry space `{T | T W(x) = W(x) T*}` of a weight, sampled
/// at `sampling` strictly positive definite interior nodes.
pub fn sym_space_of_weight(w: &MatrixWeight, sampling: usize, tol: f64) -> Result<SymSpace> {
    weight_space(
        w,
        sampling,
        IntertwinerKind::Star,
        ScalarField::Real,
        "symmetry space",
        tol,
    )
}

/// Default node count for weight sampling.
pub fn default_sampling(w: &MatrixWeight) -> usize {
    w.poly_degree() + 1
}

/// The commutant algebra `{T | T W(x) = W(x) T}` as a complex space
/// (stored as a real basis of even length, closed under `i`).
pub fn commutant_of_weight(w: &MatrixWeight, sampling: usize, tol: f64) -> Result<SymSpace> {
    let mut space = weight_space(
        w,
        sampling,
        IntertwinerKind::Commutant,
        ScalarField::Complex,
        "commutant",
        tol,
    )?;
    // post-hoc: the span must be closed under adjoints and products
    let span_tol = (tol * 10.0).max(crate::linalg::DEFAULT_SPAN_TOL);
    let mut closed = true;
    for b in space.basis() {
        if !space.contains(&b.adjoint(), span_tol)? {
            closed = false;
        }
    }
    for a in space.basis() {
        for b in space.basis() {
            if !space.contains(&(a * b), span_tol)? {
                closed = false;
            }
        }
    }
    if !closed {
        space.set_tolerance_sensitive(true);
    }
    Ok(space)
}

/// The Hermitian part of an adjoint-closed complex space: the real space
/// of its Hermitian members, of real dimension equal to the complex
/// dimension of the input.
pub fn hermitian_part(a: &SymSpace, span_tol: f64) -> Result<SymSpace> {
    if a.field() != ScalarField::Complex {
        return Err(Error::InvalidArgument(
            "hermitian_part expects a complex (algebra) space".into(),
        ));
    }
    for b in a.basis() {
        if !a.contains(&b.adjoint(), span_tol)? {
            return Err(Error::Inconsistent(
                "input space is not closed under adjoints; kernel tolerance too loose".into(),
            ));
        }
    }
    let projections: Vec<CMatrix> = a.basis().iter().map(hermitize).collect();
    let mut h = SymSpace::from_span(
        a.matrix_dim(),
        &projections,
        ScalarField::Real,
        format!("hermitian part of {}", a.provenance()),
        a.tol(),
        a.tolerance_sensitive(),
    )?;
    if h.real_dim() != a.complex_dim() {
        h.set_tolerance_sensitive(true);
    }
    for t in h.basis() {
        if !is_hermitian(t, 1e-9) {
            return Err(Error::Inconsistent(
                "hermitian part produced a non-Hermitian basis element".into(),
            ));
        }
    }
    Ok(h)
}

fn select_gammas(gammas: &GammaSequence, indices: &[usize]) -> Result<Vec<CMatrix>> {
    if indices.is_empty() {
        return Err(Error::InvalidArgument(
            "the index set must be non-empty".into(),
        ));
    }
    indices
        .iter()
        .map(|&n| gammas.get(n).cloned())
        .collect::<Result<Vec<_>>>()
}

/// Joint star-intertwiner space `{T | T Γ_n = Γ_n T* for n in indices}`.
pub fn gamma_sym_space(gammas: &GammaSequence, indices: &[usize], tol: f64) -> Result<SymSpace> {
    let constraints = select_gammas(gammas, indices)?;
    solve_space(
        IntertwinerKind::Star,
        constraints,
        ScalarField::Real,
        format!(
            "star-intertwiner space of Γ[{}] ({})",
            format_indices(indices),
            gammas.label()
        ),
        tol,
    )
}

/// Joint commutant `{T | T Γ_n = Γ_n T for n in indices}` as a complex space.
pub fn gamma_commutant(gammas: &GammaSequence, indices: &[usize], tol: f64) -> Result<SymSpace> {
    let constraints = select_gammas(gammas, indices)?;
    solve_space(
        IntertwinerKind::Commutant,
        constraints,
        ScalarField::Complex,
        format!(
            "commutant of Γ[{}] ({})",
            format_indices(indices),
            gammas.label()
        ),
        tol,
    )
}

fn format_indices(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// True iff the adjoint of every basis element lies back in the span.
pub fn star_invariant(space: &SymSpace, tol: f64) -> bool {
    space
        .basis()
        .iter()
        .all(|b| space.contains(&b.adjoint(), tol).unwrap_or(false))
}

/// Cosines of the principal angles between the span and the space of
/// skew-Hermitian matrices, descending.
fn skew_principal_cosines(space: &SymSpace) -> Vec<f64> {
    let d = space.real_dim();
    if d == 0 {
        return Vec::new();
    }
    let nn2 = 2 * space.matrix_dim() * space.matrix_dim();
    let mut cols = nalgebra::DMatrix::<f64>::zeros(nn2, d);
    for (k, b) in space.basis().iter().enumerate() {
        let v: RealVector = to_real_vec(&skew_part(b));
        for r in 0..nn2 {
            cols[(r, k)] = v[r];
        }
    }
    let svd = cols.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Cosine threshold above which a principal angle counts as a genuine
/// intersection with the skew-Hermitian subspace.
const INTERSECTION_COS: f64 = 1.0 - 1e-6;

/// Norm of the largest skew-Hermitian element of the unit ball of the
/// span: (numerically) 1 exactly when the span contains a skew-Hermitian
/// direction, and 0 otherwise. Valid symmetry spaces of positive measures
/// contain no non-zero skew-Hermitian element, so this must vanish for
/// them.
pub fn skew_hermitian_content(space: &SymSpace) -> f64 {
    match skew_principal_cosines(space).first() {
        Some(&c) if c >= INTERSECTION_COS => c,
        _ => 0.0,
    }
}

/// Largest skew-Hermitian fraction of a unit element of the span (the
/// cosine of the smallest principal angle against the skew subspace).
/// Diagnostic: positive whenever some member merely has a skew part,
/// which does not contradict the absence of fully skew members.
pub fn max_skew_fraction(space: &SymSpace) -> f64 {
    skew_principal_cosines(space).first().copied().unwrap_or(0.0)
}

/// The adjoint space `{T* | T in space}`; taking adjoints is an isometry
/// of the real parametrization, so the basis stays orthonormal.
pub fn adjoint_space(space: &SymSpace) -> SymSpace {
    SymSpace::from_orthonormal(
        space.matrix_dim(),
        space.basis().iter().map(|b| b.adjoint()).collect(),
        space.field(),
        format!("adjoint of {}", space.provenance()),
        space.tol(),
        space.tolerance_sensitive(),
    )
}

/// Intersection of two spans, computed as the kernel of the stacked
/// complementary projectors `[(I - P_a); (I - P_b)]`.
pub fn space_intersection(a: &SymSpace, b: &SymSpace, tol: f64) -> Result<SymSpace> {
    if a.matrix_dim() != b.matrix_dim() {
        return Err(Error::InvalidArgument(
            "intersecting spaces of different matrix size".into(),
        ));
    }
    let n = a.matrix_dim();
    let nn2 = 2 * n * n;
    let eye = nalgebra::DMatrix::<f64>::identity(nn2, nn2);
    let qa = &eye - a.projector();
    let qb = &eye - b.projector();
    let mut stacked = nalgebra::DMatrix::<f64>::zeros(2 * nn2, nn2);
    stacked.view_mut((0, 0), (nn2, nn2)).copy_from(&qa);
    stacked.view_mut((nn2, 0), (nn2, nn2)).copy_from(&qb);
    let svd = stacked.svd(false, true);
    let v_t = svd.v_t.expect("SVD with compute_v");
    // the stacked matrix has unit-scale singular values; vectors in the
    // intersection produce singular values of kernel size
    let mut order: Vec<usize> = (0..nn2).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[i]
            .partial_cmp(&svd.singular_values[j])
            .unwrap()
    });
    let mut members = Vec::new();
    for &i in &order {
        if svd.singular_values[i] <= tol {
            let v = RealVector::from_iterator(nn2, v_t.row(i).iter().copied());
            members.push(crate::linalg::from_real_vec(n, n, &v));
        }
    }
    SymSpace::from_span(
        n,
        &members,
        ScalarField::Real,
        format!("({}) ∩ ({})", a.provenance(), b.provenance()),
        tol,
        a.tolerance_sensitive() || b.tolerance_sensitive(),
    )
}

/// Verdict classes for a weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// The symmetry space is the scalar line: no reduction exists.
    Irreducible,
    /// The symmetry space equals the Hermitian commutant part: every
    /// reduction can be realized by a unitary conjugation.
    UnitarilyReducibleOnly,
    /// The symmetry space strictly contains the Hermitian commutant part:
    /// a reduction exists but needs a non-unitary congruence.
    NonUnitarilyReducible,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Irreducible => write!(f, "irreducible"),
            Classification::UnitarilyReducibleOnly => write!(f, "unitarily-reducible-only"),
            Classification::NonUnitarilyReducible => write!(f, "non-unitarily-reducible"),
        }
    }
}

/// Summary report of the reducibility analysis of one weight.
#[derive(Debug, Clone)]
pub struct ReducibilityReport {
    pub sym_real_dim: usize,
    pub commutant_complex_dim: usize,
    pub hermitian_real_dim: usize,
    pub star_invariant: bool,
    pub classification: Classification,
    /// Some verdict-relevant kernel dimension changed under a tighter
    /// cutoff; the verdict should not be trusted silently.
    pub tolerance_sensitive: bool,
}

/// Full verdict: dimensions of the symmetry space, commutant and its
/// Hermitian part, the star-invariance flag and the classification.
pub fn verdict(w: &MatrixWeight, tols: &Tolerances) -> Result<ReducibilityReport> {
    let sampling = default_sampling(w);
    let sym = sym_space_of_weight(w, sampling, tols.kernel)?;
    let alg = commutant_of_weight(w, sampling, tols.kernel)?;
    let herm = hermitian_part(&alg, tols.span)?;
    let star = star_invariant(&sym, tols.span);

    let mut sensitive =
        sym.tolerance_sensitive() || alg.tolerance_sensitive() || herm.tolerance_sensitive();
    if star {
        // pointwise star-invariance: every member of a star-invariant
        // symmetry space is itself Hermitian
        for t in sym.basis() {
            if !is_hermitian(t, 1e-8) {
                return Err(Error::Inconsistent(
                    "star-invariant symmetry space contains a non-Hermitian basis element".into(),
                ));
            }
        }
        if sym.real_dim() != herm.real_dim() {
            sensitive = true;
        }
    }

    let classification = if sym.real_dim() <= 1 {
        Classification::Irreducible
    } else if star {
        Classification::UnitarilyReducibleOnly
    } else {
        Classification::NonUnitarilyReducible
    };

    Ok(ReducibilityReport {
        sym_real_dim: sym.real_dim(),
        commutant_complex_dim: alg.complex_dim(),
        hermitian_real_dim: herm.real_dim(),
        star_invariant: star,
        classification,
        tolerance_sensitive: sensitive,
    })
}
