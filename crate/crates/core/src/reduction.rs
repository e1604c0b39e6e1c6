//! Explicit reducing transforms.
//!
//! A non-scalar Hermitian element of the commutant splits the weight
//! unitarily along its eigenspaces. When the symmetry space is strictly
//! larger than the Hermitian commutant part, conjugating by the inverse
//! square root of the zeroth moment normalizes the measure; the
//! normalized weight's symmetry space consists of Hermitian matrices, so
//! the unitary route applies there and the combined congruence
//! `M = U* S⁻¹` realizes the reduction of the original weight.

use num_complex::Complex64;

use crate::commutant::{
    commutant_of_weight, default_sampling, hermitian_part, star_invariant, sym_space_of_weight,
    Tolerances,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_sqrt, hermitize, identity, offblock_norm, CMatrix, SymSpace};
use crate::measure::MatrixWeight;
use crate::poly::MatrixPoly;
use crate::rng::SplitMix64;

/// Default seed for the generic Hermitian combination.
pub const DEFAULT_SEED: u64 = 0x6d61_7472_6564_3031;

/// Relative eigenvalue-gap threshold: gaps below `GAP_REL * spread` merge
/// eigenvalue groups.
const GAP_REL: f64 = 1e-6;

/// Retries with fresh seeds before giving up on splitting.
const MAX_SEED_RETRIES: u64 = 5;

/// How a reduction was achieved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionMode {
    /// `M` is unitary.
    Unitary,
    /// `M = U* S⁻¹` with `S` the positive square root of the zeroth moment.
    NormalizedUnitary,
    /// No reduction found; `M` is the identity.
    None,
}

impl std::fmt::Display for ReductionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReductionMode::Unitary => write!(f, "unitary"),
            ReductionMode::NormalizedUnitary => write!(f, "normalized-unitary"),
            ReductionMode::None => write!(f, "none"),
        }
    }
}

/// An explicit reducing congruence `x ↦ M W(x) M*` together with the block
/// partition it realizes.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub transform: CMatrix,
    /// Contiguous index groups of the transformed weight.
    pub partition: Vec<Vec<usize>>,
    pub block_sizes: Vec<usize>,
    /// Largest off-block Frobenius mass of `M W(x_i) M*` over the test
    /// nodes used during construction.
    pub residual: f64,
    pub mode: ReductionMode,
    /// Present when the reduction degenerated (e.g. no spectral gap).
    pub diagnostic: Option<String>,
}

impl ReductionResult {
    fn none(dim: usize, diagnostic: Option<String>) -> Self {
        Self {
            transform: identity(dim),
            partition: vec![(0..dim).collect()],
            block_sizes: vec![dim],
            residual: 0.0,
            mode: ReductionMode::None,
            diagnostic,
        }
    }
}

/// Groups sorted eigenvalues into clusters separated by gaps larger than
/// `GAP_REL * spread`; returns the group sizes.
fn eigenvalue_groups(values: &[f64]) -> Vec<usize> {
    let spread = values.last().unwrap() - values.first().unwrap();
    let gap_tol = GAP_REL * spread.max(f64::MIN_POSITIVE);
    let mut sizes = vec![1usize];
    for w in values.windows(2) {
        if w[1] - w[0] > gap_tol {
            sizes.push(1);
        } else {
            *sizes.last_mut().unwrap() += 1;
        }
    }
    sizes
}

fn contiguous_partition(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut partition = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &s in sizes {
        partition.push((start..start + s).collect());
        start += s;
    }
    partition
}

/// Unitary reduction along the eigenspaces of a generic Hermitian element
/// of `ah` (a seeded combination of the basis).
///
/// Returns mode `None` when `ah` is the scalar line or no stable spectral
/// split exists.
pub fn unitary_reduce(w: &MatrixWeight, ah: &SymSpace, seed: u64) -> Result<ReductionResult> {
    let dim = w.dim();
    if ah.matrix_dim() != dim {
        return Err(Error::InvalidArgument(
            "space dimension does not match the weight".into(),
        ));
    }
    if ah.real_dim() <= 1 {
        return Ok(ReductionResult::none(
            dim,
            Some("the Hermitian commutant part is the scalar line".into()),
        ));
    }
    for attempt in 0..MAX_SEED_RETRIES {
        let mut rng = SplitMix64::new(seed.wrapping_add(attempt));
        let mut generic = CMatrix::zeros(dim, dim);
        for b in ah.basis() {
            let c = rng.next_signed();
            generic += b.map(|z| z * c);
        }
        let generic = hermitize(&generic);
        let eig = crate::linalg::hermitian_eig(&generic)?;
        let spread = eig.values.last().unwrap() - eig.values.first().unwrap();
        if spread <= 1e-12 * (1.0 + eig.values.last().unwrap().abs()) {
            continue; // essentially scalar; reseed
        }
        let sizes = eigenvalue_groups(&eig.values);
        if sizes.len() <= 1 {
            continue;
        }
        let transform = eig.vectors.adjoint();
        let result = canonicalize_blocks(w, transform, sizes, ReductionMode::Unitary)?;
        return Ok(result);
    }
    Ok(ReductionResult::none(
        dim,
        Some("no stable eigenvalue split after reseeding".into()),
    ))
}

/// Reorders the blocks canonically (descending size, ties broken by
/// ascending trace of the transformed zeroth-moment block) and measures
/// the off-block residual.
fn canonicalize_blocks(
    w: &MatrixWeight,
    transform: CMatrix,
    sizes: Vec<usize>,
    mode: ReductionMode,
) -> Result<ReductionResult> {
    let dim = w.dim();
    let m0 = w.moment(0)?;
    let transformed_m0 = &transform * &m0 * transform.adjoint();

    let mut starts = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in &sizes {
        starts.push(acc);
        acc += s;
    }
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    let trace_of = |g: usize| -> f64 {
        (starts[g]..starts[g] + sizes[g])
            .map(|i| transformed_m0[(i, i)].re)
            .sum()
    };
    order.sort_by(|&a, &b| {
        sizes[b]
            .cmp(&sizes[a])
            .then(trace_of(a).partial_cmp(&trace_of(b)).unwrap())
    });

    let mut permuted = CMatrix::zeros(dim, dim);
    let mut row = 0;
    let mut new_sizes = Vec::with_capacity(sizes.len());
    for &g in &order {
        for i in 0..sizes[g] {
            for c in 0..dim {
                permuted[(row, c)] = transform[(starts[g] + i, c)];
            }
            row += 1;
        }
        new_sizes.push(sizes[g]);
    }
    let partition = contiguous_partition(&new_sizes);
    let residual = max_offblock_residual(w, &permuted, &partition, 20)?;
    Ok(ReductionResult {
        transform: permuted,
        partition,
        block_sizes: new_sizes,
        residual,
        mode,
        diagnostic: None,
    })
}

fn max_offblock_residual(
    w: &MatrixWeight,
    transform: &CMatrix,
    partition: &[Vec<usize>],
    nodes: usize,
) -> Result<f64> {
    let (a, b) = w.base().support();
    let mid = 0.5 * (a + b);
    let rad = 0.5 * (b - a);
    let mut worst = 0.0f64;
    for i in 0..nodes {
        let x = mid + rad * (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * nodes) as f64).cos();
        let conj = transform * w.eval(x) * transform.adjoint();
        worst = worst.max(offblock_norm(&conj, partition)?);
    }
    let m0 = w.moment(0)?;
    let conj0 = transform * m0 * transform.adjoint();
    worst = worst.max(offblock_norm(&conj0, partition)?);
    Ok(worst)
}

/// Normalization: `S = M₀^{1/2}` and the conjugated weight
/// `x ↦ S⁻¹ W(x) S⁻¹`, whose zeroth moment is the identity.
pub fn normalize(w: &MatrixWeight) -> Result<(CMatrix, MatrixWeight)> {
    let m0 = w.moment(0)?;
    let s = hermitian_sqrt(&m0)?;
    let s_inv = s.clone().try_inverse().ok_or({
        Error::NotPositiveDefinite {
            min_eigenvalue: 0.0,
        }
    })?;
    let normalized = w.conjugated(&s_inv)?;
    Ok((s, normalized))
}

/// Full pipeline: decide between the direct unitary route and the
/// normalize-then-unitary route, and produce the explicit congruence.
pub fn full_reduce(w: &MatrixWeight, seed: u64, tols: &Tolerances) -> Result<ReductionResult> {
    let dim = w.dim();
    let sampling = default_sampling(w);
    let sym = sym_space_of_weight(w, sampling, tols.kernel)?;
    if sym.real_dim() <= 1 {
        return Ok(ReductionResult::none(
            dim,
            Some("the symmetry space is the scalar line".into()),
        ));
    }
    if star_invariant(&sym, tols.span) {
        let alg = commutant_of_weight(w, sampling, tols.kernel)?;
        let herm = hermitian_part(&alg, tols.span)?;
        return unitary_reduce(w, &herm, seed);
    }
    // non-unitary case: normalize first; the normalized symmetry space is
    // Hermitian and equals the normalized Hermitian commutant part
    let (s, normalized) = normalize(w)?;
    let s_inv = s.clone().try_inverse().expect("S is positive definite");
    let alg = commutant_of_weight(&normalized, default_sampling(&normalized), tols.kernel)?;
    let herm = hermitian_part(&alg, tols.span)?;
    let inner = unitary_reduce(&normalized, &herm, seed)?;
    if inner.mode == ReductionMode::None {
        return Ok(ReductionResult::none(dim, inner.diagnostic));
    }
    let transform = &inner.transform * &s_inv;
    let residual = max_offblock_residual(w, &transform, &inner.partition, 20)?;
    Ok(ReductionResult {
        transform,
        partition: inner.partition,
        block_sizes: inner.block_sizes,
        residual,
        mode: ReductionMode::NormalizedUnitary,
        diagnostic: None,
    })
}

/// Re-evaluates the off-block residual of a finished reduction at
/// `nodes` fresh sample points (plus the transformed zeroth moment).
pub fn verify_block_structure(
    w: &MatrixWeight,
    result: &ReductionResult,
    nodes: usize,
) -> Result<f64> {
    if result.mode == ReductionMode::None {
        return Err(Error::InvalidArgument(
            "nothing to verify: the reduction mode is none".into(),
        ));
    }
    max_offblock_residual(w, &result.transform, &result.partition, nodes)
}

/// The diagonal blocks of the transformed weight as standalone weights
/// over the same base measure.
pub fn extract_blocks(w: &MatrixWeight, result: &ReductionResult) -> Result<Vec<MatrixWeight>> {
    if result.mode == ReductionMode::None {
        return Err(Error::InvalidArgument(
            "nothing to extract: the reduction mode is none".into(),
        ));
    }
    let conj_coeffs: Vec<CMatrix> = w
        .poly()
        .coeffs()
        .iter()
        .map(|c| &result.transform * c * result.transform.adjoint())
        .collect();
    let mut blocks = Vec::with_capacity(result.partition.len());
    let mut start = 0usize;
    for size in &result.block_sizes {
        let coeffs: Vec<CMatrix> = conj_coeffs
            .iter()
            .map(|c| hermitize(&c.view((start, start), (*size, *size)).into_owned()))
            .collect();
        blocks.push(MatrixWeight::new(
            MatrixPoly::new(coeffs)?,
            w.base().clone(),
        )?);
        start += size;
    }
    Ok(blocks)
}

/// A deterministic unitary matrix derived from a seeded Hermitian sample;
/// handy for conjugation-equivariance checks.
pub fn seeded_unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = SplitMix64::new(seed);
    let mut h = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            if i == j {
                h[(i, i)] = Complex64::new(rng.next_signed(), 0.0);
            } else {
                let z = Complex64::new(rng.next_signed(), rng.next_signed());
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
    }
    crate::linalg::hermitian_eig(&h)
        .expect("seeded Hermitian sample")
        .vectors
}
