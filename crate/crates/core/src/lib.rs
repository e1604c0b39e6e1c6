//! Numerical reducibility analysis for matrix-valued measures.
//!
//! Given a Hermitian matrix weight `W` over a scalar base measure, this
//! crate decides whether the induced matrix-valued measure splits into
//! smaller diagonal blocks, distinguishes splits achievable by a unitary
//! conjugation from those needing a general invertible congruence, and
//! produces the explicit reducing transform. It also constructs the monic
//! matrix-valued orthogonal polynomials of the weight (squared norms and
//! three-term recurrence included) and verifies the intertwining
//! identities tying them to the symmetry space.
//!
//! The decision rests on three finite-dimensional objects computed by
//! SVD-based kernel extraction:
//!
//! * the symmetry space `{T | T W(x) = W(x) T*}` — non-scalar exactly
//!   when the measure reduces;
//! * the commutant `{T | T W(x) = W(x) T}` and its Hermitian part — a
//!   non-scalar Hermitian commutant element splits the weight unitarily;
//! * star-invariance of the symmetry space — it holds exactly when the
//!   symmetry space equals the Hermitian commutant part, i.e. when every
//!   reduction can be made unitary. Conjugating by the inverse square
//!   root of the zeroth moment always restores star-invariance, which is
//!   what the normalized reduction route exploits.
//!
//! ```
//! use matred_core::commutant::{verdict, Classification, Tolerances};
//! use matred_core::families::tirao_variant_weight;
//! use matred_core::reduction::{full_reduce, ReductionMode, DEFAULT_SEED};
//!
//! let (weight, _) = tirao_variant_weight();
//! let report = verdict(&weight, &Tolerances::default()).unwrap();
//! assert_eq!(report.classification, Classification::NonUnitarilyReducible);
//!
//! // the explicit congruence: unitary after normalizing the measure
//! let reduction = full_reduce(&weight, DEFAULT_SEED, &Tolerances::default()).unwrap();
//! assert_eq!(reduction.mode, ReductionMode::NormalizedUnitary);
//! assert_eq!(reduction.block_sizes, vec![1, 1]);
//! assert!(reduction.residual < 1e-9);
//! ```

pub mod commutant;
pub mod error;
pub mod families;
pub mod linalg;
pub mod measure;
pub mod mop;
pub mod poly;
pub mod reduction;
pub(crate) mod rng;
pub mod special;

pub use commutant::{
    adjoint_space, commutant_of_weight, default_sampling, gamma_commutant, gamma_sym_space,
    hermitian_part, max_skew_fraction, skew_hermitian_content, space_intersection, star_invariant,
    sym_space_of_weight, verdict, Classification, ReducibilityReport, Tolerances,
};
pub use error::{Error, Result};
pub use linalg::{
    hermitian_eig, hermitian_sqrt, offblock_norm, real_kernel_basis, span_contains, CMatrix,
    HermitianEig, IntertwinerKind, KernelBasis, RealLinearSystem, ScalarField, SymSpace,
};
pub use measure::{
    quadrature_rule, BaseMeasure, GammaLabel, GammaSequence, MatrixWeight, QuadratureRule,
};
pub use mop::{
    gamma_from_moments, gamma_from_mops, monic_mops, monic_mops_gram_schmidt,
    intertwining_residuals, MopData, SymmetryResiduals,
};
pub use poly::MatrixPoly;
pub use reduction::{
    extract_blocks, full_reduce, normalize, unitary_reduce, verify_block_structure,
    ReductionMode, ReductionResult,
};
