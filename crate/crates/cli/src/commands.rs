//! Subcommand implementations: each builds a [`Report`].

use matred_core::commutant::{
    adjoint_space, commutant_of_weight, default_sampling, gamma_sym_space, hermitian_part,
    skew_hermitian_content, space_intersection, star_invariant, sym_space_of_weight, verdict,
    Tolerances,
};
use matred_core::families::{gegenbauer_norms_closed, GegenbauerParams, TiraoReference};
use matred_core::linalg::{flip_matrix, hermitian_deviation, hermitian_sqrt, identity};
use matred_core::measure::{GammaSequence, MatrixWeight};
use matred_core::mop::{
    construction_deviation, gamma_from_moments, gamma_from_mops, monic_mops,
    monic_mops_gram_schmidt, orthogonality_residual, recurrence_residual, intertwining_residuals,
    MopData,
};
use matred_core::reduction::{full_reduce, verify_block_structure, ReductionMode};
use matred_core::Result;
use num_complex::Complex64;

use crate::input::Input;
use crate::report::{
    GammaSpaceBlock, InputBlock, MatrixJson, MopBlock, PropertyEntry, Report, ReductionBlock,
    ToleranceBlock, ToolBlock, VerdictBlock,
};

/// Options shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub kernel_tol: f64,
    pub span_tol: f64,
    pub seed: u64,
    pub degree: usize,
}

impl Options {
    fn tols(&self) -> Tolerances {
        Tolerances {
            kernel: self.kernel_tol,
            span: self.span_tol,
        }
    }
}

fn base_report(input: &Input, opts: &Options) -> Report {
    Report {
        tool: ToolBlock {
            name: "matred",
            version: env!("CARGO_PKG_VERSION"),
        },
        input: InputBlock {
            descriptor: input.descriptor().to_string(),
            kind: match input {
                Input::Weight { .. } => "weight",
                Input::Gammas { .. } => "gamma-sequence",
            },
            dimension: input.dimension(),
            spec: input.spec().clone(),
        },
        tolerances: ToleranceBlock {
            kernel: opts.kernel_tol,
            span: opts.span_tol,
            gap: "auto",
            seed: opts.seed,
            degree: opts.degree,
        },
        verdict: None,
        reduction: None,
        mop: None,
        gamma_spaces: None,
        properties: None,
    }
}

fn verdict_block(w: &MatrixWeight, opts: &Options) -> Result<VerdictBlock> {
    let rep = verdict(w, &opts.tols())?;
    Ok(VerdictBlock {
        symmetry_real_dim: rep.sym_real_dim,
        commutant_complex_dim: rep.commutant_complex_dim,
        hermitian_commutant_real_dim: rep.hermitian_real_dim,
        star_invariant: rep.star_invariant,
        classification: rep.classification.to_string(),
        tolerance_sensitive: rep.tolerance_sensitive,
    })
}

/// Γ-space summaries over consecutive index pairs `{n, n+1}`.
fn gamma_space_blocks(gammas: &GammaSequence, opts: &Options) -> Result<Vec<GammaSpaceBlock>> {
    let dim = gammas.dim();
    let flip = flip_matrix(dim);
    let eye = identity(dim);
    let mut blocks = Vec::new();
    for n in 0..gammas.len().saturating_sub(1) {
        let indices = vec![n, n + 1];
        let space = gamma_sym_space(gammas, &indices, opts.kernel_tol)?;
        let herm_dev = space
            .basis()
            .iter()
            .map(hermitian_deviation)
            .fold(0.0, f64::max);
        blocks.push(GammaSpaceBlock {
            indices,
            label: gammas.label().to_string(),
            real_dim: space.real_dim(),
            star_invariant: star_invariant(&space, opts.span_tol),
            hermitian_deviation: herm_dev,
            contains_identity: space.contains(&eye, opts.span_tol)?,
            contains_flip: space.contains(&flip, opts.span_tol)?,
            tolerance_sensitive: space.tolerance_sensitive(),
        });
    }
    Ok(blocks)
}

pub fn cmd_analyze(input: &Input, opts: &Options) -> Result<Report> {
    let mut report = base_report(input, opts);
    match input {
        Input::Weight { weight, .. } => {
            report.verdict = Some(verdict_block(weight, opts)?);
        }
        Input::Gammas { gammas, .. } => {
            report.gamma_spaces = Some(gamma_space_blocks(gammas, opts)?);
        }
    }
    Ok(report)
}

fn reduction_block(w: &MatrixWeight, opts: &Options) -> Result<(ReductionBlock, Option<Vec<MatrixWeight>>)> {
    let result = full_reduce(w, opts.seed, &opts.tols())?;
    let blocks = if result.mode != ReductionMode::None {
        Some(matred_core::reduction::extract_blocks(w, &result)?)
    } else {
        None
    };
    let residual = if result.mode != ReductionMode::None {
        verify_block_structure(w, &result, 20)?
    } else {
        0.0
    };
    Ok((
        ReductionBlock {
            mode: result.mode.to_string(),
            block_sizes: result.block_sizes,
            partition: result.partition,
            transform: MatrixJson::from_matrix(&result.transform),
            residual,
            diagnostic: result.diagnostic,
        },
        blocks,
    ))
}

pub fn cmd_reduce(
    input: &Input,
    opts: &Options,
    emit_blocks: Option<&std::path::Path>,
) -> Result<Report> {
    let mut report = cmd_analyze(input, opts)?;
    let weight = match input {
        Input::Weight { weight, .. } => weight,
        Input::Gammas { .. } => {
            return Err(matred_core::Error::InvalidArgument(
                "this input provides only a norm sequence; there is no weight to reduce".into(),
            ))
        }
    };
    let (block, extracted) = reduction_block(weight, opts)?;
    if let (Some(dir), Some(blocks)) = (emit_blocks, extracted) {
        std::fs::create_dir_all(dir).map_err(|e| {
            matred_core::Error::InvalidArgument(format!(
                "cannot create '{}': {e}",
                dir.display()
            ))
        })?;
        for (k, b) in blocks.iter().enumerate() {
            let spec = crate::input::weight_to_spec(b, 1e-12);
            let path = dir.join(format!("block{k}.json"));
            std::fs::write(&path, serde_json::to_string_pretty(&spec).unwrap()).map_err(|e| {
                matred_core::Error::InvalidArgument(format!(
                    "cannot write '{}': {e}",
                    path.display()
                ))
            })?;
        }
    }
    report.reduction = Some(block);
    Ok(report)
}

fn mop_block(w: &MatrixWeight, degree: usize) -> Result<(MopBlock, MopData)> {
    let mops = monic_mops(w, degree)?;
    let block = MopBlock {
        degree,
        norms: mops.norms().iter().map(MatrixJson::from_matrix).collect(),
        recurrence_b: mops.bs().iter().map(MatrixJson::from_matrix).collect(),
        recurrence_c: mops.cs().iter().map(MatrixJson::from_matrix).collect(),
    };
    Ok((block, mops))
}

pub fn cmd_mop(input: &Input, opts: &Options) -> Result<Report> {
    let weight = match input {
        Input::Weight { weight, .. } => weight,
        Input::Gammas { .. } => {
            return Err(matred_core::Error::InvalidArgument(
                "this input provides only a norm sequence; orthogonal polynomials need a weight"
                    .into(),
            ))
        }
    };
    let mut report = base_report(input, opts);
    let (block, _) = mop_block(weight, opts.degree)?;
    report.mop = Some(block);
    Ok(report)
}

/// The full property suite for a weight: intertwining identities of the
/// polynomial data, structural identities of the spaces, construction
/// cross-checks and (for builtins) closed-form reference data.
fn weight_property_suite(
    w: &MatrixWeight,
    reference: Option<&TiraoReference>,
    closed_norms: Option<&GegenbauerParams>,
    opts: &Options,
) -> Result<Vec<PropertyEntry>> {
    let mut props = Vec::new();
    let tols = opts.tols();
    let sampling = default_sampling(w);

    let sym = sym_space_of_weight(w, sampling, tols.kernel)?;
    let alg = commutant_of_weight(w, sampling, tols.kernel)?;
    let herm = hermitian_part(&alg, tols.span)?;

    // no skew-Hermitian members in a genuine symmetry space
    props.push(PropertyEntry::residual(
        "symmetry-skew-content",
        skew_hermitian_content(&sym),
        1e-9,
    ));

    // the intersection with the adjoint space is the Hermitian commutant part
    let both = space_intersection(&sym, &adjoint_space(&sym), 1e-7)?;
    props.push(PropertyEntry::flag(
        "sym-adjoint-intersection-dim-matches-hermitian-part",
        both.real_dim() == herm.real_dim(),
    ));
    let mut mutual = 0.0f64;
    for t in both.basis() {
        mutual = mutual.max(herm.residual(t)?);
    }
    for t in herm.basis() {
        mutual = mutual.max(both.residual(t)?);
    }
    props.push(PropertyEntry::residual(
        "sym-adjoint-intersection-containment",
        mutual,
        1e-7,
    ));

    // intertwining identities of the polynomial data, degree ≤ 4
    let identity_degree = opts.degree.clamp(1, 4);
    let mops = monic_mops(w, identity_degree)?;
    let res = intertwining_residuals(w, &mops, sym.basis())?;
    props.push(PropertyEntry::residual(
        "intertwine-operator-symmetry",
        res.operator_symmetry,
        1e-9,
    ));
    props.push(PropertyEntry::residual(
        "intertwine-poly-commute",
        res.poly_commute,
        1e-9,
    ));
    props.push(PropertyEntry::residual(
        "intertwine-norms",
        res.norm_intertwine,
        1e-9,
    ));
    props.push(PropertyEntry::residual(
        "intertwine-moments",
        res.moment_intertwine,
        1e-9,
    ));
    props.push(PropertyEntry::residual(
        "intertwine-recurrence",
        res.recurrence_commute,
        1e-9,
    ));

    // polynomial construction invariants
    let h_scale = mops
        .norms()
        .iter()
        .map(|h| h.norm())
        .fold(f64::MIN, f64::max);
    props.push(PropertyEntry::residual(
        "mop-orthogonality",
        orthogonality_residual(w, &mops)?,
        1e-9 * (1.0 + h_scale),
    ));
    props.push(PropertyEntry::residual(
        "mop-recurrence",
        recurrence_residual(&mops)?,
        1e-9,
    ));
    let mut cn_dev = 0.0f64;
    for n in 1..identity_degree {
        let inv = mops.norm(n - 1).clone().try_inverse().ok_or_else(|| {
            matred_core::Error::Inconsistent("singular squared norm".into())
        })?;
        let ratio = mops.norm(n) * inv;
        cn_dev = cn_dev.max((mops.c(n) - ratio).norm());
    }
    props.push(PropertyEntry::residual(
        "mop-cn-norm-ratio",
        cn_dev,
        1e-9,
    ));

    // the Hankel and Gram-Schmidt constructions agree
    let gs_degree = opts.degree.clamp(1, 5);
    let hankel = if gs_degree == identity_degree {
        mops
    } else {
        monic_mops(w, gs_degree)?
    };
    let gs = monic_mops_gram_schmidt(w, gs_degree)?;
    props.push(PropertyEntry::residual(
        "mop-construction-agreement",
        construction_deviation(&hankel, &gs),
        1e-8,
    ));

    // star-invariant Γ-spaces certify a star-invariant symmetry space
    let norms = gamma_from_mops(&hankel)?;
    let evens = gamma_from_moments(w, gs_degree.min(norms.len()))?;
    let sym_star = star_invariant(&sym, tols.span);
    let mut implication_ok = true;
    for gammas in [&norms, &evens] {
        for n in 0..gammas.len().saturating_sub(1).min(3) {
            let space = gamma_sym_space(gammas, &[n, n + 1], tols.kernel)?;
            if star_invariant(&space, tols.span)
                && !(sym_star && sym.real_dim() == herm.real_dim())
            {
                implication_ok = false;
            }
        }
    }
    props.push(PropertyEntry::flag(
        "gamma-star-invariance-implication",
        implication_ok,
    ));

    // closed-form oracles for the builtins
    if let Some(params) = closed_norms {
        let mut worst = 0.0f64;
        for n in 0..=identity_degree {
            let closed = gegenbauer_norms_closed(params, n);
            let got = hankel.norm(n);
            worst = worst.max((got - &closed).norm() / closed.norm());
        }
        props.push(PropertyEntry::residual(
            "closed-form-norms-agreement",
            worst,
            1e-8,
        ));
        props.push(PropertyEntry::flag(
            "commutant-contains-flip",
            alg.contains(&flip_matrix(w.dim()), tols.span)?,
        ));
    }
    if let Some(r) = reference {
        let m0 = w.moment(0)?;
        props.push(PropertyEntry::residual(
            "reference-m0",
            (m0.clone() - &r.m0).norm(),
            1e-10,
        ));
        let s = hermitian_sqrt(&m0)?;
        props.push(PropertyEntry::residual(
            "reference-s",
            (s.clone() - &r.s).norm(),
            1e-10,
        ));
        let s_inv = s.clone().try_inverse().expect("S is positive definite");
        let e = &s_inv * &r.commutant_generator * &s;
        let f = &s_inv * &r.sym_generator * &s;
        let g = (&s_inv * &r.skew_generator * &s).map(|z| z * Complex64::new(0.0, 1.0));
        props.push(PropertyEntry::residual(
            "reference-e",
            (e - &r.e).norm(),
            1e-10,
        ));
        props.push(PropertyEntry::residual(
            "reference-f",
            (f - &r.f).norm(),
            1e-10,
        ));
        props.push(PropertyEntry::residual(
            "reference-g",
            (g - &r.g).norm(),
            1e-10,
        ));
        props.push(PropertyEntry::flag(
            "reference-dims",
            {
                let gammas = GammaSequence::new(
                    matred_core::measure::GammaLabel::MomentsEven,
                    vec![r.m0.clone()],
                )?;
                let gspace = gamma_sym_space(&gammas, &[0], tols.kernel)?;
                let galg = matred_core::commutant::gamma_commutant(&gammas, &[0], tols.kernel)?;
                let (d_sym, d_alg, d_gsym, d_galg) = r.expected_dims;
                sym.real_dim() == d_sym
                    && alg.complex_dim() == d_alg
                    && gspace.real_dim() == d_gsym
                    && galg.complex_dim() == d_galg
            },
        ));
    }
    Ok(props)
}

/// Property suite for a bare Γ-sequence: star-invariance of the spaces
/// over consecutive pairs, Hermitian structure, and flip membership.
fn gamma_property_suite(gammas: &GammaSequence, opts: &Options) -> Result<Vec<PropertyEntry>> {
    let mut props = Vec::new();
    let dim = gammas.dim();
    let flip = flip_matrix(dim);
    for n in 0..gammas.len().saturating_sub(1).min(4) {
        let space = gamma_sym_space(gammas, &[n, n + 1], opts.kernel_tol)?;
        let mut adjoint_res = 0.0f64;
        let mut herm_dev = 0.0f64;
        let mut structure = 0.0f64;
        for t in space.basis() {
            adjoint_res = adjoint_res.max(space.residual(&t.adjoint())?);
            herm_dev = herm_dev.max(hermitian_deviation(t));
            for i in 0..dim {
                for j in 0..dim {
                    if j != i && j != dim - 1 - i {
                        structure = structure.max(t[(i, j)].norm());
                    }
                }
            }
        }
        props.push(PropertyEntry::residual(
            format!("gamma[{n},{}]-star-invariance", n + 1),
            adjoint_res,
            opts.span_tol,
        ));
        props.push(PropertyEntry::residual(
            format!("gamma[{n},{}]-hermitian-members", n + 1),
            herm_dev,
            1e-9,
        ));
        props.push(PropertyEntry::residual(
            format!("gamma[{n},{}]-flip-support-structure", n + 1),
            structure,
            1e-9,
        ));
        props.push(PropertyEntry::residual(
            format!("gamma[{n},{}]-contains-flip", n + 1),
            space.residual(&flip)?,
            opts.span_tol,
        ));
    }
    Ok(props)
}

pub fn cmd_verify(input: &Input, opts: &Options) -> Result<Report> {
    let mut report = cmd_analyze(input, opts)?;
    match input {
        Input::Weight {
            weight,
            reference,
            closed_norms,
            ..
        } => {
            let (block, _) = reduction_block(weight, opts)?;
            report.reduction = Some(block);
            report.properties = Some(weight_property_suite(
                weight,
                reference.as_deref(),
                closed_norms.as_ref(),
                opts,
            )?);
        }
        Input::Gammas { gammas, .. } => {
            report.properties = Some(gamma_property_suite(gammas, opts)?);
        }
    }
    Ok(report)
}
