//! Weight-spec files and builtin names.
//!
//! A spec file either describes a weight explicitly,
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "base": {"kind": "lebesgue", "a": 0.0, "b": 1.0},
//!   "entries": {"0,0": [0.0, 0.6667, 1.0], "0,1": [0.0, 0.8165]}
//! }
//! ```
//!
//! with polynomial coefficient lists per upper-triangle entry (scalars or
//! `[re, im]` pairs; the lower triangle is completed Hermitianly), or
//! names a builtin:
//!
//! ```json
//! {"builtin": {"name": "gegenbauer", "params": {"ell": 1.0, "nu": 1.0}}}
//! ```
//!
//! On the command line, builtins take the compact form
//! `tirao-variant`, `gegenbauer(ell, nu)` or
//! `q-gegenbauer-norms(ell, q, count)`.

use std::collections::BTreeMap;

use matred_core::families::{
    gegenbauer_weight, q_norm_sequence, tirao_variant_weight, GegenbauerParams, QParams,
    TiraoReference,
};
use matred_core::linalg::CMatrix;
use matred_core::measure::{BaseMeasure, GammaSequence, MatrixWeight};
use matred_core::poly::MatrixPoly;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpecFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<BTreeMap<String, Vec<CoeffSpec>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BaseSpec {
    Lebesgue { a: f64, b: f64 },
    Gegenbauer { nu: f64 },
    Atoms { points: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Real(f64),
    Complex([f64; 2]),
}

impl CoeffSpec {
    fn value(&self) -> Complex64 {
        match self {
            CoeffSpec::Real(re) => Complex64::new(*re, 0.0),
            CoeffSpec::Complex([re, im]) => Complex64::new(*re, *im),
        }
    }
}

impl From<&BaseSpec> for BaseMeasure {
    fn from(spec: &BaseSpec) -> Self {
        match spec {
            BaseSpec::Lebesgue { a, b } => BaseMeasure::Lebesgue { a: *a, b: *b },
            BaseSpec::Gegenbauer { nu } => BaseMeasure::Gegenbauer { nu: *nu },
            BaseSpec::Atoms { points } => BaseMeasure::Atoms {
                points: points.clone(),
            },
        }
    }
}

/// Resolved analysis input: either a full weight or only a Γ-sequence
/// (some builtins provide closed-form norms without a weight).
pub enum Input {
    Weight {
        weight: MatrixWeight,
        reference: Option<Box<TiraoReference>>,
        closed_norms: Option<GegenbauerParams>,
        descriptor: String,
        spec: WeightSpecFile,
    },
    Gammas {
        gammas: GammaSequence,
        descriptor: String,
        spec: WeightSpecFile,
    },
}

impl Input {
    pub fn descriptor(&self) -> &str {
        match self {
            Input::Weight { descriptor, .. } | Input::Gammas { descriptor, .. } => descriptor,
        }
    }

    pub fn spec(&self) -> &WeightSpecFile {
        match self {
            Input::Weight { spec, .. } | Input::Gammas { spec, .. } => spec,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Input::Weight { weight, .. } => weight.dim(),
            Input::Gammas { gammas, .. } => gammas.dim(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> matred_core::Error {
    matred_core::Error::InvalidArgument(msg.into())
}

fn parse_entry_key(key: &str) -> matred_core::Result<(usize, usize)> {
    let mut parts = key.split(',');
    let (i, j) = match (parts.next(), parts.next(), parts.next()) {
        (Some(i), Some(j), None) => (i.trim(), j.trim()),
        _ => return Err(invalid(format!("entry key '{key}' is not of the form 'i,j'"))),
    };
    let i: usize = i
        .parse()
        .map_err(|_| invalid(format!("entry key '{key}': bad row index")))?;
    let j: usize = j
        .parse()
        .map_err(|_| invalid(format!("entry key '{key}': bad column index")))?;
    Ok((i, j))
}

/// Materializes an explicit (non-builtin) spec into a weight.
fn weight_from_explicit(spec: &WeightSpecFile) -> matred_core::Result<MatrixWeight> {
    let dim = spec
        .dimension
        .ok_or_else(|| invalid("spec is missing 'dimension'"))?;
    if dim == 0 {
        return Err(invalid("'dimension' must be positive"));
    }
    let base = spec
        .base
        .as_ref()
        .ok_or_else(|| invalid("spec is missing 'base'"))?;
    let entries = spec
        .entries
        .as_ref()
        .ok_or_else(|| invalid("spec is missing 'entries'"))?;

    let mut max_len = 1usize;
    for coeffs in entries.values() {
        max_len = max_len.max(coeffs.len());
    }
    let mut coeff_mats = vec![CMatrix::zeros(dim, dim); max_len];
    for (key, coeffs) in entries {
        let (i, j) = parse_entry_key(key)?;
        if i >= dim || j >= dim {
            return Err(invalid(format!(
                "entry '{key}' is outside the {dim}×{dim} matrix"
            )));
        }
        if i > j {
            return Err(invalid(format!(
                "entry '{key}': specify the upper triangle only (i ≤ j); the lower triangle is completed Hermitianly"
            )));
        }
        for (k, c) in coeffs.iter().enumerate() {
            // a diagonal entry with an imaginary part survives here and is
            // rejected by the Hermitian check in MatrixWeight::new
            let z = c.value();
            coeff_mats[k][(i, j)] = z;
            if i != j {
                coeff_mats[k][(j, i)] = z.conj();
            }
        }
    }
    MatrixWeight::new(MatrixPoly::new(coeff_mats)?, BaseMeasure::from(base))
}

fn param(
    params: &BTreeMap<String, f64>,
    name: &str,
    builtin: &str,
) -> matred_core::Result<f64> {
    params
        .get(name)
        .copied()
        .ok_or_else(|| invalid(format!("builtin '{builtin}' needs parameter '{name}'")))
}

/// Resolves a builtin (name + named parameters) to an input.
pub fn resolve_builtin(
    name: &str,
    params: &BTreeMap<String, f64>,
    spec: WeightSpecFile,
    descriptor: String,
) -> matred_core::Result<Input> {
    match name {
        "tirao-variant" => {
            let (weight, reference) = tirao_variant_weight();
            Ok(Input::Weight {
                weight,
                reference: Some(Box::new(reference)),
                closed_norms: None,
                descriptor,
                spec,
            })
        }
        "gegenbauer" => {
            let p = GegenbauerParams::new(
                param(params, "ell", name)?,
                param(params, "nu", name)?,
            )?;
            Ok(Input::Weight {
                weight: gegenbauer_weight(&p)?,
                reference: None,
                closed_norms: Some(p),
                descriptor,
                spec,
            })
        }
        "q-gegenbauer-norms" => {
            let p = QParams::new(param(params, "ell", name)?, param(params, "q", name)?)?;
            let count = param(params, "count", name)?;
            if count < 2.0 || count.fract() != 0.0 {
                return Err(invalid("'count' must be an integer ≥ 2"));
            }
            Ok(Input::Gammas {
                gammas: q_norm_sequence(&p, count as usize)?,
                descriptor,
                spec,
            })
        }
        other => Err(invalid(format!(
            "unknown builtin '{other}' (available: tirao-variant, gegenbauer(ell, nu), q-gegenbauer-norms(ell, q, count))"
        ))),
    }
}

/// Parses the compact CLI form `name` or `name(p1, p2, …)` with the
/// parameters taken positionally.
pub fn parse_builtin_expr(expr: &str) -> matred_core::Result<Input> {
    let expr = expr.trim();
    let (name, args): (&str, Vec<f64>) = match expr.find('(') {
        None => (expr, Vec::new()),
        Some(open) => {
            let close = expr
                .rfind(')')
                .ok_or_else(|| invalid(format!("builtin '{expr}': missing ')'")))?;
            let name = expr[..open].trim();
            let inner = &expr[open + 1..close];
            let args = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| invalid(format!("builtin '{expr}': bad number '{s}'")))
                })
                .collect::<matred_core::Result<Vec<f64>>>()?;
            (name, args)
        }
    };
    let positional: &[&str] = match name {
        "tirao-variant" => &[],
        "gegenbauer" => &["ell", "nu"],
        "q-gegenbauer-norms" => &["ell", "q", "count"],
        other => {
            return Err(invalid(format!(
                "unknown builtin '{other}' (available: tirao-variant, gegenbauer(ell, nu), q-gegenbauer-norms(ell, q, count))"
            )))
        }
    };
    if args.len() != positional.len() {
        return Err(invalid(format!(
            "builtin '{name}' takes {} parameter(s), got {}",
            positional.len(),
            args.len()
        )));
    }
    let params: BTreeMap<String, f64> = positional
        .iter()
        .map(|s| s.to_string())
        .zip(args.iter().copied())
        .collect();
    let spec = WeightSpecFile {
        dimension: None,
        base: None,
        entries: None,
        builtin: Some(BuiltinSpec {
            name: name.to_string(),
            params: params.clone(),
        }),
    };
    resolve_builtin(name, &params, spec, format!("builtin:{expr}"))
}

/// Loads and resolves a spec file.
pub fn load_spec_file(path: &std::path::Path) -> Result<Input, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read '{}': {e}", path.display()))?;
    let spec: WeightSpecFile = serde_json::from_str(&text)
        .map_err(|e| format!("malformed spec '{}': {e}", path.display()))?;
    let descriptor = format!("spec:{}", path.display());
    if let Some(builtin) = spec.builtin.clone() {
        if spec.dimension.is_some() || spec.base.is_some() || spec.entries.is_some() {
            return Err(format!(
                "malformed spec '{}': 'builtin' excludes 'dimension'/'base'/'entries'",
                path.display()
            ));
        }
        return resolve_builtin(&builtin.name, &builtin.params, spec, descriptor)
            .map_err(|e| e.to_string());
    }
    let weight = weight_from_explicit(&spec).map_err(|e| e.to_string())?;
    weight.validate().map_err(|e| {
        format!(
            "invalid weight in '{}': {e}",
            path.display()
        )
    })?;
    Ok(Input::Weight {
        weight,
        reference: None,
        closed_norms: None,
        descriptor,
        spec,
    })
}

/// Serializes a weight back into the spec-file format (used by
/// `--emit-blocks`). Tiny entries below `threshold` are dropped.
pub fn weight_to_spec(w: &MatrixWeight, threshold: f64) -> WeightSpecFile {
    let dim = w.dim();
    let base = match w.base() {
        BaseMeasure::Lebesgue { a, b } => BaseSpec::Lebesgue { a: *a, b: *b },
        BaseMeasure::Gegenbauer { nu } => BaseSpec::Gegenbauer { nu: *nu },
        BaseMeasure::Atoms { points } => BaseSpec::Atoms {
            points: points.clone(),
        },
    };
    let mut entries: BTreeMap<String, Vec<CoeffSpec>> = BTreeMap::new();
    let coeffs = w.poly().coeffs();
    for i in 0..dim {
        for j in i..dim {
            let list: Vec<Complex64> = coeffs.iter().map(|c| c[(i, j)]).collect();
            let last_nonzero = list.iter().rposition(|z| z.norm() > threshold);
            if let Some(k) = last_nonzero {
                let specs: Vec<CoeffSpec> = list[..=k]
                    .iter()
                    .map(|z| {
                        if z.im == 0.0 {
                            CoeffSpec::Real(z.re)
                        } else {
                            CoeffSpec::Complex([z.re, z.im])
                        }
                    })
                    .collect();
                entries.insert(format!("{i},{j}"), specs);
            }
        }
    }
    WeightSpecFile {
        dimension: Some(dim),
        base: Some(base),
        entries: Some(entries),
        builtin: None,
    }
}
