//! Machine-readable reports.
//!
//! One JSON document per invocation, with optional blocks filled in by
//! the subcommands. Matrices are serialized row-major with explicit
//! dimensions; complex numbers as `[re, im]` pairs. Field order is fixed
//! by the struct definitions and maps are ordered, so identical analyses
//! produce byte-identical reports.

use matred_core::linalg::CMatrix;
use serde::Serialize;

use crate::input::WeightSpecFile;

#[derive(Debug, Clone, Serialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `[re, im]` pairs.
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self { rows, cols, data }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolBlock {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputBlock {
    pub descriptor: String,
    /// "weight" or "gamma-sequence".
    pub kind: &'static str,
    pub dimension: usize,
    /// The resolved spec; feeding it back through `--spec` reproduces the
    /// report.
    pub spec: WeightSpecFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceBlock {
    pub kernel: f64,
    pub span: f64,
    /// The eigenvalue-gap threshold is derived from the spectrum spread.
    pub gap: &'static str,
    pub seed: u64,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictBlock {
    pub symmetry_real_dim: usize,
    pub commutant_complex_dim: usize,
    pub hermitian_commutant_real_dim: usize,
    pub star_invariant: bool,
    pub classification: String,
    pub tolerance_sensitive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionBlock {
    pub mode: String,
    pub block_sizes: Vec<usize>,
    pub partition: Vec<Vec<usize>>,
    pub transform: MatrixJson,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MopBlock {
    pub degree: usize,
    pub norms: Vec<MatrixJson>,
    pub recurrence_b: Vec<MatrixJson>,
    pub recurrence_c: Vec<MatrixJson>,
}

/// One Γ-space `{T | T Γ_n = Γ_n T*, n in indices}`.
#[derive(Debug, Clone, Serialize)]
pub struct GammaSpaceBlock {
    pub indices: Vec<usize>,
    pub label: String,
    pub real_dim: usize,
    pub star_invariant: bool,
    /// Worst non-Hermitian deviation over the basis.
    pub hermitian_deviation: f64,
    pub contains_identity: bool,
    pub contains_flip: bool,
    pub tolerance_sensitive: bool,
}

/// One named check: the measured value, the tolerance it was judged
/// against, and the outcome.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyEntry {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl PropertyEntry {
    pub fn residual(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            tolerance: 0.5,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: ToolBlock,
    pub input: InputBlock,
    pub tolerances: ToleranceBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mop: Option<MopBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_spaces: Option<Vec<GammaSpaceBlock>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub properties: Option<Vec<PropertyEntry>>,
}

impl Report {
    pub fn any_property_failed(&self) -> bool {
        self.properties
            .as_ref()
            .map(|ps| ps.iter().any(|p| !p.pass))
            .unwrap_or(false)
    }

    pub fn tolerance_sensitive(&self) -> bool {
        self.verdict
            .as_ref()
            .map(|v| v.tolerance_sensitive)
            .unwrap_or(false)
            || self
                .gamma_spaces
                .as_ref()
                .map(|gs| gs.iter().any(|g| g.tolerance_sensitive))
                .unwrap_or(false)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Plain-text summary for `--human`.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(&mut out, format!("input: {}", self.input.descriptor));
        push(
            &mut out,
            format!(
                "kind: {} (dimension {})",
                self.input.kind, self.input.dimension
            ),
        );
        if let Some(v) = &self.verdict {
            push(&mut out, format!("classification: {}", v.classification));
            push(
                &mut out,
                format!(
                    "dims: symmetry {} | commutant(C) {} | hermitian part {}",
                    v.symmetry_real_dim, v.commutant_complex_dim, v.hermitian_commutant_real_dim
                ),
            );
            push(&mut out, format!("star-invariant: {}", v.star_invariant));
            if v.tolerance_sensitive {
                push(&mut out, "warning: verdict is tolerance-sensitive".into());
            }
        }
        if let Some(r) = &self.reduction {
            push(
                &mut out,
                format!(
                    "reduction: mode {} | blocks {:?} | off-block residual {:.3e}",
                    r.mode, r.block_sizes, r.residual
                ),
            );
            if let Some(d) = &r.diagnostic {
                push(&mut out, format!("reduction note: {d}"));
            }
        }
        if let Some(m) = &self.mop {
            push(
                &mut out,
                format!("orthogonal polynomials up to degree {}", m.degree),
            );
            for (n, h) in m.norms.iter().enumerate() {
                let diag: Vec<String> = (0..h.rows)
                    .map(|i| format!("{:.12}", h.data[i * h.cols + i][0]))
                    .collect();
                push(&mut out, format!("  |H_{n}| diag: [{}]", diag.join(", ")));
            }
        }
        if let Some(gs) = &self.gamma_spaces {
            for g in gs {
                push(
                    &mut out,
                    format!(
                        "Γ{:?} ({}): dim {} | star-invariant {} | contains I {} | contains flip {}",
                        g.indices, g.label, g.real_dim, g.star_invariant, g.contains_identity,
                        g.contains_flip
                    ),
                );
            }
        }
        if let Some(ps) = &self.properties {
            let failed = ps.iter().filter(|p| !p.pass).count();
            push(
                &mut out,
                format!("properties: {} checked, {} failed", ps.len(), failed),
            );
            for p in ps {
                push(
                    &mut out,
                    format!(
                        "  [{}] {}: {:.3e} (tol {:.3e})",
                        if p.pass { "pass" } else { "FAIL" },
                        p.name,
                        p.value,
                        p.tolerance
                    ),
                );
            }
        }
        out
    }
}
