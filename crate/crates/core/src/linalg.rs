//! Dense complex matrix primitives.
//!
//! All higher-level analyses reduce to a handful of operations implemented
//! here: Hermitian eigendecomposition, Hermitian square roots, SVD-based
//! kernel extraction for real-linear matrix equations, span membership
//! tests and block residual norms.
//!
//! A complex `N×N` matrix `T` is identified with the real vector
//! `(Re T, Im T)` of length `2N²` in row-major order. The intertwiner
//! relation `T Γ = Γ T*` conjugates `T`, so it is real-linear but not
//! complex-linear; treating the real and imaginary parts as independent
//! unknowns turns it into an ordinary real linear system whose kernel is
//! found by an SVD with a relative singular-value cutoff.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RealVector = DVector<f64>;

/// Relative tolerance for Hermitian-ness checks.
pub const HERM_TOL: f64 = 1e-12;
/// Relative threshold on the smallest eigenvalue for positive definiteness.
pub const PD_TOL: f64 = 1e-12;
/// Default relative singular-value cutoff for kernel extraction.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-9;
/// Default tolerance for span membership tests.
pub const DEFAULT_SPAN_TOL: f64 = 1e-8;

/// Relative cutoff used when orthonormalizing a spanning set.
const RANK_TOL: f64 = 1e-10;

/// Complex identity matrix.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// The flip (anti-diagonal permutation) `e_j -> e_{n-1-j}`.
pub fn flip_matrix(n: usize) -> CMatrix {
    let mut j = CMatrix::zeros(n, n);
    for k in 0..n {
        j[(k, n - 1 - k)] = Complex64::new(1.0, 0.0);
    }
    j
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Hermitian within `tol * (1 + max |entry|)`, entrywise.
pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    hermitian_deviation(m) <= tol * (1.0 + max_abs_entry(m))
}

/// Largest entrywise deviation `|M[i][j] - conj(M[j][i])|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `(M + M*)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// `(M - M*)/2`.
pub fn skew_part(m: &CMatrix) -> CMatrix {
    (m - m.adjoint()).map(|z| z * 0.5)
}

/// Hermitian eigendecomposition with deterministic conventions.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the corresponding eigenvectors.
    /// Each column is scaled so its largest-magnitude component is real
    /// and positive.
    pub vectors: CMatrix,
}

impl HermitianEig {
    /// Reassembles `U diag(f(λ)) U*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let d = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(f(self.values[i]), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &self.vectors * d * self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Rejects non-Hermitian input. Eigenvalues come out ascending and each
/// eigenvector is phase-normalized (largest-magnitude component forced
/// real positive) so repeated runs are byte-stable.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig> {
    if !is_hermitian(m, HERM_TOL) {
        return Err(Error::NotHermitian {
            deviation: hermitian_deviation(m),
            tol: HERM_TOL * (1.0 + max_abs_entry(m)),
        });
    }
    let n = m.nrows();
    let eig = hermitize(m).symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    let mut values = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        values.push(eig.eigenvalues[k]);
        let src = eig.eigenvectors.column(k);
        // phase convention: largest-magnitude component real positive
        let mut imax = 0;
        let mut best = -1.0f64;
        for i in 0..n {
            let a = src[i].norm();
            if a > best {
                best = a;
                imax = i;
            }
        }
        let z = src[imax];
        let phase = if z.norm() > 0.0 {
            z.conj() / z.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            vectors[(i, col)] = src[i] * phase;
        }
    }

    Ok(HermitianEig { values, vectors })
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn eigenvalue_range(m: &CMatrix) -> Result<(f64, f64)> {
    let eig = hermitian_eig(m)?;
    Ok((eig.values[0], *eig.values.last().unwrap()))
}

/// Strict positive definiteness: `min λ > PD_TOL * max(1, max λ)`.
pub fn is_positive_definite(m: &CMatrix) -> Result<bool> {
    let (lo, hi) = eigenvalue_range(m)?;
    Ok(lo > PD_TOL * hi.max(1.0))
}

fn require_positive_definite(m: &CMatrix) -> Result<HermitianEig> {
    let eig = hermitian_eig(m)?;
    let lo = eig.values[0];
    let hi = *eig.values.last().unwrap();
    if lo <= PD_TOL * hi.max(1.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
    }
    Ok(eig)
}

/// Positive definite square root `S` with `S² = M`.
pub fn hermitian_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = require_positive_definite(m)?;
    Ok(hermitize(&eig.apply(f64::sqrt)))
}

/// Row-major real parametrization `(Re T, Im T)` of a complex matrix.
pub fn to_real_vec(m: &CMatrix) -> RealVector {
    let (r, c) = m.shape();
    let nn = r * c;
    let mut v = RealVector::zeros(2 * nn);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            v[i * c + j] = z.re;
            v[nn + i * c + j] = z.im;
        }
    }
    v
}

/// Inverse of [`to_real_vec`].
pub fn from_real_vec(rows: usize, cols: usize, v: &RealVector) -> CMatrix {
    let nn = rows * cols;
    assert_eq!(v.len(), 2 * nn, "real parametrization length mismatch");
    CMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(v[i * cols + j], v[nn + i * cols + j])
    })
}

/// Fixes the overall sign of a real basis vector: the first coordinate
/// whose magnitude exceeds `1e-8 * max |coordinate|` is made positive.
fn fix_sign(v: &mut RealVector) {
    let maxabs = v.amax();
    if maxabs == 0.0 {
        return;
    }
    let thresh = 1e-8 * maxabs;
    for i in 0..v.len() {
        if v[i].abs() > thresh {
            if v[i] < 0.0 {
                *v = -v.clone();
            }
            return;
        }
    }
}

/// Which matrix relation a [`RealLinearSystem`] encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntertwinerKind {
    /// `T Γ = Γ T*` (star intertwiner, real-linear only).
    Star,
    /// `T Γ = Γ T` (commutant, complex-linear).
    Commutant,
}

/// The stacked real-linear system `T ↦ (T Γ_1 - Γ_1 T^□, …)` acting on the
/// real parametrization of the unknown `T`.
#[derive(Debug, Clone)]
pub struct RealLinearSystem {
    dim: usize,
    kind: IntertwinerKind,
    constraints: Vec<CMatrix>,
    matrix: DMatrix<f64>,
}

impl RealLinearSystem {
    /// Assembles the coefficient matrix, one `2N² × 2N²` row block per
    /// constraint. Column `p` holds the image of the `p`-th real unit
    /// direction under the relation map.
    pub fn new(kind: IntertwinerKind, constraints: Vec<CMatrix>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one constraint matrix is required".into(),
            ));
        }
        let dim = constraints[0].nrows();
        for g in &constraints {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::InvalidArgument(
                    "constraint matrices must be square and of equal size".into(),
                ));
            }
        }
        let nn2 = 2 * dim * dim;
        let mut matrix = DMatrix::<f64>::zeros(nn2 * constraints.len(), nn2);
        let mut unit = RealVector::zeros(nn2);
        for p in 0..nn2 {
            unit[p] = 1.0;
            let e = from_real_vec(dim, dim, &unit);
            unit[p] = 0.0;
            for (ci, g) in constraints.iter().enumerate() {
                let l = match kind {
                    IntertwinerKind::Star => &e * g - g * e.adjoint(),
                    IntertwinerKind::Commutant => &e * g - g * &e,
                };
                let col = to_real_vec(&l);
                for r in 0..nn2 {
                    matrix[(ci * nn2 + r, p)] = col[r];
                }
            }
        }
        Ok(Self {
            dim,
            kind,
            constraints,
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> IntertwinerKind {
        self.kind
    }

    pub fn constraints(&self) -> &[CMatrix] {
        &self.constraints
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Orthonormal basis of the numerical nullspace of a [`RealLinearSystem`].
#[derive(Debug, Clone)]
pub struct KernelBasis {
    /// Basis matrices; their real parametrizations are orthonormal.
    pub matrices: Vec<CMatrix>,
    /// True when the kernel dimension changes under a 10× tighter cutoff.
    pub tolerance_sensitive: bool,
}

/// Kernel of the system: singular values `≤ tol · σ_max` are declared zero.
///
/// Constraint matrices must be strictly positive definite. The basis is
/// deterministic for identical input: singular vectors are ordered by
/// ascending singular value and sign-fixed.
pub fn real_kernel_basis(sys: &RealLinearSystem, tol: f64) -> Result<KernelBasis> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "kernel tolerance must lie in (0, 1), got {tol}"
        )));
    }
    for g in sys.constraints() {
        require_positive_definite(g)?;
    }
    let svd = sys.matrix().clone().svd(false, true);
    let v_t = svd
        .v_t
        .expect("SVD with compute_v must produce right singular vectors");
    let ncols = sys.matrix().ncols();

    let mut order: Vec<usize> = (0..ncols).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[a]
            .partial_cmp(&svd.singular_values[b])
            .unwrap()
    });
    let sigma_max = svd.singular_values.max();

    let count_at = |cut: f64| -> usize {
        if sigma_max == 0.0 {
            ncols
        } else {
            (0..ncols)
                .filter(|&i| svd.singular_values[i] <= cut * sigma_max)
                .count()
        }
    };
    let d = count_at(tol);
    let tolerance_sensitive = count_at(tol / 10.0) != d;

    let mut matrices = Vec::with_capacity(d);
    for &i in order.iter().take(d) {
        let mut v = RealVector::from_iterator(ncols, v_t.row(i).iter().copied());
        fix_sign(&mut v);
        matrices.push(from_real_vec(sys.dim(), sys.dim(), &v));
    }
    Ok(KernelBasis {
        matrices,
        tolerance_sensitive,
    })
}

/// Scalar field tag for a [`SymSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Real,
    Complex,
}

/// A real-linear subspace of `N×N` complex matrices, stored as an
/// orthonormal basis in the real parametrization.
///
/// Spaces tagged [`ScalarField::Complex`] are closed under multiplication
/// by `i`; their real basis has even length and the complex dimension is
/// half the real one.
#[derive(Debug, Clone)]
pub struct SymSpace {
    dim: usize,
    basis: Vec<CMatrix>,
    field: ScalarField,
    provenance: String,
    tol: f64,
    tolerance_sensitive: bool,
}

impl SymSpace {
    /// Wraps a basis that is already orthonormal in the real
    /// parametrization (e.g. the output of [`real_kernel_basis`]).
    pub fn from_orthonormal(
        dim: usize,
        basis: Vec<CMatrix>,
        field: ScalarField,
        provenance: impl Into<String>,
        tol: f64,
        tolerance_sensitive: bool,
    ) -> Self {
        Self {
            dim,
            basis,
            field,
            provenance: provenance.into(),
            tol,
            tolerance_sensitive,
        }
    }

    /// Builds a space from an arbitrary (possibly dependent) spanning set
    /// by SVD orthonormalization.
    pub fn from_span(
        dim: usize,
        span: &[CMatrix],
        field: ScalarField,
        provenance: impl Into<String>,
        tol: f64,
        tolerance_sensitive: bool,
    ) -> Result<Self> {
        for m in span {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidArgument(
                    "spanning matrices must match the declared dimension".into(),
                ));
            }
        }
        let basis = orthonormal_basis(dim, span);
        Ok(Self {
            dim,
            basis,
            field,
            provenance: provenance.into(),
            tol,
            tolerance_sensitive,
        })
    }

    /// Side length of the member matrices.
    pub fn matrix_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn tolerance_sensitive(&self) -> bool {
        self.tolerance_sensitive
    }

    pub fn set_tolerance_sensitive(&mut self, flag: bool) {
        self.tolerance_sensitive = flag;
    }

    /// Real dimension (= basis length).
    pub fn real_dim(&self) -> usize {
        self.basis.len()
    }

    /// Complex dimension of a complex space (real basis of even length).
    pub fn complex_dim(&self) -> usize {
        debug_assert_eq!(self.field, ScalarField::Complex);
        debug_assert_eq!(self.basis.len() % 2, 0);
        self.basis.len() / 2
    }

    /// Euclidean distance from `m` to the span.
    pub fn residual(&self, m: &CMatrix) -> Result<f64> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "dimension mismatch: space holds {0}×{0} matrices, got {1}×{2}",
                self.dim,
                m.nrows(),
                m.ncols()
            )));
        }
        let v = to_real_vec(m);
        let mut rem = v.clone();
        for b in &self.basis {
            let bv = to_real_vec(b);
            let c = v.dot(&bv);
            rem -= bv * c;
        }
        Ok(rem.norm())
    }

    /// Projection residual test: `m` lies in the span within
    /// `tol * (1 + ‖m‖_F)`.
    pub fn contains(&self, m: &CMatrix, tol: f64) -> Result<bool> {
        let r = self.residual(m)?;
        Ok(r <= tol * (1.0 + m.norm()))
    }

    /// Orthogonal projector onto the span in the real parametrization.
    pub fn projector(&self) -> DMatrix<f64> {
        let nn2 = 2 * self.dim * self.dim;
        let mut p = DMatrix::<f64>::zeros(nn2, nn2);
        for b in &self.basis {
            let v = to_real_vec(b);
            p += &v * v.transpose();
        }
        p
    }
}

/// Span membership test, `true` iff the projection residual of `m` stays
/// within `tol * (1 + ‖m‖_F)`.
pub fn span_contains(space: &SymSpace, m: &CMatrix, tol: f64) -> Result<bool> {
    space.contains(m, tol)
}

/// Orthonormal basis (real parametrization) of the span of `mats`.
pub fn orthonormal_basis(dim: usize, mats: &[CMatrix]) -> Vec<CMatrix> {
    if mats.is_empty() {
        return Vec::new();
    }
    let nn2 = 2 * dim * dim;
    let mut rows = DMatrix::<f64>::zeros(mats.len(), nn2);
    for (r, m) in mats.iter().enumerate() {
        let v = to_real_vec(m);
        for c in 0..nn2 {
            rows[(r, c)] = v[c];
        }
    }
    let svd = rows.svd(false, true);
    let v_t = svd.v_t.expect("SVD with compute_v");
    let k = svd.singular_values.len();
    let sigma_max = svd.singular_values.max();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let mut basis = Vec::new();
    for &i in &order {
        if sigma_max > 0.0 && svd.singular_values[i] > RANK_TOL * sigma_max {
            let mut v = RealVector::from_iterator(nn2, v_t.row(i).iter().copied());
            fix_sign(&mut v);
            basis.push(from_real_vec(dim, dim, &v));
        }
    }
    basis
}

/// Frobenius norm of the entries of `m` whose row and column fall in
/// different partition groups. Zero iff `m` is block diagonal for the
/// partition.
pub fn offblock_norm(m: &CMatrix, partition: &[Vec<usize>]) -> Result<f64> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    let mut group = vec![usize::MAX; n];
    let mut seen = 0usize;
    for (g, idxs) in partition.iter().enumerate() {
        for &i in idxs {
            if i >= n || group[i] != usize::MAX {
                return Err(Error::InvalidArgument(
                    "partition must be a disjoint cover of the index range".into(),
                ));
            }
            group[i] = g;
            seen += 1;
        }
    }
    if seen != n {
        return Err(Error::InvalidArgument(
            "partition must cover every index".into(),
        ));
    }
    let mut acc = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if group[i] != group[j] {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    Ok(acc.sqrt())
}
