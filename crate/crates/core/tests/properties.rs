//! Cross-module invariants: structural identities tying the symmetry
//! space, the commutant, the Γ-spaces and the polynomial data together,
//! plus randomized linear-algebra properties.

use matred_core::commutant::{
    adjoint_space, commutant_of_weight, default_sampling, gamma_commutant, gamma_sym_space,
    hermitian_part, skew_hermitian_content, space_intersection, star_invariant,
    sym_space_of_weight,
};
use matred_core::families::{
    gegenbauer_norms_closed, gegenbauer_weight, tirao_variant_weight, GegenbauerParams,
};
use matred_core::linalg::{
    flip_matrix, hermitian_eig, hermitian_sqrt, identity, is_hermitian, real_kernel_basis,
    to_real_vec, CMatrix, IntertwinerKind, RealLinearSystem, ScalarField, DEFAULT_KERNEL_TOL,
    DEFAULT_SPAN_TOL,
};
use matred_core::measure::MatrixWeight;
use matred_core::mop::{
    gamma_from_moments, gamma_from_mops, monic_mops, orthogonality_residual, recurrence_residual,
};
use matred_core::poly::MatrixPoly;
use num_complex::Complex64;
use proptest::prelude::*;

fn gegenbauer_grid() -> Vec<(f64, f64)> {
    let mut grid = Vec::new();
    for &ell in &[0.5, 1.0, 1.5] {
        for &nu in &[0.5, 1.0, 2.3] {
            grid.push((ell, nu));
        }
    }
    grid
}

/// All example weights: the non-unitary 2×2 family plus the Gegenbauer grid.
fn example_weights() -> Vec<(String, MatrixWeight)> {
    let mut out = Vec::new();
    let (w, _) = tirao_variant_weight();
    out.push(("tirao-variant".to_string(), w));
    for (ell, nu) in gegenbauer_grid() {
        let p = GegenbauerParams::new(ell, nu).unwrap();
        out.push((
            format!("gegenbauer({ell}, {nu})"),
            gegenbauer_weight(&p).unwrap(),
        ));
    }
    out
}

#[test]
fn moment_equals_inner_product_on_monomials() {
    for (name, w) in example_weights() {
        let one = MatrixPoly::monomial(w.dim(), 0);
        for n in 0..=10usize {
            let xn = MatrixPoly::monomial(w.dim(), n);
            let a = w.moment(n).unwrap();
            let b = w.inner_product(&xn, &one).unwrap();
            assert!(
                (a.clone() - b).norm() <= 1e-12 * (1.0 + a.norm()),
                "{name}, n = {n}"
            );
        }
    }
}

#[test]
fn weights_are_positive_semidefinite_at_quadrature_nodes() {
    for (name, w) in example_weights() {
        assert!(w.validate().is_ok(), "{name}");
    }
}

#[test]
fn theta_is_additive_over_partitions() {
    // split the support into up to 16 pieces at fixed cut fractions
    let cuts = [
        0.037, 0.11, 0.19, 0.26, 0.33, 0.42, 0.5, 0.55, 0.61, 0.68, 0.74, 0.81, 0.88, 0.93, 0.97,
    ];
    for (name, w) in example_weights() {
        let (a, b) = w.base().support();
        let width = b - a;
        let mut points = vec![a];
        points.extend(cuts.iter().map(|f| a + width * f));
        points.push(b);
        let whole = w.theta_of(a, b).unwrap();
        let mut sum = CMatrix::zeros(w.dim(), w.dim());
        for pair in points.windows(2) {
            sum += w.theta_of(pair[0], pair[1]).unwrap();
        }
        let err = (whole.clone() - sum).norm();
        assert!(
            err <= 1e-10 * whole.norm(),
            "{name}: additivity defect {err:.3e}"
        );
    }
}

#[test]
fn symmetry_space_is_inside_every_gamma_space() {
    for (name, w) in example_weights() {
        let sym = sym_space_of_weight(&w, default_sampling(&w), DEFAULT_KERNEL_TOL).unwrap();
        let mops = monic_mops(&w, 4).unwrap();
        let norms = gamma_from_mops(&mops).unwrap();
        let evens = gamma_from_moments(&w, 4).unwrap();
        for gammas in [&norms, &evens] {
            for n in 0..gammas.len() {
                let space = gamma_sym_space(gammas, &[n], DEFAULT_KERNEL_TOL).unwrap();
                for t in sym.basis() {
                    assert!(
                        space.contains(t, 1e-7).unwrap(),
                        "{name}: symmetry element escapes Γ[{n}] space ({})",
                        gammas.label()
                    );
                }
            }
        }
    }
}

#[test]
fn gamma_space_dimension_is_monotone_in_the_index_set() {
    for (name, w) in example_weights().into_iter().take(4) {
        let mops = monic_mops(&w, 4).unwrap();
        let norms = gamma_from_mops(&mops).unwrap();
        let mut prev = usize::MAX;
        for upto in 1..=4usize {
            let idx: Vec<usize> = (0..upto).collect();
            let d = gamma_sym_space(&norms, &idx, DEFAULT_KERNEL_TOL)
                .unwrap()
                .real_dim();
            assert!(d <= prev, "{name}: dimension grew when adding constraints");
            prev = d;
        }
    }
}

#[test]
fn star_invariant_gamma_space_certifies_hermitian_symmetry() {
    // when some Γ-space over {n, n+1} is star-invariant, the weight's own
    // symmetry space must be star-invariant with the same dimension as
    // the Hermitian commutant part
    for (name, w) in example_weights() {
        let mops = monic_mops(&w, 4).unwrap();
        let norms = gamma_from_mops(&mops).unwrap();
        let evens = gamma_from_moments(&w, 4).unwrap();
        let sym = sym_space_of_weight(&w, default_sampling(&w), DEFAULT_KERNEL_TOL).unwrap();
        let alg = commutant_of_weight(&w, default_sampling(&w), DEFAULT_KERNEL_TOL).unwrap();
        let herm = hermitian_part(&alg, DEFAULT_SPAN_TOL).unwrap();
        for gammas in [&norms, &evens] {
            for n in 0..3usize {
                let space = gamma_sym_space(gammas, &[n, n + 1], DEFAULT_KERNEL_TOL).unwrap();
                if star_invariant(&space, DEFAULT_SPAN_TOL) {
                    assert!(
                        star_invariant(&sym, DEFAULT_SPAN_TOL),
                        "{name}: Γ-criterion fired but the symmetry space is not star-invariant"
                    );
                    assert_eq!(
                        sym.real_dim(),
                        herm.real_dim(),
                        "{name}: star-invariance certified but dims differ"
                    );
                }
            }
        }
    }
}

#[test]
fn no_skew_members_and_intersection_is_hermitian_commutant() {
    for (name, w) in example_weights() {
        let sym = sym_space_of_weight(&w, default_sampling(&w), DEFAULT_KERNEL_TOL).unwrap();
        assert!(
            skew_hermitian_content(&sym) < 1e-9,
            "{name}: skew content"
        );
        let adj = adjoint_space(&sym);
        let both = space_intersection(&sym, &adj, 1e-7).unwrap();
        let alg = commutant_of_weight(&w, default_sampling(&w), DEFAULT_KERNEL_TOL).unwrap();
        let herm = hermitian_part(&alg, DEFAULT_SPAN_TOL).unwrap();
        assert_eq!(both.real_dim(), herm.real_dim(), "{name}");
        for t in both.basis() {
            assert!(herm.contains(t, 1e-7).unwrap(), "{name}");
        }
        for t in herm.basis() {
            assert!(both.contains(t, 1e-7).unwrap(), "{name}");
        }
    }
}

#[test]
fn normalization_conjugates_the_symmetry_space() {
    for (name, w) in example_weights().into_iter().take(4) {
        let m0 = w.moment(0).unwrap();
        let s = hermitian_sqrt(&m0).unwrap();
        let s_inv = s.clone().try_inverse().unwrap();
        let normalized = w.conjugated(&s_inv).unwrap();
        let sym = sym_space_of_weight(&w, default_sampling(&w), DEFAULT_KERNEL_TOL).unwrap();
        let sym_n =
            sym_space_of_weight(&normalized, default_sampling(&normalized), DEFAULT_KERNEL_TOL)
                .unwrap();
        assert_eq!(sym.real_dim(), sym_n.real_dim(), "{name}");
        for t in sym.basis() {
            let conj = &s_inv * t * &s;
            assert!(
                sym_n.contains(&conj, 1e-7).unwrap(),
                "{name}: conjugated symmetry element escapes"
            );
            // and each conjugated element is Hermitian
            assert!(is_hermitian(&conj, 1e-8), "{name}");
        }
        assert!(star_invariant(&sym_n, DEFAULT_SPAN_TOL), "{name}");
    }
}

#[test]
fn mop_invariants_on_example_weights() {
    for (name, w) in example_weights() {
        let mops = monic_mops(&w, 4).unwrap();
        // monic leading coefficients
        for n in 0..=4usize {
            assert!(
                (mops.poly(n).coeff(n) - identity(w.dim())).norm() < 1e-12,
                "{name}: P_{n} is not monic"
            );
        }
        // degree-by-degree orthogonality, scaled by ‖H_n‖
        let ortho = orthogonality_residual(&w, &mops).unwrap();
        let h_scale = mops
            .norms()
            .iter()
            .map(|h| h.norm())
            .fold(f64::MIN, f64::max);
        assert!(ortho < 1e-9 * (1.0 + h_scale), "{name}: orthogonality");
        // recurrence residual
        assert!(recurrence_residual(&mops).unwrap() < 1e-9, "{name}");
        // C_n = H_n H_{n-1}^{-1} holds by construction; cross-check the
        // recurrence-derived alternative ⟨xP_{n-1}, P_n⟩-free identity by
        // comparing against the norm ratio computed independently
        for n in 1..4usize {
            let inv = mops.norm(n - 1).clone().try_inverse().unwrap();
            let ratio = mops.norm(n) * inv;
            assert!(
                (mops.c(n) - ratio).norm() < 1e-9 * (1.0 + mops.c(n).norm()),
                "{name}: C_{n} ≠ H_n H_(n-1)^-1"
            );
        }
    }
}

#[test]
fn gegenbauer_recurrence_commutes_with_flip() {
    for (ell, nu) in gegenbauer_grid() {
        let p = GegenbauerParams::new(ell, nu).unwrap();
        let w = gegenbauer_weight(&p).unwrap();
        let mops = monic_mops(&w, 4).unwrap();
        let j = flip_matrix(p.size());
        for n in 0..4usize {
            let b = mops.b(n);
            assert!(
                (&j * b - b * &j).norm() < 1e-9,
                "ℓ={ell} ν={nu}: B_{n} does not commute with the flip"
            );
        }
    }
}

#[test]
fn closed_form_norms_match_quadrature() {
    for (ell, nu) in gegenbauer_grid() {
        let p = GegenbauerParams::new(ell, nu).unwrap();
        let w = gegenbauer_weight(&p).unwrap();
        let mops = monic_mops(&w, 4).unwrap();
        for n in 0..=4usize {
            let closed = gegenbauer_norms_closed(&p, n);
            let got = mops.norm(n);
            let err = (got - &closed).norm() / closed.norm();
            assert!(err < 1e-8, "ℓ={ell} ν={nu} n={n}: relative error {err:.3e}");
        }
    }
}

#[test]
fn gamma_norm_spaces_have_flip_structure() {
    // members of the Γ-space over two consecutive norms live on the
    // diagonal plus the antidiagonal and are Hermitian
    for (ell, nu) in gegenbauer_grid() {
        let p = GegenbauerParams::new(ell, nu).unwrap();
        let w = gegenbauer_weight(&p).unwrap();
        let mops = monic_mops(&w, 4).unwrap();
        let norms = gamma_from_mops(&mops).unwrap();
        let size = p.size();
        for n in 0..3usize {
            let space = gamma_sym_space(&norms, &[n, n + 1], DEFAULT_KERNEL_TOL).unwrap();
            assert!(star_invariant(&space, DEFAULT_SPAN_TOL));
            // free parameters: one real per diagonal entry, one complex per
            // antidiagonal pair (the palindromic norms force conjugate
            // symmetry across the antidiagonal)
            assert_eq!(space.real_dim(), size + 2 * (size / 2));
            for t in space.basis() {
                assert!(is_hermitian(t, 1e-9));
                for i in 0..size {
                    for j in 0..size {
                        if j != i && j != size - 1 - i {
                            assert!(
                                t[(i, j)].norm() < 1e-9,
                                "ℓ={ell} ν={nu} n={n}: entry ({i},{j})"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn complex_spaces_are_closed_under_i() {
    for (name, w) in example_weights().into_iter().take(5) {
        let alg = commutant_of_weight(&w, default_sampling(&w), DEFAULT_KERNEL_TOL).unwrap();
        assert_eq!(alg.field(), ScalarField::Complex);
        assert_eq!(alg.real_dim() % 2, 0, "{name}");
        for b in alg.basis() {
            let ib = b.map(|z| z * Complex64::new(0.0, 1.0));
            assert!(alg.contains(&ib, 1e-7).unwrap(), "{name}");
        }
    }
}

#[test]
fn gamma_commutant_of_tirao_m0_contains_generator_products() {
    let (_, r) = tirao_variant_weight();
    let gammas = matred_core::measure::GammaSequence::new(
        matred_core::measure::GammaLabel::MomentsEven,
        vec![r.m0.clone()],
    )
    .unwrap();
    let alg = gamma_commutant(&gammas, &[0], DEFAULT_KERNEL_TOL).unwrap();
    assert_eq!(alg.complex_dim(), 2);
    // algebra closure: E'² stays inside
    let e2 = &r.commutant_generator * &r.commutant_generator;
    assert!(alg.contains(&e2, 1e-7).unwrap());
}

#[test]
fn analysis_values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<MatrixWeight>();
    assert_send_sync::<MatrixPoly>();
    assert_send_sync::<matred_core::SymSpace>();
    assert_send_sync::<matred_core::GammaSequence>();
    assert_send_sync::<matred_core::MopData>();
    assert_send_sync::<matred_core::ReductionResult>();
    assert_send_sync::<matred_core::ReducibilityReport>();
}

// ---------------------------------------------------------------------
// randomized properties
// ---------------------------------------------------------------------

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn hermitian_matrix(dim: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec(complex_entry(), dim * dim).prop_map(move |entries| {
        let raw = CMatrix::from_fn(dim, dim, |i, j| entries[i * dim + j]);
        (raw.clone() + raw.adjoint()).map(|z| z * 0.5)
    })
}

fn positive_definite_matrix(dim: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec(complex_entry(), dim * dim).prop_map(move |entries| {
        let raw = CMatrix::from_fn(dim, dim, |i, j| entries[i * dim + j]);
        &raw * raw.adjoint() + identity(dim).map(|z| z * 0.35)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prop_eig_reconstructs_and_is_unitary(m in (2usize..=4).prop_flat_map(hermitian_matrix)) {
        let n = m.nrows();
        let eig = hermitian_eig(&m).unwrap();
        let rec = eig.apply(|x| x);
        prop_assert!((rec - &m).norm() <= n as f64 * 1e-12 * (1.0 + m.norm()));
        let u = &eig.vectors;
        prop_assert!((u.adjoint() * u - identity(n)).norm() <= n as f64 * 1e-12);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn prop_sqrt_round_trip(s in (2usize..=4).prop_flat_map(positive_definite_matrix)) {
        // hermitian_sqrt(S²) recovers the positive definite S
        let s2 = &s * &s;
        let back = hermitian_sqrt(&s2).unwrap();
        prop_assert!((back - &s).norm() <= 1e-9 * (1.0 + s.norm()));
    }

    #[test]
    fn prop_kernel_solves_the_relation(
        gammas in proptest::collection::vec(positive_definite_matrix(3), 1..=3)
    ) {
        let sys = RealLinearSystem::new(IntertwinerKind::Star, gammas.clone()).unwrap();
        let kb = real_kernel_basis(&sys, DEFAULT_KERNEL_TOL).unwrap();
        // the identity always intertwines
        prop_assert!(!kb.matrices.is_empty());
        for t in &kb.matrices {
            for g in &gammas {
                let r = (t * g - g * t.adjoint()).norm();
                prop_assert!(r <= 10.0 * DEFAULT_KERNEL_TOL * g.norm());
            }
        }
        // orthonormal real parametrization
        for (i, a) in kb.matrices.iter().enumerate() {
            for (j, b) in kb.matrices.iter().enumerate() {
                let dot = to_real_vec(a).dot(&to_real_vec(b));
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn prop_kernel_dimension_monotone(
        gammas in proptest::collection::vec(positive_definite_matrix(2), 2..=3)
    ) {
        let mut prev = usize::MAX;
        for upto in 1..=gammas.len() {
            let sys =
                RealLinearSystem::new(IntertwinerKind::Star, gammas[..upto].to_vec()).unwrap();
            let d = real_kernel_basis(&sys, DEFAULT_KERNEL_TOL).unwrap().matrices.len();
            prop_assert!(d <= prev);
            prev = d;
        }
    }
}
