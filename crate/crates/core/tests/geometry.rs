mod common;

use std::sync::Arc;

use lrkit::algebroid::{all_residuals_vanish, ce_differential};
use lrkit::geometry::{
    build_frakd, build_kapranov, commutator_lemma_residual, dnormal_zero_terms, frakd_oracle_residual,
    frakd_square_report, retraction_residual, structure_from_geometry, transport_lemma_residual,
    validate_geometric_model, GeometricModel, Operators,
};
use lrkit::graded::{models, AlgebraElement, BaseAlgebra, Scalar};
use lrkit::random;
use lrkit::symtensor::{Derivation, SymElement, Word};
use proptest::prelude::*;

fn bases() -> Vec<Arc<BaseAlgebra>> {
    vec![
        Arc::new(models::twisted_dual_numbers()),
        Arc::new(models::exterior(&["e", "f"])),
        Arc::new(models::twisted_dual_numbers_two()),
    ]
}

/// Random consistent models over every base, ranks at most 2, cap 3.
fn random_models(seed: u64) -> Vec<GeometricModel> {
    let mut r = common::rng(seed);
    let mut out = Vec::new();
    for base in bases() {
        for (t, n) in [(1, 1), (1, 2), (2, 1)] {
            out.push(random::geometric_model(&mut r, &base, t, n, 3, 0.6).unwrap());
        }
    }
    out
}

/// `Λ[ε]`, rank one, `R⊥₂(n0) = ε n0²`, everything else zero.
fn epsilon_model() -> GeometricModel {
    let base = Arc::new(models::exterior(&["ε"]));
    let mut g = GeometricModel::trivial(base, 1, 1, 3).unwrap();
    let sym = g.normal_sym();
    g.curvature_perp[0][0] = sym.word(Word::from_letters(vec![0, 0]), &AlgebraElement::basis(1));
    g
}

#[test]
fn random_models_validate() {
    for g in random_models(1) {
        let r = validate_geometric_model(&g);
        assert!(r.is_ok(), "{r}");
    }
}

#[test]
fn algebroid_from_geometry_has_frakd_as_ce_differential() {
    for g in random_models(2) {
        let s = structure_from_geometry(&g).unwrap();
        let ce = ce_differential(&s, g.cap).unwrap();
        let frakd = build_frakd(&g).unwrap();
        assert_eq!(ce.d, frakd.d, "\nCE: {}\n𝔇: {}", ce.d.display(&ce.sym), frakd.d.display(&frakd.sym));
    }
}

#[test]
fn retraction_holds() {
    for g in random_models(3) {
        let r = retraction_residual(&g).unwrap();
        assert!(r.is_ok(), "{r}");
    }
}

#[test]
fn commutator_lemma_holds_for_induced_beta() {
    for g in random_models(4) {
        let r = commutator_lemma_residual(&g).unwrap();
        assert!(r.is_ok(), "{r}");
    }
}

#[test]
fn commutator_lemma_detects_wrong_beta() {
    let base = Arc::new(models::twisted_dual_numbers());
    let mut g = random::geometric_model(&mut common::rng(5), &base, 1, 1, 2, 0.8).unwrap();
    g.beta[0][0].add_assign(&AlgebraElement::basis(2));
    assert!(!commutator_lemma_residual(&g).unwrap().is_ok());
}

#[test]
fn transport_lemma_holds() {
    for g in random_models(6) {
        let r = transport_lemma_residual(&g).unwrap();
        assert!(r.is_ok(), "{r}");
    }
}

#[test]
fn transported_ambient_differential_matches_closed_formula() {
    for g in random_models(7) {
        let r = frakd_oracle_residual(&g).unwrap();
        assert!(r.is_ok(), "{r}");
    }
}

#[test]
fn full_curvature_in_a_sheared_frame_matches_closed_formula() {
    let mut r = common::rng(8);
    for base in bases() {
        let mut g = random::geometric_model(&mut r, &base, 1, 2, 3, 0.6).unwrap();
        let frame = g.ambient_frame_sym();
        let full = (2..=3)
            .map(|w| (0..3).map(|_| random::sym_element(&mut r, &frame, 1, w, w, 0.6)).collect())
            .collect();
        g.set_full_curvature(full).unwrap();
        let v = validate_geometric_model(&g);
        assert!(v.is_ok(), "{v}");
        let res = frakd_oracle_residual(&g).unwrap();
        assert!(res.is_ok(), "{res}");
    }
}

#[test]
fn oracle_detects_inconsistent_christoffel_symbols() {
    let base = Arc::new(models::twisted_dual_numbers());
    let mut found = false;
    for seed in 0..8 {
        let mut g = random::geometric_model(&mut common::rng(100 + seed), &base, 1, 1, 3, 0.8).unwrap();
        g.christoffel[0][0][0].add_assign(&AlgebraElement::basis(0));
        found |= !frakd_oracle_residual(&g).unwrap().is_ok();
    }
    assert!(found);
}

#[test]
fn dnormal_on_functions_matches_index_contraction() {
    for g in random_models(9) {
        let frakd = build_frakd(&g).unwrap();
        let base = g.base().clone();
        for a in 0..base.dim() {
            let mut expected = frakd.sym.from_algebra(&base.d(&AlgebraElement::basis(a)));
            for (_, _, v) in dnormal_zero_terms(&g, a).unwrap() {
                expected.add_assign(&v);
            }
            assert_eq!(frakd.d.on_base()[a], expected, "basis {}", base.name(a));
        }
    }
}

#[test]
fn dnormal_terms_respect_weights() {
    for g in random_models(10) {
        for a in 0..g.base().dim() {
            for (p, q, v) in dnormal_zero_terms(&g, a).unwrap() {
                assert!(v.weights().iter().all(|&w| w == p + q), "(p, q) = ({p}, {q})");
            }
        }
    }
}

#[test]
fn associated_graded_is_base_differential() {
    for g in random_models(11) {
        let frakd = build_frakd(&g).unwrap();
        let d0 = Derivation::base_differential(&frakd.sym, &g.normal).unwrap();
        assert_eq!(frakd.d.component(0), d0);
    }
}

#[test]
fn tangent_case_reduces_to_kapranov() {
    let mut r = common::rng(12);
    for base in bases() {
        let mut g = GeometricModel::trivial(base.clone(), 2, 2, 3).unwrap();
        g.normal = g.tangent.clone();
        let sym = g.normal_sym();
        g.curvature_perp = (2..=3).map(|w| (0..2).map(|_| random::sym_element(&mut r, &sym, 1, w, w, 0.6)).collect()).collect();
        g.holo_diff = {
            let d = random::degree_zero_derivation(&mut r, &base, 0.6);
            (0..base.dim()).map(|e| vec![d.images[e].clone(), AlgebraElement::zero()]).collect()
        };
        let frakd = build_frakd(&g).unwrap();
        let kapranov = build_kapranov(&g.curvature_perp, &g.tangent, 3).unwrap();
        assert_eq!(frakd.d, kapranov.d);
    }
}

#[test]
fn nilpotent_fixture_squares_to_zero() {
    let g = epsilon_model();
    assert!(validate_geometric_model(&g).is_ok());
    assert!(frakd_square_report(&g).unwrap().vanishes());
    let s = structure_from_geometry(&g).unwrap();
    assert!(all_residuals_vanish(&s).unwrap());
}

#[test]
fn generic_random_models_do_not_square_to_zero() {
    let nonzero = random_models(13).iter().filter(|g| !frakd_square_report(g).unwrap().vanishes()).count();
    assert!(nonzero > 0);
}

#[test]
fn square_report_agrees_with_algebroid_residuals() {
    for g in random_models(14).into_iter().chain([epsilon_model()]) {
        let square_vanishes = frakd_square_report(&g).unwrap().vanishes();
        let s = structure_from_geometry(&g).unwrap();
        assert_eq!(square_vanishes, all_residuals_vanish(&s).unwrap());
    }
}

#[test]
fn induced_beta_is_closed() {
    for mut g in random_models(15) {
        g.beta_closed = true;
        let r = validate_geometric_model(&g);
        assert!(r.is_ok(), "{r}");
    }
}

#[test]
fn symmetrised_connection_times_tangent_weight_is_a_derivation() {
    for g in random_models(16) {
        let ops = Operators::new(&g).unwrap();
        let s = ops.sym();
        let euler = |x: &SymElement| {
            let mut out = s.zero();
            for (w, c) in x.terms() {
                let p = ops.ambient.tangent_weight(w) as i64;
                out.add_term(w.clone(), &c.scale(&Scalar::from_int(p)));
            }
            out
        };
        let span = s.spanning_set();
        for x in span.iter().filter(|x| x.weights().iter().all(|&w| w <= 1)) {
            for y in span.iter().filter(|y| y.weights().iter().all(|&w| w <= 1)) {
                let lhs = euler(&ops.nabla_bar(&s.mul(x, y)));
                let mut rhs = s.mul(&euler(&ops.nabla_bar(x)), y);
                rhs.add_assign(&s.mul(x, &euler(&ops.nabla_bar(y))));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn splitting_with_nonconstant_shear_gives_nonzero_beta() {
    let base = Arc::new(models::twisted_dual_numbers());
    let mut g = GeometricModel::trivial(base.clone(), 1, 1, 2).unwrap();
    g.splitting = lrkit::geometry::Splitting::sheared(&base, 1, &[vec![AlgebraElement::basis(1)]]);
    let beta = g.induced_beta().unwrap();
    // ρ(N0) = Y1 + x Y0, so β(t0) = −d(x) n0 = −ex n0.
    assert_eq!(beta[0][0], AlgebraElement::basis(3).neg());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn truncation_commutes_with_frakd(seed in 0u64..1000, w in 1usize..3) {
        let base = Arc::new(models::twisted_dual_numbers());
        let g = random::geometric_model(&mut common::rng(seed), &base, 1, 2, 3, 0.6).unwrap();
        let full = build_frakd(&g).unwrap();
        let small = build_frakd(&g.with_cap(w).unwrap()).unwrap();
        prop_assert_eq!(small.d, full.d.with_cap(w));
    }

    #[test]
    fn central_identity_on_random_models(seed in 0u64..1000) {
        let base = Arc::new(models::exterior(&["e", "f"]));
        let g = random::geometric_model(&mut common::rng(seed), &base, 2, 1, 3, 0.5).unwrap();
        let ce = ce_differential(&structure_from_geometry(&g).unwrap(), 3).unwrap();
        prop_assert_eq!(ce.d, build_frakd(&g).unwrap().d);
    }
}

#[test]
fn random_models_exercise_every_family() {
    let models = random_models(17);
    assert!(models.iter().any(|g| g.beta.iter().flatten().any(|b| !b.is_zero())));
    let structures: Vec<_> = models.iter().map(|g| structure_from_geometry(g).unwrap()).collect();
    for arity in 2..=3 {
        assert!(structures.iter().any(|s| !s.anchor_table(arity).is_empty()), "anchor arity {arity}");
        assert!(structures.iter().any(|s| !s.table(arity).is_zero()), "bracket arity {arity}");
    }
}

#[test]
fn diagonal_regime_has_no_anchors_and_kapranov_differential() {
    let mut r = common::rng(18);
    for base in bases() {
        let mut g = random::geometric_model(&mut r, &base, 2, 2, 3, 0.6).unwrap();
        g.splitting = lrkit::geometry::Splitting::standard(&base, 2, 2);
        g.beta = g.induced_beta().unwrap();
        assert!(g.beta.iter().flatten().all(AlgebraElement::is_zero));
        for top in g.curvature_top.iter_mut().flatten() {
            *top = SymElement::zero(3);
        }
        let s = structure_from_geometry(&g).unwrap();
        for m in 1..=3 {
            assert!(s.anchor_table(m).is_empty());
        }
        let frakd = build_frakd(&g).unwrap();
        let kapranov = build_kapranov(&g.curvature_perp, &g.normal, 3).unwrap();
        assert_eq!(frakd.d, kapranov.d);
    }
}

#[test]
fn symmetrisation_divides_by_tangent_weight() {
    let base = Arc::new(models::exterior(&["e"]));
    let g = GeometricModel::trivial(base, 1, 1, 3).unwrap();
    let ops = Operators::new(&g).unwrap();
    let s = ops.sym();
    // m = 1: t0 · n0, factor 1.
    assert_eq!(ops.sym_bar(0, &s.letter(1)), s.monomial(&[0, 1]));
    // m = 2: t0 · (t0 n0) carries 1/2.
    let half = s.monomial(&[0, 0, 1]).scale(&Scalar::ratio(1, 2).unwrap());
    assert_eq!(ops.sym_bar(0, &s.monomial(&[0, 1])), half);
}

#[test]
fn tangent_projections_decompose() {
    let mut r = common::rng(19);
    for g in random_models(19) {
        let ops = Operators::new(&g).unwrap();
        let eta = random::sym_element(&mut r, ops.sym(), 1, 0, 3, 0.5);
        let mut rest = eta.clone();
        rest.sub_assign(&ops.p0(&eta));
        rest.sub_assign(&ops.p1(&eta));
        assert!(rest.terms().all(|(w, _)| ops.ambient.tangent_weight(w) >= 2));
    }
}

#[test]
fn nabla_perp_is_tangent_part_of_nabla_bar_on_normal_inputs() {
    for g in random_models(20) {
        let ops = Operators::new(&g).unwrap();
        for mu in ops.normal.spanning_set() {
            let x = ops.embed(&mu);
            assert_eq!(ops.p1(&ops.nabla_bar(&x)), ops.nabla_perp_bar(&x));
        }
    }
}

#[test]
fn split_curvature_of_normal_supported_tensor_has_no_top_part() {
    let mut r = common::rng(21);
    let base = Arc::new(models::twisted_dual_numbers());
    let g = GeometricModel::trivial(base, 1, 2, 3).unwrap();
    let frame = g.ambient_frame_sym();
    // Only the normal letters Y1, Y2 carry curvature, valued in normal words.
    let mut full = vec![SymElement::zero(3)];
    for _ in 0..2 {
        let v = random::sym_element(&mut r, &frame, 1, 2, 2, 0.7);
        full.push(v.filter(|w| w.letters().iter().all(|&l| l >= 1)));
    }
    let (perp, top) = lrkit::geometry::split_curvature(&full, &g).unwrap();
    assert!(top.iter().all(SymElement::is_zero));
    assert!(perp.iter().any(|v| !v.is_zero()));
}
