use proptest::prelude::*;
use toprec_core::exact_algebra::{q, Polynomial, RationalFunction, Scalar};
use toprec_core::loop_checks::{
    full_report, linear_loop_check, projection_check, projection_check_form, quadratic_loop_check, Verdict,
};
use toprec_core::spectral_curve::CatalogCurve;
use toprec_core::tr_engine::CorrelatorStore;

fn store(c: CatalogCurve, chi: i64) -> CorrelatorStore {
    CorrelatorStore::build(c.build(), chi).unwrap()
}

#[test]
fn suites_pass_on_catalog() {
    for c in [
        CatalogCurve::Airy,
        CatalogCurve::Bessel,
        CatalogCurve::Mirzakhani,
        CatalogCurve::KappaGen(2),
    ] {
        let s = store(c, 4);
        let r = full_report(&s, 4).unwrap();
        let bad: Vec<_> = r.results.iter().filter(|x| !x.verdict.is_pass()).collect();
        assert!(bad.is_empty(), "{c}: {bad:?}");
        assert!(r.results.iter().any(|x| x.suite == "dilaton"));
    }
}

#[test]
fn suites_pass_on_lambert() {
    let s = store(CatalogCurve::Lambert, 2);
    let r = full_report(&s, 2).unwrap();
    assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn bessel_quadratic_has_double_pole() {
    let s = store(CatalogCurve::Bessel, 2);
    let r = quadratic_loop_check(&s, 1, 1, 0).unwrap();
    assert!(r.verdict.is_pass());
    let a = store(CatalogCurve::Airy, 2);
    assert!(quadratic_loop_check(&a, 1, 1, 0).unwrap().verdict.is_pass());
}

#[test]
fn sign_flip_is_reported() {
    let mut s = store(CatalogCurve::Airy, 2);
    let mut t = s.tensor(1, 1).unwrap().clone();
    t.set(&[(0, 3)], q(-1, 8));
    s.replace_tensor(t).unwrap();
    let r = quadratic_loop_check(&s, 1, 1, 0).unwrap();
    match r.verdict {
        Verdict::Fail { exponent, .. } => assert_eq!(exponent, Some(-4)),
        v => panic!("{v:?}"),
    }
    assert!(linear_loop_check(&s, 1, 1, 0).unwrap().verdict.is_pass());
}

#[test]
fn even_index_breaks_linear() {
    let mut s = store(CatalogCurve::Bessel, 2);
    let mut t = s.tensor(1, 1).unwrap().clone();
    t.set(&[(0, 2)], q(1, 1));
    s.replace_tensor(t).unwrap();
    assert!(linear_loop_check(&s, 1, 1, 0).unwrap().verdict.is_fail());
}

#[test]
fn projection_rejects_holomorphic_part() {
    let s = store(CatalogCurve::Airy, 2);
    assert!(projection_check(&s, 0, 4).unwrap().verdict.is_pass());
    let xi = s.xi(0, 3).unwrap().form.clone();
    assert!(projection_check_form(&s, &xi, &[]).unwrap().is_pass());
    let dz = RationalFunction::from_poly(Polynomial::constant(Scalar::one()));
    assert!(projection_check_form(&s, &xi.add(&dz), &[]).unwrap().is_fail());
    let lam = store(CatalogCurve::Lambert, 1);
    let xi = lam.xi(0, 2).unwrap().form.clone();
    assert!(projection_check_form(&lam, &xi, &[]).unwrap().is_pass());
    assert!(projection_check_form(&lam, &xi.add(&dz), &[]).unwrap().is_fail());
}

fn corruption_detected(c: CatalogCurve, pair: usize, k_seed: Vec<usize>, delta: i64) -> bool {
    let chi = 3;
    let mut s = store(c, chi);
    let mut pairs: Vec<_> = s.tensors().map(|t| (t.g, t.n)).collect();
    pairs.sort();
    let (g, n) = pairs[pair % pairs.len()];
    let bound = 6 * g as usize + 2 * n - 5;
    let key: Vec<_> = k_seed.iter().take(n).map(|k| (0, 1 + k % bound.max(1))).collect();
    let mut t = s.tensor(g, n).unwrap().clone();
    let old = t.get(&key);
    t.set(&key, &old + &Scalar::from_int(delta));
    s.replace_tensor(t).unwrap();
    let mut hit = projection_check(&s, g, n).unwrap().verdict.is_fail();
    hit |= linear_loop_check(&s, g, n, 0).unwrap().verdict.is_fail();
    hit |= quadratic_loop_check(&s, g, n, 0).unwrap().verdict.is_fail();
    hit
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn every_single_corruption_is_caught(
        curve in 0usize..4,
        pair in 0usize..16,
        ks in proptest::collection::vec(0usize..32, 5),
        delta in prop_oneof![-5i64..=-1, 1i64..=5],
    ) {
        let c = [CatalogCurve::Airy, CatalogCurve::Bessel, CatalogCurve::Mirzakhani, CatalogCurve::KappaGen(2)][curve];
        prop_assert!(corruption_detected(c, pair, ks, delta));
    }
}
