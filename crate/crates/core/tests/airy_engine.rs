use std::collections::BTreeMap;

use toprec_core::airy_engine::{
    airy_recursion, bgw_tensors, commutator_check_with, kw_tensors, virasoro_commutator_check, w2, weyl_apply, AiryError, AiryTensors,
    PartitionFunction, SparseTensors, VirasoroFamily, WeylOperator, Window,
};
use toprec_core::exact_algebra::{q, Scalar};
use toprec_core::spectral_curve::CatalogCurve;
use toprec_core::tr_engine::CorrelatorStore;

#[test]
fn kw_values() {
    let z = airy_recursion(&kw_tensors(), 3).unwrap();
    assert_eq!(z.get(0, &[1, 1, 1]), q(1, 1));
    assert_eq!(z.get(1, &[3]), q(1, 8));
    assert_eq!(z.get(1, &[3, 3]), q(3, 8));
    assert_eq!(z.get(1, &[1, 5]), q(5, 8));
    assert_eq!(z.get(0, &[1, 1, 1, 3]), q(3, 1));
}

#[test]
fn bgw_genus_zero_vanishes() {
    let z = airy_recursion(&bgw_tensors(), 5).unwrap();
    for n in 3..=7 {
        assert!(z.tensor(0, n).unwrap().is_empty());
    }
    assert_eq!(z.get(1, &[1]), q(1, 8));
    assert_eq!(z.get(1, &[1, 1]), q(1, 8));
}

fn assert_same(tr: &CorrelatorStore, z: &PartitionFunction) {
    for t in tr.tensors() {
        let a = z.tensor(t.g, t.n).unwrap();
        assert_eq!(a, t, "({}, {})", t.g, t.n);
    }
}

#[test]
fn engines_agree() {
    let tr = CorrelatorStore::build(CatalogCurve::Airy.build(), 4).unwrap();
    assert_same(&tr, &airy_recursion(&kw_tensors(), 4).unwrap());
    let tr = CorrelatorStore::build(CatalogCurve::Bessel.build(), 4).unwrap();
    assert_same(&tr, &airy_recursion(&bgw_tensors(), 4).unwrap());
}

#[test]
fn asymmetric_tensors_are_rejected() {
    // B_{1,2,1} alone: F_{0,4}[1,1,1,2] is 1 with k1 = 1 but 0 with k1 = 2.
    let mut t = SparseTensors {
        indices: vec![1, 2],
        ..Default::default()
    };
    t.a.insert((1, 1, 1), q(1, 1));
    t.b.insert((1, 2, 1), q(1, 1));
    let err = airy_recursion(&AiryTensors::Sparse(t), 2).unwrap_err();
    assert!(matches!(err, AiryError::Asymmetric { .. }), "{err}");
}

#[test]
fn kw_constraints_vanish() {
    let z = airy_recursion(&kw_tensors(), 4).unwrap();
    let cutoff = z.max_index() + 12;
    for k in -1..=3 {
        let op = VirasoroFamily::KontsevichWitten.operator(k, cutoff);
        assert!(weyl_apply(&op, &z, 5).unwrap().is_zero(), "L_{k}");
    }
    assert!(matches!(
        weyl_apply(&VirasoroFamily::KontsevichWitten.operator(0, cutoff), &z, 6),
        Err(AiryError::OrderBeyondStore { .. })
    ));
    assert!(weyl_apply(&WeylOperator::zero(), &z, 5).unwrap().is_zero());
}

#[test]
fn bgw_constraints_vanish_and_distinguish() {
    let z = airy_recursion(&bgw_tensors(), 4).unwrap();
    let cutoff = z.max_index() + 12;
    for k in 0..=4 {
        let op = VirasoroFamily::Bgw.operator(k, cutoff);
        assert!(weyl_apply(&op, &z, 5).unwrap().is_zero(), "L_{k}");
    }
    let kw = airy_recursion(&kw_tensors(), 4).unwrap();
    let r = weyl_apply(&VirasoroFamily::Bgw.operator(0, cutoff), &kw, 5).unwrap();
    // BGW L_0 = ħ∂_1 − … hits F_{0,3}[1,1,1] x_1 x_1 / 2 at grade 2
    assert_eq!(r.terms.get(&(2, vec![1, 1])), Some(&q(1, 2)));
}

#[test]
fn commutators() {
    let w = Window::odd(8, 6);
    for m in -1..=4 {
        for n in -1..=4 {
            assert!(virasoro_commutator_check(VirasoroFamily::KontsevichWitten, m, n, &w).unwrap(), "KW ({m},{n})");
        }
    }
    for m in 0..=4 {
        for n in 0..=4 {
            assert!(virasoro_commutator_check(VirasoroFamily::Bgw, m, n, &w).unwrap(), "BGW ({m},{n})");
        }
    }
}

#[test]
fn commutator_constant_is_pinned() {
    // by hand: [L_{-1}, L_0] = [ħ∂_1, −ħ² Σ p x_p ∂_p] + [−3ħ² x_3 ∂_1, ħ∂_3] + O(ħ⁴) = 2ħ³∂_1 + …
    let w = Window::odd(4, 3);
    let kw = VirasoroFamily::KontsevichWitten;
    assert!(commutator_check_with(kw, -1, 0, &w, 2).unwrap());
    assert!(!commutator_check_with(kw, -1, 0, &w, -1).unwrap());
    assert!(!commutator_check_with(kw, 1, 2, &w, 0).unwrap());
    assert!(!commutator_check_with(kw, 1, 2, &w, -2).unwrap());
}

fn translation(store: &CorrelatorStore) -> BTreeMap<usize, Scalar> {
    let y = &store.local(0).omega01;
    (1..=store.k_max())
        .filter_map(|k| {
            let c = y.coeff(k as i64 - 1)?;
            (!c.is_zero()).then_some((k, c))
        })
        .collect()
}

#[test]
fn conjugation_reproduces_families() {
    let cutoff = 21;
    let airy = CorrelatorStore::build(CatalogCurve::Airy.build(), 1).unwrap();
    let bessel = CorrelatorStore::build(CatalogCurve::Bessel.build(), 1).unwrap();
    let (ta, tb) = (translation(&airy), translation(&bessel));
    assert_eq!(ta, BTreeMap::from([(3, q(1, 1))]));
    assert_eq!(tb, BTreeMap::from([(1, q(1, 1))]));
    for k in -1..=4 {
        let h = w2(k, cutoff).conjugate_by_translation(&ta).reduce_to_odd();
        assert_eq!(h, VirasoroFamily::KontsevichWitten.operator(k, cutoff));
        assert_eq!(h.leading_index().unwrap(), (2 * k + 3) as usize);
    }
    for k in 0..=4 {
        let h = w2(k, cutoff).conjugate_by_translation(&tb).reduce_to_odd();
        assert_eq!(h, VirasoroFamily::Bgw.operator(k, cutoff));
    }
    assert_eq!(w2(2, cutoff).conjugate_by_translation(&BTreeMap::new()), w2(2, cutoff));
    // Bessel translation keeps L_{-1} out of the family: its leading term is a constant
    assert!(w2(-1, cutoff).conjugate_by_translation(&tb).reduce_to_odd().leading_index().is_err());
}

#[test]
fn conjugated_constraints_annihilate_tr() {
    for c in [CatalogCurve::KappaGen(2), CatalogCurve::Mirzakhani] {
        let store = CorrelatorStore::build(c.build(), 3).unwrap();
        let z = PartitionFunction::from_store(&store).unwrap();
        let t = translation(&store);
        let cutoff = z.max_index() + 16;
        for k in -1..=3 {
            let h = w2(k, cutoff).conjugate_by_translation(&t).reduce_to_odd();
            assert_eq!(h.leading_index().unwrap(), (2 * k + 3) as usize);
            let r = weyl_apply(&h, &z, 4).unwrap();
            assert!(r.is_zero(), "{c} k={k}: {:?}", r.terms.iter().next());
        }
    }
}
