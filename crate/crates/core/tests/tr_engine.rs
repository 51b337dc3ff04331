use toprec_core::exact_algebra::{q, Scalar};
use toprec_core::spectral_curve::CatalogCurve;
use toprec_core::tr_engine::{dilaton_check, free_energy, CorrelatorStore, KernelSign, TrOptions};

fn f(store: &CorrelatorStore, g: u32, ks: &[usize]) -> Scalar {
    let key: Vec<_> = ks.iter().map(|&k| (0, k)).collect();
    store.tensor(g, ks.len()).unwrap().get(&key)
}

#[test]
fn airy_table() {
    let s = CorrelatorStore::build(CatalogCurve::Airy.build(), 3).unwrap();
    assert_eq!(f(&s, 0, &[1, 1, 1]), q(1, 1));
    assert_eq!(f(&s, 1, &[3]), q(1, 8));
    assert_eq!(f(&s, 0, &[1, 1, 1, 3]), q(3, 1));
    assert_eq!(f(&s, 1, &[1, 5]), q(5, 8));
    assert_eq!(f(&s, 1, &[3, 3]), q(3, 8));
    assert_eq!(s.tensor(0, 3).unwrap().len(), 1);
    assert_eq!(s.tensor(1, 1).unwrap().len(), 1);
}

#[test]
fn bessel_table() {
    let s = CorrelatorStore::build(CatalogCurve::Bessel.build(), 3).unwrap();
    for n in 3..=5 {
        assert!(s.tensor(0, n).unwrap().is_empty());
    }
    assert_eq!(f(&s, 1, &[1]), q(1, 8));
    assert_eq!(f(&s, 1, &[1, 1]), q(1, 8));
}

#[test]
fn reversed_sign_alternates() {
    let std = CorrelatorStore::build(CatalogCurve::Airy.build(), 3).unwrap();
    let opts = TrOptions {
        kernel_sign: KernelSign::Reversed,
        ..TrOptions::default()
    };
    let rev = CorrelatorStore::build_with(CatalogCurve::Airy.build(), 3, opts).unwrap();
    for t in std.tensors() {
        let r = rev.tensor(t.g, t.n).unwrap();
        let sign = if t.chi() % 2 == 0 { q(1, 1) } else { q(-1, 1) };
        for (k, v) in t.iter() {
            assert_eq!(r.get(k), v * &sign);
        }
        assert_eq!(r.len(), t.len());
    }
}

#[test]
fn dilaton_holds() {
    for (c, chi) in [
        (CatalogCurve::Airy, 4),
        (CatalogCurve::Bessel, 4),
        (CatalogCurve::Mirzakhani, 4),
        (CatalogCurve::KappaGen(2), 4),
        (CatalogCurve::Lambert, 3),
    ] {
        let s = CorrelatorStore::build(c.build(), chi).unwrap();
        for t in s.tensors() {
            if t.chi() < chi {
                dilaton_check(&s, t.g, t.n).unwrap_or_else(|e| panic!("{c}: {e}"));
            }
        }
    }
}

#[test]
fn airy_free_energy_vanishes_bessel_does_not() {
    let airy = CorrelatorStore::build(CatalogCurve::Airy.build(), 3).unwrap();
    assert_eq!(free_energy(&airy, 2).unwrap(), Scalar::zero());
}

#[test]
fn lambert_builds() {
    let s = CorrelatorStore::build(CatalogCurve::Lambert.build(), 2).unwrap();
    assert!(!s.tensor(0, 3).unwrap().is_empty());
}

fn pi2(c: Scalar, k: u32) -> Scalar {
    &c * &Scalar::symbol("pi2", k)
}

#[test]
fn mirzakhani_table() {
    let s = CorrelatorStore::build(CatalogCurve::Mirzakhani.build(), 2).unwrap();
    assert_eq!(f(&s, 0, &[1, 1, 1]), q(1, 1));
    assert_eq!(f(&s, 1, &[3]), q(1, 8));
    assert_eq!(f(&s, 1, &[1]), pi2(q(1, 12), 1));
    assert_eq!(f(&s, 0, &[1, 1, 1, 3]), q(3, 1));
    assert_eq!(f(&s, 0, &[1, 1, 1, 1]), pi2(q(2, 1), 1));
    assert_eq!(f(&s, 1, &[1, 5]), q(5, 8));
    assert_eq!(f(&s, 1, &[3, 3]), q(3, 8));
    assert_eq!(f(&s, 1, &[1, 3]), pi2(q(1, 2), 1));
    assert_eq!(f(&s, 1, &[1, 1]), pi2(q(1, 4), 2));
    assert_eq!(s.tensor(1, 2).unwrap().len(), 4);
    assert_eq!(s.tensor(0, 4).unwrap().len(), 2);
}
