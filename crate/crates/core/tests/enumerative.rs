use toprec_core::enumerative::*;
use toprec_core::exact_algebra::{q, Scalar};
use toprec_core::spectral_curve::CatalogCurve;
use toprec_core::tr_engine::{CorrelatorStore, KernelSign, TrOptions};

fn store(c: CatalogCurve, chi: i64) -> CorrelatorStore {
    CorrelatorStore::build(c.build(), chi).unwrap()
}

#[test]
fn psi_numbers() {
    let s = store(CatalogCurve::Airy, 2);
    assert_eq!(psi_intersections(&s, 0, &[0, 0, 0]).unwrap().value, q(1, 1));
    assert_eq!(psi_intersections(&s, 1, &[1]).unwrap().value, q(1, 24));
    assert_eq!(psi_intersections(&s, 0, &[1, 0, 0, 0]).unwrap().value, q(1, 1));
    assert_eq!(psi_intersections(&s, 1, &[1, 1]).unwrap().value, q(1, 24));
    assert_eq!(psi_intersections(&s, 1, &[2, 0]).unwrap().value, q(1, 24));
    assert!(psi_intersections(&s, 2, &[4]).is_err());
}

#[test]
fn psi_table_matches_string_equation() {
    // ⟨τ_0 ∏τ_{m_i}⟩ = Σ_j ⟨τ_{m_j − 1} ∏_{i≠j} τ_{m_i}⟩
    let s = store(CatalogCurve::Airy, 4);
    let table = intersection_table(&s, ClassTag::Psi).unwrap();
    let lookup = |g: u32, psi: &[usize]| -> Scalar {
        let mut p = psi.to_vec();
        p.sort_unstable();
        table
            .iter()
            .find(|r| r.g == g && {
                let mut rp = r.psi.clone();
                rp.sort_unstable();
                rp == p
            })
            .map(|r| r.value.clone())
            .unwrap_or_else(Scalar::zero)
    };
    let mut checked = 0;
    for r in &table {
        if r.psi.len() < 4 && !(r.g >= 1 && r.psi.len() >= 2) || !r.psi.contains(&0) {
            continue;
        }
        let pos = r.psi.iter().position(|&m| m == 0).unwrap();
        let mut rest = r.psi.clone();
        rest.remove(pos);
        let mut sum = Scalar::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut p = rest.clone();
                p[j] -= 1;
                sum += &lookup(r.g, &p);
            }
        }
        assert_eq!(r.value, sum, "string equation at g={} psi={:?}", r.g, r.psi);
        checked += 1;
    }
    assert!(checked > 5);
}

#[test]
fn theta_numbers() {
    let s = store(CatalogCurve::Bessel, 2);
    assert_eq!(theta_intersections(&s, 1, &[0]).unwrap().value, q(1, 8));
    assert_eq!(theta_intersections(&s, 1, &[0, 0]).unwrap().value, q(1, 8));
    assert_eq!(theta_intersections(&s, 0, &[0, 0, 0]).unwrap().value, q(0, 1));
}

#[test]
fn kappa_numbers() {
    let s = store(CatalogCurve::Mirzakhani, 2);
    let r11 = kappa_psi_intersections(&s, 1, &[0]).unwrap();
    assert_eq!(r11.len(), 1);
    assert_eq!((r11[0].kappa1, r11[0].value.clone()), (1, q(1, 24)));
    let r11psi = kappa_psi_intersections(&s, 1, &[1]).unwrap();
    assert_eq!((r11psi[0].kappa1, r11psi[0].value.clone()), (0, q(1, 24)));
    let r04 = kappa_psi_intersections(&s, 0, &[0, 0, 0, 0]).unwrap();
    assert_eq!((r04[0].kappa1, r04[0].value.clone()), (1, q(1, 1)));
    // ∫_{M̄_{1,2}} κ1² = 1/8, ∫ κ1 ψ1 = 1/12
    let r12 = kappa_psi_intersections(&s, 1, &[0, 0]).unwrap();
    assert_eq!(r12.iter().map(|r| (r.kappa1, r.value.clone())).collect::<Vec<_>>(), vec![(2, q(1, 8))]);
    let r12b = kappa_psi_intersections(&s, 1, &[1, 0]).unwrap();
    assert_eq!(r12b.iter().map(|r| (r.kappa1, r.value.clone())).collect::<Vec<_>>(), vec![(1, q(1, 12))]);
    for r in intersection_table(&s, ClassTag::Kappa1Psi).unwrap() {
        assert!(r.value.is_rational());
    }
    // Weil–Petersson volume V_{0,5}(0) = 10π⁴ fixes ∫_{M̄_{0,5}} κ1² = 5
    let s3 = store(CatalogCurve::Mirzakhani, 3);
    let r05 = kappa_psi_intersections(&s3, 0, &[0; 5]).unwrap();
    assert_eq!(r05.iter().map(|r| (r.kappa1, r.value.clone())).collect::<Vec<_>>(), vec![(2, q(5, 1))]);
}

#[test]
fn oracle_small_values() {
    assert_eq!(hurwitz_oracle(0, &[1]).unwrap().value, q(1, 1));
    assert_eq!(hurwitz_oracle(0, &[2]).unwrap().value, q(1, 2));
    // the trivial cover has no simple branch points to offer a genus-one surface
    assert_eq!(hurwitz_oracle(1, &[1]).unwrap().value, q(0, 1));
    // Hurwitz's formula for one-part profiles: d^{d−3} with b! d! weight
    for d in 1..=5usize {
        let b = d as u64 - 1;
        let count = transitive_factorizations(0, &[d]).unwrap();
        let fact = |n: u64| (1..=n).product::<u64>();
        let expected = (fact(b) * (d as u64).pow(d as u32 - 1)) / d as u64;
        assert_eq!(count, expected.into(), "d = {d}");
    }
    // numbered equal parts double the count of unnumbered ones
    let labeled = transitive_factorizations(1, &[1, 1]).unwrap();
    assert_eq!(labeled, 2.into());
    assert!(hurwitz_oracle(0, &[4, 3]).is_err());
}

#[test]
fn hurwitz_tr_matches_oracle() {
    let s = store(CatalogCurve::Lambert, 3);
    let mut n = 0;
    for (g, p) in hurwitz_profiles(5, -1, 3) {
        if g == 0 && p.len() == 2 {
            continue;
        }
        let tr = hurwitz_from_tr(&s, g, &p).unwrap();
        let oracle = hurwitz_oracle(g, &p).unwrap();
        assert_eq!(tr, oracle, "g={g} profile={p:?}");
        n += 1;
    }
    assert!(n > 40);
    assert_eq!(hurwitz_from_tr(&s, 0, &[1]).unwrap().value, q(1, 1));
    assert_eq!(hurwitz_from_tr(&s, 0, &[2]).unwrap().value, q(1, 2));
}

#[test]
fn hurwitz_sign_follows_kernel_convention() {
    let opts = TrOptions {
        kernel_sign: KernelSign::Reversed,
        ..TrOptions::default()
    };
    let rev = CorrelatorStore::build_with(CatalogCurve::Lambert.build(), 2, opts).unwrap();
    let std = store(CatalogCurve::Lambert, 2);
    for (g, p) in [(0, vec![1, 1, 2]), (1, vec![3]), (0, vec![1, 1, 1, 1]), (1, vec![2, 1])] {
        assert_eq!(hurwitz_from_tr(&rev, g, &p).unwrap(), hurwitz_from_tr(&std, g, &p).unwrap());
    }
    assert_eq!(hurwitz_from_tr(&std, 0, &[1, 1, 1]).unwrap().value, q(1, 1));
}
