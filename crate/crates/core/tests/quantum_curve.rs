use toprec_core::exact_algebra::{q, Polynomial, RationalFunction, Scalar};
use toprec_core::quantum_curve::*;
use toprec_core::spectral_curve::CatalogCurve;
use toprec_core::tr_engine::{CorrelatorStore, KernelSign, TrOptions};

fn airy_psi(k: i64) -> WaveFunction {
    let store = CorrelatorStore::build(CatalogCurve::Airy.build(), k).unwrap();
    wavefunction(&store, k).unwrap()
}

fn pole(c: Scalar, k: u32) -> RationalFunction {
    RationalFunction::pole(c, &Scalar::zero(), k)
}

#[test]
fn airy_grades() {
    let psi = airy_psi(2);
    let s = |m| psi.grade(m).unwrap().clone();
    assert_eq!(s(-1).rational, RationalFunction::from_poly(Polynomial::monomial(q(-1, 3), 3)));
    assert_eq!(s(0).log_coeff, q(-1, 2));
    // −1/(24z³) from (1,1) and −1/(6z³) from (0,3)
    assert_eq!(s(1).rational, pole(q(-5, 24), 3));
    let mut riccati = riccati_airy(3, -1);
    assert_eq!(s(2).derivative(), riccati.remove(3));
}

/// Independent oracle: u = ψ'/ψ in x solves ħu' + u² = 2x; with u = Σ ħ^i u_i
/// and x = z²/2, each u_i is a rational function of z. `branch` picks u0 = ±z.
fn riccati_airy(top: usize, branch: i64) -> Vec<RationalFunction> {
    let x = RationalFunction::from_poly(Polynomial::monomial(q(1, 2), 2));
    let dx = x.derivative();
    let mut u = vec![RationalFunction::from_poly(Polynomial::monomial(Scalar::from_int(branch), 1))];
    for i in 1..=top {
        // 2 u0 u_i = −(d/dx u_{i−1}) − Σ_{a+b=i, 0<a<i} u_a u_b
        let mut rhs = u[i - 1].derivative().div(&dx).unwrap().scale(&q(-1, 1));
        for a in 1..i {
            rhs = rhs.sub(&u[a].mul(&u[i - a]));
        }
        u.push(rhs.div(&u[0].scale(&q(2, 1))).unwrap());
    }
    // dS_{i−1}/dz = u_i · dx/dz
    u.into_iter().map(|ui| ui.mul(&dx)).collect()
}

#[test]
fn airy_matches_riccati_through_grade_four() {
    let psi = airy_psi(4);
    let oracle = riccati_airy(5, -1);
    for m in -1..=4 {
        assert_eq!(psi.grade(m).unwrap().derivative(), oracle[(m + 1) as usize], "grade {m}");
    }
    let opts = TrOptions {
        kernel_sign: KernelSign::Reversed,
        ..TrOptions::default()
    };
    let rev = CorrelatorStore::build_with(CatalogCurve::Airy.build(), 4, opts).unwrap();
    let psi = wavefunction(&rev, 4).unwrap();
    let oracle = riccati_airy(5, 1);
    for m in -1..=4 {
        assert_eq!(psi.grade(m).unwrap().derivative(), oracle[(m + 1) as usize], "reversed grade {m}");
    }
    assert!(quantum_check(&QuantumOperator::airy(), &psi, 4).unwrap().pass());
}

#[test]
fn airy_operator_annihilates() {
    let psi = airy_psi(4);
    let report = quantum_check(&QuantumOperator::airy(), &psi, 4).unwrap();
    assert_eq!(report.residuals.len(), 5);
    assert!(report.pass(), "{:?}", report.first_nonzero());
}

#[test]
fn negative_controls() {
    let psi = airy_psi(4);
    let id = quantum_check(&QuantumOperator::identity(), &psi, 4).unwrap();
    let first = id.first_nonzero().unwrap();
    assert_eq!((first.grade, first.residual.clone()), (0, RationalFunction::from_poly(Polynomial::constant(q(1, 1)))));
    let wrong = QuantumOperator::airy().with_term(1, 1, Polynomial::monomial(q(1, 1), 1));
    let r = quantum_check(&wrong, &psi, 4).unwrap();
    let first = r.first_nonzero().unwrap();
    // x · u0 = −z³/2 at grade 1
    assert_eq!(first.grade, 1);
    assert_eq!(first.residual, RationalFunction::from_poly(Polynomial::monomial(q(-1, 2), 3)));
}

#[test]
fn constants_do_not_matter() {
    let mut psi = airy_psi(3);
    let base = quantum_check(&QuantumOperator::airy(), &psi, 3).unwrap();
    for g in psi.grades.iter_mut() {
        g.rational = g.rational.add(&RationalFunction::from_poly(Polynomial::constant(q(7, 3))));
    }
    assert_eq!(quantum_check(&QuantumOperator::airy(), &psi, 3).unwrap(), base);
}

#[test]
fn bessel_classical_grade() {
    // y = 1/z on x = z²/2 satisfies 2x y² = 1
    let store = CorrelatorStore::build(CatalogCurve::Bessel.build(), 2).unwrap();
    let psi = wavefunction(&store, 2).unwrap();
    let op = QuantumOperator::zero()
        .with_term(2, 0, Polynomial::monomial(q(2, 1), 1))
        .with_term(0, 0, Polynomial::constant(q(-1, 1)));
    let r = quantum_check(&op, &psi, 2).unwrap();
    assert!(r.residuals[0].residual.is_zero());
}

#[test]
fn rejects_unsupported() {
    let store = CorrelatorStore::build(CatalogCurve::Lambert.build(), 1).unwrap();
    assert!(wavefunction(&store, 1).is_err());
    let airy = CorrelatorStore::build(CatalogCurve::Airy.build(), 2).unwrap();
    assert!(matches!(wavefunction(&airy, 3), Err(QuantumError::GradeBeyondStore(3, 2))));
    let psi = wavefunction(&airy, 2).unwrap();
    assert!(quantum_check(&QuantumOperator::airy(), &psi, 3).is_err());
    let json = psi.to_json(8).unwrap();
    assert_eq!(json.grades[2].laurent_w, vec![(3, q(-5, 24))]);
}
