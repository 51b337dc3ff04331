use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::EnumError;
use crate::exact_algebra::{Scalar, Symbol};
use crate::spectral_curve::factorial;
use crate::tr_engine::{CorrelatorStore, CorrelatorTensor};

/// Cohomology class integrated against the ψ monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    Psi,
    ThetaPsi,
    Kappa1Psi,
}

/// `∫_{M̄_{g,n}} [class] ψ_1^{m_1}⋯ψ_n^{m_n}`, with `κ1^{kappa1}` for [`ClassTag::Kappa1Psi`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionRecord {
    pub g: u32,
    pub n: usize,
    pub class: ClassTag,
    pub psi: Vec<usize>,
    pub kappa1: u32,
    pub value: Scalar,
}

/// `(2m + 1)!!`.
pub fn double_factorial_odd(m: usize) -> BigInt {
    (0..=m).fold(BigInt::from(1), |acc, j| acc * (2 * j + 1))
}

fn odd_product(psi: &[usize]) -> BigInt {
    psi.iter().fold(BigInt::from(1), |acc, &m| acc * double_factorial_odd(m))
}

fn tensor(store: &CorrelatorStore, g: u32, n: usize) -> Result<&CorrelatorTensor, EnumError> {
    if store.num_points() != 1 {
        return Err(EnumError::MultiPoint(store.num_points()));
    }
    store.tensor(g, n).ok_or(EnumError::OutOfRange(g, n))
}

fn coefficient(store: &CorrelatorStore, g: u32, psi: &[usize]) -> Result<Scalar, EnumError> {
    let t = tensor(store, g, psi.len())?;
    let key: Vec<_> = psi.iter().map(|&m| (0, 2 * m + 1)).collect();
    Ok(t.get(&key))
}

fn rational_record(g: u32, psi: &[usize], class: ClassTag, kappa1: u32, value: Scalar) -> Result<IntersectionRecord, EnumError> {
    if !value.is_rational() {
        return Err(EnumError::NotRational(value.to_string()));
    }
    Ok(IntersectionRecord {
        g,
        n: psi.len(),
        class,
        psi: psi.to_vec(),
        kappa1,
        value,
    })
}

/// ψ-class intersection numbers from an Airy-curve store.
pub fn psi_intersections(store: &CorrelatorStore, g: u32, psi: &[usize]) -> Result<IntersectionRecord, EnumError> {
    let f = coefficient(store, g, psi)?;
    let v = f.scale(&BigRational::new(1.into(), odd_product(psi)));
    rational_record(g, psi, ClassTag::Psi, 0, v)
}

/// Θ-class intersection numbers from a Bessel-curve store.
pub fn theta_intersections(store: &CorrelatorStore, g: u32, psi: &[usize]) -> Result<IntersectionRecord, EnumError> {
    let f = coefficient(store, g, psi)?;
    let v = f.scale(&BigRational::new(1.into(), odd_product(psi)));
    rational_record(g, psi, ClassTag::ThetaPsi, 0, v)
}

/// κ1ψ intersection numbers from a store whose coefficients are polynomials
/// in `pi2`: the `pi2^j` part is `2^j/j! ∏(2m+1)!! ∫κ1^j ψ^m`. One record
/// per power of `pi2` present.
pub fn kappa_psi_intersections(store: &CorrelatorStore, g: u32, psi: &[usize]) -> Result<Vec<IntersectionRecord>, EnumError> {
    let f = coefficient(store, g, psi)?;
    kappa_split(g, psi, &f)
}

fn kappa_split(g: u32, psi: &[usize], f: &Scalar) -> Result<Vec<IntersectionRecord>, EnumError> {
    let pi2 = Symbol::new("pi2");
    let mut by_power: std::collections::BTreeMap<u32, Scalar> = Default::default();
    for (mono, c) in f.terms() {
        if mono.factors().iter().any(|(s, _)| s != &pi2) {
            return Err(EnumError::NotRational(f.to_string()));
        }
        let j = mono.degree_in(&pi2);
        let slot = by_power.entry(j).or_insert_with(Scalar::zero);
        *slot += &Scalar::from_rational(c.clone());
    }
    let base = odd_product(psi);
    by_power
        .into_iter()
        .map(|(j, c)| {
            let den = &base * BigInt::from(2).pow(j);
            let num = factorial(j as u64);
            rational_record(g, psi, ClassTag::Kappa1Psi, j, c.scale(&BigRational::new(num, den)))
        })
        .collect()
}

/// Every nonzero intersection number readable from the store, ordered by
/// (χ, g, ψ exponents, κ1 power).
pub fn intersection_table(store: &CorrelatorStore, class: ClassTag) -> Result<Vec<IntersectionRecord>, EnumError> {
    if store.num_points() != 1 {
        return Err(EnumError::MultiPoint(store.num_points()));
    }
    let mut out = Vec::new();
    let mut tensors: Vec<_> = store.tensors().collect();
    tensors.sort_by_key(|t| (t.chi(), t.g));
    for t in tensors {
        for (key, f) in t.iter() {
            if key.iter().any(|&(_, k)| k % 2 == 0) {
                // even ξ indices carry no intersection data
                continue;
            }
            let psi: Vec<usize> = key.iter().map(|&(_, k)| (k - 1) / 2).collect();
            let scale = BigRational::new(1.into(), odd_product(&psi));
            match class {
                ClassTag::Psi | ClassTag::ThetaPsi => out.push(rational_record(t.g, &psi, class, 0, f.scale(&scale))?),
                ClassTag::Kappa1Psi => out.extend(kappa_split(t.g, &psi, f)?),
            }
        }
    }
    Ok(out)
}
