use std::collections::BTreeMap;

use super::{CorrelatorStore, CorrelatorTensor, TrError};
use crate::exact_algebra::{Scalar, TruncatedSeries};

/// Result of projecting `ω_{g,n+1}` with the dilaton primitive.
#[derive(Clone, Debug, PartialEq)]
pub struct DilatonOutcome {
    pub g: u32,
    pub n: usize,
    /// Entries compared.
    pub checked: usize,
}

fn primitive(store: &CorrelatorStore, a: usize, constant: &Scalar) -> Result<TruncatedSeries, TrError> {
    Ok(store.local(a).omega01.integrate(constant)?)
}

/// `Σ_a Res Φ_a · ω_{g,n+1}(w, rest)` keyed by `rest`.
fn projected(
    store: &CorrelatorStore,
    g: u32,
    n1: usize,
    constant: &Scalar,
) -> Result<BTreeMap<Vec<(usize, usize)>, Scalar>, TrError> {
    let mut out: BTreeMap<Vec<(usize, usize)>, Scalar> = BTreeMap::new();
    for a in 0..store.num_points() {
        let phi = primitive(store, a, constant)?;
        let e = store.expansion(a, g, n1).ok_or(TrError::Missing(g, n1))?;
        for (rest, s) in &e.entries {
            if s.coeff(-1).is_some_and(|c| !c.is_zero()) {
                return Err(TrError::ResidueNonzero { g, n: n1, point: a });
            }
            let r = phi.mul(s)?.residue()?;
            let slot = out.entry(rest.clone()).or_insert_with(Scalar::zero);
            *slot += &r;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Check `(2g − 2 + n) F_{g,n} = Σ_a Res Φ ω_{g,n+1}` entrywise, for two
/// choices of the integration constant of Φ.
pub fn dilaton_check(store: &CorrelatorStore, g: u32, n: usize) -> Result<DilatonOutcome, TrError> {
    let chi = 2 * g as i64 - 2 + n as i64;
    if chi <= 0 || n == 0 {
        return Err(TrError::Unstable(g, n));
    }
    let target = store.tensor(g, n).ok_or(TrError::Missing(g, n))?;
    let mut checked = 0;
    for constant in [Scalar::zero(), Scalar::one()] {
        let got = projected(store, g, n + 1, &constant)?;
        let got = CorrelatorTensor::from_canonical(g, n, got);
        let keys: std::collections::BTreeSet<Vec<(usize, usize)>> =
            got.iter().chain(target.iter()).map(|(k, _)| k.clone()).collect();
        for key in keys {
            let want = &target.get(&key) * &Scalar::from_int(chi);
            let have = got.get(&key);
            if want != have {
                return Err(TrError::Dilaton {
                    g,
                    n,
                    key: format!("{key:?}"),
                    expected: want.to_string(),
                    found: have.to_string(),
                });
            }
            checked += 1;
        }
    }
    Ok(DilatonOutcome { g, n, checked })
}

/// `F_g = (2g − 2)^{-1} Σ_a Res Φ_a ω_{g,1}` for `g ≥ 2`.
pub fn free_energy(store: &CorrelatorStore, g: u32) -> Result<Scalar, TrError> {
    if g < 2 {
        return Err(TrError::Unstable(g, 0));
    }
    let p = projected(store, g, 1, &Scalar::zero())?;
    let total = p.get(&Vec::new()).cloned().unwrap_or_else(Scalar::zero);
    Ok(total.div(&Scalar::from_int(2 * g as i64 - 2))?)
}
