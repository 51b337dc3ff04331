//! Independent consistency checks on a correlator store: linear and
//! quadratic loop equations, the projection property, the dilaton
//! equation, pole orders and symmetry.
//!
//! Every check is three-valued. A failure is certain (it is read off
//! coefficients below the truncation order); a pass means the whole window
//! the check needs was available; otherwise the result is indeterminate.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exact_algebra::{RationalFunction, Scalar, TruncatedSeries};
use crate::par;
use crate::spectral_curve::{PointKind, T};
use crate::tr_engine::{dilaton_check, pole_bound, CorrelatorStore, Idx, KernelSign, TensorSeries, TrError};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail {
        key: Vec<Idx>,
        exponent: Option<i64>,
        coefficient: Option<Scalar>,
        detail: String,
    },
    Indeterminate {
        detail: String,
    },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    fn fail(key: &[Idx], detail: impl Into<String>) -> Verdict {
        Verdict::Fail {
            key: key.to_vec(),
            exponent: None,
            coefficient: None,
            detail: detail.into(),
        }
    }

    /// Combine per-key verdicts: any failure wins, then any indeterminate.
    fn merge(self, other: Verdict) -> Verdict {
        match (&self, &other) {
            (Verdict::Fail { .. }, _) => self,
            (_, Verdict::Fail { .. }) => other,
            (Verdict::Indeterminate { .. }, _) => self,
            _ => other,
        }
    }
}

/// One check on one `(g, n)` (and point, for the local checks).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub g: u32,
    pub n: usize,
    pub point: Option<usize>,
    pub verdict: Verdict,
    /// Largest pole order seen in the quantity that must be regular.
    pub worst_pole: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopReport {
    pub curve: String,
    pub chi_max: i64,
    pub results: Vec<SuiteResult>,
}

impl LoopReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.verdict.is_pass())
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteResult> {
        self.results.iter().filter(|r| r.verdict.is_fail())
    }

    pub fn has_failure(&self) -> bool {
        self.failures().next().is_some()
    }

    pub fn has_indeterminate(&self) -> bool {
        self.results
            .iter()
            .any(|r| matches!(r.verdict, Verdict::Indeterminate { .. }))
    }
}

/// Require `series · ζ^{−shift}` to have no terms below `min_exp`.
fn certify(series: &TruncatedSeries, shift: i64, min_exp: i64, key: &[Idx]) -> (Verdict, Option<i64>) {
    let mut first = None;
    let mut worst: Option<i64> = None;
    for (e, c) in series.terms() {
        let q = e - shift;
        if q >= min_exp {
            break;
        }
        if c.is_zero() {
            continue;
        }
        worst = Some(worst.map_or(-q, |w: i64| w.max(-q)));
        if first.is_none() {
            first = Some((q, c.clone()));
        }
    }
    if let Some((q, c)) = first {
        return (
            Verdict::Fail {
                key: key.to_vec(),
                exponent: Some(q),
                coefficient: Some(c),
                detail: format!("term of order {q} below the allowed {min_exp}"),
            },
            worst,
        );
    }
    if series.order() - shift < min_exp {
        return (
            Verdict::Indeterminate {
                detail: format!("known only below exponent {}", series.order() - shift),
            },
            None,
        );
    }
    (Verdict::Pass, None)
}

fn certify_all(t: &TensorSeries, shift: i64, min_exp: i64) -> (Verdict, Option<i64>) {
    let mut verdict = Verdict::Pass;
    let mut worst: Option<i64> = None;
    if t.order - shift < min_exp {
        verdict = Verdict::Indeterminate {
            detail: format!("known only below exponent {}", t.order - shift),
        };
    }
    for (key, s) in &t.entries {
        let (v, w) = certify(s, shift, min_exp, key);
        verdict = verdict.merge(v);
        if let Some(w) = w {
            worst = Some(worst.map_or(w, |x: i64| x.max(w)));
        }
    }
    (verdict, worst)
}

fn missing(g: u32, n: usize) -> TrError {
    TrError::Missing(g, n)
}

/// `(ω_{g,n}(z, …) + ω_{g,n}(σ(z), …)) / dx(z)` is regular at the point.
pub fn linear_loop_check(store: &CorrelatorStore, g: u32, n: usize, a: usize) -> Result<SuiteResult, TrError> {
    let e = store.expansion(a, g, n).ok_or_else(|| missing(g, n))?;
    let comb = e.add(&e.pullback_reflection());
    // dx ∝ ζ dζ
    let (verdict, worst_pole) = certify_all(&comb, 1, 0);
    Ok(SuiteResult {
        suite: "linear",
        g,
        n,
        point: Some(a),
        verdict,
        worst_pole,
    })
}

/// The full quadratic combination (with `ω_{0,1}` terms) divided by
/// `dx(z)²` has no pole at Airy-type points and at most a double pole at
/// Bessel-type points.
pub fn quadratic_loop_check(store: &CorrelatorStore, g: u32, n: usize, a: usize) -> Result<SuiteResult, TrError> {
    let loc = store.local(a);
    let slots = n - 1;
    let e = store.expansion(a, g, n).ok_or_else(|| missing(g, n))?;
    // the kernel convention fixes the sign with which ω01 enters
    let y = match store.options().kernel_sign {
        KernelSign::Standard => loc.omega01.neg(),
        KernelSign::Reversed => loc.omega01.clone(),
    };
    let y_sigma = y.reflect().neg();
    let all: Vec<usize> = (0..slots).collect();
    let mut q = store.kernel_numerator(g, n, a)?;
    q = q.add(&TensorSeries::scalar(y).product(&e.pullback_reflection(), &[], &all, slots));
    q = q.add(&TensorSeries::scalar(y_sigma).product(e, &[], &all, slots));
    let min_exp = match loc.profile.kind {
        Some(PointKind::Bessel) => -2,
        _ => 0,
    };
    let (verdict, worst_pole) = certify_all(&q, 2, min_exp);
    Ok(SuiteResult {
        suite: "quadratic",
        g,
        n,
        point: Some(a),
        verdict,
        worst_pole,
    })
}

/// Projection `B̂_Ram` of a rational one-form: principal parts at every
/// ramification point, rebuilt in the ξ basis. `None` if a pole is deeper
/// than the available ξ forms.
pub fn project(store: &CorrelatorStore, form: &RationalFunction) -> Result<Result<RationalFunction, String>, TrError> {
    let mut rebuilt = RationalFunction::zero();
    for b in 0..store.num_points() {
        let loc = store.local(b);
        let f = form.expand_at(&loc.chart.center, T, 1)?;
        let dens = loc.chart.pullback_density(&f)?;
        for (e, c) in dens.part_below(0) {
            if e == -1 {
                return Ok(Err(format!("residue {c} at point {b}")));
            }
            let k = (-e - 1) as usize;
            match store.xi(b, k) {
                Some(xi) => rebuilt = rebuilt.add(&xi.form.scale(&c)),
                None => return Ok(Err(format!("pole of order {} beyond k_max at point {b}", k + 1))),
            }
        }
    }
    Ok(Ok(rebuilt))
}

/// `B̂_Ram[α] = α` for a single one-form.
pub fn projection_check_form(store: &CorrelatorStore, form: &RationalFunction, key: &[Idx]) -> Result<Verdict, TrError> {
    Ok(match project(store, form)? {
        Ok(p) if &p == form => Verdict::Pass,
        Ok(_) => Verdict::fail(key, "projection changes the form"),
        Err(why) if why.starts_with("residue") => Verdict::fail(key, why),
        Err(why) => Verdict::Indeterminate { detail: why },
    })
}

/// Projection property in every variable: each partial one-form
/// `Σ_i F[i, rest] ξ_i` is reproduced by its principal parts.
pub fn projection_check(store: &CorrelatorStore, g: u32, n: usize) -> Result<SuiteResult, TrError> {
    let t = store.tensor(g, n).ok_or_else(|| missing(g, n))?;
    let mut forms: BTreeMap<Vec<Idx>, RationalFunction> = BTreeMap::new();
    for (key, v) in t.ordered_entries() {
        let (b, k) = key[0];
        let xi = store.xi(b, k).ok_or(TrError::IndexOutOfRange {
            g,
            n,
            k,
            k_max: store.k_max(),
        })?;
        let slot = forms.entry(key[1..].to_vec()).or_insert_with(RationalFunction::zero);
        *slot = slot.add(&xi.form.scale(&v));
    }
    let mut verdict = Verdict::Pass;
    for (rest, form) in &forms {
        verdict = verdict.merge(projection_check_form(store, form, rest)?);
    }
    Ok(SuiteResult {
        suite: "projection",
        g,
        n,
        point: None,
        verdict,
        worst_pole: None,
    })
}

/// Stored entries respect `k + 1 ≤ 6g − 4 + 2n`.
pub fn pole_order_check(store: &CorrelatorStore, g: u32, n: usize) -> Result<SuiteResult, TrError> {
    let t = store.tensor(g, n).ok_or_else(|| missing(g, n))?;
    let bound = pole_bound(g, n);
    let mut verdict = Verdict::Pass;
    let mut worst = None;
    for (key, _) in t.iter() {
        let top = key.iter().map(|i| i.1 + 1).max().unwrap_or(0);
        worst = Some(worst.map_or(top as i64, |w: i64| w.max(top as i64)));
        if top > bound {
            verdict = verdict.merge(Verdict::fail(key, format!("pole of order {top} exceeds {bound}")));
        }
    }
    Ok(SuiteResult {
        suite: "pole_order",
        g,
        n,
        point: None,
        verdict,
        worst_pole: worst,
    })
}

/// Recompute `ω_{g,n}` from the lower levels (asserting raw symmetry) and
/// compare with the stored tensor.
pub fn symmetry_check(store: &CorrelatorStore, g: u32, n: usize) -> Result<SuiteResult, TrError> {
    let stored = store.tensor(g, n).ok_or_else(|| missing(g, n))?;
    let verdict = match store.compute_correlator(g, n) {
        Ok(t) if &t == stored => Verdict::Pass,
        Ok(t) => {
            let key = t
                .iter()
                .chain(stored.iter())
                .map(|(k, _)| k.clone())
                .find(|k| t.get(k) != stored.get(k))
                .unwrap_or_default();
            Verdict::fail(&key, "stored tensor differs from the recursion output")
        }
        Err(TrError::Asymmetric { key, expected, found, .. }) => {
            Verdict::fail(&[], format!("raw output asymmetric at {key}: {expected} vs {found}"))
        }
        Err(e) => return Err(e),
    };
    Ok(SuiteResult {
        suite: "symmetry",
        g,
        n,
        point: None,
        verdict,
        worst_pole: None,
    })
}

/// Dilaton equation, when `ω_{g,n+1}` is in the store.
pub fn dilaton_suite(store: &CorrelatorStore, g: u32, n: usize) -> Result<Option<SuiteResult>, TrError> {
    if 2 * g as i64 - 1 + n as i64 > store.chi_max() {
        return Ok(None);
    }
    let verdict = match dilaton_check(store, g, n) {
        Ok(_) => Verdict::Pass,
        Err(TrError::Dilaton { key, expected, found, .. }) => {
            Verdict::fail(&[], format!("at {key}: expected {expected}, found {found}"))
        }
        Err(TrError::ResidueNonzero { g, n, point }) => {
            Verdict::fail(&[], format!("omega_{g},{n} has a residue at point {point}"))
        }
        Err(e) => return Err(e),
    };
    Ok(Some(SuiteResult {
        suite: "dilaton",
        g,
        n,
        point: None,
        verdict,
        worst_pole: None,
    }))
}

/// Every suite on every stored `(g, n)` up to `chi_max`.
pub fn full_report(store: &CorrelatorStore, chi_max: i64) -> Result<LoopReport, TrError> {
    let mut pairs: Vec<(u32, usize)> = store
        .tensors()
        .filter(|t| t.chi() <= chi_max)
        .map(|t| (t.g, t.n))
        .collect();
    pairs.sort_by_key(|&(g, n)| (2 * g as i64 - 2 + n as i64, g));
    let jobs: Vec<(u32, usize)> = pairs;
    let per_pair = par::map(&jobs, |&(g, n)| -> Result<Vec<SuiteResult>, TrError> {
        let mut out = Vec::new();
        for a in 0..store.num_points() {
            out.push(linear_loop_check(store, g, n, a)?);
            out.push(quadratic_loop_check(store, g, n, a)?);
        }
        out.push(projection_check(store, g, n)?);
        out.push(pole_order_check(store, g, n)?);
        out.push(symmetry_check(store, g, n)?);
        if let Some(d) = dilaton_suite(store, g, n)? {
            out.push(d);
        }
        Ok(out)
    });
    let mut results = Vec::new();
    for r in per_pair {
        results.extend(r?);
    }
    Ok(LoopReport {
        curve: store.curve().name.clone(),
        chi_max,
        results,
    })
}
