use serde::Serialize;

use super::{CurveError, SpectralCurve, T, ZETA};
use crate::exact_algebra::{Scalar, TruncatedSeries};

/// How the local coordinate is normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartNormalization {
    /// `ζ² = x − x(a)`; `branch²` must equal the leading coefficient.
    Raw,
    /// `ζ² = (x − x(a)) / c` with `c` the leading coefficient; `branch² = 1`.
    Unit,
}

/// Local coordinate and deck involution at a simple ramification point.
///
/// All three series are known modulo degree `order`.
#[derive(Clone, Debug)]
pub struct LocalChart {
    pub center: Scalar,
    pub order: i64,
    pub branch: Scalar,
    pub normalization: ChartNormalization,
    /// `x − x(a) = scale · ζ²`, up to a nonzero constant when x is only
    /// known up to one (the Lambert case away from 0).
    pub scale: Scalar,
    /// ζ as a series in `t = z − a`.
    pub zeta: TruncatedSeries,
    /// `t = z − a` as a series in ζ.
    pub t_of_zeta: TruncatedSeries,
    /// `σ(z) − a` as a series in `t`.
    pub sigma: TruncatedSeries,
}

impl LocalChart {
    /// `f(t(ζ))` for a function given as a series in `t`.
    pub fn to_zeta(&self, f: &TruncatedSeries) -> Result<TruncatedSeries, CurveError> {
        let g = self.t_of_zeta.clone();
        Ok(f.retag(ZETA).compose(&g)?)
    }

    /// Density in ζ of the one-form `f(t) dt`.
    pub fn pullback_density(&self, f: &TruncatedSeries) -> Result<TruncatedSeries, CurveError> {
        Ok(self.to_zeta(f)?.mul(&self.t_of_zeta.derivative())?)
    }

    /// `σ(z)` in the global coordinate as a series in `t`.
    pub fn sigma_global(&self) -> TruncatedSeries {
        self.sigma
            .add(&TruncatedSeries::constant(T, self.center.clone(), self.sigma.order()))
            .expect("same variable")
    }
}

/// Simple ramification data `(r, s, s̄)` and the derived point type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    pub point: Scalar,
    pub r: i64,
    pub s: i64,
    pub s_bar: i64,
    pub kind: Option<PointKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointKind {
    Airy,
    Bessel,
}

/// Admissibility verdict with the first failing clause.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: Option<String>,
}

fn x_minus_value(curve: &SpectralCurve, a: &Scalar, order: i64) -> Result<(TruncatedSeries, bool), CurveError> {
    let e = curve.x.expand(a, order)?;
    let c0 = e.series.coeff(0).unwrap_or_else(Scalar::zero);
    let d = e
        .series
        .sub(&TruncatedSeries::constant(T, c0, e.series.order()))?;
    Ok((d, e.exact))
}

fn check_simple(d: &TruncatedSeries, a: &Scalar) -> Result<(), CurveError> {
    match d.valuation() {
        Some(1) => Err(CurveError::NotRamified(a.to_string())),
        Some(2) => Ok(()),
        Some(r) => Err(CurveError::HigherRamification(r, a.to_string())),
        None => Err(CurveError::HigherRamification(d.order(), a.to_string())),
    }
}

/// Chart with `ζ(t)`, `t(ζ)` and `σ(t)` known modulo degree `order`.
pub fn local_chart(
    curve: &SpectralCurve,
    a: &Scalar,
    order: i64,
    branch: &Scalar,
    normalization: ChartNormalization,
) -> Result<LocalChart, CurveError> {
    if order < 2 {
        return Err(CurveError::OrderTooSmall(order, "a local chart".into()));
    }
    curve.point_id(a)?;
    let (d, exact) = x_minus_value(curve, a, order + 1)?;
    check_simple(&d, a)?;
    let lead = d.leading_coeff().cloned().expect("valuation 2");
    let (target, scale) = match normalization {
        ChartNormalization::Unit => (d.scale(&lead.inv()?), lead),
        ChartNormalization::Raw => {
            if !exact {
                return Err(CurveError::InexactScale(a.to_string()));
            }
            (d, Scalar::one())
        }
    };
    let zeta = target.sqrt(branch)?;
    let t_of_zeta = zeta.retag(ZETA).reversion()?;
    let sigma = t_of_zeta.reflect().retag(T).compose(&zeta)?;
    Ok(LocalChart {
        center: a.clone(),
        order,
        branch: branch.clone(),
        normalization,
        scale,
        zeta,
        t_of_zeta,
        sigma,
    })
}

/// `(r, s, s̄)` at a listed ramification point, using the curve's chart convention.
pub fn ramification_profile(curve: &SpectralCurve, a: &Scalar, order: i64) -> Result<RamificationProfile, CurveError> {
    let id = curve.point_id(a)?;
    let (d, _) = x_minus_value(curve, a, order.max(3))?;
    check_simple(&d, a)?;
    let chart = local_chart(curve, a, order.max(3), &curve.branches[id], curve.normalization)?;
    let w = curve.omega01_at(a, chart.order)?;
    let dens = chart.pullback_density(&w)?;
    // ω01 = Σ τ_k ζ^k dζ/ζ, so τ_k is the coefficient of ζ^{k-1}
    let s_bar = dens
        .valuation()
        .map(|v| v + 1)
        .ok_or(CurveError::ProfileUndetermined(order))?;
    let s = dens
        .terms()
        .map(|(e, _)| e + 1)
        .find(|k| k.rem_euclid(2) != 0)
        .ok_or(CurveError::ProfileUndetermined(order))?;
    let kind = match s {
        3 => Some(PointKind::Airy),
        1 => Some(PointKind::Bessel),
        _ => None,
    };
    Ok(RamificationProfile {
        point: a.clone(),
        r: 2,
        s,
        s_bar,
        kind,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The three admissibility clauses, reported in order.
pub fn is_admissible(p: &RamificationProfile) -> Admissibility {
    let (r, s, sb) = (p.r, p.s, p.s_bar);
    let fail = |why: &str| Admissibility {
        admissible: false,
        reason: Some(why.to_string()),
    };
    if gcd(r, s) != 1 {
        return fail("r,s not coprime");
    }
    let allowed = s <= -1
        || ((1..=r + 1).contains(&s) && ((r - 1).rem_euclid(s) == 0 || (r + 1).rem_euclid(s) == 0));
    if !allowed {
        return fail("s outside the allowed set");
    }
    if sb != s && sb != s - 1 {
        return fail("s_bar not in {s, s-1}");
    }
    Admissibility {
        admissible: true,
        reason: None,
    }
}
