use super::{ChartNormalization, CurveError, LocalChart, SpectralCurve, ZETA};
use crate::exact_algebra::{RationalFunction, Scalar, TruncatedSeries};

/// The one-form `ξ^{(a)}_{−k}(z) = Σ_{m=1}^{k} c_{k,m} dz / (z − a)^{m+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct XiForm {
    pub center: Scalar,
    pub k: usize,
    /// `coeffs[m - 1] = c_{k,m}`.
    pub coeffs: Vec<Scalar>,
    /// The same density as a rational function of z.
    pub form: RationalFunction,
}

impl XiForm {
    /// `∫_∞^z ξ`, a rational function vanishing at infinity.
    pub fn primitive_from_infinity(&self) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = (i + 1) as i64;
            let coeff = c * &Scalar::ratio(-1, m);
            acc = acc.add(&RationalFunction::pole(coeff, &self.center, m as u32));
        }
        acc
    }
}

/// ξ-form at the chart's center; the chart must be known to degree `k + 2`.
pub fn xi_from_chart(chart: &LocalChart, k: usize) -> Result<XiForm, CurveError> {
    if chart.order < k as i64 + 2 {
        return Err(CurveError::OrderTooSmall(chart.order, format!("xi_{}", k)));
    }
    let zeta = &chart.zeta;
    let dz = zeta.derivative();
    let kernel = dz.mul(&zeta.pow(-(k as i64) - 1)?)?;
    let mut coeffs = Vec::with_capacity(k);
    let mut form = RationalFunction::zero();
    for m in 1..=k {
        let c = kernel.shift(m as i64).residue()?;
        form = form.add(&RationalFunction::pole(c.clone(), &chart.center, (m + 1) as u32));
        coeffs.push(c);
    }
    Ok(XiForm {
        center: chart.center.clone(),
        k,
        coeffs,
        form,
    })
}

/// `ξ^{(a)}_{−k}` using the curve's chart convention at `a`.
pub fn xi_form(curve: &SpectralCurve, a: &Scalar, k: usize) -> Result<XiForm, CurveError> {
    let id = curve.point_id(a)?;
    let chart = curve.chart(id, k as i64 + 3)?;
    debug_assert!(chart.normalization == curve.normalization || chart.normalization == ChartNormalization::Unit);
    xi_from_chart(&chart, k)
}

/// Density of `ξ` in the ζ variable of `chart`, known modulo `ζ^order`.
pub fn xi_local_expansion(xi: &XiForm, chart: &LocalChart, order: i64) -> Result<TruncatedSeries, CurveError> {
    let same = xi.center == chart.center;
    let need = if same { order + xi.k as i64 + 2 } else { order + 1 };
    if chart.order < need {
        return Err(CurveError::OrderTooSmall(chart.order, format!("expanding xi_{} to order {order}", xi.k)));
    }
    let shift = &chart.center - &xi.center;
    let u = chart
        .t_of_zeta
        .add(&TruncatedSeries::constant(ZETA, shift, chart.t_of_zeta.order()))?;
    let uinv = u.inverse()?;
    let mut acc = TruncatedSeries::zero(ZETA, i64::MAX / 8);
    let mut p = uinv.clone();
    for c in &xi.coeffs {
        p = p.mul(&uinv)?;
        acc = acc.add(&p.scale(c))?;
    }
    let dens = acc.mul(&chart.t_of_zeta.derivative())?;
    Ok(dens.truncate(order))
}
