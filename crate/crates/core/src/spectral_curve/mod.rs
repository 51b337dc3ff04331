//! Genus-zero spectral curves with simple ramification: catalog, local
//! charts and deck involutions, ramification profiles, and the ξ-basis.

mod catalog;
mod chart;
mod config;
mod xi;

pub use catalog::{catalog_names, CatalogCurve};
pub use chart::{is_admissible, local_chart, ramification_profile, Admissibility, ChartNormalization, LocalChart, PointKind, RamificationProfile};
pub use config::parse_curve_config;
pub use xi::{xi_form, xi_from_chart, xi_local_expansion, XiForm};

use thiserror::Error;

use crate::exact_algebra::{exp_series, AlgebraError, RationalFunction, Scalar, Symbol, TruncatedSeries, Var};

/// Local variable `t = z - a` of expansions in the global coordinate.
pub const T: Var = Var("t");
/// Local coordinate at a ramification point.
pub const ZETA: Var = Var("zeta");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("dx does not vanish at {0}")]
    NotRamified(String),
    #[error("ramification order {0} at {1} is unsupported (only simple ramification)")]
    HigherRamification(i64, String),
    #[error("{0} is not a listed ramification point")]
    UnknownPoint(String),
    #[error("could not determine s within order {0}")]
    ProfileUndetermined(i64),
    #[error("analytic expansion of {0} is not available at {1}")]
    AnalyticUnavailable(&'static str, String),
    #[error("raw normalization needs an exact expansion of x at {0}")]
    InexactScale(String),
    #[error("chart order {0} too small for {1}")]
    OrderTooSmall(i64, String),
    #[error("curve configuration: {0}")]
    Config(String),
}

/// Transcendental building blocks served as exact Taylor series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnalyticFn {
    /// `z e^{-z}`.
    LambertX,
    /// `z sin(2πz) / (2π)`, coefficients polynomial in the symbol `pi2`.
    SineDensity,
}

/// A function of the global coordinate z.
#[derive(Clone, Debug, PartialEq)]
pub enum GlobalFn {
    Rational(RationalFunction),
    Analytic(AnalyticFn),
}

/// Expansion at a point, possibly up to a known nonzero constant factor.
#[derive(Clone, Debug)]
pub struct PointExpansion {
    pub series: TruncatedSeries,
    /// `false` when `series` equals the function only up to a nonzero constant.
    pub exact: bool,
}

impl GlobalFn {
    /// Taylor/Laurent expansion in `t = z - a`, known modulo `t^order`.
    pub fn expand(&self, a: &Scalar, order: i64) -> Result<PointExpansion, CurveError> {
        match self {
            GlobalFn::Rational(r) => Ok(PointExpansion {
                series: r.expand_at(a, T, order)?,
                exact: true,
            }),
            GlobalFn::Analytic(AnalyticFn::LambertX) => {
                // (a + t) e^{-a} e^{-t}; the factor e^{-a} is dropped unless a = 0
                let lin = TruncatedSeries::new(T, 0, vec![a.clone(), Scalar::one()], order);
                let series = lin.mul(&exp_series(T, order).reflect())?;
                Ok(PointExpansion {
                    series,
                    exact: a.is_zero(),
                })
            }
            GlobalFn::Analytic(AnalyticFn::SineDensity) => {
                let sign = sine_density_sign(a).ok_or_else(|| {
                    CurveError::AnalyticUnavailable("z sin(2πz)/(2π)", a.to_string())
                })?;
                // sin(2π(a+t)) = ±sin(2πt) when 2a is an integer
                let sin_over = TruncatedSeries::from_fn(T, 0, order, |j| {
                    if j % 2 == 0 {
                        return Scalar::zero();
                    }
                    let m = (j - 1) / 2;
                    let c = Scalar::from_int(if m % 2 == 0 { 1 } else { -1 })
                        * Scalar::from_bigint(num_bigint::BigInt::from(4).pow(m as u32))
                        * Scalar::from_rational(num_rational::BigRational::new(
                            1.into(),
                            factorial(j as u64),
                        ));
                    c * Scalar::symbol("pi2", m as u32)
                });
                let lin = TruncatedSeries::new(T, 0, vec![a.clone(), Scalar::one()], order);
                Ok(PointExpansion {
                    series: lin.mul(&sin_over)?.scale(&Scalar::from_int(sign)),
                    exact: true,
                })
            }
        }
    }

    pub fn as_rational(&self) -> Option<&RationalFunction> {
        match self {
            GlobalFn::Rational(r) => Some(r),
            GlobalFn::Analytic(_) => None,
        }
    }
}

fn sine_density_sign(a: &Scalar) -> Option<i64> {
    let two_a = (a * &Scalar::from_int(2)).to_i64()?;
    Some(if two_a.rem_euclid(2) == 0 { 1 } else { -1 })
}

pub(crate) fn factorial(n: u64) -> num_bigint::BigInt {
    (1..=n).fold(num_bigint::BigInt::from(1), |acc, k| acc * k)
}

/// Genus-zero spectral curve `(P¹, x, ω01, ω02 = dz1 dz2/(z1 - z2)²)`.
#[derive(Clone, Debug)]
pub struct SpectralCurve {
    pub name: String,
    pub x: GlobalFn,
    /// Density of `ω01` with respect to `dz`.
    pub omega01: GlobalFn,
    pub ramification_points: Vec<Scalar>,
    /// Formal symbols the coefficients may contain.
    pub symbols: Vec<Symbol>,
    pub normalization: ChartNormalization,
    /// Leading coefficient of ζ at each ramification point.
    pub branches: Vec<Scalar>,
}

impl SpectralCurve {
    pub fn new(
        name: &str,
        x: GlobalFn,
        omega01: GlobalFn,
        ramification_points: Vec<Scalar>,
        symbols: Vec<Symbol>,
    ) -> Self {
        let branches = vec![Scalar::one(); ramification_points.len()];
        SpectralCurve {
            name: name.to_string(),
            x,
            omega01,
            ramification_points,
            symbols,
            normalization: ChartNormalization::Unit,
            branches,
        }
    }

    pub fn with_branches(mut self, branches: Vec<Scalar>) -> Self {
        assert_eq!(branches.len(), self.ramification_points.len());
        self.branches = branches;
        self
    }

    pub fn with_normalization(mut self, n: ChartNormalization) -> Self {
        self.normalization = n;
        self
    }

    pub fn point(&self, id: usize) -> &Scalar {
        &self.ramification_points[id]
    }

    pub fn point_id(&self, a: &Scalar) -> Result<usize, CurveError> {
        self.ramification_points
            .iter()
            .position(|p| p == a)
            .ok_or_else(|| CurveError::UnknownPoint(a.to_string()))
    }

    /// Chart at the `id`-th ramification point with this curve's conventions.
    pub fn chart(&self, id: usize, order: i64) -> Result<LocalChart, CurveError> {
        local_chart(self, self.point(id), order, &self.branches[id], self.normalization)
    }

    /// ω01 density as a series in `t = z - a`.
    pub fn omega01_at(&self, a: &Scalar, order: i64) -> Result<TruncatedSeries, CurveError> {
        let e = self.omega01.expand(a, order)?;
        debug_assert!(e.exact);
        Ok(e.series)
    }

    /// Whether x is even about every ramification point, so σ(z) = 2a − z.
    pub fn is_even_about(&self, a: &Scalar) -> bool {
        match &self.x {
            GlobalFn::Rational(r) => {
                let n = r.num().taylor_shift(a);
                let d = r.den().taylor_shift(a);
                n.coeffs().iter().skip(1).step_by(2).all(Scalar::is_zero)
                    && d.coeffs().iter().skip(1).step_by(2).all(Scalar::is_zero)
            }
            GlobalFn::Analytic(_) => false,
        }
    }
}
