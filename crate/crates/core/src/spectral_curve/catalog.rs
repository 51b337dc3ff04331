use std::fmt;
use std::str::FromStr;

use super::{AnalyticFn, CurveError, GlobalFn, SpectralCurve};
use crate::exact_algebra::{q, Polynomial, RationalFunction, Scalar, Symbol};

/// Built-in curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogCurve {
    /// `x = z²/2`, `ω01 = z² dz`.
    Airy,
    /// `x = z²/2`, `ω01 = dz`.
    Bessel,
    /// `x = z²/2`, `ω01 = z sin(2πz)/(2π) dz`.
    Mirzakhani,
    /// `x = z²/2`, `ω01 = (z² + Σ_{k=1}^{M} g_k z^{2k+2}) dz` with formal `g_k`.
    KappaGen(usize),
    /// `x = z e^{−z}`, `ω01 = (1 − z) dz`, ramified at `z = 1`.
    Lambert,
}

pub fn catalog_names() -> &'static [&'static str] {
    &["airy", "bessel", "mirzakhani", "kappa_gen", "lambert"]
}

fn half_z_squared() -> GlobalFn {
    GlobalFn::Rational(RationalFunction::from_poly(Polynomial::monomial(q(1, 2), 2)))
}

fn poly(cs: Vec<Scalar>) -> GlobalFn {
    GlobalFn::Rational(RationalFunction::from_poly(Polynomial::new(cs)))
}

impl CatalogCurve {
    pub fn build(self) -> SpectralCurve {
        let origin = vec![Scalar::zero()];
        match self {
            CatalogCurve::Airy => SpectralCurve::new(
                "airy",
                half_z_squared(),
                poly(vec![Scalar::zero(), Scalar::zero(), Scalar::one()]),
                origin,
                vec![],
            ),
            CatalogCurve::Bessel => SpectralCurve::new("bessel", half_z_squared(), poly(vec![Scalar::one()]), origin, vec![]),
            CatalogCurve::Mirzakhani => SpectralCurve::new(
                "mirzakhani",
                half_z_squared(),
                GlobalFn::Analytic(AnalyticFn::SineDensity),
                origin,
                vec![Symbol::new("pi2")],
            ),
            CatalogCurve::KappaGen(m) => {
                let mut cs = vec![Scalar::zero(); 2 * m + 3];
                cs[2] = Scalar::one();
                let mut syms = Vec::new();
                for k in 1..=m {
                    let name = format!("g{k}");
                    cs[2 * k + 2] = Scalar::symbol(&name, 1);
                    syms.push(Symbol::new(&name));
                }
                SpectralCurve::new(&self.to_string(), half_z_squared(), poly(cs), origin, syms)
            }
            CatalogCurve::Lambert => SpectralCurve::new(
                "lambert",
                GlobalFn::Analytic(AnalyticFn::LambertX),
                poly(vec![Scalar::one(), Scalar::from_int(-1)]),
                vec![Scalar::one()],
                vec![],
            ),
        }
    }

    pub fn description(self) -> String {
        match self {
            CatalogCurve::Airy => "x = z^2/2, omega01 = z^2 dz; one Airy-type point at z = 0".into(),
            CatalogCurve::Bessel => "x = z^2/2, omega01 = dz; one Bessel-type point at z = 0".into(),
            CatalogCurve::Mirzakhani => {
                "x = z^2/2, omega01 = z sin(2 pi z)/(2 pi) dz (coefficients in pi2 = pi^2); Airy-type point at z = 0".into()
            }
            CatalogCurve::KappaGen(m) => format!(
                "x = z^2/2, omega01 = (z^2 + sum_{{k=1}}^{m} g_k z^(2k+2)) dz with formal g_k; Airy-type point at z = 0"
            ),
            CatalogCurve::Lambert => "x = z e^(-z), omega01 = (1 - z) dz; one Airy-type point at z = 1".into(),
        }
    }
}

impl fmt::Display for CatalogCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogCurve::Airy => f.write_str("airy"),
            CatalogCurve::Bessel => f.write_str("bessel"),
            CatalogCurve::Mirzakhani => f.write_str("mirzakhani"),
            CatalogCurve::KappaGen(m) => write!(f, "kappa_gen:{m}"),
            CatalogCurve::Lambert => f.write_str("lambert"),
        }
    }
}

impl FromStr for CatalogCurve {
    type Err = CurveError;

    /// `airy`, `bessel`, `mirzakhani`, `lambert`, `kappa_gen` or `kappa_gen:M`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let c = match (head, arg) {
            ("airy", None) => CatalogCurve::Airy,
            ("bessel", None) => CatalogCurve::Bessel,
            ("mirzakhani", None) => CatalogCurve::Mirzakhani,
            ("lambert", None) => CatalogCurve::Lambert,
            ("kappa_gen", None) => CatalogCurve::KappaGen(2),
            ("kappa_gen", Some(m)) => CatalogCurve::KappaGen(
                m.parse()
                    .map_err(|_| CurveError::Config(format!("bad kappa_gen parameter {m:?}")))?,
            ),
            _ => return Err(CurveError::Config(format!("unknown catalog curve {s:?}"))),
        };
        Ok(c)
    }
}
