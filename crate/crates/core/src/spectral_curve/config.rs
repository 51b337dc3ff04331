use std::collections::BTreeMap;

use super::{ChartNormalization, CurveError, GlobalFn, SpectralCurve};
use crate::exact_algebra::{Polynomial, RationalFunction, Scalar, Symbol};

fn parse_list(key: &str, v: &str) -> Result<Vec<Scalar>, CurveError> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<Scalar>()
                .map_err(|e| CurveError::Config(format!("{key}: {e}")))
        })
        .collect()
}

fn rational(map: &BTreeMap<String, String>, num: &str, den: &str) -> Result<Option<RationalFunction>, CurveError> {
    let Some(n) = map.get(num) else {
        return Ok(None);
    };
    let n = Polynomial::new(parse_list(num, n)?);
    let d = match map.get(den) {
        Some(d) => Polynomial::new(parse_list(den, d)?),
        None => Polynomial::constant(Scalar::one()),
    };
    RationalFunction::new(n, d)
        .map(Some)
        .map_err(|_| CurveError::Config(format!("{den} is zero")))
}

/// Parse a curve from `key = value` lines.
///
/// Keys: `name`, `x_num`, `x_den`, and either `y_num`/`y_den` (ω01 = y dx)
/// or `w_num`/`w_den` (ω01 = w dz); `ram`, optional `symbols`,
/// `normalization` (`unit` or `raw`) and `branches`. Coefficient lists run
/// from low to high degree; entries are exact scalars such as `-3/2`.
/// Blank lines and `#` comments are ignored.
pub fn parse_curve_config(text: &str) -> Result<SpectralCurve, CurveError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CurveError::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let k = k.trim().to_string();
        const KEYS: [&str; 11] = [
            "name", "x_num", "x_den", "y_num", "y_den", "w_num", "w_den", "ram", "symbols", "normalization", "branches",
        ];
        if !KEYS.contains(&k.as_str()) {
            return Err(CurveError::Config(format!("line {}: unknown key {k:?}", lineno + 1)));
        }
        if map.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(CurveError::Config(format!("duplicate key {k:?}")));
        }
    }
    let x = rational(&map, "x_num", "x_den")?.ok_or_else(|| CurveError::Config("missing x_num".into()))?;
    let density = match (rational(&map, "w_num", "w_den")?, rational(&map, "y_num", "y_den")?) {
        (Some(_), Some(_)) => return Err(CurveError::Config("give either y_* or w_*, not both".into())),
        (Some(w), None) => w,
        (None, Some(y)) => y.mul(&x.derivative()),
        (None, None) => return Err(CurveError::Config("missing y_num or w_num".into())),
    };
    let ram = parse_list("ram", map.get("ram").ok_or_else(|| CurveError::Config("missing ram".into()))?)?;
    if ram.is_empty() {
        return Err(CurveError::Config("ram is empty".into()));
    }
    let symbols = map
        .get("symbols")
        .map(|s| {
            s.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(Symbol::new)
                .collect()
        })
        .unwrap_or_default();
    let name = map.get("name").cloned().unwrap_or_else(|| "custom".to_string());
    let mut curve = SpectralCurve::new(&name, GlobalFn::Rational(x), GlobalFn::Rational(density), ram, symbols);
    match map.get("normalization").map(String::as_str) {
        None | Some("unit") => {}
        Some("raw") => curve = curve.with_normalization(ChartNormalization::Raw),
        Some(other) => return Err(CurveError::Config(format!("unknown normalization {other:?}"))),
    }
    if let Some(b) = map.get("branches") {
        let b = parse_list("branches", b)?;
        if b.len() != curve.ramification_points.len() {
            return Err(CurveError::Config("branches must match ram in length".into()));
        }
        curve = curve.with_branches(b);
    }
    for a in curve.ramification_points.clone() {
        super::ramification_profile(&curve, &a, 8)?;
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_curve::CatalogCurve;

    #[test]
    fn airy_from_text() {
        let c = parse_curve_config("name = airy2\nx_num = 0, 0, 1/2\ny_num = 0, 1\nram = 0\n").unwrap();
        let airy = CatalogCurve::Airy.build();
        assert_eq!(c.omega01, airy.omega01);
        assert_eq!(c.x, airy.x);
    }

    #[test]
    fn rejects_unramified_point() {
        let err = parse_curve_config("x_num = 0, 0, 1/2\ny_num = 0, 1\nram = 1\n").unwrap_err();
        assert!(matches!(err, CurveError::NotRamified(_)));
    }

    #[test]
    fn rejects_unknown_key() {
        assert!(parse_curve_config("x_num = 1\nfoo = 2\n").is_err());
    }
}
