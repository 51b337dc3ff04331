use std::fmt;

use super::{AlgebraError, Scalar, TruncatedSeries, Var};

/// Univariate polynomial, coefficients from low to high degree, trimmed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c z^k`.
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = c;
        Polynomial::new(v)
    }

    /// `z - a`.
    pub fn linear_root(a: &Scalar) -> Self {
        Polynomial::new(vec![-a, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut v = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += &(a * b);
                }
            }
        }
        Polynomial::new(v)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(Scalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from_int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * z + c;
        }
        acc
    }

    /// `p(a + t)` as a polynomial in `t`.
    pub fn taylor_shift(&self, a: &Scalar) -> Polynomial {
        let lin = Polynomial::new(vec![a.clone(), Scalar::one()]);
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Polynomial::constant(c.clone()));
        }
        acc
    }

    /// `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn divrem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial), AlgebraError> {
        let dl = d.leading().ok_or(AlgebraError::DivisionByZero)?;
        let dl_inv = dl.inv()?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut qv = vec![Scalar::zero(); r.len() - dd];
        for k in (0..qv.len()).rev() {
            let c = &r[k + dd] * &dl_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &(&c * dc);
                }
            }
            qv[k] = c;
        }
        r.truncate(dd);
        Ok((Polynomial::new(qv), Polynomial::new(r)))
    }

    /// Monic gcd; only defined for rational coefficients.
    pub fn gcd(&self, o: &Polynomial) -> Option<Polynomial> {
        if !self.is_rational() || !o.is_rational() {
            return None;
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).ok()?;
            a = b;
            b = r;
        }
        let lead = a.leading()?.inv().ok()?;
        Some(a.scale(&lead))
    }

    /// Exact polynomial evaluated at a series.
    pub fn eval_series(&self, s: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::new(s.var(), 0, self.coeffs.clone(), i64::MAX / 8)
            .compose_polynomial(s)
            .expect("nonnegative exponents never invert")
    }

    /// As a series in `t = z` truncated at `order`.
    pub fn to_series(&self, var: Var, order: i64) -> TruncatedSeries {
        TruncatedSeries::new(var, 0, self.coeffs.clone(), order)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let cs = if c.terms().len() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            match i {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*z")?,
                _ => write!(f, "{cs}*z^{i}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of polynomials; reduced by gcd when coefficients are rational.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let mut r = RationalFunction { num, den };
        r.reduce();
        Ok(r)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::constant(Scalar::one()),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    /// `c / (z - a)^k`.
    pub fn pole(c: Scalar, a: &Scalar, k: u32) -> Self {
        RationalFunction::new(Polynomial::constant(c), Polynomial::linear_root(a).pow(k))
            .expect("nonzero denominator")
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Polynomial::constant(Scalar::one());
            return;
        }
        if let Some(g) = self.num.gcd(&self.den) {
            if g.degree().unwrap_or(0) > 0 {
                self.num = self.num.divrem(&g).expect("gcd divides").0;
                self.den = self.den.divrem(&g).expect("gcd divides").0;
            }
        }
        if let Some(l) = self.den.leading().and_then(|l| l.inv().ok()) {
            self.num = self.num.scale(&l);
            self.den = self.den.scale(&l);
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return RationalFunction::new(self.num.add(&o.num), self.den.clone()).expect("nonzero");
        }
        RationalFunction::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero")
    }

    pub fn sub(&self, o: &RationalFunction) -> RationalFunction {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn mul(&self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn div(&self, o: &RationalFunction) -> Result<RationalFunction, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        RationalFunction::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn scale(&self, c: &Scalar) -> RationalFunction {
        RationalFunction::new(self.num.scale(c), self.den.clone()).expect("nonzero")
    }

    pub fn derivative(&self) -> RationalFunction {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RationalFunction::new(n, self.den.mul(&self.den)).expect("nonzero")
    }

    pub fn eval(&self, z: &Scalar) -> Result<Scalar, AlgebraError> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(AlgebraError::Pole(z.to_string()));
        }
        self.num.eval(z).div(&d)
    }

    /// Laurent expansion in `t = z - a`, known modulo `t^order`.
    pub fn expand_at(&self, a: &Scalar, var: Var, order: i64) -> Result<TruncatedSeries, AlgebraError> {
        let n = self.num.taylor_shift(a);
        let d = self.den.taylor_shift(a);
        let vd = d.coeffs().iter().take_while(|c| c.is_zero()).count() as i64;
        let work = order + 2 * vd + 1;
        let s = n.to_series(var, work).div(&d.to_series(var, work))?;
        Ok(s.truncate(order))
    }

    /// Laurent expansion at infinity in `u = 1/z`, known modulo `u^order`.
    pub fn expand_at_infinity(&self, var: Var, order: i64) -> Result<TruncatedSeries, AlgebraError> {
        if self.is_zero() {
            return Ok(TruncatedSeries::zero(var, order));
        }
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        let rev = |p: &Polynomial| {
            let mut c = p.coeffs().to_vec();
            c.reverse();
            Polynomial::new(c)
        };
        let work = (order - (dd - dn)).max(1);
        let q = rev(&self.num)
            .to_series(var, work)
            .div(&rev(&self.den).to_series(var, work))?;
        Ok(q.shift(dd - dn).truncate(order))
    }

    /// `self(s)` for a series `s`.
    pub fn eval_series(&self, s: &TruncatedSeries) -> Result<TruncatedSeries, AlgebraError> {
        self.num.eval_series(s).div(&self.den.eval_series(s))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::q;
    use super::*;

    fn p(cs: &[i64]) -> Polynomial {
        Polynomial::new(cs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    #[test]
    fn reduction_and_equality() {
        // (z^2 - 1)/(z - 1) = z + 1
        let r = RationalFunction::new(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(r.den().degree(), Some(0));
        assert_eq!(r, RationalFunction::from_poly(p(&[1, 1])));
    }

    #[test]
    fn expansion_at_pole() {
        // 1/(z (1 - z)) at 0: 1/z + 1 + z + z^2
        let r = RationalFunction::new(p(&[1]), p(&[0, 1, -1])).unwrap();
        let s = r.expand_at(&Scalar::zero(), Var("t"), 3).unwrap();
        assert_eq!(s, TruncatedSeries::new(Var("t"), -1, vec![q(1, 1); 4], 3));
    }

    #[test]
    fn expansion_at_infinity() {
        // z^2/(z - 1) = z + 1 + 1/z + ...
        let r = RationalFunction::new(p(&[0, 0, 1]), p(&[-1, 1])).unwrap();
        let s = r.expand_at_infinity(Var("u"), 3).unwrap();
        assert_eq!(s, TruncatedSeries::new(Var("u"), -1, vec![q(1, 1); 4], 3));
    }

    #[test]
    fn taylor_shift_and_divrem() {
        let a = p(&[1, 2, 3]);
        let shifted = a.taylor_shift(&q(2, 1));
        assert_eq!(shifted.eval(&Scalar::zero()), a.eval(&q(2, 1)));
        let (qq, r) = a.divrem(&p(&[1, 1])).unwrap();
        assert_eq!(qq.mul(&p(&[1, 1])).add(&r), a);
    }

    #[test]
    fn derivative_quotient_rule() {
        let r = RationalFunction::new(p(&[1]), p(&[0, 1])).unwrap();
        let d = r.derivative();
        assert_eq!(d, RationalFunction::new(p(&[-1]), p(&[0, 0, 1])).unwrap());
    }
}
