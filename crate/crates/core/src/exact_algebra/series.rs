//! Truncated Laurent series with explicit truncation order.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::{AlgebraError, Scalar};

/// Opaque variable tag; series in different variables never mix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Var(pub &'static str);

/// `Σ_{j=low}^{order-1} c_j t^j + O(t^order)`.
///
/// Canonical form: `coeffs[0]` is nonzero unless the series is zero, in
/// which case `coeffs` is empty and `low == order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    var: Var,
    low: i64,
    coeffs: Vec<Scalar>,
    order: i64,
}

impl TruncatedSeries {
    pub fn new(var: Var, low: i64, coeffs: Vec<Scalar>, order: i64) -> Self {
        let mut s = TruncatedSeries {
            var,
            low,
            coeffs,
            order,
        };
        s.normalize();
        s
    }

    pub fn zero(var: Var, order: i64) -> Self {
        TruncatedSeries {
            var,
            low: order,
            coeffs: Vec::new(),
            order,
        }
    }

    pub fn constant(var: Var, c: Scalar, order: i64) -> Self {
        Self::monomial(var, c, 0, order)
    }

    pub fn monomial(var: Var, c: Scalar, exp: i64, order: i64) -> Self {
        Self::new(var, exp, vec![c], order)
    }

    /// The series `t` itself.
    pub fn variable(var: Var, order: i64) -> Self {
        Self::monomial(var, Scalar::one(), 1, order)
    }

    /// Series with coefficient `f(j)` for `low <= j < order`.
    pub fn from_fn(var: Var, low: i64, order: i64, f: impl Fn(i64) -> Scalar) -> Self {
        let coeffs = (low..order).map(f).collect();
        Self::new(var, low, coeffs, order)
    }

    fn normalize(&mut self) {
        let keep = (self.order - self.low).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = self.order;
        } else {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// Lowest stored exponent; equals the valuation unless the series is zero.
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.low)
        }
    }

    /// Coefficient of `t^exp`; `None` if `exp` is at or beyond the truncation.
    pub fn coeff(&self, exp: i64) -> Option<Scalar> {
        if exp >= self.order {
            return None;
        }
        Some(self.coeff_or_zero(exp))
    }

    fn coeff_or_zero(&self, exp: i64) -> Scalar {
        if exp < self.low {
            return Scalar::zero();
        }
        self.coeffs
            .get((exp - self.low) as usize)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    fn coeff_ref(&self, exp: i64) -> Option<&Scalar> {
        if exp < self.low {
            return None;
        }
        self.coeffs.get((exp - self.low) as usize)
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.first()
    }

    fn check_var(&self, other: &TruncatedSeries) -> Result<(), AlgebraError> {
        if self.var != other.var {
            Err(AlgebraError::VariableMismatch(self.var.0, other.var.0))
        } else {
            Ok(())
        }
    }

    /// Drop information at and beyond `order` (never raises the order).
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        Self::new(self.var, self.low, self.coeffs.clone(), order)
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<Self, AlgebraError> {
        self.check_var(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<Self, AlgebraError> {
        self.check_var(other)?;
        Ok(self.add_unchecked(other, true))
    }

    fn add_unchecked(&self, other: &TruncatedSeries, negate: bool) -> Self {
        let order = self.order.min(other.order);
        let low = self.low.min(other.low).min(order);
        let top = |s: &TruncatedSeries| {
            if s.coeffs.is_empty() {
                i64::MIN
            } else {
                s.low + s.coeffs.len() as i64
            }
        };
        let hi = order.min(top(self).max(top(other))).max(low);
        let coeffs = (low..hi)
            .map(|j| {
                let a = self.coeff_ref(j);
                let b = other.coeff_ref(j);
                match (a, b) {
                    (None, None) => Scalar::zero(),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => {
                        if negate {
                            -b
                        } else {
                            b.clone()
                        }
                    }
                    (Some(a), Some(b)) => {
                        if negate {
                            a - b
                        } else {
                            a + b
                        }
                    }
                }
            })
            .collect();
        Self::new(self.var, low, coeffs, order)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            var: self.var,
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.var, self.order);
        }
        Self::new(
            self.var,
            self.low,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.order,
        )
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&Scalar::from_rational(r.clone()))
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries {
            var: self.var,
            low: self.low + k,
            coeffs: self.coeffs.clone(),
            order: self.order + k,
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<Self, AlgebraError> {
        self.check_var(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &TruncatedSeries) -> Self {
        let order = (self.order + other.low).min(other.order + self.low);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.var, order);
        }
        let low = self.low + other.low;
        let len = ((order - low).max(0) as usize).min(self.coeffs.len() + other.coeffs.len() - 1);
        let mut coeffs = vec![Scalar::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Self::new(self.var, low, coeffs, order)
    }

    /// `1/self`; the leading coefficient must be an invertible scalar.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let lead = self.leading_coeff().ok_or(AlgebraError::DivisionByZero)?;
        let lead_inv = lead.inv()?;
        let v = self.low;
        let rel = self.order - v;
        // unit part u = self / t^v, known mod t^rel
        let u: Vec<&Scalar> = (0..rel)
            .map(|j| self.coeff_ref(v + j))
            .map(|c| c.unwrap_or(&ZERO_SCALAR))
            .collect();
        let mut inv: Vec<Scalar> = Vec::with_capacity(rel as usize);
        for n in 0..rel as usize {
            if n == 0 {
                inv.push(lead_inv.clone());
                continue;
            }
            let mut acc = Scalar::zero();
            for k in 1..=n {
                if !u[k].is_zero() && !inv[n - k].is_zero() {
                    acc += &(u[k] * &inv[n - k]);
                }
            }
            inv.push(-(acc * &lead_inv));
        }
        Ok(Self::new(self.var, -v, inv, rel - v))
    }

    pub fn div(&self, other: &TruncatedSeries) -> Result<Self, AlgebraError> {
        self.check_var(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    /// Integer power; negative exponents require an invertible leading coefficient.
    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut acc = Self::constant(self.var, Scalar::one(), i64::MAX / 4);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        if acc.order == i64::MAX / 4 {
            // e == 0: one is known as far as self's relative precision reaches
            acc = Self::constant(self.var, Scalar::one(), self.order - self.low.min(self.order));
        }
        Ok(acc)
    }

    /// `f(-t)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.var,
            self.low,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if (self.low + i as i64) % 2 == 0 { c.clone() } else { -c })
                .collect(),
            self.order,
        )
    }

    /// Term-wise derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.var,
            self.low - 1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * &Scalar::from_int(self.low + i as i64))
                .collect(),
            self.order - 1,
        )
    }

    /// `f∘g`. Requires `g(0) = 0`; use [`Self::compose_polynomial`] otherwise.
    pub fn compose(&self, g: &TruncatedSeries) -> Result<Self, AlgebraError> {
        let vg = match g.valuation() {
            Some(v) if v >= 1 => v,
            Some(_) => return Err(AlgebraError::CompositionValuation),
            // g is zero to its known order: f∘g = f(0) + O(t^g.order)
            None => {
                if self.low < 0 {
                    return Err(AlgebraError::CompositionValuation);
                }
                let c = self.coeff(0).unwrap_or_else(Scalar::zero);
                let order = g.order.min(if self.order > 0 { self.order * g.order } else { 0 });
                return Ok(Self::constant(g.var, c, order));
            }
        };
        let tail_order = if self.order > 0 {
            self.order.saturating_mul(vg)
        } else {
            self.order * vg
        };
        let mut result = self.horner(g)?;
        if tail_order < result.order {
            result = result.truncate(tail_order);
        }
        Ok(result)
    }

    /// Evaluate the known coefficients of `self` as an exact polynomial in `g`.
    pub fn compose_polynomial(&self, g: &TruncatedSeries) -> Result<Self, AlgebraError> {
        self.horner(g)
    }

    fn horner(&self, g: &TruncatedSeries) -> Result<Self, AlgebraError> {
        let var = g.var;
        // order marker for exact constants
        let exact = i64::MAX / 8;
        let konst = |c: Scalar| Self::constant(var, c, exact);
        let mut acc = Self::zero(var, exact);
        if !self.is_zero() {
            let hi = self.low + self.coeffs.len() as i64 - 1;
            if hi >= 0 {
                for j in (0..=hi).rev() {
                    acc = acc.mul_unchecked(g).add_unchecked(&konst(self.coeff_or_zero(j)), false);
                }
            }
            if self.low < 0 {
                let ginv = g.inverse()?;
                let mut neg = Self::zero(var, exact);
                for j in self.low..0 {
                    neg = neg.add_unchecked(&konst(self.coeff_or_zero(j)), false);
                    neg = neg.mul_unchecked(&ginv);
                }
                acc = acc.add_unchecked(&neg, false);
            }
        }
        if acc.order >= exact / 2 {
            acc = acc.truncate(g.order - g.low.min(g.order));
        }
        Ok(acc)
    }

    /// Compositional inverse of a valuation-1 series (Lagrange inversion).
    pub fn reversion(&self) -> Result<Self, AlgebraError> {
        if self.valuation() != Some(1) {
            return Err(AlgebraError::ReversionValuation);
        }
        let n_max = self.order; // result known mod t^order
        // phi(w) = w / f(w)
        let f_over_w = self.shift(-1);
        let phi = f_over_w.inverse()?;
        let mut coeffs = vec![Scalar::zero(); n_max.max(1) as usize];
        let mut power = Self::constant(self.var, Scalar::one(), phi.order);
        for n in 1..n_max {
            power = power.mul_unchecked(&phi);
            let c = power.coeff(n - 1).ok_or(AlgebraError::TruncationTooShort)?;
            coeffs[n as usize] = c.scale(&BigRational::new(1.into(), n.into()));
        }
        Ok(Self::new(self.var, 0, coeffs, n_max))
    }

    /// Square root with leading coefficient `branch`; `branch²` must equal
    /// the leading coefficient of `self`.
    pub fn sqrt(&self, branch: &Scalar) -> Result<Self, AlgebraError> {
        let lead = self.leading_coeff().ok_or(AlgebraError::DivisionByZero)?;
        if self.low % 2 != 0 {
            return Err(AlgebraError::OddValuation(self.low));
        }
        if &(branch * branch) != lead {
            return Err(AlgebraError::BadBranch(branch.to_string(), lead.to_string()));
        }
        let two_b_inv = (branch * &Scalar::from_int(2)).inv()?;
        let v = self.low / 2;
        let rel = self.order - self.low;
        let mut g: Vec<Scalar> = Vec::with_capacity(rel as usize);
        for n in 0..rel as usize {
            if n == 0 {
                g.push(branch.clone());
                continue;
            }
            let mut acc = self.coeff_or_zero(self.low + n as i64);
            for i in 1..n {
                acc -= &(&g[i] * &g[n - i]);
            }
            g.push(acc * &two_b_inv);
        }
        Ok(Self::new(self.var, v, g, v + rel))
    }

    /// Coefficient of `t^{-1}`.
    pub fn residue(&self) -> Result<Scalar, AlgebraError> {
        self.coeff(-1).ok_or(AlgebraError::TruncationTooShort)
    }

    /// Antiderivative with the given constant; fails on a nonzero `t^{-1}` term.
    pub fn integrate(&self, constant: &Scalar) -> Result<Self, AlgebraError> {
        match self.coeff(-1) {
            None => return Err(AlgebraError::TruncationTooShort),
            Some(c) if !c.is_zero() => return Err(AlgebraError::LogarithmicTerm(c.to_string())),
            _ => {}
        }
        let order = self.order + 1;
        let low = (self.low + 1).min(0);
        let coeffs = (low..order)
            .map(|j| {
                if j == 0 {
                    constant.clone()
                } else {
                    self.coeff_or_zero(j - 1)
                        .scale(&BigRational::new(1.into(), j.into()))
                }
            })
            .collect();
        Ok(Self::new(self.var, low, coeffs, order))
    }

    /// Same coefficients, different variable tag.
    pub fn retag(&self, var: Var) -> Self {
        TruncatedSeries { var, ..self.clone() }
    }

    /// Substitute `t -> c t` for a scalar `c`.
    pub fn rescale_var(&self, c: &Scalar) -> Self {
        let mut p = c.pow(self.low.unsigned_abs() as u32);
        if self.low < 0 {
            p = p.inv().expect("rescale by a non-invertible scalar with negative exponents");
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(x * &p);
            p = &p * c;
        }
        Self::new(self.var, self.low, coeffs, self.order)
    }

    /// Keep only the terms of exponent `< bound` (a principal part when `bound = 0`).
    pub fn part_below(&self, bound: i64) -> Vec<(i64, Scalar)> {
        self.terms()
            .filter(|(e, _)| *e < bound)
            .map(|(e, c)| (e, c.clone()))
            .collect()
    }
}

static ZERO_SCALAR: std::sync::LazyLock<Scalar> = std::sync::LazyLock::new(Scalar::zero);

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.var.0;
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let is_compound = c.terms().len() > 1;
            let cs = if is_compound {
                format!("({c})")
            } else {
                c.to_string()
            };
            match e {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*{t}")?,
                _ => write!(f, "{cs}*{t}^{e}")?,
            }
        }
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "O({t}^{})", self.order)
    }
}

/// `exp(t)` truncated at `order`.
pub fn exp_series(var: Var, order: i64) -> TruncatedSeries {
    let mut fact = BigRational::one();
    let mut coeffs = Vec::new();
    for j in 0..order.max(0) {
        if j > 0 {
            fact /= BigRational::from_integer(j.into());
        }
        coeffs.push(Scalar::from_rational(fact.clone()));
    }
    TruncatedSeries::new(var, 0, coeffs, order)
}

/// Rational scalar `p/q` shorthand used widely in tests and catalog data.
pub fn q(p: i64, d: i64) -> Scalar {
    Scalar::ratio(p, d)
}
