use std::collections::{BTreeMap, HashMap};

use super::{AiryError, PartitionFunction};
use crate::exact_algebra::Scalar;

/// Multiset of variable indices, kept sorted.
pub type Multi = Vec<usize>;

/// `ħ`-graded polynomial in the `x_k`: `(grade, monomial) ↦ coefficient`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HPoly {
    pub terms: BTreeMap<(i32, Multi), Scalar>,
}

impl HPoly {
    pub fn zero() -> Self {
        HPoly::default()
    }

    pub fn one() -> Self {
        HPoly::monomial(0, Vec::new(), Scalar::one())
    }

    pub fn monomial(grade: i32, mut xs: Multi, c: Scalar) -> Self {
        xs.sort_unstable();
        let mut p = HPoly::zero();
        p.add_term(grade, xs, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, grade: i32, xs: Multi, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(grade, xs.clone())) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&(grade, xs));
                }
            }
            None => {
                self.terms.insert((grade, xs), c);
            }
        }
    }

    pub fn add(&self, other: &HPoly) -> HPoly {
        let mut out = self.clone();
        for ((g, m), c) in &other.terms {
            out.add_term(*g, m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HPoly) -> HPoly {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> HPoly {
        let mut out = HPoly::zero();
        for ((g, m), v) in &self.terms {
            out.add_term(*g, m.clone(), v * c);
        }
        out
    }

    /// Product keeping grades `≤ max_grade`.
    pub fn mul_truncated(&self, other: &HPoly, max_grade: i32) -> HPoly {
        let mut out = HPoly::zero();
        for ((ga, ma), ca) in &self.terms {
            for ((gb, mb), cb) in &other.terms {
                if ga + gb > max_grade {
                    continue;
                }
                out.add_term(ga + gb, merge(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> HPoly {
        let mut out = HPoly::zero();
        for ((g, m), c) in &self.terms {
            if let Some((mult, rest)) = remove_one(m, i) {
                out.add_term(*g, rest, c * &Scalar::from_int(mult as i64));
            }
        }
        out
    }

    pub fn truncate(&self, max_grade: i32) -> HPoly {
        HPoly {
            terms: self
                .terms
                .iter()
                .filter(|((g, _), _)| *g <= max_grade)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

fn merge(a: &[usize], b: &[usize]) -> Multi {
    let mut m = Vec::with_capacity(a.len() + b.len());
    m.extend_from_slice(a);
    m.extend_from_slice(b);
    m.sort_unstable();
    m
}

/// Multiplicity of `i` and the multiset with one copy removed.
fn remove_one(m: &[usize], i: usize) -> Option<(usize, Multi)> {
    let mult = m.iter().filter(|&&v| v == i).count();
    if mult == 0 {
        return None;
    }
    let pos = m.iter().position(|&v| v == i)?;
    let mut rest = m.to_vec();
    rest.remove(pos);
    Some((mult, rest))
}

/// `∂^ds x^xs` as a coefficient times the remaining monomial, or `None`.
fn differentiate_monomial(xs: &[usize], ds: &[usize]) -> Option<(Scalar, Multi)> {
    let mut cur = xs.to_vec();
    let mut coeff: i64 = 1;
    for &d in ds {
        let (mult, rest) = remove_one(&cur, d)?;
        coeff *= mult as i64;
        cur = rest;
    }
    Some((Scalar::from_int(coeff), cur))
}

/// Sub-multisets of `m` of size at most `k`, deduplicated.
fn sub_multisets(m: &[usize], k: usize) -> Vec<Multi> {
    let mut out: Vec<Multi> = vec![Vec::new()];
    let mut frontier: Vec<(usize, Multi)> = vec![(0, Vec::new())];
    for _ in 0..k {
        let mut next = Vec::new();
        for (start, s) in &frontier {
            let mut last = None;
            for (j, &v) in m.iter().enumerate().skip(*start) {
                if last == Some(v) {
                    continue;
                }
                last = Some(v);
                let mut t = s.clone();
                t.push(v);
                next.push((j + 1, t));
            }
        }
        out.extend(next.iter().map(|(_, s)| s.clone()));
        frontier = next;
    }
    out
}

/// Normal-ordered element of the Rees Weyl algebra: `Σ c ħ^h x^α ∂^β`
/// with derivatives to the right. Terms are grouped by their derivative part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeylOperator {
    terms: BTreeMap<Multi, BTreeMap<(i32, Multi), Scalar>>,
}

impl WeylOperator {
    pub fn zero() -> Self {
        WeylOperator::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(hbar: i32, xs: Multi, ds: Multi, c: Scalar) -> Self {
        let mut op = WeylOperator::zero();
        op.add_term(hbar, xs, ds, c);
        op
    }

    pub fn add_term(&mut self, hbar: i32, mut xs: Multi, mut ds: Multi, c: Scalar) {
        if c.is_zero() {
            return;
        }
        xs.sort_unstable();
        ds.sort_unstable();
        let slot = self.terms.entry(ds.clone()).or_default();
        match slot.get_mut(&(hbar, xs.clone())) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    slot.remove(&(hbar, xs));
                }
            }
            None => {
                slot.insert((hbar, xs), c);
            }
        }
        if slot.is_empty() {
            self.terms.remove(&ds);
        }
    }

    /// `(ħ-power, x part, ∂ part, coefficient)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, &Multi, &Multi, &Scalar)> {
        self.terms
            .iter()
            .flat_map(|(ds, m)| m.iter().map(move |((h, xs), c)| (*h, xs, ds, c)))
    }

    pub fn len(&self) -> usize {
        self.terms.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &WeylOperator) -> WeylOperator {
        let mut out = self.clone();
        for (h, xs, ds, c) in other.iter() {
            out.add_term(h, xs.clone(), ds.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> WeylOperator {
        let mut out = WeylOperator::zero();
        for (h, xs, ds, v) in self.iter() {
            out.add_term(h, xs.clone(), ds.clone(), v * c);
        }
        out
    }

    pub fn min_grade(&self) -> Option<i32> {
        self.iter().map(|t| t.0).min()
    }

    /// Largest derivative order among the terms.
    pub fn max_derivatives(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Keep only the terms whose indices all satisfy `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> WeylOperator {
        let mut out = WeylOperator::zero();
        for (h, xs, ds, c) in self.iter() {
            if xs.iter().chain(ds.iter()).all(|&i| keep(i)) {
                out.add_term(h, xs.clone(), ds.clone(), c.clone());
            }
        }
        out
    }

    /// Drop every term involving an even index (valid on functions of odd variables only).
    pub fn reduce_to_odd(&self) -> WeylOperator {
        self.restrict(|i| i % 2 == 1)
    }

    /// Action on a polynomial.
    pub fn apply(&self, p: &HPoly) -> HPoly {
        let kmax = self.max_derivatives();
        let mut out = HPoly::zero();
        for ((g, m), c) in &p.terms {
            for ds in sub_multisets(m, kmax) {
                let Some(group) = self.terms.get(&ds) else {
                    continue;
                };
                let Some((dc, rest)) = differentiate_monomial(m, &ds) else {
                    continue;
                };
                let base = c * &dc;
                for ((h, xs), v) in group {
                    out.add_term(g + h, merge(xs, &rest), &base * v);
                }
            }
        }
        out
    }

    /// Substitute `x_m ↦ x_m − t_m/(m ħ)`: conjugation by `exp((1/ħ) Σ t_m ∂_m / m)`.
    pub fn conjugate_by_translation(&self, t: &BTreeMap<usize, Scalar>) -> WeylOperator {
        let mut out = WeylOperator::zero();
        for (h, xs, ds, c) in self.iter() {
            // expand the product of (x_i − t_i/(iħ)) over the x part
            let mut partial: Vec<(i32, Multi, Scalar)> = vec![(h, Vec::new(), c.clone())];
            for &i in xs {
                let mut next = Vec::with_capacity(partial.len() * 2);
                for (hh, mm, cc) in &partial {
                    let mut keep = mm.clone();
                    keep.push(i);
                    next.push((*hh, keep, cc.clone()));
                    if let Some(ti) = t.get(&i) {
                        let shift = ti * &Scalar::ratio(-1, i as i64);
                        next.push((hh - 1, mm.clone(), cc * &shift));
                    }
                }
                partial = next;
            }
            for (hh, mm, cc) in partial {
                out.add_term(hh, mm, ds.clone(), cc);
            }
        }
        out
    }

    /// Check the Airy leading form `ħ(∂_a + Σ_{b > a} c_b ∂_b) + O(ħ²)`,
    /// returning `a`.
    pub fn leading_index(&self) -> Result<usize, AiryError> {
        let mut low: Vec<(usize, Scalar)> = Vec::new();
        for (h, xs, ds, c) in self.iter() {
            if h < 1 || (h == 1 && (!xs.is_empty() || ds.len() != 1)) {
                return Err(AiryError::LeadingForm(format!(
                    "term of grade {h} with x{xs:?} d{ds:?} coefficient {c}"
                )));
            }
            if h == 1 {
                low.push((ds[0], c.clone()));
            }
        }
        low.sort_by_key(|(i, _)| *i);
        match low.first() {
            Some((a, c)) if c.is_one() => Ok(*a),
            Some((a, c)) => Err(AiryError::LeadingForm(format!("leading coefficient {c} at d{a}"))),
            None => Err(AiryError::LeadingForm("no grade-one derivative term".into())),
        }
    }
}

/// Normal-ordered `:J_{m1} J_{m2}:` with `J_m = ∂_m`, `J_{−m} = m x_m`, `J_0 = 0`.
pub fn j_pair(m1: i64, m2: i64) -> WeylOperator {
    if m1 == 0 || m2 == 0 {
        return WeylOperator::zero();
    }
    let mut xs = Vec::new();
    let mut ds = Vec::new();
    let mut c = 1i64;
    for m in [m1, m2] {
        if m < 0 {
            xs.push((-m) as usize);
            c *= -m;
        } else {
            ds.push(m as usize);
        }
    }
    WeylOperator::term(0, xs, ds, Scalar::from_int(c))
}

/// `ħ J_m` for `m > 0`.
pub fn hbar_j(m: usize) -> WeylOperator {
    WeylOperator::term(1, Vec::new(), vec![m], Scalar::one())
}

/// `W²_k = −ħ²(½ Σ_{m1+m2=2k} :J_{m1}J_{m2}: + δ_{k,0}/8)` over all modes
/// with `|m_i| ≤ cutoff`.
pub fn w2(k: i64, cutoff: usize) -> WeylOperator {
    let c = cutoff as i64;
    let mut inner = WeylOperator::zero();
    for m1 in -c..=c {
        let m2 = 2 * k - m1;
        if m2.abs() > c {
            continue;
        }
        inner = inner.add(&j_pair(m1, m2));
    }
    inner = inner.scale(&Scalar::ratio(1, 2));
    if k == 0 {
        inner.add_term(0, Vec::new(), Vec::new(), Scalar::ratio(1, 8));
    }
    let mut out = WeylOperator::zero();
    for (h, xs, ds, v) in inner.iter() {
        out.add_term(h + 2, xs.clone(), ds.clone(), -v);
    }
    out
}

/// The two Virasoro families on odd variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VirasoroFamily {
    /// `L_k = ħJ_{2k+3} − ħ²(…)`, `k ≥ −1`.
    KontsevichWitten,
    /// `L_k = ħJ_{2k+1} − ħ²(…)`, `k ≥ 0`.
    Bgw,
}

impl VirasoroFamily {
    pub fn min_k(self) -> i64 {
        match self {
            VirasoroFamily::KontsevichWitten => -1,
            VirasoroFamily::Bgw => 0,
        }
    }

    /// Index `a` with `H_a = L_k`.
    pub fn index(self, k: i64) -> usize {
        match self {
            VirasoroFamily::KontsevichWitten => (2 * k + 3) as usize,
            VirasoroFamily::Bgw => (2 * k + 1) as usize,
        }
    }

    /// `L_k` with all modes up to `cutoff`.
    pub fn operator(self, k: i64, cutoff: usize) -> WeylOperator {
        assert!(k >= self.min_k(), "L_{k} is not in the family");
        hbar_j(self.index(k)).add(&w2(k, cutoff).reduce_to_odd())
    }
}

/// `ħ`-graded residuals of `(op · Z)/Z` through grade `order`.
pub fn weyl_apply(op: &WeylOperator, z: &PartitionFunction, order: i32) -> Result<HPoly, AiryError> {
    let h_min = op.min_grade().unwrap_or(order);
    let exact = z.chi_max() as i32 + h_min;
    if order > exact {
        return Err(AiryError::OrderBeyondStore {
            order,
            chi_max: z.chi_max(),
        });
    }
    let g_max = order - h_min;
    let s = z.log_polynomial();
    let mut ds_s: HashMap<usize, HPoly> = HashMap::new();
    let mut cache: HashMap<Multi, HPoly> = HashMap::new();
    cache.insert(Vec::new(), HPoly::one());
    let mut out = HPoly::zero();
    for (h, xs, ds, c) in op.iter() {
        let g = g_ratio(ds, &s, &mut ds_s, &mut cache, g_max);
        for ((gg, m), v) in &g.terms {
            if gg + h <= order {
                out.add_term(gg + h, merge(xs, m), c * v);
            }
        }
    }
    Ok(out)
}

/// `(∂^β Z)/Z` via `G_{β+e_i} = ∂_i G_β + (∂_i S) G_β`.
fn g_ratio(
    beta: &[usize],
    s: &HPoly,
    ds_s: &mut HashMap<usize, HPoly>,
    cache: &mut HashMap<Multi, HPoly>,
    g_max: i32,
) -> HPoly {
    if let Some(g) = cache.get(beta) {
        return g.clone();
    }
    let (i, rest) = beta.split_last().expect("empty multiset is cached");
    let prev = g_ratio(rest, s, ds_s, cache, g_max);
    let dsi = ds_s.entry(*i).or_insert_with(|| s.derivative(*i)).clone();
    let g = prev.derivative(*i).add(&dsi.mul_truncated(&prev, g_max)).truncate(g_max);
    cache.insert(beta.to_vec(), g.clone());
    g
}

/// All monomials of degree `≤ degree` in `vars`.
pub fn window_monomials(vars: &[usize], degree: usize) -> Vec<Multi> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(usize, Multi)> = vec![(0, Vec::new())];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (start, m) in &frontier {
            for (j, &v) in vars.iter().enumerate().skip(*start) {
                let mut t = m.clone();
                t.push(v);
                next.push((j, t));
            }
        }
        out.extend(next.iter().map(|(_, m)| m.clone()));
        frontier = next;
    }
    out
}

/// Monomials on which an operator identity is tested.
#[derive(Clone, Debug)]
pub struct Window {
    pub vars: Vec<usize>,
    pub degree: usize,
}

impl Window {
    /// The first `count` odd variables.
    pub fn odd(count: usize, degree: usize) -> Self {
        Window {
            vars: (0..count).map(|i| 2 * i + 1).collect(),
            degree,
        }
    }
}

/// Structure constant `c` in `[L_m, L_n] = c ħ² L_{m+n}` for these
/// normalizations (`J_{−m} = m x_m`, modes `2k`, overall `−ħ²`).
pub fn structure_constant(m: i64, n: i64) -> i64 {
    2 * (n - m)
}

/// `[L_m, L_n] = 2(n − m) ħ² L_{m+n}` on every monomial of the window.
pub fn virasoro_commutator_check(family: VirasoroFamily, m: i64, n: i64, window: &Window) -> Result<bool, AiryError> {
    commutator_check_with(family, m, n, window, structure_constant(m, n))
}

/// `[L_m, L_n] = c ħ² L_{m+n}` on every monomial of the window.
pub fn commutator_check_with(
    family: VirasoroFamily,
    m: i64,
    n: i64,
    window: &Window,
    c: i64,
) -> Result<bool, AiryError> {
    for k in [m, n] {
        if k < family.min_k() {
            return Err(AiryError::NotInFamily(k));
        }
    }
    let top = window.vars.iter().copied().max().unwrap_or(1);
    let cutoff = top + 4 * (m.unsigned_abs() + n.unsigned_abs()) as usize + 8;
    let lm = family.operator(m, cutoff);
    let ln = family.operator(n, cutoff);
    let rhs = if c != 0 {
        Some(family.operator(m + n, cutoff).scale(&Scalar::from_int(c)))
    } else {
        None
    };
    for mono in window_monomials(&window.vars, window.degree) {
        let p = HPoly::monomial(0, mono, Scalar::one());
        let mut lhs = lm.apply(&ln.apply(&p)).sub(&ln.apply(&lm.apply(&p)));
        if let Some(r) = &rhs {
            let rp = r.apply(&p);
            let shifted = HPoly {
                terms: rp.terms.into_iter().map(|((g, mm), c)| ((g + 2, mm), c)).collect(),
            };
            lhs = lhs.sub(&shifted);
        }
        if !lhs.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_multisets_dedup() {
        let s = sub_multisets(&[1, 1, 3], 2);
        assert_eq!(s, vec![vec![], vec![1], vec![3], vec![1, 1], vec![1, 3]]);
    }

    #[test]
    fn apply_derivative() {
        // (x1 ∂3) x3^2 = 2 x1 x3
        let op = WeylOperator::term(0, vec![1], vec![3], Scalar::one());
        let p = HPoly::monomial(0, vec![3, 3], Scalar::one());
        assert_eq!(op.apply(&p), HPoly::monomial(0, vec![1, 3], Scalar::from_int(2)));
    }

    #[test]
    fn kw_low_operator() {
        // L_{-1} = ħ∂_1 − ħ²(½ x1 x1 + Σ_p p x_{p+2} ∂_p)
        let l = VirasoroFamily::KontsevichWitten.operator(-1, 7);
        let mut want = hbar_j(1);
        want.add_term(2, vec![1, 1], vec![], Scalar::ratio(-1, 2));
        for p in [1usize, 3, 5] {
            want.add_term(2, vec![p + 2], vec![p], Scalar::from_int(-((p + 2) as i64)));
        }
        assert_eq!(l, want);
    }

    #[test]
    fn window_size() {
        assert_eq!(window_monomials(&[1, 3], 2).len(), 6);
    }
}
