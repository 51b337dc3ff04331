use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::weyl::{HPoly, Multi};
use super::AiryError;
use crate::exact_algebra::Scalar;
use crate::par;
use crate::tr_engine::{distinct_permutations, level_pairs, CorrelatorStore, CorrelatorTensor, TensorJson};

/// Finite tensors `A, B, C, D` over a finite index set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseTensors {
    pub indices: Vec<usize>,
    /// `A_{abc}`, symmetric; stored under sorted keys.
    pub a: BTreeMap<(usize, usize, usize), Scalar>,
    /// `B_{abc}`.
    pub b: BTreeMap<(usize, usize, usize), Scalar>,
    /// `C_{abc}`, symmetric in `b, c`; stored with `b ≤ c`.
    pub c: BTreeMap<(usize, usize, usize), Scalar>,
    pub d: BTreeMap<usize, Scalar>,
}

/// Tensors of a quadratic Airy structure
/// `H_a = ħ∂_a − ħ²(½A_{abc}x_bx_c + B_{abc}x_b∂_c + ½C_{abc}∂_b∂_c + D_a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AiryTensors {
    /// From the Kontsevich–Witten operators, `H_{2k+3} = L_k`.
    KontsevichWitten,
    /// From the BGW operators, `H_{2k+1} = L_k`.
    Bgw,
    Sparse(SparseTensors),
}

pub fn kw_tensors() -> AiryTensors {
    AiryTensors::KontsevichWitten
}

pub fn bgw_tensors() -> AiryTensors {
    AiryTensors::Bgw
}

/// Sparse triple for JSON output.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TripleJson {
    pub idx: Vec<usize>,
    pub value: Scalar,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AiryTensorsJson {
    pub name: String,
    pub max_index: usize,
    pub a: Vec<TripleJson>,
    pub b: Vec<TripleJson>,
    pub c: Vec<TripleJson>,
    pub d: Vec<TripleJson>,
}

impl AiryTensors {
    /// Shift `s` of the homogeneous families: nonzero `F_{g,n}[k]` has `Σk = s(2g−2+n)`.
    fn shift(&self) -> Option<usize> {
        match self {
            AiryTensors::KontsevichWitten => Some(3),
            AiryTensors::Bgw => Some(1),
            AiryTensors::Sparse(_) => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AiryTensors::KontsevichWitten => "kw",
            AiryTensors::Bgw => "bgw",
            AiryTensors::Sparse(_) => "sparse",
        }
    }

    fn in_index_set(&self, i: usize) -> bool {
        match self {
            AiryTensors::KontsevichWitten | AiryTensors::Bgw => i % 2 == 1,
            AiryTensors::Sparse(t) => t.indices.contains(&i),
        }
    }

    pub fn a(&self, a: usize, b: usize, c: usize) -> Scalar {
        match self {
            AiryTensors::KontsevichWitten => {
                if (a, b, c) == (1, 1, 1) {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
            AiryTensors::Bgw => Scalar::zero(),
            AiryTensors::Sparse(t) => {
                let mut k = [a, b, c];
                k.sort_unstable();
                t.a.get(&(k[0], k[1], k[2])).cloned().unwrap_or_else(Scalar::zero)
            }
        }
    }

    pub fn d(&self, a: usize) -> Scalar {
        match self {
            AiryTensors::KontsevichWitten if a == 3 => Scalar::ratio(1, 8),
            AiryTensors::Bgw if a == 1 => Scalar::ratio(1, 8),
            AiryTensors::Sparse(t) => t.d.get(&a).cloned().unwrap_or_else(Scalar::zero),
            _ => Scalar::zero(),
        }
    }

    /// Nonzero `B_{a b c}` for fixed `a, b`, as `(c, value)`.
    pub fn b_support(&self, a: usize, b: usize) -> Vec<(usize, Scalar)> {
        match self {
            AiryTensors::KontsevichWitten | AiryTensors::Bgw => {
                let s = self.shift().unwrap_or(0);
                if a.is_multiple_of(2) || b.is_multiple_of(2) || a + b <= s {
                    return Vec::new();
                }
                vec![(a + b - s, Scalar::from_int(b as i64))]
            }
            AiryTensors::Sparse(t) => t
                .b
                .range((a, b, 0)..=(a, b, usize::MAX))
                .map(|(k, v)| (k.2, v.clone()))
                .collect(),
        }
    }

    /// Nonzero `C_{a b c}` for fixed `a`, as `(b, c, value)` over all ordered pairs.
    pub fn c_support(&self, a: usize) -> Vec<(usize, usize, Scalar)> {
        match self {
            AiryTensors::KontsevichWitten | AiryTensors::Bgw => {
                let s = self.shift().unwrap_or(0);
                if a.is_multiple_of(2) || a < s + 2 {
                    return Vec::new();
                }
                let total = a - s;
                (1..total)
                    .filter(|b| b % 2 == 1)
                    .map(|b| (b, total - b, Scalar::one()))
                    .collect()
            }
            AiryTensors::Sparse(t) => {
                let mut out = Vec::new();
                for (k, v) in t.c.range((a, 0, 0)..=(a, usize::MAX, usize::MAX)) {
                    out.push((k.1, k.2, v.clone()));
                    if k.1 != k.2 {
                        out.push((k.2, k.1, v.clone()));
                    }
                }
                out
            }
        }
    }

    /// Canonical index tuples that can carry nonzero `F_{g,n}`.
    fn candidate_keys(&self, g: u32, n: usize) -> Vec<Multi> {
        let chi = 2 * g as usize + n - 2;
        match self.shift() {
            Some(s) => {
                let mut out = Vec::new();
                partitions_into(s * chi, n, 1, &mut Vec::new(), &|i| self.in_index_set(i), &mut out);
                out
            }
            None => {
                let AiryTensors::Sparse(t) = self else { unreachable!() };
                let mut idx = t.indices.clone();
                idx.sort_unstable();
                idx.dedup();
                super::weyl::window_monomials(&idx, n)
                    .into_iter()
                    .filter(|m| m.len() == n)
                    .collect()
            }
        }
    }

    pub fn to_json(&self, max_index: usize) -> AiryTensorsJson {
        let idx: Vec<usize> = (1..=max_index).filter(|&i| self.in_index_set(i)).collect();
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut c = Vec::new();
        let mut d = Vec::new();
        for &i in &idx {
            let di = self.d(i);
            if !di.is_zero() {
                d.push(TripleJson { idx: vec![i], value: di });
            }
            for &j in &idx {
                for (k, v) in self.b_support(i, j) {
                    if k <= max_index {
                        b.push(TripleJson { idx: vec![i, j, k], value: v });
                    }
                }
                for &k in &idx {
                    if i <= j && j <= k {
                        let v = self.a(i, j, k);
                        if !v.is_zero() {
                            a.push(TripleJson { idx: vec![i, j, k], value: v });
                        }
                    }
                }
            }
            for (j, k, v) in self.c_support(i) {
                if j <= k && k <= max_index {
                    c.push(TripleJson { idx: vec![i, j, k], value: v });
                }
            }
        }
        AiryTensorsJson {
            name: self.name().into(),
            max_index,
            a,
            b,
            c,
            d,
        }
    }
}

/// Non-decreasing tuples of `n` allowed parts summing to `total`.
fn partitions_into(
    total: usize,
    n: usize,
    min: usize,
    cur: &mut Vec<usize>,
    allowed: &dyn Fn(usize) -> bool,
    out: &mut Vec<Multi>,
) {
    if n == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let mut p = min;
    while p * n <= total {
        if allowed(p) {
            cur.push(p);
            partitions_into(total - p, n - 1, p, cur, allowed, out);
            cur.pop();
        }
        p += 1;
    }
}

/// Coefficients `F_{g,n}[k_1, …, k_n]` of
/// `Z = exp(Σ ħ^{2g−2+n}/n! Σ F_{g,n}[k] x_{k_1}⋯x_{k_n})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionFunction {
    engine: String,
    chi_max: i64,
    tensors: BTreeMap<(u32, usize), CorrelatorTensor>,
}

impl PartitionFunction {
    pub fn new(engine: &str, chi_max: i64) -> Self {
        PartitionFunction {
            engine: engine.into(),
            chi_max,
            tensors: BTreeMap::new(),
        }
    }

    /// Partition function of a one-point TR store, with `x_k ↔ ξ_{−k}`.
    pub fn from_store(store: &CorrelatorStore) -> Result<Self, AiryError> {
        if store.num_points() != 1 {
            return Err(AiryError::MultiPoint(store.num_points()));
        }
        let mut z = PartitionFunction::new("tr", store.chi_max());
        for t in store.tensors() {
            z.insert(t.clone());
        }
        Ok(z)
    }

    pub fn insert(&mut self, t: CorrelatorTensor) {
        self.tensors.insert((t.g, t.n), t);
    }

    pub fn engine(&self) -> &str {
        &self.engine
    }

    pub fn chi_max(&self) -> i64 {
        self.chi_max
    }

    pub fn tensor(&self, g: u32, n: usize) -> Option<&CorrelatorTensor> {
        self.tensors.get(&(g, n))
    }

    pub fn tensors(&self) -> impl Iterator<Item = &CorrelatorTensor> {
        self.tensors.values()
    }

    /// `F_{g,n}[k]` with plain indices.
    pub fn get(&self, g: u32, ks: &[usize]) -> Scalar {
        let key: Vec<(usize, usize)> = ks.iter().map(|&k| (0, k)).collect();
        self.tensor(g, ks.len())
            .map(|t| t.get(&key))
            .unwrap_or_else(Scalar::zero)
    }

    pub fn max_index(&self) -> usize {
        self.tensors.values().map(CorrelatorTensor::max_k).max().unwrap_or(0)
    }

    /// `log Z` as an `ħ`-graded polynomial.
    pub fn log_polynomial(&self) -> HPoly {
        let mut s = HPoly::zero();
        for t in self.tensors.values() {
            let chi = t.chi() as i32;
            for (key, v) in t.iter() {
                let ks: Multi = key.iter().map(|i| i.1).collect();
                // (1/n!) × number of orderings = 1/∏ mult!
                let mut denom = 1i64;
                let mut run = 1i64;
                for w in ks.windows(2) {
                    if w[0] == w[1] {
                        run += 1;
                        denom *= run;
                    } else {
                        run = 1;
                    }
                }
                s = s.add(&HPoly::monomial(chi, ks, v * &Scalar::ratio(1, denom)));
            }
        }
        s
    }

    pub fn to_json(&self) -> Vec<TensorJson> {
        self.tensors
            .values()
            .map(|t| {
                let mut j = t.to_json();
                j.engine = Some(self.engine.clone());
                j
            })
            .collect()
    }
}

struct Recursion<'a> {
    t: &'a AiryTensors,
    z: &'a PartitionFunction,
}

impl Recursion<'_> {
    fn lower(&self, g: u32, ks: &[usize]) -> Scalar {
        if 2 * g as i64 - 2 + ks.len() as i64 <= 0 {
            return Scalar::zero();
        }
        self.z.get(g, ks)
    }

    /// Right side of the recursion with `k1` in the distinguished slot.
    fn value(&self, g: u32, k1: usize, rest: &[usize]) -> Scalar {
        let n = rest.len() + 1;
        if (g, n) == (0, 3) {
            return self.t.a(k1, rest[0], rest[1]);
        }
        if (g, n) == (1, 1) {
            return self.t.d(k1);
        }
        let mut acc = Scalar::zero();
        for m in 0..rest.len() {
            for (a, b) in self.t.b_support(k1, rest[m]) {
                let mut args = Vec::with_capacity(n - 1);
                args.push(a);
                args.extend(rest.iter().enumerate().filter(|(i, _)| *i != m).map(|(_, v)| *v));
                acc += &(&b * &self.lower(g, &args));
            }
        }
        let half = Scalar::ratio(1, 2);
        for (a, b, c) in self.t.c_support(k1) {
            let mut inner = Scalar::zero();
            if g >= 1 {
                let mut args = vec![a, b];
                args.extend_from_slice(rest);
                inner += &self.lower(g - 1, &args);
            }
            let slots = rest.len();
            for g1 in 0..=g {
                for mask in 0u32..(1 << slots) {
                    let mut left = vec![a];
                    let mut right = vec![b];
                    for (p, v) in rest.iter().enumerate() {
                        if mask & (1 << p) != 0 {
                            left.push(*v);
                        } else {
                            right.push(*v);
                        }
                    }
                    let l = self.lower(g1, &left);
                    if l.is_zero() {
                        continue;
                    }
                    inner += &(&l * &self.lower(g - g1, &right));
                }
            }
            acc += &(&(&c * &half) * &inner);
        }
        acc
    }
}

/// Solve `H_a Z = 0` level by level in `2g − 2 + n`, checking that the
/// recursion output is symmetric before storing it.
pub fn airy_recursion(t: &AiryTensors, chi_max: i64) -> Result<PartitionFunction, AiryError> {
    let mut z = PartitionFunction::new("airy", chi_max);
    for chi in 1..=chi_max {
        let mut level = Vec::new();
        for (g, n) in level_pairs(chi) {
            let keys = t.candidate_keys(g, n);
            let rec = Recursion { t, z: &z };
            let vals = par::map(&keys, |key| -> Result<Option<(Multi, Scalar)>, AiryError> {
                let mut first: Option<Scalar> = None;
                let mut seen = Vec::new();
                for p in distinct_permutations(key) {
                    if seen.contains(&p[0]) {
                        continue;
                    }
                    seen.push(p[0]);
                    let v = rec.value(g, p[0], &p[1..]);
                    match &first {
                        None => first = Some(v),
                        Some(f) if *f != v => {
                            return Err(AiryError::Asymmetric {
                                g,
                                n,
                                key: key.clone(),
                                first: f.to_string(),
                                other: v.to_string(),
                            })
                        }
                        _ => {}
                    }
                }
                Ok(first.filter(|v| !v.is_zero()).map(|v| (key.clone(), v)))
            });
            let mut entries = Vec::new();
            for v in vals {
                if let Some((k, s)) = v? {
                    entries.push((k.into_iter().map(|i| (0, i)).collect::<Vec<_>>(), s));
                }
            }
            level.push(CorrelatorTensor::from_canonical(g, n, entries));
        }
        for tensor in level {
            z.insert(tensor);
        }
    }
    Ok(z)
}
