use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact_algebra::{Scalar, TruncatedSeries, Var};

/// ξ-basis index: (ramification point id, k ≥ 1).
pub type Idx = (usize, usize);

/// Symmetric coefficient tensor of `ω_{g,n} = Σ F[i_1..i_n] ξ_{i_1}(z_1)⋯ξ_{i_n}(z_n)`.
///
/// Keys are stored sorted; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelatorTensor {
    pub g: u32,
    pub n: usize,
    entries: BTreeMap<Vec<Idx>, Scalar>,
}

impl CorrelatorTensor {
    pub fn new(g: u32, n: usize) -> Self {
        CorrelatorTensor {
            g,
            n,
            entries: BTreeMap::new(),
        }
    }

    /// Build from canonical (sorted) keys; zero values are dropped.
    pub fn from_canonical(g: u32, n: usize, entries: impl IntoIterator<Item = (Vec<Idx>, Scalar)>) -> Self {
        let mut t = CorrelatorTensor::new(g, n);
        for (mut k, v) in entries {
            assert_eq!(k.len(), n, "key length");
            k.sort_unstable();
            if !v.is_zero() {
                t.entries.insert(k, v);
            }
        }
        t
    }

    pub fn chi(&self) -> i64 {
        2 * self.g as i64 - 2 + self.n as i64
    }

    /// Coefficient of an index tuple in any order.
    pub fn get(&self, key: &[Idx]) -> Scalar {
        let mut k = key.to_vec();
        k.sort_unstable();
        self.entries.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, key: &[Idx], v: Scalar) {
        let mut k = key.to_vec();
        k.sort_unstable();
        if v.is_zero() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, v);
        }
    }

    /// Canonical entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Idx>, &Scalar)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every ordered key (each distinct permutation of each stored key).
    pub fn ordered_entries(&self) -> Vec<(Vec<Idx>, Scalar)> {
        let mut out = Vec::new();
        for (k, v) in &self.entries {
            for p in distinct_permutations(k) {
                out.push((p, v.clone()));
            }
        }
        out
    }

    pub fn max_k(&self) -> usize {
        self.entries
            .keys()
            .flat_map(|k| k.iter().map(|i| i.1))
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> TensorJson {
        TensorJson {
            engine: None,
            g: self.g,
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| EntryJson {
                    idx: k.clone(),
                    value: v.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &TensorJson) -> Self {
        Self::from_canonical(j.g, j.n, j.entries.iter().map(|e| (e.idx.clone(), e.value.clone())))
    }
}

/// Serialized tensor: `{"g", "n", "entries": [{"idx": [[a, k], ...], "value": "p/q"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TensorJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub engine: Option<String>,
    pub g: u32,
    pub n: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EntryJson {
    pub idx: Vec<Idx>,
    pub value: Scalar,
}

/// Distinct permutations of a sorted slice, in lexicographic order.
pub fn distinct_permutations<T: Ord + Clone>(sorted: &[T]) -> Vec<Vec<T>> {
    let mut cur = sorted.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    loop {
        // next lexicographic permutation
        let n = cur.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// A tensor whose entries are series in one local variable; a missing key is
/// zero modulo the shared order.
#[derive(Clone, Debug)]
pub struct TensorSeries {
    pub var: Var,
    pub order: i64,
    pub entries: BTreeMap<Vec<Idx>, TruncatedSeries>,
}

impl TensorSeries {
    pub fn zero(var: Var, order: i64) -> Self {
        TensorSeries {
            var,
            order,
            entries: BTreeMap::new(),
        }
    }

    /// Scalar-keyed tensor holding a single series under the empty key.
    pub fn scalar(s: TruncatedSeries) -> Self {
        let mut t = TensorSeries::zero(s.var(), s.order());
        t.order = s.order();
        if !s.is_zero() {
            t.entries.insert(Vec::new(), s);
        }
        t
    }

    /// Smallest valuation among entries, or the order if all vanish.
    pub fn min_valuation(&self) -> i64 {
        self.entries
            .values()
            .filter_map(TruncatedSeries::valuation)
            .min()
            .unwrap_or(self.order)
            .min(self.order)
    }

    fn insert_add(&mut self, key: Vec<Idx>, s: TruncatedSeries) {
        match self.entries.get_mut(&key) {
            Some(e) => {
                *e = e.add(&s).expect("same variable");
            }
            None => {
                self.entries.insert(key, s);
            }
        }
    }

    /// Truncate all entries to the shared order and drop zeros.
    pub fn normalize(&mut self) {
        let order = self.order;
        let mut out = BTreeMap::new();
        for (k, v) in std::mem::take(&mut self.entries) {
            let v = v.truncate(order);
            if !v.is_zero() {
                out.insert(k, v);
            }
        }
        self.entries = out;
    }

    pub fn add(&self, other: &TensorSeries) -> TensorSeries {
        let mut out = self.clone();
        out.order = self.order.min(other.order);
        for (k, v) in &other.entries {
            out.insert_add(k.clone(), v.clone());
        }
        out.normalize();
        out
    }

    pub fn scale(&self, c: &Scalar) -> TensorSeries {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = v.scale(c);
        }
        out.normalize();
        out
    }

    /// Entrywise `s(ζ) ↦ −s(−ζ)`: pullback of a one-form density by ζ ↦ −ζ.
    pub fn pullback_reflection(&self) -> TensorSeries {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = v.reflect().neg();
        }
        out
    }

    /// Product where `self`'s key positions are `pos_a` and `other`'s are
    /// `pos_b` inside an output key of length `slots`.
    pub fn product(&self, other: &TensorSeries, pos_a: &[usize], pos_b: &[usize], slots: usize) -> TensorSeries {
        let order = (self.order + other.min_valuation()).min(other.order + self.min_valuation());
        let mut out = TensorSeries::zero(self.var, order);
        for (ka, va) in &self.entries {
            for (kb, vb) in &other.entries {
                let mut key = vec![(0, 0); slots];
                for (i, p) in pos_a.iter().enumerate() {
                    key[*p] = ka[i];
                }
                for (i, p) in pos_b.iter().enumerate() {
                    key[*p] = kb[i];
                }
                out.insert_add(key, va.mul(vb).expect("same variable"));
            }
        }
        out.normalize();
        out
    }

    /// Entrywise division by a series.
    pub fn div_series(&self, d: &TruncatedSeries) -> Result<TensorSeries, crate::exact_algebra::AlgebraError> {
        let dinv = d.inverse()?;
        let order = (self.order + dinv.low()).min(dinv.order() + self.min_valuation());
        let mut out = TensorSeries::zero(self.var, order);
        for (k, v) in &self.entries {
            out.entries.insert(k.clone(), v.mul(&dinv)?);
        }
        out.normalize();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_distinct() {
        let p = distinct_permutations(&[1, 1, 2]);
        assert_eq!(p, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
        assert_eq!(distinct_permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(distinct_permutations::<i32>(&[]), vec![Vec::<i32>::new()]);
    }

    #[test]
    fn symmetric_lookup() {
        let mut t = CorrelatorTensor::new(0, 4);
        t.set(&[(0, 3), (0, 1), (0, 1), (0, 1)], Scalar::from_int(3));
        assert_eq!(t.get(&[(0, 1), (0, 1), (0, 3), (0, 1)]), Scalar::from_int(3));
        assert_eq!(t.ordered_entries().len(), 4);
    }

    #[test]
    fn json_round_trip() {
        let t = CorrelatorTensor::from_canonical(1, 1, [(vec![(0, 3)], Scalar::ratio(1, 8))]);
        let s = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(s, r#"{"g":1,"n":1,"entries":[{"idx":[[0,3]],"value":"1/8"}]}"#);
        let back: TensorJson = serde_json::from_str(&s).unwrap();
        assert_eq!(CorrelatorTensor::from_json(&back), t);
    }
}
