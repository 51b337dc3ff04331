use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::tensor::{distinct_permutations, CorrelatorTensor, Idx, TensorSeries};
use super::TrError;
use crate::exact_algebra::{Scalar, TruncatedSeries};
use crate::par;
use crate::spectral_curve::{
    is_admissible, ramification_profile, xi_from_chart, xi_local_expansion, LocalChart, RamificationProfile, SpectralCurve, XiForm, ZETA,
};

/// Overall sign of the recursion kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KernelSign {
    /// Denominator `ω01(σ(z)) − ω01(z)`: reproduces the standard tables
    /// (Airy `F11[3] = 1/8`), the dilaton equation and the Virasoro side.
    #[default]
    Standard,
    /// Denominator `ω01(z) − ω01(σ(z))`; every `ω_{g,n}` picks up `(−1)^{2g−2+n}`.
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrOptions {
    pub kernel_sign: KernelSign,
    /// Extra truncation margin on top of the pole-order estimate.
    pub margin: i64,
}

impl Default for TrOptions {
    fn default() -> Self {
        TrOptions {
            kernel_sign: KernelSign::Standard,
            margin: 4,
        }
    }
}

/// Expansions at one ramification point, shared by every (g, n).
#[derive(Clone, Debug)]
pub struct LocalData {
    pub point: usize,
    pub chart: LocalChart,
    pub profile: RamificationProfile,
    /// Density of ω01 in ζ.
    pub omega01: TruncatedSeries,
    /// Density of the kernel denominator in ζ.
    pub denominator: TruncatedSeries,
    /// `atoms[b][k-1]`: density in ζ of `ξ^{(b)}_{−k}`.
    pub atoms: Vec<Vec<TruncatedSeries>>,
    /// The same pulled back by ζ ↦ −ζ.
    pub atoms_sigma: Vec<Vec<TruncatedSeries>>,
    /// `ω02(w, z2) = Σ_k k ζ^{k−1} dζ · ξ^{(a)}_{−k}(z2)`.
    pub w02: TensorSeries,
    /// Density in ζ of `ω02(w, σ(w))`.
    pub w02_diag: TruncatedSeries,
}

/// All stable correlators with `2g − 2 + n ≤ chi_max`, built level by level.
#[derive(Clone, Debug)]
pub struct CorrelatorStore {
    curve: Arc<SpectralCurve>,
    chi_max: i64,
    options: TrOptions,
    k_max: usize,
    atom_order: i64,
    xi: Vec<Vec<XiForm>>,
    local: Vec<LocalData>,
    tensors: BTreeMap<(u32, usize), CorrelatorTensor>,
    /// `(a, g, n)` → expansion of `ω_{g,n}(w, ·)` with `w` in the chart at `a`.
    expansions: BTreeMap<(usize, u32, usize), TensorSeries>,
}

/// Stable pairs on one level of `2g − 2 + n`.
pub fn level_pairs(chi: i64) -> Vec<(u32, usize)> {
    (0..=((chi + 1) / 2) as u32)
        .filter_map(|g| {
            let n = chi + 2 - 2 * g as i64;
            (n >= 1).then_some((g, n as usize))
        })
        .collect()
}

/// Pole-order bound `6g − 4 + 2n`.
pub fn pole_bound(g: u32, n: usize) -> usize {
    6 * g as usize + 2 * n - 4
}

impl CorrelatorStore {
    /// Run the recursion up to `chi_max`, enlarging the truncation margin
    /// automatically if a level comes out indeterminate.
    pub fn build(curve: SpectralCurve, chi_max: i64) -> Result<Self, TrError> {
        Self::build_with(curve, chi_max, TrOptions::default())
    }

    pub fn build_with(curve: SpectralCurve, chi_max: i64, options: TrOptions) -> Result<Self, TrError> {
        let curve = Arc::new(curve);
        let mut opts = options;
        for _ in 0..3 {
            match Self::try_build(curve.clone(), chi_max, opts) {
                Err(TrError::Truncation { .. }) => opts.margin *= 2,
                other => return other,
            }
        }
        Self::try_build(curve, chi_max, opts)
    }

    fn try_build(curve: Arc<SpectralCurve>, chi_max: i64, options: TrOptions) -> Result<Self, TrError> {
        if chi_max < 1 {
            return Err(TrError::Config(format!("chi_max must be at least 1, got {chi_max}")));
        }
        let npts = curve.ramification_points.len();
        let mut profiles = Vec::with_capacity(npts);
        for a in &curve.ramification_points {
            let p = ramification_profile(&curve, a, 12)?;
            let adm = is_admissible(&p);
            if !adm.admissible {
                return Err(TrError::NotAdmissible(a.to_string(), adm.reason.unwrap_or_default()));
            }
            profiles.push(p);
        }
        let k_max = (3 * chi_max + 3) as usize;
        let v_d = profiles.iter().map(|p| p.s - 1).max().unwrap_or(0).max(0);
        let atom_order = (k_max as i64 + 1 + v_d + options.margin).max(6 * chi_max + 4);
        let chart_order = atom_order + k_max as i64 + 4;

        let charts: Vec<LocalChart> = (0..npts)
            .map(|b| curve.chart(b, chart_order))
            .collect::<Result<_, _>>()?;
        let xi: Vec<Vec<XiForm>> = charts
            .iter()
            .map(|c| (1..=k_max).map(|k| xi_from_chart(c, k)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;

        let local_results = par::map(&(0..npts).collect::<Vec<_>>(), |&a| {
            local_data(&curve, a, &charts[a], &profiles[a], &xi, atom_order, options.kernel_sign)
        });
        let local = local_results.into_iter().collect::<Result<Vec<_>, _>>()?;

        let mut store = CorrelatorStore {
            curve,
            chi_max,
            options,
            k_max,
            atom_order,
            xi,
            local,
            tensors: BTreeMap::new(),
            expansions: BTreeMap::new(),
        };
        for a in 0..npts {
            let w02 = store.local[a].w02.clone();
            store.expansions.insert((a, 0, 2), w02);
        }
        for chi in 1..=chi_max {
            store.seal_level(chi)?;
        }
        Ok(store)
    }

    fn seal_level(&mut self, chi: i64) -> Result<(), TrError> {
        let pairs = level_pairs(chi);
        let results = par::map(&pairs, |&(g, n)| self.compute_correlator(g, n));
        let mut new = Vec::new();
        for ((g, n), r) in pairs.iter().zip(results) {
            new.push(((*g, *n), r?));
        }
        for (key, t) in new {
            self.tensors.insert(key, t);
        }
        let jobs: Vec<(usize, u32, usize)> = (0..self.local.len())
            .flat_map(|a| pairs.iter().map(move |&(g, n)| (a, g, n)))
            .collect();
        let exps = par::map(&jobs, |&(a, g, n)| self.expand_one(a, &self.tensors[&(g, n)]));
        for (job, e) in jobs.into_iter().zip(exps) {
            self.expansions.insert(job, e?);
        }
        Ok(())
    }

    /// Expansion of `ω_{g,n}(w, z_2, …)` in the chart at `a`, keyed by the rest.
    fn expand_one(&self, a: usize, t: &CorrelatorTensor) -> Result<TensorSeries, TrError> {
        let loc = &self.local[a];
        let mut out = TensorSeries::zero(ZETA, self.atom_order);
        for (key, v) in t.ordered_entries() {
            let (b, k) = key[0];
            let atom = self.atom(&loc.atoms, b, k, t)?;
            let rest = key[1..].to_vec();
            let s = atom.scale(&v);
            match out.entries.get_mut(&rest) {
                Some(e) => *e = e.add(&s)?,
                None => {
                    out.entries.insert(rest, s);
                }
            }
        }
        out.normalize();
        Ok(out)
    }

    fn atom<'a>(
        &self,
        atoms: &'a [Vec<TruncatedSeries>],
        b: usize,
        k: usize,
        t: &CorrelatorTensor,
    ) -> Result<&'a TruncatedSeries, TrError> {
        atoms[b].get(k - 1).ok_or(TrError::IndexOutOfRange {
            g: t.g,
            n: t.n,
            k,
            k_max: self.k_max,
        })
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.curve
    }

    pub fn chi_max(&self) -> i64 {
        self.chi_max
    }

    pub fn options(&self) -> TrOptions {
        self.options
    }

    pub fn local(&self, a: usize) -> &LocalData {
        &self.local[a]
    }

    pub fn num_points(&self) -> usize {
        self.local.len()
    }

    /// `ξ^{(b)}_{−k}` as a global rational one-form.
    pub fn xi(&self, b: usize, k: usize) -> Option<&XiForm> {
        self.xi.get(b)?.get(k.checked_sub(1)?)
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn atom_order(&self) -> i64 {
        self.atom_order
    }

    pub fn tensor(&self, g: u32, n: usize) -> Option<&CorrelatorTensor> {
        self.tensors.get(&(g, n))
    }

    pub fn tensors(&self) -> impl Iterator<Item = &CorrelatorTensor> {
        self.tensors.values()
    }

    /// Local expansion of `ω_{g,n}(w, ·)` at point `a` (including `(0, 2)`).
    pub fn expansion(&self, a: usize, g: u32, n: usize) -> Option<&TensorSeries> {
        self.expansions.get(&(a, g, n))
    }

    /// Replace a stored tensor (for negative controls) and refresh its expansions.
    pub fn replace_tensor(&mut self, t: CorrelatorTensor) -> Result<(), TrError> {
        let key = (t.g, t.n);
        for a in 0..self.local.len() {
            let e = self.expand_one(a, &t)?;
            self.expansions.insert((a, key.0, key.1), e);
        }
        self.tensors.insert(key, t);
        Ok(())
    }

    /// `ω_{g',n'}(w, σ(w), rest)` at point `a`, keyed by the rest.
    fn diagonal_expansion(&self, a: usize, g: u32, n: usize) -> Result<TensorSeries, TrError> {
        let loc = &self.local[a];
        if (g, n) == (0, 2) {
            return Ok(TensorSeries::scalar(loc.w02_diag.clone()));
        }
        let t = self.tensors.get(&(g, n)).ok_or(TrError::Missing(g, n))?;
        let mut cache: HashMap<(Idx, Idx), TruncatedSeries> = HashMap::new();
        let mut out = TensorSeries::zero(ZETA, i64::MAX / 8);
        let mut order = i64::MAX / 8;
        for (key, v) in t.ordered_entries() {
            let (i1, i2) = (key[0], key[1]);
            let prod = match cache.get(&(i1, i2)) {
                Some(p) => p.clone(),
                None => {
                    let p = self
                        .atom(&loc.atoms, i1.0, i1.1, t)?
                        .mul(self.atom(&loc.atoms_sigma, i2.0, i2.1, t)?)?;
                    cache.insert((i1, i2), p.clone());
                    p
                }
            };
            order = order.min(prod.order());
            let s = prod.scale(&v);
            let rest = key[2..].to_vec();
            match out.entries.get_mut(&rest) {
                Some(e) => *e = e.add(&s)?,
                None => {
                    out.entries.insert(rest, s);
                }
            }
        }
        // products of atoms share one order: the atom order plus the lowest pole
        let min_atom_val = -(t.max_k() as i64) - 1;
        out.order = order.min(self.atom_order + min_atom_val.min(0));
        out.normalize();
        Ok(out)
    }

    /// `ω̃^{(a)}_{g,n}(w; z_2, …, z_n)` as a tensor of ζ-series.
    pub fn tilde_omega(&self, g: u32, n: usize, a: usize) -> Result<TensorSeries, TrError> {
        Ok(self.kernel_numerator(g, n, a)?.div_series(&self.local[a].denominator)?)
    }

    /// `ω_{g−1,n+1}(w, σw, …) + Σ' ω_{g1}(w, I) ω_{g2}(σw, J)` at point `a`,
    /// the sum excluding `ω_{0,1}` factors.
    pub fn kernel_numerator(&self, g: u32, n: usize, a: usize) -> Result<TensorSeries, TrError> {
        let slots = n - 1;
        let mut num = TensorSeries::zero(ZETA, i64::MAX / 8);
        if g >= 1 {
            num = num.add(&self.diagonal_expansion(a, g - 1, n + 1)?);
        }
        for g1 in 0..=g {
            let g2 = g - g1;
            for mask in 0u32..(1 << slots) {
                let pos_i: Vec<usize> = (0..slots).filter(|p| mask & (1 << p) != 0).collect();
                let pos_j: Vec<usize> = (0..slots).filter(|p| mask & (1 << p) == 0).collect();
                let (n1, n2) = (pos_i.len() + 1, pos_j.len() + 1);
                if (g1, n1) == (0, 1) || (g2, n2) == (0, 1) {
                    continue;
                }
                let e1 = self.expansions.get(&(a, g1, n1)).ok_or(TrError::Missing(g1, n1))?;
                let e2 = self
                    .expansions
                    .get(&(a, g2, n2))
                    .ok_or(TrError::Missing(g2, n2))?
                    .pullback_reflection();
                num = num.add(&e1.product(&e2, &pos_i, &pos_j, slots));
            }
        }
        Ok(num)
    }

    /// One application of the recursion, with raw-symmetry and pole-order checks.
    pub fn compute_correlator(&self, g: u32, n: usize) -> Result<CorrelatorTensor, TrError> {
        if 2 * g as i64 - 2 + n as i64 <= 0 || n == 0 {
            return Err(TrError::Unstable(g, n));
        }
        let mut raw: BTreeMap<Vec<Idx>, Scalar> = BTreeMap::new();
        for a in 0..self.local.len() {
            let wt = self.tilde_omega(g, n, a)?;
            if wt.order < 0 {
                return Err(TrError::Truncation { g, n, point: a });
            }
            for (rest, s) in &wt.entries {
                for (e, c) in s.terms() {
                    if e >= 0 {
                        break;
                    }
                    if e == -1 {
                        return Err(TrError::ResidueNonzero { g, n, point: a });
                    }
                    let k = (-e - 1) as usize;
                    if k + 1 > pole_bound(g, n) {
                        return Err(TrError::PoleBound { g, n, k });
                    }
                    let mut key = Vec::with_capacity(n);
                    key.push((a, k));
                    key.extend_from_slice(rest);
                    raw.insert(key, c.clone());
                }
            }
        }
        check_raw_symmetry(g, n, &raw)?;
        Ok(CorrelatorTensor::from_canonical(g, n, raw))
    }
}

/// Every permutation of every raw key must carry the same value.
pub fn check_raw_symmetry(g: u32, n: usize, raw: &BTreeMap<Vec<Idx>, Scalar>) -> Result<(), TrError> {
    for (key, v) in raw {
        let mut sorted = key.clone();
        sorted.sort_unstable();
        if &sorted != key {
            continue;
        }
        for p in distinct_permutations(&sorted) {
            let w = raw.get(&p);
            if w != Some(v) {
                return Err(TrError::Asymmetric {
                    g,
                    n,
                    key: format!("{p:?}"),
                    expected: v.to_string(),
                    found: w.map(|s| s.to_string()).unwrap_or_else(|| "0".into()),
                });
            }
        }
    }
    // a nonzero permutation whose sorted form is absent is also asymmetric
    for (key, v) in raw {
        let mut sorted = key.clone();
        sorted.sort_unstable();
        if !raw.contains_key(&sorted) {
            return Err(TrError::Asymmetric {
                g,
                n,
                key: format!("{sorted:?}"),
                expected: v.to_string(),
                found: "0".into(),
            });
        }
    }
    Ok(())
}

fn local_data(
    curve: &SpectralCurve,
    a: usize,
    chart: &LocalChart,
    profile: &RamificationProfile,
    xi: &[Vec<XiForm>],
    atom_order: i64,
    sign: KernelSign,
) -> Result<LocalData, TrError> {
    let w = curve.omega01_at(&chart.center, chart.order)?;
    let omega01 = chart.pullback_density(&w)?;
    let sym = omega01.add(&omega01.reflect())?;
    let denominator = match sign {
        KernelSign::Standard => sym.neg(),
        KernelSign::Reversed => sym,
    };
    let mut atoms = Vec::with_capacity(xi.len());
    let mut atoms_sigma = Vec::with_capacity(xi.len());
    for forms in xi {
        let row: Vec<TruncatedSeries> = forms
            .iter()
            .map(|f| xi_local_expansion(f, chart, atom_order))
            .collect::<Result<_, _>>()?;
        atoms_sigma.push(row.iter().map(|s| s.reflect().neg()).collect());
        atoms.push(row);
    }
    let mut w02 = TensorSeries::zero(ZETA, atom_order);
    for k in 1..=(atom_order.max(1) as usize) {
        let s = TruncatedSeries::monomial(ZETA, Scalar::from_int(k as i64), k as i64 - 1, atom_order);
        if !s.is_zero() {
            w02.entries.insert(vec![(a, k)], s);
        }
    }
    // ω02(w, σw) = −t'(ζ) t'(−ζ) / (t(ζ) − t(−ζ))² dζ
    let t = &chart.t_of_zeta;
    let tp = t.derivative();
    let num = tp.mul(&tp.reflect())?.neg();
    let diff = t.sub(&t.reflect())?;
    let w02_diag = num.div(&diff.pow(2)?)?.truncate(atom_order);
    Ok(LocalData {
        point: a,
        chart: chart.clone(),
        profile: profile.clone(),
        omega01,
        denominator,
        atoms,
        atoms_sigma,
        w02,
        w02_diag,
    })
}
