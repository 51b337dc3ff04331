use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::EnumError;
use crate::exact_algebra::{Scalar, TruncatedSeries, Var};
use crate::par;
use crate::spectral_curve::{factorial, xi_form, T};
use crate::tr_engine::{distinct_permutations, CorrelatorStore, KernelSign};

/// Largest degree the oracle enumerates.
pub const ORACLE_MAX_DEGREE: usize = 6;

const X: Var = Var("x");

/// `H_{g,n}(k_1,…,k_n)` for an ordered profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HurwitzRecord {
    pub g: u32,
    pub profile: Vec<usize>,
    pub value: Scalar,
}

impl HurwitzRecord {
    pub fn degree(&self) -> usize {
        self.profile.iter().sum()
    }

    /// Number of simple branch points, `2g − 2 + n + d`.
    pub fn branch_points(&self) -> usize {
        branch_points(self.g, &self.profile)
    }
}

fn branch_points(g: u32, profile: &[usize]) -> usize {
    2 * g as usize + profile.len() + profile.iter().sum::<usize>() - 2
}

fn check_profile(profile: &[usize]) -> Result<usize, EnumError> {
    if profile.is_empty() || profile.contains(&0) {
        return Err(EnumError::Profile(format!("{profile:?} must be nonempty with positive parts")));
    }
    Ok(profile.iter().sum())
}

/// Every ordered profile with degree at most `d_max` and `2g − 2 + n` in
/// `chi_min..=chi_max`, sorted by (χ, g, profile).
pub fn hurwitz_profiles(d_max: usize, chi_min: i64, chi_max: i64) -> Vec<(u32, Vec<usize>)> {
    let mut out = Vec::new();
    for chi in chi_min..=chi_max {
        for g in 0..=((chi + 2) / 2) as u32 {
            let n = chi + 2 - 2 * g as i64;
            if n < 1 {
                continue;
            }
            let mut stack = vec![Vec::new()];
            while let Some(p) = stack.pop() {
                let used: usize = p.iter().sum();
                if p.len() == n as usize {
                    out.push((g, p));
                    continue;
                }
                for k in 1..=d_max.saturating_sub(used + (n as usize - p.len() - 1)) {
                    let mut q = p.clone();
                    q.push(k);
                    stack.push(q);
                }
            }
        }
    }
    out.sort_by(|a, b| {
        let ca = 2 * a.0 as i64 - 2 + a.1.len() as i64;
        let cb = 2 * b.0 as i64 - 2 + b.1.len() as i64;
        (ca, a.0, &a.1).cmp(&(cb, b.0, &b.1))
    });
    out
}

/// The inverse series `z(x)` about `z = 0`, known mod `x^order`.
fn z_of_x(store: &CorrelatorStore, order: i64) -> Result<TruncatedSeries, EnumError> {
    let e = store.curve().x.expand(&Scalar::zero(), order + 1)?;
    if !e.exact || e.series.valuation() != Some(1) {
        return Err(EnumError::Profile("x must vanish simply at z = 0".into()));
    }
    Ok(e.series.reversion()?.truncate(order + 1).retag(X))
}

/// Pull back a density in z to a density in x: `f(z(x)) z'(x)`.
fn pull_back(f: &TruncatedSeries, zx: &TruncatedSeries, order: i64) -> Result<TruncatedSeries, EnumError> {
    let composed = f.retag(X).compose(zx)?;
    Ok(composed.mul(&zx.derivative())?.truncate(order))
}

fn coefficient(s: &TruncatedSeries, e: i64) -> Result<Scalar, EnumError> {
    s.coeff(e).ok_or(EnumError::Algebra(crate::exact_algebra::AlgebraError::TruncationTooShort))
}

/// Hurwitz numbers read off the expansion of `ω_{g,n}` at `x = 0`, where
/// the coefficient of `x_1^{k_1−1}⋯x_n^{k_n−1}` is `∏k_i · H_{g,n}(k)`.
///
/// The counts are positive in the reversed kernel convention; a standard-sign
/// store differs by `(−1)^{2g−2+n}` on stable correlators, which is undone here.
pub fn hurwitz_from_tr(store: &CorrelatorStore, g: u32, profile: &[usize]) -> Result<HurwitzRecord, EnumError> {
    let d = check_profile(profile)?;
    let n = profile.len();
    if store.num_points() != 1 {
        return Err(EnumError::MultiPoint(store.num_points()));
    }
    let order = d as i64;
    let zx = z_of_x(store, order)?;
    let kprod: BigInt = profile.iter().map(|&k| BigInt::from(k)).product();
    let raw = if g == 0 && n == 1 {
        let w = store.curve().omega01.expand(&Scalar::zero(), order + 1)?;
        coefficient(&pull_back(&w.series, &zx, order)?, profile[0] as i64 - 1)?
    } else if g == 0 && n == 2 {
        return Err(EnumError::Profile("(0,2) is not produced by the recursion".into()));
    } else {
        let t = store.tensor(g, n).ok_or(EnumError::OutOfRange(g, n))?;
        let point = store.curve().point(0).clone();
        let mut cache: HashMap<usize, TruncatedSeries> = HashMap::new();
        let mut acc = Scalar::zero();
        for (key, f) in t.iter() {
            for perm in distinct_permutations(key) {
                let mut term = f.clone();
                for (slot, &(_, j)) in perm.iter().enumerate() {
                    if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(j) {
                        let form = match store.xi(0, j) {
                            Some(x) => x.form.clone(),
                            None => xi_form(store.curve(), &point, j)?.form,
                        };
                        let s = form.expand_at(&Scalar::zero(), T, order + 1)?;
                        e.insert(pull_back(&s, &zx, order)?);
                    }
                    term *= &coefficient(&cache[&j], profile[slot] as i64 - 1)?;
                    if term.is_zero() {
                        break;
                    }
                }
                acc += &term;
            }
        }
        match store.options().kernel_sign {
            KernelSign::Standard if (2 * g as usize + n) % 2 == 1 => -acc,
            _ => acc,
        }
    };
    Ok(HurwitzRecord {
        g,
        profile: profile.to_vec(),
        value: raw.scale(&BigRational::new(1.into(), kprod)),
    })
}

type Perm = Vec<u8>;

fn cycle_lengths(p: &[u8]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

fn all_perms(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Perm = (0..d as u8).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Orbit labels of `σ`'s cycles, relabeled by first occurrence.
fn canonical(blocks: &mut [u8]) {
    let mut map = [u8::MAX; ORACLE_MAX_DEGREE];
    let mut next = 0;
    for b in blocks.iter_mut() {
        if map[*b as usize] == u8::MAX {
            map[*b as usize] = next;
            next += 1;
        }
        *b = map[*b as usize];
    }
}

fn orbits(p: &[u8]) -> Vec<u8> {
    let mut blocks = vec![u8::MAX; p.len()];
    for s in 0..p.len() {
        if blocks[s] != u8::MAX {
            continue;
        }
        let mut x = s;
        while blocks[x] == u8::MAX {
            blocks[x] = s as u8;
            x = p[x] as usize;
        }
    }
    canonical(&mut blocks);
    blocks
}

type State = (Perm, Vec<u8>);

fn step(states: &HashMap<State, u128>, transpositions: &[(u8, u8)]) -> HashMap<State, u128> {
    let mut next: HashMap<State, u128> = HashMap::with_capacity(states.len());
    for ((p, blocks), &c) in states {
        for &(i, j) in transpositions {
            *next.entry(apply(p, blocks, i, j)).or_insert(0) += c;
        }
    }
    next
}

/// `(τ∘p, orbits joined by τ)` for `τ = (i j)`.
fn apply(p: &[u8], blocks: &[u8], i: u8, j: u8) -> State {
    let q: Perm = p
        .iter()
        .map(|&v| if v == i { j } else if v == j { i } else { v })
        .collect();
    let (bi, bj) = (blocks[i as usize], blocks[j as usize]);
    let mut nb = blocks.to_vec();
    if bi != bj {
        for b in nb.iter_mut() {
            if *b == bj {
                *b = bi;
            }
        }
        canonical(&mut nb);
    }
    (q, nb)
}

/// Transitive factorizations `τ_b⋯τ_1 σ = id` with `σ` of the given cycle
/// type (parts numbered), by exhaustive enumeration over `S_d`.
pub fn transitive_factorizations(g: u32, profile: &[usize]) -> Result<BigInt, EnumError> {
    let d = check_profile(profile)?;
    if d > ORACLE_MAX_DEGREE {
        return Err(EnumError::Profile(format!("degree {d} exceeds the oracle limit {ORACLE_MAX_DEGREE}")));
    }
    let b = branch_points(g, profile);
    let mut sorted = profile.to_vec();
    sorted.sort_unstable();
    // numbered parts: each σ admits ∏ mult! labelings of its cycles
    let mut labelings = 1u128;
    let mut run = 1u128;
    for w in 1..sorted.len() {
        if sorted[w] == sorted[w - 1] {
            run += 1;
            labelings *= run;
        } else {
            run = 1;
        }
    }
    let mut start: HashMap<State, u128> = HashMap::new();
    for p in all_perms(d) {
        if cycle_lengths(&p) == sorted {
            let o = orbits(&p);
            start.insert((p, o), labelings);
        }
    }
    let transpositions: Vec<(u8, u8)> = (0..d as u8)
        .flat_map(|i| (i + 1..d as u8).map(move |j| (i, j)))
        .collect();
    let identity: Perm = (0..d as u8).collect();
    let finish = |states: &HashMap<State, u128>| -> u128 {
        states
            .iter()
            .filter(|((p, blocks), _)| *p == identity && blocks.iter().all(|&x| x == 0))
            .map(|(_, &c)| c)
            .sum()
    };
    if b == 0 {
        return Ok(BigInt::from(finish(&start)));
    }
    // outermost transposition choice runs in parallel
    let counts = par::map(&transpositions, |&(i, j)| {
        let mut states: HashMap<State, u128> = HashMap::new();
        for ((p, blocks), &c) in &start {
            *states.entry(apply(p, blocks, i, j)).or_insert(0) += c;
        }
        for _ in 1..b {
            states = step(&states, &transpositions);
        }
        finish(&states)
    });
    Ok(counts.into_iter().map(BigInt::from).sum())
}

/// Symmetric-group oracle: transitive factorizations weighted by
/// `1/(d! b!)`, the normalization of the x-expansion of `ω_{g,n}`.
pub fn hurwitz_oracle(g: u32, profile: &[usize]) -> Result<HurwitzRecord, EnumError> {
    let count = transitive_factorizations(g, profile)?;
    let d = profile.iter().sum::<usize>() as u64;
    let b = branch_points(g, profile) as u64;
    let value = BigRational::new(count, factorial(d) * factorial(b));
    Ok(HurwitzRecord {
        g,
        profile: profile.to_vec(),
        value: Scalar::from_rational(value),
    })
}
