//! WKB wave function `ψ = exp Σ_m ħ^m S_m` built from a correlator store,
//! and order-by-order verification of quantum-curve annihilation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_algebra::{AlgebraError, Polynomial, RationalFunction, Scalar, Var};
use crate::spectral_curve::{CurveError, GlobalFn};
use crate::tr_engine::{distinct_permutations, CorrelatorStore, KernelSign, TrError};

/// Variable of expansions in the chart `w = 1/z` at infinity.
pub const W: Var = Var("w");

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error(transparent)]
    Tr(#[from] TrError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("grade {0} needs correlators through chi {0}, store has {1}")]
    GradeBeyondStore(i64, i64),
    #[error("wave function needs x = c z^2 with a pole at infinity: {0}")]
    UnsupportedCurve(String),
    #[error("omega01 has no rational primitive at infinity: {0}")]
    NoPrimitive(String),
    #[error("grade {0} exceeds the wave function's grade {1}")]
    GradeBeyondWave(i64, i64),
}

/// One ħ-grade of `log ψ`: `S_m(z) = log_coeff · log z + rational(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveGrade {
    pub m: i64,
    pub log_coeff: Scalar,
    pub rational: RationalFunction,
}

impl WaveGrade {
    /// `dS_m/dz`.
    pub fn derivative(&self) -> RationalFunction {
        let log_part = RationalFunction::pole(self.log_coeff.clone(), &Scalar::zero(), 1);
        self.rational.derivative().add(&log_part)
    }
}

/// WKB data of the wave function based at `z = ∞`, grades `−1..=max_grade`.
#[derive(Clone, Debug)]
pub struct WaveFunction {
    pub curve: String,
    /// `x(z)`, needed to convert `d/dz` into `d/dx`.
    pub x: RationalFunction,
    pub grades: Vec<WaveGrade>,
}

impl WaveFunction {
    pub fn max_grade(&self) -> i64 {
        self.grades.last().map(|g| g.m).unwrap_or(-2)
    }

    pub fn grade(&self, m: i64) -> Option<&WaveGrade> {
        self.grades.iter().find(|g| g.m == m)
    }

    pub fn to_json(&self, order: i64) -> Result<WaveJson, QuantumError> {
        let grades = self
            .grades
            .iter()
            .map(|g| {
                Ok(GradeJson {
                    grade: g.m,
                    log_z: g.log_coeff.clone(),
                    laurent_w: laurent_terms(&g.rational, order)?,
                })
            })
            .collect::<Result<_, QuantumError>>()?;
        Ok(WaveJson {
            curve: self.curve.clone(),
            base_point: "infinity".into(),
            grades,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WaveJson {
    pub curve: String,
    pub base_point: String,
    pub grades: Vec<GradeJson>,
}

/// `S_m = log_z · log z + Σ c_e w^e` with `w = 1/z`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GradeJson {
    pub grade: i64,
    pub log_z: Scalar,
    pub laurent_w: Vec<(i64, Scalar)>,
}

/// Nonzero Laurent coefficients in `w = 1/z` below `w^order`.
pub fn laurent_terms(f: &RationalFunction, order: i64) -> Result<Vec<(i64, Scalar)>, QuantumError> {
    let s = f.expand_at_infinity(W, order)?;
    Ok(s.terms().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e, c.clone())).collect())
}

fn quadratic_x(store: &CorrelatorStore) -> Result<RationalFunction, QuantumError> {
    let curve = store.curve();
    let unsupported = || QuantumError::UnsupportedCurve(curve.name.clone());
    let x = curve.x.as_rational().ok_or_else(unsupported)?;
    let num = x.num().coeffs();
    let quadratic = x.den().degree() == Some(0) && num.len() == 3 && num[0].is_zero() && num[1].is_zero();
    if !quadratic {
        return Err(unsupported());
    }
    Ok(x.clone())
}

/// Antiderivative of a polynomial density without constant term.
fn polynomial_primitive(f: &GlobalFn, name: &str) -> Result<RationalFunction, QuantumError> {
    let r = f.as_rational().ok_or_else(|| QuantumError::NoPrimitive(name.into()))?;
    if r.den().degree() != Some(0) {
        return Err(QuantumError::NoPrimitive(name.into()));
    }
    let p = r.num().scale(&r.den().coeff(0).inv()?);
    let mut cs = vec![Scalar::zero()];
    for (i, c) in p.coeffs().iter().enumerate() {
        cs.push(c * &Scalar::ratio(1, i as i64 + 1));
    }
    Ok(RationalFunction::from_poly(Polynomial::new(cs)))
}

/// `ψ(z)` through ħ-grade `max_grade`, based at the pole `z = ∞` of `x = c z²`.
///
/// Stable terms are `1/n! Σ F[k] ∏ ∫_∞^z ξ_{k_i}`; the regularized (0,2)
/// term is `−½ log z` because `ω02 − dx dx/(x − x)² = dz1 dz2/(z1 + z2)²`.
/// `S_{−1} = ∓∫ω01` follows the store's kernel sign (standard: minus), the
/// orientation under which the stable terms solve the same Riccati equation.
pub fn wavefunction(store: &CorrelatorStore, max_grade: i64) -> Result<WaveFunction, QuantumError> {
    let x = quadratic_x(store)?;
    if max_grade > store.chi_max() {
        return Err(QuantumError::GradeBeyondStore(max_grade, store.chi_max()));
    }
    let curve = store.curve();
    let mut grades = vec![
        WaveGrade {
            m: -1,
            log_coeff: Scalar::zero(),
            rational: match store.options().kernel_sign {
                KernelSign::Standard => polynomial_primitive(&curve.omega01, &curve.name)?.scale(&Scalar::from_int(-1)),
                KernelSign::Reversed => polynomial_primitive(&curve.omega01, &curve.name)?,
            },
        },
        WaveGrade {
            m: 0,
            log_coeff: Scalar::ratio(-1, 2),
            rational: RationalFunction::zero(),
        },
    ];
    grades.truncate((max_grade + 2).max(0) as usize);
    let mut primitives: std::collections::BTreeMap<(usize, usize), RationalFunction> = Default::default();
    for m in 1..=max_grade {
        let mut acc = RationalFunction::zero();
        for g in 0..=((m + 2) / 2) as u32 {
            let n = m + 2 - 2 * g as i64;
            if n < 1 {
                continue;
            }
            let n = n as usize;
            let t = store.tensor(g, n).ok_or(TrError::Missing(g, n))?;
            let inv_fact = Scalar::from_rational(num_rational::BigRational::new(1.into(), crate::spectral_curve::factorial(n as u64)));
            for (key, f) in t.iter() {
                let mut term = RationalFunction::from_poly(Polynomial::constant(Scalar::one()));
                for idx in key {
                    if !primitives.contains_key(idx) {
                        let xi = store.xi(idx.0, idx.1).ok_or(TrError::Missing(g, n))?;
                        primitives.insert(*idx, xi.primitive_from_infinity());
                    }
                    term = term.mul(&primitives[idx]);
                }
                let perms = Scalar::from_int(distinct_permutations(key).len() as i64);
                acc = acc.add(&term.scale(&(&(f * &perms) * &inv_fact)));
            }
        }
        grades.push(WaveGrade {
            m,
            log_coeff: Scalar::zero(),
            rational: acc,
        });
    }
    Ok(WaveFunction {
        curve: curve.name.clone(),
        x,
        grades,
    })
}

/// `Σ_{j,r} ħ^r a_{j,r}(x) (ħ d/dx)^j`, normal ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumOperator {
    /// `(j, r, a_{j,r})`.
    pub terms: Vec<(usize, i64, Polynomial)>,
}

impl QuantumOperator {
    pub fn zero() -> Self {
        QuantumOperator { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        QuantumOperator::zero().with_term(0, 0, Polynomial::constant(Scalar::one()))
    }

    /// `(ħ d/dx)² − 2x`, the quantization of `y² = 2x`.
    pub fn airy() -> Self {
        QuantumOperator::zero()
            .with_term(2, 0, Polynomial::constant(Scalar::one()))
            .with_term(0, 0, Polynomial::monomial(Scalar::from_int(-2), 1))
    }

    pub fn with_term(mut self, j: usize, r: i64, a: Polynomial) -> Self {
        self.terms.push((j, r, a));
        self
    }

    pub fn order(&self) -> usize {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }

    /// `P(x, y)` from the `ħ⁰` terms: coefficients of `y^j`.
    pub fn classical_symbol(&self) -> Vec<(usize, Polynomial)> {
        self.terms.iter().filter(|t| t.1 == 0).map(|t| (t.0, t.2.clone())).collect()
    }
}

/// Residual of `(P̂ψ)/ψ` at one ħ-grade, as a function of z.
#[derive(Clone, Debug, PartialEq)]
pub struct GradeResidual {
    pub grade: i64,
    pub residual: RationalFunction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumReport {
    pub residuals: Vec<GradeResidual>,
}

impl QuantumReport {
    pub fn pass(&self) -> bool {
        self.residuals.iter().all(|r| r.residual.is_zero())
    }

    pub fn first_nonzero(&self) -> Option<&GradeResidual> {
        self.residuals.iter().find(|r| !r.residual.is_zero())
    }
}

/// ħ-graded rational functions of z, `coeffs[i]` at grade `i`.
type Graded = Vec<RationalFunction>;

fn eval_in_x(p: &Polynomial, x: &RationalFunction) -> RationalFunction {
    let mut acc = RationalFunction::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&RationalFunction::from_poly(Polynomial::constant(c.clone())));
    }
    acc
}

/// `(P̂ψ)/ψ` through grade `max_grade`; exact because every grade it uses
/// is present in `psi`.
pub fn quantum_check(op: &QuantumOperator, psi: &WaveFunction, max_grade: i64) -> Result<QuantumReport, QuantumError> {
    if max_grade > psi.max_grade() {
        return Err(QuantumError::GradeBeyondWave(max_grade, psi.max_grade()));
    }
    let top = (max_grade + 1) as usize;
    let dx = psi.x.derivative();
    let d_dx = |f: &RationalFunction| f.derivative().div(&dx);
    // u = ψ⁻¹ ħ dψ/dx, u_i = dS_{i−1}/dx
    let mut u: Graded = Vec::with_capacity(top);
    for i in 0..top {
        let g = psi.grade(i as i64 - 1).ok_or(QuantumError::GradeBeyondWave(i as i64 - 1, psi.max_grade()))?;
        u.push(g.derivative().div(&dx)?);
    }
    // R_{j+1} = u R_j + ħ d/dx R_j
    let mut r: Vec<Graded> = vec![{
        let mut one = vec![RationalFunction::zero(); top];
        one[0] = RationalFunction::from_poly(Polynomial::constant(Scalar::one()));
        one
    }];
    for _ in 0..op.order() {
        let prev = r.last().unwrap();
        let mut next = vec![RationalFunction::zero(); top];
        for (a, ua) in u.iter().enumerate() {
            for (b, rb) in prev.iter().enumerate().take(top - a) {
                if !ua.is_zero() && !rb.is_zero() {
                    next[a + b] = next[a + b].add(&ua.mul(rb));
                }
            }
        }
        for b in 0..top - 1 {
            if !prev[b].is_zero() {
                next[b + 1] = next[b + 1].add(&d_dx(&prev[b])?);
            }
        }
        r.push(next);
    }
    let mut total = vec![RationalFunction::zero(); top];
    for (j, shift, a) in &op.terms {
        let ax = eval_in_x(a, &psi.x);
        for (i, rj) in r[*j].iter().enumerate() {
            let target = i as i64 + shift;
            if (0..top as i64).contains(&target) && !rj.is_zero() {
                total[target as usize] = total[target as usize].add(&ax.mul(rj));
            }
        }
    }
    Ok(QuantumReport {
        residuals: total
            .into_iter()
            .enumerate()
            .map(|(i, residual)| GradeResidual { grade: i as i64, residual })
            .collect(),
    })
}
