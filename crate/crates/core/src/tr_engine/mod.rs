//! Eynard–Orantin recursion on genus-zero curves, computed on the
//! coefficient tensors of `ω_{g,n}` in the ξ basis.

mod dilaton;
mod engine;
mod tensor;

pub use dilaton::{dilaton_check, free_energy, DilatonOutcome};
pub use engine::{check_raw_symmetry, level_pairs, pole_bound, CorrelatorStore, KernelSign, LocalData, TrOptions};
pub use tensor::{distinct_permutations, CorrelatorTensor, EntryJson, Idx, TensorJson, TensorSeries};

use thiserror::Error;

use crate::exact_algebra::AlgebraError;
use crate::spectral_curve::CurveError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("ramification point {0} is not admissible: {1}")]
    NotAdmissible(String, String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("({0}, {1}) is not stable")]
    Unstable(u32, usize),
    #[error("truncation too short for omega_{g},{n} at point {point}")]
    Truncation { g: u32, n: usize, point: usize },
    #[error("omega_{g},{n} is not symmetric at {key}: expected {expected}, found {found}")]
    Asymmetric {
        g: u32,
        n: usize,
        key: String,
        expected: String,
        found: String,
    },
    #[error("omega_{g},{n} has a nonzero residue at point {point}")]
    ResidueNonzero { g: u32, n: usize, point: usize },
    #[error("omega_{g},{n} has a pole of order {} beyond the bound", k + 1)]
    PoleBound { g: u32, n: usize, k: usize },
    #[error("omega_{0},{1} has not been computed")]
    Missing(u32, usize),
    #[error("omega_{g},{n} uses xi index {k} beyond k_max = {k_max}")]
    IndexOutOfRange { g: u32, n: usize, k: usize, k_max: usize },
    #[error("dilaton equation fails for omega_{g},{n} at {key}: expected {expected}, found {found}")]
    Dilaton {
        g: u32,
        n: usize,
        key: String,
        expected: String,
        found: String,
    },
}

/// Coarse classification used for process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Invariant,
    Config,
    Truncation,
}

impl TrError {
    pub fn kind(&self) -> FailureKind {
        match self {
            TrError::Truncation { .. } | TrError::IndexOutOfRange { .. } => FailureKind::Truncation,
            TrError::Curve(CurveError::OrderTooSmall(..)) | TrError::Algebra(AlgebraError::TruncationTooShort) => {
                FailureKind::Truncation
            }
            TrError::Curve(_) | TrError::NotAdmissible(..) | TrError::Config(_) | TrError::Unstable(..) => {
                FailureKind::Config
            }
            _ => FailureKind::Invariant,
        }
    }
}
