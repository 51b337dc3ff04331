//! Exit codes: 0 success, 2 invariant failure, 3 configuration error,
//! 4 truncation-indeterminate.

use std::fmt;

use toprec_core::airy_engine::AiryError;
use toprec_core::enumerative::EnumError;
use toprec_core::exact_algebra::AlgebraError;
use toprec_core::quantum_curve::QuantumError;
use toprec_core::spectral_curve::CurveError;
use toprec_core::tr_engine::{FailureKind, TrError};

pub const INVARIANT: u8 = 2;
pub const CONFIG: u8 = 3;
pub const TRUNCATION: u8 = 4;

#[derive(Debug)]
struct ConfigError(String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

fn tr_code(e: &TrError) -> u8 {
    match e.kind() {
        FailureKind::Invariant => INVARIANT,
        FailureKind::Config => CONFIG,
        FailureKind::Truncation => TRUNCATION,
    }
}

fn curve_code(e: &CurveError) -> u8 {
    match e {
        CurveError::OrderTooSmall(..) | CurveError::Algebra(AlgebraError::TruncationTooShort) => TRUNCATION,
        _ => CONFIG,
    }
}

pub fn code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<TrError>() {
            return tr_code(e);
        }
        if let Some(e) = cause.downcast_ref::<CurveError>() {
            return curve_code(e);
        }
        if let Some(e) = cause.downcast_ref::<EnumError>() {
            return match e {
                EnumError::Tr(t) => tr_code(t),
                EnumError::Curve(c) => curve_code(c),
                EnumError::Algebra(AlgebraError::TruncationTooShort) => TRUNCATION,
                _ => CONFIG,
            };
        }
        if let Some(e) = cause.downcast_ref::<QuantumError>() {
            return match e {
                QuantumError::Tr(t) => tr_code(t),
                QuantumError::Curve(c) => curve_code(c),
                _ => CONFIG,
            };
        }
        if let Some(e) = cause.downcast_ref::<AiryError>() {
            return match e {
                AiryError::OrderBeyondStore { .. } | AiryError::MultiPoint(_) => CONFIG,
                _ => INVARIANT,
            };
        }
        if let Some(AlgebraError::TruncationTooShort) = cause.downcast_ref::<AlgebraError>() {
            return TRUNCATION;
        }
    }
    CONFIG
}
