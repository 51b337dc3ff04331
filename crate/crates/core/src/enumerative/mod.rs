//! Enumerative readouts of correlator tensors: ψ, Θψ and κ1ψ intersection
//! numbers, and simple Hurwitz numbers with a symmetric-group oracle.

mod hurwitz;
mod intersections;

pub use hurwitz::{hurwitz_from_tr, hurwitz_oracle, hurwitz_profiles, transitive_factorizations, HurwitzRecord};
pub use intersections::{double_factorial_odd, intersection_table, kappa_psi_intersections, psi_intersections, theta_intersections, ClassTag, IntersectionRecord};

use thiserror::Error;

use crate::exact_algebra::AlgebraError;
use crate::spectral_curve::CurveError;
use crate::tr_engine::TrError;

#[derive(Debug, Error)]
pub enum EnumError {
    #[error(transparent)]
    Tr(#[from] TrError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("({0},{1}) lies beyond the computed range")]
    OutOfRange(u32, usize),
    #[error("expected a single ramification point, found {0}")]
    MultiPoint(usize),
    #[error("intersection number {0} is not a rational number")]
    NotRational(String),
    #[error("invalid Hurwitz profile: {0}")]
    Profile(String),
}
