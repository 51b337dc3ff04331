//! Quadratic Airy structures: the recursion solving `H_a Z = 0`, and a
//! truncated Weyl algebra for checking Virasoro-type constraints.

mod tensors;
mod weyl;

pub use tensors::{
    airy_recursion, bgw_tensors, kw_tensors, AiryTensors, AiryTensorsJson, PartitionFunction, SparseTensors, TripleJson,
};
pub use weyl::{
    commutator_check_with, hbar_j, j_pair, structure_constant, virasoro_commutator_check, w2, weyl_apply, window_monomials, HPoly, Multi, VirasoroFamily, WeylOperator,
    Window,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AiryError {
    #[error("recursion output for F_{g},{n} at {key:?} is not symmetric: {first} vs {other}")]
    Asymmetric {
        g: u32,
        n: usize,
        key: Vec<usize>,
        first: String,
        other: String,
    },
    #[error("residuals through grade {order} need the partition function beyond chi_max = {chi_max}")]
    OrderBeyondStore { order: i32, chi_max: i64 },
    #[error("operator is not of Airy leading form: {0}")]
    LeadingForm(String),
    #[error("L_{0} is not in the family")]
    NotInFamily(i64),
    #[error("a partition function needs a single ramification point, found {0}")]
    MultiPoint(usize),
}
