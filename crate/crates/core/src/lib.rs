//! Exact topological recursion on genus-zero spectral curves with simple
//! ramification, an independent Airy-structure engine, consistency checks,
//! and extraction of enumerative invariants.

pub mod airy_engine;
pub mod enumerative;
pub mod exact_algebra;
pub mod loop_checks;
pub mod par;
pub mod quantum_curve;
pub mod spectral_curve;
pub mod tr_engine;
