//! Finite approximations of cohesive sets.

mod approx;
mod family;
mod maximal;
mod reserved;
mod totalize;

pub use approx::{CohesiveApprox, Provenance};
pub use family::{
    default_cohesive, family_cohesive, family_contract_cuts, DEFAULT_FAMILY_SIZE, DEFAULT_HORIZON,
    DEFAULT_STAGE, MIN_RETAIN,
};
pub use maximal::{build_maximal, interpreter_family, MaximalSetState};
pub use reserved::{reserved_computable_subset, ReservedSet};
pub use totalize::totalize;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohesiveError {
    #[error("no element of [0, {horizon}] survives; grow the horizon")]
    EmptyWindow { horizon: u64 },
    #[error("window of {len} elements has no parity tail; grow the horizon")]
    Undetermined { len: usize },
    #[error("malformed cohesive approximation: {0}")]
    Malformed(String),
}
