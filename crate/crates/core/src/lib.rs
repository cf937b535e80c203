//! Cohesive powers of computable linear orders at desk scale.
//!
//! The crate is layered bottom-up:
//!
//! * [`clocked`]: clocked partial functions, a register-machine interpreter,
//!   pairing and c.e. set enumerators;
//! * [`cohesive`]: finite approximations of cohesive sets;
//! * [`order`]: computable linear orders, standard presentations, combinators
//!   and finite probes;
//! * [`staged`]: stage-by-stage constructions of computable copies of ω,
//!   shuffle encodings and pull-backs;
//! * [`power`]: the cohesive-power engine, verdicts and witness constructions.

pub mod clocked;
pub mod cohesive;
pub mod order;
pub mod power;
pub mod staged;

pub use clocked::{CeSet, ClockedFunction, Eval, Numbering};
pub use cohesive::CohesiveApprox;
pub use order::{ComputableOrder, Order};
pub use power::{PowerContext, PowerElement, Relation, Verdict};
pub use staged::StagedOrder;
