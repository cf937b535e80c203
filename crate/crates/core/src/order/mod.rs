//! Computable linear orders as clocked comparators.
//!
//! A presentation decides membership of naturals in its domain and compares
//! two members, both under a step budget; `None` means the answer is still
//! pending. Decisions never change once made. For every presentation in this
//! crate, two members decided at a budget are also comparable at that budget.

mod combinators;
mod probes;
mod standard;
mod tag;

use std::sync::Arc;

use crate::clocked::ClockedFunction;

pub use combinators::{finite, product, reverse, sum, FiniteOrder, Product, Reverse, Sum};
pub use probes::{
    check_axioms, decided_members, dump_prefix, interval_census, predecessor_census,
    successor_probe, AxiomViolation, PrefixDump, Probe, CONFIRM_FACTOR,
};
pub use standard::{
    integer_code, integer_value, integers, naturals, naturals_reversed, rational_code,
    rational_value, rationals, standard_presentations, Integers, Naturals, Rationals,
};
pub use tag::OrderTypeTag;

/// Arithmetic a presentation supports for midpoint witnesses.
#[derive(Clone, Debug)]
pub enum Arithmetic {
    /// The natural numbers in their usual order.
    Naturals,
    /// Evens ordered naturally with `2k+1` placed right after `2f(k)`; the
    /// function is `k ↦ f(k)`.
    EvenSkeleton(ClockedFunction),
}

/// How a combinator order is assembled from its parts.
#[derive(Clone)]
pub enum Components {
    Sum([Order; 2]),
    /// `[L₀, L₁]` with `L₁` the outer coordinate.
    Product([Order; 2]),
    Reverse(Order),
}

pub trait ComputableOrder: Send + Sync {
    fn name(&self) -> String;

    fn tag(&self) -> OrderTypeTag {
        OrderTypeTag::Unknown
    }

    /// Domain membership; `None` while pending.
    fn contains(&self, x: u64, budget: u64) -> Option<bool>;

    /// `a ≺ b` for members; `None` while pending.
    fn less(&self, a: u64, b: u64, budget: u64) -> Option<bool>;

    /// Closed-form `|(a, b) ∩ [0, horizon]|`, when cheaper than a scan.
    fn census_between(&self, _a: u64, _b: u64, _horizon: u64, _budget: u64) -> Option<u64> {
        None
    }

    /// Every decided member strictly between `a` and `b`, when the
    /// presentation can list them directly (e.g. a finite stage order).
    fn interval_members(&self, _a: u64, _b: u64, _budget: u64) -> Option<Vec<u64>> {
        None
    }

    /// Every decided member strictly below `z`, when the presentation can
    /// list them directly.
    fn predecessors(&self, _z: u64, _budget: u64) -> Option<Vec<u64>> {
        None
    }

    fn arithmetic(&self) -> Option<Arithmetic> {
        None
    }

    fn components(&self) -> Option<Components> {
        None
    }
}

pub type Order = Arc<dyn ComputableOrder>;

/// A coloring of an order's domain.
pub type Coloring = Arc<dyn Fn(u64) -> Option<u64> + Send + Sync>;
