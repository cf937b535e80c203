//! Cohesive powers evaluated on a finite window.
//!
//! An element is a clocked representative evaluated on every window element
//! of a [`CohesiveApprox`]. A relation holds "for almost every n in C" when
//! it holds on every window element from some cut onward, with the cut in
//! the first half of the window.

mod audit;
mod blocks;
mod classify;
mod color;
mod fiber;
mod transport;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clocked::ClockedFunction;
use crate::cohesive::CohesiveApprox;
use crate::order::{Order, CONFIRM_FACTOR};

pub use audit::{initial_segment_law, los_shadow_audit, Formula, LosAudit};
pub use blocks::{
    far_apart_test, flank_witnesses, immediate_successor_test, midpoint_witness,
    predecessor_witness, successor_witness, successor_witness_search, Flanks, Ladder,
};
pub use classify::{classify_standard, induced_color, ColorClass, ColorKind, StandardClass};
pub use color::{color_density_witness, ColorTarget};
pub use fiber::{projection_fiber, ProjectionFiber};
pub use transport::{
    audit_transport, integers_from_sum_code, product_transport, reverse_transport,
    sum_code_from_integer, sum_transport, transport_iso, ProductImage, SumImage, TransportAudit,
};

/// At most this many dyadic segments are used by ramp tests.
pub const MAX_SEGMENTS: usize = 4;
/// Ramp tests need at least this many nonempty segments.
pub const MIN_SEGMENTS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PowerError {
    #[error("elements live over different bases or cohesive windows")]
    IncompatibleContexts,
    #[error("{label} is pending at window element {element}, past the cut cap")]
    NotTotalOnWindow { label: String, element: u64 },
    #[error("{0} is not a member of the base")]
    NotAMember(u64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("base {0} has no arithmetic for this witness")]
    UnsupportedBase(String),
    #[error("no witness at window elements {failing:?}")]
    NotFound { failing: Vec<u64> },
    #[error("ladder exhausted below {limit}")]
    LadderExhausted { limit: u64 },
    #[error("sum tag is not eventually constant on the window")]
    UndecidedSumTag,
}

/// Base order, window and evaluation limits shared by power elements.
pub struct PowerContext {
    base: Order,
    cohesive: Arc<CohesiveApprox>,
    budget: u64,
    horizon: u64,
}

impl fmt::Debug for PowerContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerContext")
            .field("base", &self.base.name())
            .field("window", &self.cohesive.len())
            .field("budget", &self.budget)
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl PowerContext {
    /// Census and search horizons default to the window horizon.
    pub fn new(base: Order, cohesive: Arc<CohesiveApprox>, budget: u64) -> Arc<Self> {
        let horizon = cohesive.horizon();
        Arc::new(PowerContext {
            base,
            cohesive,
            budget,
            horizon,
        })
    }

    pub fn with_horizon(
        base: Order,
        cohesive: Arc<CohesiveApprox>,
        budget: u64,
        horizon: u64,
    ) -> Arc<Self> {
        Arc::new(PowerContext {
            base,
            cohesive,
            budget,
            horizon,
        })
    }

    /// Same window and limits over another base.
    pub fn rebased(&self, base: Order) -> Arc<Self> {
        Arc::new(PowerContext {
            base,
            cohesive: Arc::clone(&self.cohesive),
            budget: self.budget,
            horizon: self.horizon,
        })
    }

    pub fn base(&self) -> &Order {
        &self.base
    }

    pub fn cohesive(&self) -> &Arc<CohesiveApprox> {
        &self.cohesive
    }

    pub fn window(&self) -> &[u64] {
        self.cohesive.elements()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Horizon for censuses and searches between `a` and `b`: large enough
    /// to confirm a successor of either endpoint.
    pub fn pair_horizon(&self, a: u64, b: u64) -> u64 {
        self.horizon
            .max(CONFIRM_FACTOR.saturating_mul(a.max(b).saturating_add(1)))
    }

    fn same_as(&self, other: &PowerContext) -> bool {
        same_order(&self.base, &other.base) && Arc::ptr_eq(&self.cohesive, &other.cohesive)
    }

    pub(crate) fn member(&self, v: u64) -> Option<bool> {
        self.base.contains(v, self.budget)
    }

    pub(crate) fn lt(&self, a: u64, b: u64) -> Option<bool> {
        self.base.less(a, b, self.budget)
    }
}

pub(crate) fn same_order(a: &Order, b: &Order) -> bool {
    std::ptr::eq(Arc::as_ptr(a) as *const (), Arc::as_ptr(b) as *const ())
}

/// `[φ]`: a representative with its values cached on the window.
#[derive(Clone)]
pub struct PowerElement {
    ctx: Arc<PowerContext>,
    representative: ClockedFunction,
    label: String,
    values: Arc<[Option<u64>]>,
}

impl fmt::Debug for PowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerElement")
            .field("label", &self.label)
            .finish()
    }
}

impl PowerElement {
    /// Evaluates the representative on the window. A window element counts
    /// as undefined when the value is pending or not a decided member. Every
    /// element from the middle of the window on must be defined.
    pub fn new(
        ctx: &Arc<PowerContext>,
        representative: ClockedFunction,
    ) -> Result<Self, PowerError> {
        let label = representative.label();
        Self::labeled(ctx, representative, label)
    }

    pub fn labeled(
        ctx: &Arc<PowerContext>,
        representative: ClockedFunction,
        label: impl Into<String>,
    ) -> Result<Self, PowerError> {
        let label = label.into();
        let values: Vec<Option<u64>> = ctx
            .window()
            .iter()
            .map(|&n| {
                representative
                    .eval(n, ctx.budget)
                    .value()
                    .filter(|&v| ctx.member(v) == Some(true))
            })
            .collect();
        let half = values.len() / 2;
        if let Some(i) = (half..values.len()).find(|&i| values[i].is_none()) {
            return Err(PowerError::NotTotalOnWindow {
                label,
                element: ctx.window()[i],
            });
        }
        Ok(PowerElement {
            ctx: Arc::clone(ctx),
            representative,
            label,
            values: values.into(),
        })
    }

    pub fn context(&self) -> &Arc<PowerContext> {
        &self.ctx
    }

    pub fn representative(&self) -> &ClockedFunction {
        &self.representative
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Values on the window, in window order.
    pub fn values(&self) -> &[Option<u64>] {
        &self.values
    }

    pub(crate) fn check_shared(&self, other: &PowerElement) -> Result<(), PowerError> {
        if self.ctx.same_as(&other.ctx) {
            Ok(())
        } else {
            Err(PowerError::IncompatibleContexts)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

impl Relation {
    pub fn flip(self) -> Relation {
        match self {
            Relation::Less => Relation::Greater,
            Relation::Equal => Relation::Equal,
            Relation::Greater => Relation::Less,
        }
    }
}

impl From<std::cmp::Ordering> for Relation {
    fn from(o: std::cmp::Ordering) -> Self {
        match o {
            std::cmp::Ordering::Less => Relation::Less,
            std::cmp::Ordering::Equal => Relation::Equal,
            std::cmp::Ordering::Greater => Relation::Greater,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome<T> {
    Decided(T),
    Undecided,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub window_len: usize,
    /// Window index where the agreeing tail starts.
    pub cut: usize,
    pub cut_element: Option<u64>,
    /// Window elements whose judgment equals the tail judgment.
    pub agreeing: usize,
    /// Window indices below the cut that disagree with the tail.
    pub dissenting: Vec<usize>,
    pub budget: u64,
    /// Raw judgment counts and test statistics.
    pub counts: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict<T> {
    pub outcome: Outcome<T>,
    pub evidence: Evidence,
}

impl<T: PartialEq> Verdict<T> {
    pub fn decided(&self) -> Option<&T> {
        match &self.outcome {
            Outcome::Decided(t) => Some(t),
            Outcome::Undecided => None,
        }
    }

    pub fn is(&self, t: &T) -> bool {
        self.decided() == Some(t)
    }

    fn undecided(evidence: Evidence) -> Self {
        Verdict {
            outcome: Outcome::Undecided,
            evidence,
        }
    }
}

impl<T: Serialize> Verdict<T> {
    /// Report record for this verdict.
    pub fn report(
        &self,
        operation: &str,
        inputs: &[&str],
        ctx: &PowerContext,
    ) -> serde_json::Value {
        serde_json::json!({
            "operation": operation,
            "inputs": inputs,
            "outcome": self.outcome,
            "cut": self.evidence.cut,
            "cut_element": self.evidence.cut_element,
            "agreeing": self.evidence.agreeing,
            "dissenting": self.evidence.dissenting,
            "counts": self.evidence.counts,
            "budget": self.evidence.budget,
            "base": ctx.base.name(),
            "cohesive_provenance": ctx.cohesive.provenance_label(),
        })
    }
}

/// Tail rule over per-element judgments (`None` = undefined).
pub(crate) fn tail_verdict<T: Clone + PartialEq + fmt::Debug>(
    window: &[u64],
    judgments: &[Option<T>],
    budget: u64,
) -> Verdict<T> {
    let len = judgments.len();
    let mut counts = BTreeMap::new();
    for j in judgments {
        let key = match j {
            Some(t) => format!("{t:?}"),
            None => "undefined".into(),
        };
        *counts.entry(key).or_insert(0u64) += 1;
    }
    let mut ev = Evidence {
        window_len: len,
        cut: len,
        budget,
        counts,
        ..Default::default()
    };
    let Some(Some(last)) = judgments.last() else {
        return Verdict::undecided(ev);
    };
    let mut m = len - 1;
    while m > 0 && judgments[m - 1].as_ref() == Some(last) {
        m -= 1;
    }
    ev.cut = m;
    ev.cut_element = Some(window[m]);
    ev.agreeing = judgments
        .iter()
        .filter(|j| j.as_ref() == Some(last))
        .count();
    ev.dissenting = (0..m)
        .filter(|&i| judgments[i].as_ref() != Some(last))
        .collect();
    if m <= len / 2 {
        Verdict {
            outcome: Outcome::Decided(last.clone()),
            evidence: ev,
        }
    } else {
        Verdict::undecided(ev)
    }
}

/// The last [`MAX_SEGMENTS`] dyadic segments `[len/2^(j+1), len/2^j)`,
/// earliest first. Empty segments are dropped.
pub(crate) fn dyadic_segments(len: usize) -> Vec<Range<usize>> {
    let mut segs = Vec::new();
    let mut hi = len;
    while segs.len() < MAX_SEGMENTS && hi > 0 {
        let lo = hi / 2;
        segs.push(lo..hi);
        hi = lo;
    }
    segs.reverse();
    segs
}

/// `power_compare`: the relation between `x(n)` and `y(n)` on the tail.
pub fn power_compare(x: &PowerElement, y: &PowerElement) -> Result<Verdict<Relation>, PowerError> {
    x.check_shared(y)?;
    let ctx = &x.ctx;
    let judgments: Vec<Option<Relation>> = x
        .values
        .iter()
        .zip(y.values.iter())
        .map(|(a, b)| {
            let (a, b) = ((*a)?, (*b)?);
            if a == b {
                return Some(Relation::Equal);
            }
            ctx.lt(a, b).map(|lt| {
                if lt {
                    Relation::Less
                } else {
                    Relation::Greater
                }
            })
        })
        .collect();
    Ok(tail_verdict(ctx.window(), &judgments, ctx.budget))
}

/// The constant representative of a base element.
pub fn canonical_embed(ctx: &Arc<PowerContext>, a: u64) -> Result<PowerElement, PowerError> {
    if ctx.member(a) != Some(true) {
        return Err(PowerError::NotAMember(a));
    }
    PowerElement::labeled(ctx, ClockedFunction::constant(a), format!("embed({a})"))
}

/// Pointwise window evaluation of a predicate on values of several elements,
/// as a tail verdict.
pub fn pointwise_verdict(
    elements: &[&PowerElement],
    f: impl Fn(&[u64]) -> Option<bool>,
) -> Result<Verdict<bool>, PowerError> {
    let Some(first) = elements.first() else {
        return Err(PowerError::Precondition("no elements".into()));
    };
    for e in &elements[1..] {
        first.check_shared(e)?;
    }
    let ctx = &first.ctx;
    let mut buf = Vec::with_capacity(elements.len());
    let judgments: Vec<Option<bool>> = (0..ctx.window().len())
        .map(|i| {
            buf.clear();
            for e in elements {
                buf.push(e.values[i]?);
            }
            f(&buf)
        })
        .collect();
    Ok(tail_verdict(ctx.window(), &judgments, ctx.budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{naturals, rationals};
    use proptest::prelude::*;

    pub(crate) fn window(elements: Vec<u64>, horizon: u64) -> Arc<CohesiveApprox> {
        Arc::new(CohesiveApprox::injected(elements, horizon, "test").unwrap())
    }

    pub(crate) fn nat_ctx(len: u64) -> Arc<PowerContext> {
        PowerContext::new(naturals(), window((0..len).collect(), len), 1000)
    }

    fn rule(name: &str, f: fn(u64) -> u64) -> ClockedFunction {
        ClockedFunction::rule(name, f)
    }

    #[test]
    fn compare_examples() {
        let ctx = nat_ctx(64);
        let a = canonical_embed(&ctx, 3).unwrap();
        let b = canonical_embed(&ctx, 5).unwrap();
        let v = power_compare(&a, &b).unwrap();
        assert!(v.is(&Relation::Less));
        assert_eq!(v.evidence.cut, 0);
        let id = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        let ten = canonical_embed(&ctx, 10).unwrap();
        let v = power_compare(&id, &ten).unwrap();
        assert!(v.is(&Relation::Greater));
        assert_eq!(v.evidence.cut_element, Some(11));
        assert_eq!(v.evidence.dissenting, (0..=10).collect::<Vec<_>>());
        // alternating around the identity
        let alt = PowerElement::new(
            &ctx,
            rule("alt", |n| if n % 2 == 0 { n + 1 } else { n - 1 }),
        )
        .unwrap();
        assert_eq!(
            power_compare(&id, &alt).unwrap().outcome,
            Outcome::Undecided
        );
        assert!(power_compare(&id, &id).unwrap().is(&Relation::Equal));
    }

    #[test]
    fn cut_cap_blocks_short_tails() {
        let ctx = nat_ctx(20);
        let id = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        // agrees only on the top quarter
        let c = canonical_embed(&ctx, 14).unwrap();
        let v = power_compare(&id, &c).unwrap();
        assert_eq!(v.outcome, Outcome::Undecided);
        assert_eq!(v.evidence.cut, 15);
    }

    #[test]
    fn incompatible_contexts() {
        let a = canonical_embed(&nat_ctx(10), 1).unwrap();
        let b = canonical_embed(&nat_ctx(10), 1).unwrap();
        assert_eq!(
            power_compare(&a, &b).unwrap_err(),
            PowerError::IncompatibleContexts
        );
    }

    #[test]
    fn representatives_must_be_defined_on_the_upper_half() {
        let ctx = nat_ctx(16);
        let low = ClockedFunction::partial_rule("low", |n| (n < 4).then_some(n));
        assert!(matches!(
            PowerElement::new(&ctx, low),
            Err(PowerError::NotTotalOnWindow { element: 8, .. })
        ));
        let high = ClockedFunction::partial_rule("high", |n| (n >= 8).then_some(n));
        assert!(PowerElement::new(&ctx, high).is_ok());
        let q = PowerContext::new(rationals(), window((0..16).collect(), 16), 10);
        // 2 = ⟨0, 1⟩ codes 0/2, which is not reduced
        assert_eq!(
            canonical_embed(&q, 2).unwrap_err(),
            PowerError::NotAMember(2)
        );
    }

    #[test]
    fn segments() {
        assert_eq!(dyadic_segments(64), vec![4..8, 8..16, 16..32, 32..64]);
        assert_eq!(dyadic_segments(5), vec![0..1, 1..2, 2..5]);
        assert!(dyadic_segments(0).is_empty());
    }

    fn embed_oracle(a: u64, b: u64) -> Relation {
        a.cmp(&b).into()
    }

    proptest! {
        #[test]
        fn embeds_follow_naturals(a in 0u64..200, b in 0u64..200) {
            let ctx = nat_ctx(8);
            let v = power_compare(&canonical_embed(&ctx, a).unwrap(), &canonical_embed(&ctx, b).unwrap()).unwrap();
            prop_assert!(v.is(&embed_oracle(a, b)));
            prop_assert_eq!(v.evidence.cut, 0);
        }

        #[test]
        fn decided_means_no_dissent_above_cut(vals in proptest::collection::vec(0u64..4, 1..40)) {
            let w: Vec<u64> = (0..vals.len() as u64).collect();
            let j: Vec<Option<u64>> = vals.iter().map(|&v| (v < 3).then_some(v)).collect();
            let v = tail_verdict(&w, &j, 0);
            if let Outcome::Decided(t) = v.outcome {
                prop_assert!(v.evidence.cut <= j.len() / 2);
                prop_assert!(j[v.evidence.cut..].iter().all(|x| *x == Some(t)));
            } else {
                // an independent rescan finds no admissible cut
                let ok = (0..=j.len() / 2).any(|m| m < j.len() && j[m].is_some() && j[m..].iter().all(|x| *x == j[m]));
                prop_assert!(!ok);
            }
        }
    }
}
