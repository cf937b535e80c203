//! Moving power elements along computable isomorphisms and through sums,
//! products and reverses of the base.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    power_compare, tail_verdict, Outcome, PowerContext, PowerElement, PowerError, Relation,
};
use crate::clocked::{left, pair, right, ClockedFunction};
use crate::order::Components;

/// `[φ] ↦ [f ∘ φ]` into a power over another base with the same window.
pub fn transport_iso(
    f: &ClockedFunction,
    target: &Arc<PowerContext>,
    x: &PowerElement,
) -> Result<PowerElement, PowerError> {
    if !Arc::ptr_eq(target.cohesive(), x.context().cohesive()) {
        return Err(PowerError::IncompatibleContexts);
    }
    let label = format!("{}∘{}", f.label(), x.label());
    PowerElement::labeled(target, x.representative().then(f), label)
}

/// ℤ code (`2k ↦ k`, `2k+1 ↦ −(k+1)`) to the code in `ℕ* + ℕ`.
pub fn sum_code_from_integer(z: u64) -> u64 {
    if z.is_multiple_of(2) {
        pair(1, z / 2)
    } else {
        pair(0, z / 2)
    }
}

/// `⟨0, k⟩ ↦ 2k+1`, `⟨1, k⟩ ↦ 2k`.
pub fn integers_from_sum_code(c: u64) -> Option<u64> {
    match (left(c), right(c)) {
        (0, k) => Some(2 * k + 1),
        (1, k) => Some(2 * k),
        _ => None,
    }
}

/// Image of an element of a sum power: the eventual summand and the
/// second coordinate.
#[derive(Clone, Debug)]
pub struct SumImage {
    pub tag: u64,
    pub component: PowerElement,
}

impl SumImage {
    pub fn compare(&self, other: &SumImage) -> Result<Outcome<Relation>, PowerError> {
        if self.tag != other.tag {
            return Ok(Outcome::Decided(if self.tag < other.tag {
                Relation::Less
            } else {
                Relation::Greater
            }));
        }
        Ok(power_compare(&self.component, &other.component)?.outcome)
    }
}

pub fn sum_transport(x: &PowerElement) -> Result<SumImage, PowerError> {
    let ctx = x.context();
    let Some(Components::Sum(parts)) = ctx.base().components() else {
        return Err(PowerError::Precondition(format!(
            "{} is not a sum",
            ctx.base().name()
        )));
    };
    let tags: Vec<Option<u64>> = x.values().iter().map(|v| v.map(left)).collect();
    let Outcome::Decided(tag) = tail_verdict(ctx.window(), &tags, ctx.budget()).outcome else {
        return Err(PowerError::UndecidedSumTag);
    };
    let part = ctx.rebased(parts[tag as usize].clone());
    let f = x.representative().map("π1", right);
    let component = PowerElement::labeled(&part, f, format!("π1∘{}", x.label()))?;
    Ok(SumImage { tag, component })
}

/// Image of an element of a product power: outer and inner coordinates.
#[derive(Clone, Debug)]
pub struct ProductImage {
    pub outer: PowerElement,
    pub inner: PowerElement,
}

impl ProductImage {
    pub fn compare(&self, other: &ProductImage) -> Result<Outcome<Relation>, PowerError> {
        match power_compare(&self.outer, &other.outer)?.outcome {
            Outcome::Decided(Relation::Equal) => {
                Ok(power_compare(&self.inner, &other.inner)?.outcome)
            }
            o => Ok(o),
        }
    }
}

pub fn product_transport(x: &PowerElement) -> Result<ProductImage, PowerError> {
    let ctx = x.context();
    let Some(Components::Product([l0, l1])) = ctx.base().components() else {
        return Err(PowerError::Precondition(format!(
            "{} is not a product",
            ctx.base().name()
        )));
    };
    let outer = PowerElement::labeled(
        &ctx.rebased(l1),
        x.representative().map("π0", left),
        format!("π0∘{}", x.label()),
    )?;
    let inner = PowerElement::labeled(
        &ctx.rebased(l0),
        x.representative().map("π1", right),
        format!("π1∘{}", x.label()),
    )?;
    Ok(ProductImage { outer, inner })
}

/// The same representative over the un-reversed base.
pub fn reverse_transport(x: &PowerElement) -> Result<PowerElement, PowerError> {
    let ctx = x.context();
    let Some(Components::Reverse(inner)) = ctx.base().components() else {
        return Err(PowerError::Precondition(format!(
            "{} is not a reverse",
            ctx.base().name()
        )));
    };
    PowerElement::labeled(&ctx.rebased(inner), x.representative().clone(), x.label())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportAudit {
    pub checked: usize,
    pub decided: usize,
    pub preserved: usize,
    /// Labels of pairs whose decided verdict was not carried over.
    pub failures: Vec<(String, String)>,
}

impl TransportAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.preserved == self.decided
    }
}

/// Every decided source verdict must reappear (flipped if `flip`) between
/// the images.
pub fn audit_transport<I>(
    pairs: &[(PowerElement, PowerElement)],
    map: impl Fn(&PowerElement) -> Result<I, PowerError>,
    compare: impl Fn(&I, &I) -> Result<Outcome<Relation>, PowerError>,
    flip: bool,
) -> TransportAudit {
    let mut audit = TransportAudit::default();
    for (a, b) in pairs {
        audit.checked += 1;
        let Ok(v) = power_compare(a, b) else {
            audit.failures.push((a.label().into(), b.label().into()));
            continue;
        };
        let Outcome::Decided(r) = v.outcome else {
            continue;
        };
        audit.decided += 1;
        let expected = if flip { r.flip() } else { r };
        let image = map(a).and_then(|ia| map(b).and_then(|ib| compare(&ia, &ib)));
        match image {
            Ok(Outcome::Decided(s)) if s == expected => audit.preserved += 1,
            _ => audit.failures.push((a.label().into(), b.label().into())),
        }
    }
    audit
}
