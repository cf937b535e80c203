use serde::{Deserialize, Serialize};

use super::{dyadic_segments, tail_verdict, Outcome, PowerContext, PowerElement, MIN_SEGMENTS};
use crate::order::Coloring;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StandardClass {
    /// Constant `value` from window index `cut` on.
    Standard {
        value: u64,
        cut: usize,
    },
    /// Segment minima in increasing order.
    Nonstandard {
        minima: Vec<u64>,
    },
    Undecided,
}

impl StandardClass {
    pub fn is_nonstandard(&self) -> bool {
        matches!(self, StandardClass::Nonstandard { .. })
    }
}

/// Minimum of each dyadic segment under `less`; `None` if any segment has an
/// undefined value or an undecided comparison, or there are too few.
fn segment_minima(
    values: &[Option<u64>],
    less: impl Fn(u64, u64) -> Option<bool>,
) -> Option<Vec<u64>> {
    let segs = dyadic_segments(values.len());
    if segs.len() < MIN_SEGMENTS {
        return None;
    }
    segs.into_iter()
        .map(|r| {
            let mut best: Option<u64> = None;
            for v in &values[r] {
                let v = (*v)?;
                best = Some(match best {
                    Some(b) if !less(v, b)? => b,
                    _ => v,
                });
            }
            best
        })
        .collect()
}

fn strictly_increasing(m: &[u64], less: impl Fn(u64, u64) -> Option<bool>) -> bool {
    m.windows(2).all(|w| less(w[0], w[1]) == Some(true))
}

/// Eventually constant, or segment minima strictly increasing in the base
/// order.
pub fn classify_standard(x: &PowerElement) -> StandardClass {
    let ctx: &PowerContext = x.context();
    let v = tail_verdict(ctx.window(), x.values(), ctx.budget());
    if let Outcome::Decided(value) = v.outcome {
        return StandardClass::Standard {
            value,
            cut: v.evidence.cut,
        };
    }
    let less = |a: u64, b: u64| ctx.lt(a, b);
    match segment_minima(x.values(), less) {
        Some(m) if strictly_increasing(&m, less) => StandardClass::Nonstandard { minima: m },
        _ => StandardClass::Undecided,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColorKind {
    Solid(u64),
    /// Segment minima of the color function, strictly increasing.
    StripedEvidence(Vec<u64>),
    Undecided,
}

/// `⟦F ∘ φ⟧` with its classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorClass {
    /// Color of `x(n)` per window element.
    pub delta: Vec<Option<u64>>,
    pub kind: ColorKind,
}

pub fn induced_color(f: &Coloring, x: &PowerElement) -> ColorClass {
    let ctx = x.context();
    let delta: Vec<Option<u64>> = x.values().iter().map(|v| v.and_then(|v| f(v))).collect();
    let v = tail_verdict(ctx.window(), &delta, ctx.budget());
    let lt = |a: u64, b: u64| Some(a < b);
    let kind = match v.outcome {
        Outcome::Decided(c) => ColorKind::Solid(c),
        Outcome::Undecided => match segment_minima(&delta, lt) {
            Some(m) if strictly_increasing(&m, lt) => ColorKind::StripedEvidence(m),
            _ => ColorKind::Undecided,
        },
    };
    ColorClass { delta, kind }
}
