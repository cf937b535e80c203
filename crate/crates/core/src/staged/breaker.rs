//! A copy of ω in which no fixed partial computable function is eventually
//! the immediate successor on the elements outside a computable set `R`.

use rustc_hash::FxHashSet;
use serde::Serialize;

use super::{ActionKind, Elem, StagedOrder};
use crate::clocked::{pairing::unpair, Numbering, PhiCache};
use crate::order::OrderTypeTag;

/// Upper bound on the gap scanned when looking for the next member of `R`.
const RESERVED_SCAN: u64 = 1 << 24;

/// Prefix maxima `τ_z = max_≺ {0, …, z}`; stable once computed because the
/// relative order of present elements never changes.
pub(crate) struct PrefixMax(Vec<Elem>);

impl PrefixMax {
    pub(crate) fn new() -> Self {
        PrefixMax(Vec::new())
    }

    pub(crate) fn get(&mut self, o: &StagedOrder, z: u64) -> Elem {
        while self.0.len() as u64 <= z {
            let x = self.0.len() as Elem;
            let next = match self.0.last() {
                Some(&t) if o.precedes(x, t) == Some(true) => t,
                _ => x,
            };
            self.0.push(next);
        }
        self.0[z as usize]
    }
}

/// Runs `stages` stages. At each stage `s` every `⟨e,n⟩ < s` is considered
/// in code order; when `φ_{e,s}(n)` is present and is currently the
/// immediate successor of `n`, `n ∉ R`, and `n` lies above all of `0..=e`,
/// the least member of `R` not yet placed goes immediately after `n`.
pub fn build_successor_breaker(
    numbering: Numbering,
    reserved: impl Fn(u64) -> bool,
    stages: u64,
) -> StagedOrder {
    let mut o = StagedOrder::start("successor-breaker", OrderTypeTag::Omega);
    let mut phi = PhiCache::new(numbering);
    let mut tau = PrefixMax::new();
    let mut cursor = 0u64;
    for s in 1..=stages {
        o.begin_stage(s);
        for c in 0..s {
            let (e, n) = unpair(c);
            let Some(v) = phi.eval(e, n, s).value() else {
                continue;
            };
            if !o.has(v as Elem) || o.successor_of(n as Elem) != Some(v as Elem) || reserved(n) {
                continue;
            }
            let t = tau.get(&o, e);
            if o.precedes(t, n as Elem) != Some(true) {
                continue;
            }
            while !(reserved(cursor) && !o.has(cursor as Elem)) {
                cursor += 1;
                assert!(
                    cursor < s + RESERVED_SCAN,
                    "reserved set exhausted near {cursor}"
                );
            }
            o.insert_after(
                n as Elem,
                cursor as Elem,
                c,
                ActionKind::Break { e, n, target: v },
            );
        }
    }
    o
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BreakerReport {
    pub actions: usize,
    pub violations: Vec<String>,
}

impl BreakerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-checks every insertion against the order as it stood when it was made:
/// the value, the successor condition, `n ∉ R`, the restraint above `0..=e`,
/// and that the inserted element was the least unused member of `R`.
pub fn audit_breaker(
    o: &StagedOrder,
    numbering: Numbering,
    reserved: impl Fn(u64) -> bool,
) -> BreakerReport {
    let mut rep = BreakerReport::default();
    let mut phi = PhiCache::new(numbering);
    let mut order: Vec<Elem> = Vec::new();
    let mut present: FxHashSet<Elem> = FxHashSet::default();
    for a in o.trace() {
        match &a.kind {
            ActionKind::Append => {
                order.extend(&a.added);
                present.extend(&a.added);
            }
            ActionKind::Dense { .. } => rep
                .violations
                .push(format!("stage {}: unexpected dense action", a.stage)),
            ActionKind::Break { e, n, target } => {
                rep.actions += 1;
                let s = a.stage;
                let mut bad = |msg: &str| {
                    rep.violations
                        .push(format!("stage {s}, e={e}, n={n}: {msg}"))
                };
                if phi.eval(*e, *n, s).value() != Some(*target) {
                    bad("value does not match");
                }
                let pos = |x: Elem| order.iter().position(|&y| y == x);
                let (Some(pn), Some(pt)) = (pos(*n as Elem), pos(*target as Elem)) else {
                    bad("endpoint missing");
                    continue;
                };
                if pt != pn + 1 {
                    bad("target was not the immediate successor");
                }
                if reserved(*n) {
                    bad("n lies in R");
                }
                if (0..=*e).any(|j| pos(j as Elem).is_some_and(|pj| pj >= pn)) {
                    bad("restraint violated");
                }
                let m = a.added[0];
                let least = (0..).find(|&k: &u64| reserved(k) && !present.contains(&(k as Elem)));
                if least.map(|k| k as Elem) != Some(m) || a.added.len() != 1 {
                    bad("inserted element is not the least unused member of R");
                }
                order.insert(pn + 1, m);
                present.insert(m);
            }
        }
    }
    if order != o.elements() {
        rep.violations
            .push("replayed order differs from final order".into());
    }
    rep
}
