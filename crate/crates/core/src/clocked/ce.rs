//! Stage-wise enumerations of c.e. sets.
//!
//! A set is given by an entry-stage function: `entry(x, limit)` is the stage
//! at which `x` is enumerated, if that stage is at most `limit`. By
//! convention nothing larger than `s` is enumerated by stage `s`, so
//! `enumerate(s) ⊆ [0, s]`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use super::function::ClockedFunction;
use super::machine::Program;

type EntryFn = dyn Fn(u64, u64) -> Option<u64> + Send + Sync;

#[derive(Clone)]
pub struct CeSet {
    label: String,
    entry: Arc<EntryFn>,
}

impl fmt::Debug for CeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CeSet({})", self.label)
    }
}

impl CeSet {
    /// `entry` must be monotone in `limit`: once it reports a stage, larger
    /// limits report the same stage.
    pub fn from_entry(
        label: impl Into<String>,
        entry: impl Fn(u64, u64) -> Option<u64> + Send + Sync + 'static,
    ) -> Self {
        CeSet {
            label: label.into(),
            entry: Arc::new(entry),
        }
    }

    /// A computable set, each element enumerated at the stage equal to itself.
    pub fn decidable(
        label: impl Into<String>,
        pred: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self::from_entry(label, move |x, limit| (x <= limit && pred(x)).then_some(x))
    }

    pub fn empty() -> Self {
        Self::decidable("∅", |_| false)
    }

    /// `W = dom f`, with `x` entering once `f(x)` halts within the stage.
    pub fn domain_of(f: ClockedFunction) -> Self {
        let label = format!("dom {}", f.label());
        Self::from_entry(label, move |x, limit| {
            if x > limit {
                return None;
            }
            f.halting_budget(x, limit).map(|b| b.max(x))
        })
    }

    /// `W_e`, the domain of the `e`-th program.
    pub fn program_domain(e: u64) -> Self {
        Self::domain_of(ClockedFunction::index(&BigUint::from(e))).relabel(format!("W_{e}"))
    }

    /// `{e : φ_e(e) halts}`.
    pub fn halting_diagonal() -> Self {
        Self::from_entry("K", move |e, limit| {
            if e > limit {
                return None;
            }
            let c = Program::decode_u64(e).compile();
            let mut m = c.start(e);
            m.advance(&c, limit);
            m.result().map(|_| m.steps().max(e))
        })
    }

    /// Explicit `(element, stage)` pairs.
    pub fn timestamped(
        label: impl Into<String>,
        entries: impl IntoIterator<Item = (u64, u64)>,
    ) -> Self {
        let map: rustc_hash::FxHashMap<u64, u64> = entries.into_iter().collect();
        Self::from_entry(label, move |x, limit| {
            map.get(&x).map(|&t| t.max(x)).filter(|&t| t <= limit)
        })
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entry_stage(&self, x: u64, limit: u64) -> Option<u64> {
        (self.entry)(x, limit)
    }

    pub fn contains_at(&self, x: u64, stage: u64) -> bool {
        self.entry_stage(x, stage).is_some()
    }

    pub fn enumerate(&self, stage: u64) -> BTreeSet<u64> {
        (0..=stage)
            .filter(|&x| self.contains_at(x, stage))
            .collect()
    }

    /// Elements of `[0, bound]` enumerated by `stage`.
    pub fn members_upto(&self, bound: u64, stage: u64) -> Vec<u64> {
        (0..=bound)
            .filter(|&x| self.contains_at(x, stage))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn evens_are_enumerated_on_time() {
        let ev = CeSet::decidable("evens", |x| x % 2 == 0);
        assert_eq!(
            ev.enumerate(6).into_iter().collect::<Vec<_>>(),
            vec![0, 2, 4, 6]
        );
        assert!(!ev.contains_at(8, 7));
    }

    #[test]
    fn program_domains() {
        // φ_4 = [decjz r0 @0] diverges exactly at 0
        let w4 = CeSet::program_domain(4);
        assert!(!w4.contains_at(0, 1000));
        assert!(w4.contains_at(5, 1000));
        let w0 = CeSet::program_domain(0);
        assert_eq!(w0.enumerate(3).len(), 4);
    }

    #[test]
    fn halting_diagonal_small() {
        let k = CeSet::halting_diagonal();
        assert!(k.contains_at(0, 100));
        assert!(k.contains_at(2, 100));
        assert!(k.contains_at(4, 100));
    }

    proptest! {
        #[test]
        fn enumerations_are_monotone(s in 0u64..60, t in 0u64..60) {
            let sets = [
                CeSet::decidable("mult3", |x| x % 3 == 0),
                CeSet::program_domain(4),
                CeSet::halting_diagonal(),
                CeSet::timestamped("ts", [(3, 10), (7, 2), (1, 40)]),
            ];
            for w in &sets {
                let a = w.enumerate(s);
                let b = w.enumerate(s + t);
                prop_assert!(a.is_subset(&b));
                prop_assert!(a.iter().all(|&x| x <= s));
            }
        }
    }
}
