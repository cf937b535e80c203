//! A computable copy of ω with a non-computable successor function: the
//! evens in their natural order, with `2k+1` placed right after `2f(k)` for
//! a one-to-one enumeration `f` of a c.e. set.

use std::sync::{Arc, Mutex};

use crate::clocked::{CeSet, ClockedFunction, Descriptor, Eval};
use crate::order::{Arithmetic, ComputableOrder, OrderTypeTag};

struct EnumState {
    /// Every member with entry stage at most `upto` is listed.
    upto: u64,
    /// `(entry stage, member)` sorted.
    listed: Vec<(u64, u64)>,
}

impl EnumState {
    fn extend_to(&mut self, a: &CeSet, t: u64) {
        if t <= self.upto && !self.listed.is_empty() {
            return;
        }
        let from = if self.listed.is_empty() && self.upto == 0 {
            0
        } else {
            self.upto + 1
        };
        let mut fresh = Vec::new();
        for x in 0..=t {
            if let Some(e) = a.entry_stage(x, t) {
                if e >= from {
                    fresh.push((e, x));
                }
            }
        }
        fresh.sort_unstable();
        self.listed.extend(fresh);
        self.upto = t;
    }
}

/// The one-to-one enumeration of `a` listing members by entry stage, ties
/// by value. `f(k)` is found at budget `s` iff the `k`-th member has entered
/// by stage `s`.
pub fn enumeration_bijection(a: CeSet) -> ClockedFunction {
    let label = format!("enum({})", a.label());
    let state = Arc::new(Mutex::new(EnumState {
        upto: 0,
        listed: Vec::new(),
    }));
    ClockedFunction::from_fn(Descriptor::Rule(label), move |k, s| {
        let mut st = state.lock().expect("enumeration lock");
        let k = k as usize;
        loop {
            if let Some(&(e, x)) = st.listed.get(k) {
                if e <= st.upto {
                    return if e <= s {
                        Eval::Value(x)
                    } else {
                        Eval::Pending
                    };
                }
            }
            if st.upto >= s && !st.listed.is_empty() {
                return Eval::Pending;
            }
            let next = (st.upto.max(32) * 2).min(s);
            st.extend_to(&a, next);
            if next >= s && st.listed.get(k).is_none() {
                return Eval::Pending;
            }
        }
    })
}

#[derive(Clone)]
pub struct NzqCopy {
    f: ClockedFunction,
}

/// Order rules: `2c ≺ 2d ⟺ c < d`, `2c ≺ 2k+1 ⟺ c ≤ f(k)`,
/// `2k+1 ≺ 2c ⟺ f(k) < c`, `2k+1 ≺ 2l+1 ⟺ f(k) < f(l)`.
pub fn build_noncomputable_successor_copy(f: ClockedFunction) -> NzqCopy {
    NzqCopy { f }
}

impl NzqCopy {
    /// `A` is the diagonal halting set, listed by entry stage.
    pub fn over_halting_diagonal() -> Self {
        build_noncomputable_successor_copy(enumeration_bijection(CeSet::halting_diagonal()))
    }

    pub fn enumeration(&self) -> &ClockedFunction {
        &self.f
    }

    fn key(&self, x: u64, budget: u64) -> Option<(u64, u8)> {
        if x.is_multiple_of(2) {
            Some((x / 2, 0))
        } else {
            self.f.eval(x / 2, budget).value().map(|v| (v, 1))
        }
    }
}

impl ComputableOrder for NzqCopy {
    fn name(&self) -> String {
        format!("ω with 2k+1 after 2·{}(k)", self.f.label())
    }

    fn tag(&self) -> OrderTypeTag {
        OrderTypeTag::Omega
    }

    fn contains(&self, x: u64, budget: u64) -> Option<bool> {
        self.key(x, budget).map(|_| true)
    }

    fn less(&self, a: u64, b: u64, budget: u64) -> Option<bool> {
        let ka = self.key(a, budget)?;
        let kb = self.key(b, budget)?;
        Some(ka < kb)
    }

    fn arithmetic(&self) -> Option<Arithmetic> {
        Some(Arithmetic::EvenSkeleton(self.f.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{check_axioms, successor_probe, Probe};

    fn table(vals: &[u64]) -> ClockedFunction {
        ClockedFunction::table(vals.iter().map(|&v| Some(v)).collect())
    }

    #[test]
    fn displayed_rules() {
        let l = build_noncomputable_successor_copy(table(&[3, 0, 7, 1]));
        assert_eq!(l.less(6, 1, 10), Some(true));
        assert_eq!(l.less(1, 8, 10), Some(true));
        assert_eq!(l.less(2, 4, 0), Some(true));
        assert_eq!(l.less(3, 1, 10), Some(true));
        assert!(check_axioms(&l, 7, 10).is_ok());
    }

    #[test]
    fn pending_when_enumeration_is_slow() {
        let l = build_noncomputable_successor_copy(ClockedFunction::costed_rule("slow", |k| {
            (100, Some(k + 1))
        }));
        assert_eq!(l.contains(1, 10), None);
        assert_eq!(l.less(0, 1, 10), None);
        assert_eq!(l.less(0, 1, 100), Some(true));
    }

    #[test]
    fn successor_detects_membership() {
        let l = NzqCopy::over_halting_diagonal();
        let f = l.enumeration().clone();
        let budget = 4000;
        let listed: Vec<u64> = (0..40).filter_map(|k| f.eval(k, budget).value()).collect();
        assert!(listed.len() >= 10);
        let mut sorted = listed.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), listed.len());
        let diag = CeSet::halting_diagonal();
        let all: Vec<u64> = (0..2000).map_while(|k| f.eval(k, budget).value()).collect();
        for a in 0..20u64 {
            let probe = successor_probe(&l, 2 * a, 200, budget);
            if diag.contains_at(a, budget) {
                let k = all.iter().position(|&v| v == a).unwrap() as u64;
                if 2 * k < 200 {
                    assert_eq!(probe, Probe::Found(2 * k + 1), "a={a}");
                }
            } else {
                assert_eq!(probe, Probe::Found(2 * a + 2), "a={a}");
            }
        }
        assert!(check_axioms(&l, 64, budget).is_ok());
    }
}
