//! Re-indexing a presentation with a c.e. domain onto ℕ.

use rustc_hash::FxHashMap;

use crate::order::{ComputableOrder, Order, OrderTypeTag};

/// `b ↦ f(b)` enumerates the domain of the inner presentation one-to-one;
/// `b ≺ c ⟺ f(b) ≺ f(c)`.
///
/// A code `z` is listed once `t(z) = max(z, needed(z))` is reached, where
/// `needed(z)` is the least budget confirming membership; codes are ordered
/// by `(t(z), z)`, so the listing at a smaller horizon is a prefix of the
/// listing at a larger one.
#[derive(Clone)]
pub struct PullBack {
    inner: Order,
    horizon: u64,
    f: Vec<u64>,
    inv: FxHashMap<u64, u64>,
}

fn needed(p: &dyn ComputableOrder, z: u64, horizon: u64) -> Option<u64> {
    if p.contains(z, horizon) != Some(true) {
        return None;
    }
    let (mut lo, mut hi) = (0u64, horizon);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if p.contains(z, mid) == Some(true) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

pub fn pull_back(p: Order, horizon: u64) -> PullBack {
    let mut keyed: Vec<(u64, u64)> = (0..=horizon)
        .filter_map(|z| needed(&*p, z, horizon).map(|t| (t.max(z), z)))
        .collect();
    keyed.sort_unstable();
    let f: Vec<u64> = keyed.into_iter().map(|(_, z)| z).collect();
    let inv = f.iter().enumerate().map(|(b, &z)| (z, b as u64)).collect();
    PullBack {
        inner: p,
        horizon,
        f,
        inv,
    }
}

impl PullBack {
    pub fn f(&self, b: u64) -> Option<u64> {
        self.f.get(b as usize).copied()
    }

    pub fn inverse(&self, z: u64) -> Option<u64> {
        self.inv.get(&z).copied()
    }

    pub fn listed(&self) -> usize {
        self.f.len()
    }

    pub fn inner(&self) -> &Order {
        &self.inner
    }
}

impl ComputableOrder for PullBack {
    fn name(&self) -> String {
        format!("pullback({})", self.inner.name())
    }

    fn tag(&self) -> OrderTypeTag {
        self.inner.tag()
    }

    fn contains(&self, b: u64, _budget: u64) -> Option<bool> {
        ((b as usize) < self.f.len()).then_some(true)
    }

    fn less(&self, a: u64, b: u64, _budget: u64) -> Option<bool> {
        self.inner.less(self.f(a)?, self.f(b)?, self.horizon)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::order::{check_axioms, naturals, predecessor_census};
    use crate::staged::shuffle_all;

    #[test]
    fn total_domain_is_reindexed() {
        let pb = pull_back(naturals(), 50);
        assert_eq!(pb.listed(), 51);
        for b in 0..=50 {
            assert_eq!(pb.inverse(pb.f(b).unwrap()), Some(b));
        }
    }

    #[test]
    fn prefix_consistent_and_order_preserving() {
        let m: Order = Arc::new(shuffle_all(naturals(), Arc::new(|x| Some(x % 3))));
        let small = pull_back(m.clone(), 200);
        let large = pull_back(m.clone(), 800);
        for b in 0..small.listed() as u64 {
            assert_eq!(small.f(b), large.f(b));
        }
        for a in 0..40 {
            for b in 0..40 {
                let (fa, fb) = (large.f(a).unwrap(), large.f(b).unwrap());
                assert_eq!(large.less(a, b, 0), m.less(fa, fb, 800));
            }
        }
        assert!(check_axioms(&large, 64, 0).is_ok());
        for z in 0..10 {
            assert_eq!(
                predecessor_census(&small, z, 150, 0),
                predecessor_census(&large, z, 150, 0)
            );
        }
    }
}
