//! Replacing each point of a colored order by a finite chain whose length
//! depends on the point and its color. Codes are `⟨x, i⟩`, ordered first by
//! `x` in the base order and then by `i`.

use std::sync::Arc;

use crate::clocked::pairing::{checked_pair, unpair};
use crate::order::{Coloring, ComputableOrder, Order, OrderTypeTag};

/// A decidable ternary predicate `R(k, a, b)`.
pub type Predicate3 = Arc<dyn Fn(u64, u64, u64) -> bool + Send + Sync>;

/// `G(x) = min(F(x), n)`.
pub fn collapse_coloring(f: Coloring, n: u64) -> Coloring {
    Arc::new(move |x| f(x).map(|c| c.min(n)))
}

#[derive(Clone)]
pub enum ShuffleKind {
    /// Fiber of `x` has `ks[G(x)]` points.
    Finite { ks: Vec<u64> },
    /// `x + 1` points if `F(x) = 0`, else `F(x)`.
    All,
    /// `x + 1` points if `F(x) < k0`; otherwise `k0`, extended to `F(x)` once
    /// `(∀a ≤ x)(∃b) R(F(x), a, b)` is verified.
    Pi2 { r: Predicate3, k0: u64 },
    /// `x + 1` points if `F(x) = 0`; otherwise `F(x)`, extended to `x + 1`
    /// once `(∀a ≤ x)(∃b) R(F(x), a, b)` is verified.
    Sigma2 { r: Predicate3 },
}

impl ShuffleKind {
    fn label(&self) -> String {
        match self {
            ShuffleKind::Finite { ks } => format!("finite{ks:?}"),
            ShuffleKind::All => "all".into(),
            ShuffleKind::Pi2 { k0, .. } => format!("pi2(k0={k0})"),
            ShuffleKind::Sigma2 { .. } => "sigma2".into(),
        }
    }
}

#[derive(Clone)]
pub struct Shuffle {
    base: Order,
    coloring: Coloring,
    kind: ShuffleKind,
}

/// Cost of verifying `(∀a ≤ x)(∃b) R(k, a, b)`: one step per tested `b`.
/// `None` if the budget runs out first.
pub fn bounded_search_cost(r: &Predicate3, k: u64, x: u64, budget: u64) -> Option<u64> {
    let mut cost = 0u64;
    for a in 0..=x {
        let mut b = 0;
        loop {
            cost += 1;
            if cost > budget {
                return None;
            }
            if r(k, a, b) {
                break;
            }
            b += 1;
        }
    }
    Some(cost)
}

pub fn shuffle_finite(base: Order, g: Coloring, ks: Vec<u64>) -> Shuffle {
    assert!(
        !ks.is_empty() && ks.iter().all(|&k| k >= 1),
        "fiber lengths must be positive"
    );
    Shuffle {
        base,
        coloring: g,
        kind: ShuffleKind::Finite { ks },
    }
}

pub fn shuffle_all(base: Order, f: Coloring) -> Shuffle {
    Shuffle {
        base,
        coloring: f,
        kind: ShuffleKind::All,
    }
}

pub fn shuffle_pi2(base: Order, f: Coloring, r: Predicate3, k0: u64) -> Shuffle {
    assert!(k0 >= 1, "k0 must be positive");
    Shuffle {
        base,
        coloring: f,
        kind: ShuffleKind::Pi2 { r, k0 },
    }
}

pub fn shuffle_sigma2(base: Order, f: Coloring, r: Predicate3) -> Shuffle {
    Shuffle {
        base,
        coloring: f,
        kind: ShuffleKind::Sigma2 { r },
    }
}

impl Shuffle {
    pub fn kind(&self) -> &ShuffleKind {
        &self.kind
    }

    pub fn base(&self) -> &Order {
        &self.base
    }

    /// Membership of `⟨x, i⟩` for a base member `x` of color `c`.
    fn fiber_contains(&self, x: u64, c: u64, i: u64, budget: u64) -> Option<bool> {
        match &self.kind {
            ShuffleKind::Finite { ks } => Some(i < ks[(c as usize).min(ks.len() - 1)]),
            ShuffleKind::All => Some(if c == 0 { i <= x } else { i < c }),
            ShuffleKind::Pi2 { r, k0 } => {
                if c < *k0 {
                    Some(i <= x)
                } else if i < *k0 {
                    Some(true)
                } else if i < c {
                    bounded_search_cost(r, c, x, budget).map(|_| true)
                } else {
                    Some(false)
                }
            }
            ShuffleKind::Sigma2 { r } => {
                if c == 0 {
                    Some(i <= x)
                } else if i < c {
                    Some(true)
                } else if i <= x {
                    bounded_search_cost(r, c, x, budget).map(|_| true)
                } else {
                    Some(false)
                }
            }
        }
    }
}

impl ComputableOrder for Shuffle {
    fn name(&self) -> String {
        format!("shuffle-{}({})", self.kind.label(), self.base.name())
    }

    fn tag(&self) -> OrderTypeTag {
        OrderTypeTag::Shuffle(self.kind.label())
    }

    fn contains(&self, z: u64, budget: u64) -> Option<bool> {
        let (x, i) = unpair(z);
        if !self.base.contains(x, budget)? {
            return Some(false);
        }
        let c = (self.coloring)(x)?;
        self.fiber_contains(x, c, i, budget)
    }

    fn less(&self, a: u64, b: u64, budget: u64) -> Option<bool> {
        if !self.contains(a, budget)? || !self.contains(b, budget)? {
            return None;
        }
        let (x, i) = unpair(a);
        let (y, j) = unpair(b);
        if x == y {
            Some(i < j)
        } else {
            self.base.less(x, y, budget)
        }
    }
}

/// Number of decided points `⟨x, i⟩`, `i < cap`, at `budget`. Fibers are
/// initial segments in `i`, so counting stops at the first non-member.
pub fn fiber_size(m: &dyn ComputableOrder, x: u64, budget: u64, cap: u64) -> u64 {
    (0..cap)
        .take_while(|&i| checked_pair(x, i).is_some_and(|z| m.contains(z, budget) == Some(true)))
        .count() as u64
}

/// Bounded check that `k0` is the least member of `{k ≥ 1 : ∀a ∃b R(k,a,b)}`:
/// `k0` passes for every `a < a_bound` with some `b < b_bound`, and every
/// `1 ≤ k < k0` has an `a < a_bound` with no `b < b_bound`.
pub fn verify_least_element(
    r: &Predicate3,
    k0: u64,
    a_bound: u64,
    b_bound: u64,
) -> Result<(), String> {
    let passes = |k: u64| (0..a_bound).all(|a| (0..b_bound).any(|b| r(k, a, b)));
    if k0 == 0 || !passes(k0) {
        return Err(format!("{k0} fails the bounded check"));
    }
    if let Some(k) = (1..k0).find(|&k| passes(k)) {
        return Err(format!("{k} < {k0} passes the bounded check"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clocked::pairing::pair;
    use crate::order::{check_axioms, naturals};

    fn colors(f: fn(u64) -> u64) -> Coloring {
        Arc::new(move |x| Some(f(x)))
    }

    #[test]
    fn collapse_examples() {
        let g = collapse_coloring(colors(|x| x), 1);
        assert_eq!(g(0), Some(0));
        assert_eq!(g(7), Some(1));
        assert_eq!(collapse_coloring(colors(|_| 2), 3)(5), Some(2));
        assert_eq!(collapse_coloring(colors(|x| x), 0)(9), Some(0));
    }

    #[test]
    fn finite_fibers() {
        let one = shuffle_finite(naturals(), colors(|_| 0), vec![1]);
        assert_eq!(fiber_size(&one, 4, 0, 10), 1);
        assert_eq!(one.less(pair(3, 0), pair(4, 0), 0), Some(true));
        let m = shuffle_finite(naturals(), colors(|x| x % 2), vec![2, 3]);
        assert_eq!(fiber_size(&m, 4, 0, 10), 2);
        assert_eq!(fiber_size(&m, 5, 0, 10), 3);
        assert_eq!(m.less(pair(4, 0), pair(4, 1), 0), Some(true));
        assert_eq!(m.less(pair(4, 1), pair(5, 0), 0), Some(true));
        assert!(check_axioms(&m, 64, 0).is_ok());
    }

    #[test]
    fn all_fibers() {
        let m = shuffle_all(naturals(), colors(|x| if x == 4 { 0 } else { 3 }));
        assert_eq!(fiber_size(&m, 4, 0, 20), 5);
        assert_eq!(fiber_size(&m, 7, 0, 20), 3);
        assert_eq!(m.less(pair(4, 4), pair(5, 0), 0), Some(true));
    }

    #[test]
    fn pi2_and_sigma2() {
        let yes: Predicate3 = Arc::new(|_, _, _| true);
        let no: Predicate3 = Arc::new(|_, _, _| false);
        let m = shuffle_pi2(
            naturals(),
            colors(|x| if x < 3 { 0 } else { 6 }),
            yes.clone(),
            2,
        );
        assert_eq!(fiber_size(&m, 1, 100, 50), 2);
        assert_eq!(fiber_size(&m, 10, 100, 50), 6);
        let s = shuffle_sigma2(naturals(), colors(|x| if x == 2 { 0 } else { 3 }), yes);
        assert_eq!(fiber_size(&s, 2, 100, 50), 3);
        assert_eq!(fiber_size(&s, 10, 100, 50), 11);
        let s = shuffle_sigma2(naturals(), colors(|_| 3), no);
        assert_eq!(fiber_size(&s, 10, 1000, 50), 3);
        assert_eq!(s.contains(pair(10, 3), 1000), None);
    }

    #[test]
    fn least_element_check() {
        let r: Predicate3 = Arc::new(|k, a, b| b == 0 && a < k);
        assert!(verify_least_element(&r, 17, 17, 4).is_ok());
        assert!(verify_least_element(&r, 16, 16, 4).is_ok());
        assert!(verify_least_element(&r, 3, 16, 4).is_err());
        let r: Predicate3 = Arc::new(|k, a, _| k >= 1 && !(k == 5 && a == 3));
        assert!(verify_least_element(&r, 1, 16, 4).is_ok());
    }
}
