//! Sums, products, reverses and finite orders.
//!
//! Sum elements are coded `⟨i, x⟩` with `x ∈ L_i`. The product `L₀L₁` has
//! elements `⟨x, a⟩` with `x ∈ L₁`, `a ∈ L₀`, ordered by `x` first.

use std::sync::Arc;

use super::{Components, ComputableOrder, Order, OrderTypeTag};
use crate::clocked::unpair;

pub struct Sum {
    pub parts: [Order; 2],
}

impl ComputableOrder for Sum {
    fn name(&self) -> String {
        format!("({} + {})", self.parts[0].name(), self.parts[1].name())
    }

    fn tag(&self) -> OrderTypeTag {
        OrderTypeTag::Sum(Box::new(self.parts[0].tag()), Box::new(self.parts[1].tag()))
    }

    fn contains(&self, z: u64, budget: u64) -> Option<bool> {
        let (i, x) = unpair(z);
        if i > 1 {
            return Some(false);
        }
        self.parts[i as usize].contains(x, budget)
    }

    fn less(&self, a: u64, b: u64, budget: u64) -> Option<bool> {
        let (i, x) = unpair(a);
        let (j, y) = unpair(b);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some(true),
            std::cmp::Ordering::Greater => Some(false),
            std::cmp::Ordering::Equal => self.parts[i.min(1) as usize].less(x, y, budget),
        }
    }

    fn components(&self) -> Option<Components> {
        Some(Components::Sum(self.parts.clone()))
    }
}

pub struct Product {
    /// `[L₀, L₁]`; `L₁` is the outer coordinate.
    pub factors: [Order; 2],
}

impl ComputableOrder for Product {
    fn name(&self) -> String {
        format!("{}·{}", self.factors[0].name(), self.factors[1].name())
    }

    fn tag(&self) -> OrderTypeTag {
        OrderTypeTag::Product(
            Box::new(self.factors[0].tag()),
            Box::new(self.factors[1].tag()),
        )
    }

    fn contains(&self, z: u64, budget: u64) -> Option<bool> {
        let (x, a) = unpair(z);
        match (
            self.factors[1].contains(x, budget),
            self.factors[0].contains(a, budget),
        ) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        }
    }

    fn less(&self, a: u64, b: u64, budget: u64) -> Option<bool> {
        let (x, p) = unpair(a);
        let (y, q) = unpair(b);
        if x == y {
            return self.factors[0].less(p, q, budget);
        }
        self.factors[1].less(x, y, budget)
    }

    fn components(&self) -> Option<Components> {
        Some(Components::Product(self.factors.clone()))
    }
}

pub struct Reverse {
    pub inner: Order,
}

impl ComputableOrder for Reverse {
    fn name(&self) -> String {
        format!("{}*", self.inner.name())
    }

    fn tag(&self) -> OrderTypeTag {
        match self.inner.tag() {
            OrderTypeTag::Omega => OrderTypeTag::OmegaStar,
            OrderTypeTag::OmegaStar => OrderTypeTag::Omega,
            t => OrderTypeTag::Reverse(Box::new(t)),
        }
    }

    fn contains(&self, x: u64, budget: u64) -> Option<bool> {
        self.inner.contains(x, budget)
    }

    fn less(&self, a: u64, b: u64, budget: u64) -> Option<bool> {
        self.inner.less(b, a, budget)
    }

    fn census_between(&self, a: u64, b: u64, horizon: u64, budget: u64) -> Option<u64> {
        self.inner.census_between(b, a, horizon, budget)
    }

    fn interval_members(&self, a: u64, b: u64, budget: u64) -> Option<Vec<u64>> {
        self.inner.interval_members(b, a, budget)
    }

    fn components(&self) -> Option<Components> {
        Some(Components::Reverse(self.inner.clone()))
    }
}

pub struct FiniteOrder {
    pub size: u64,
}

impl ComputableOrder for FiniteOrder {
    fn name(&self) -> String {
        format!("{}", self.size)
    }

    fn tag(&self) -> OrderTypeTag {
        OrderTypeTag::Finite(self.size)
    }

    fn contains(&self, x: u64, _budget: u64) -> Option<bool> {
        Some(x < self.size)
    }

    fn less(&self, a: u64, b: u64, _budget: u64) -> Option<bool> {
        Some(a < b)
    }
}

pub fn sum(l0: Order, l1: Order) -> Order {
    Arc::new(Sum { parts: [l0, l1] })
}

/// `L₀L₁`: replace each element of `L₁` by a copy of `L₀`.
pub fn product(l0: Order, l1: Order) -> Order {
    Arc::new(Product { factors: [l0, l1] })
}

pub fn reverse(l: Order) -> Order {
    Arc::new(Reverse { inner: l })
}

pub fn finite(k: u64) -> Order {
    Arc::new(FiniteOrder { size: k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clocked::pair;
    use crate::order::{naturals, naturals_reversed};

    #[test]
    fn sum_places_left_part_first() {
        let s = sum(naturals_reversed(), naturals());
        for x in 0..30 {
            for y in 0..30 {
                assert_eq!(s.less(pair(0, x), pair(1, y), 0), Some(true));
                assert_eq!(s.less(pair(1, y), pair(0, x), 0), Some(false));
            }
        }
        assert_eq!(s.contains(pair(2, 0), 0), Some(false));
    }

    #[test]
    fn two_times_omega() {
        // 2·ω: copies of 2 indexed by ℕ
        let p = product(finite(2), naturals());
        let mut elems: Vec<u64> = (0..20u64)
            .flat_map(|x| (0..2).map(move |a| pair(x, a)))
            .collect();
        elems.sort_by(|&u, &v| {
            if p.less(u, v, 0).unwrap() {
                std::cmp::Ordering::Less
            } else if u == v {
                std::cmp::Ordering::Equal
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let expected: Vec<u64> = (0..20).flat_map(|x| [pair(x, 0), pair(x, 1)]).collect();
        assert_eq!(elems, expected);
        assert_eq!(p.contains(pair(3, 2), 0), Some(false));
    }

    #[test]
    fn double_reverse_is_identity() {
        let r = reverse(reverse(naturals()));
        for a in 0..100 {
            for b in 0..100 {
                assert_eq!(r.less(a, b, 0), Some(a < b));
            }
        }
    }
}
