//! Standard presentations of ℕ, ℕ*, ℤ and ℚ.
//!
//! ℤ: `2k ↦ k`, `2k+1 ↦ −(k+1)`.
//! ℚ: a reduced fraction `p/q` (`q ≥ 1`) has code `⟨z(p), q−1⟩` where `z` is
//! the ℤ code; non-reduced pairs are outside the domain.

use std::sync::Arc;

use num_integer::Integer;

use super::{reverse, Arithmetic, ComputableOrder, Order, OrderTypeTag};
use crate::clocked::{checked_pair, unpair};

#[derive(Clone, Copy, Debug, Default)]
pub struct Naturals;

impl ComputableOrder for Naturals {
    fn name(&self) -> String {
        "ℕ".into()
    }

    fn tag(&self) -> OrderTypeTag {
        OrderTypeTag::Omega
    }

    fn contains(&self, _x: u64, _budget: u64) -> Option<bool> {
        Some(true)
    }

    fn less(&self, a: u64, b: u64, _budget: u64) -> Option<bool> {
        Some(a < b)
    }

    fn census_between(&self, a: u64, b: u64, horizon: u64, _budget: u64) -> Option<u64> {
        if b <= a + 1 {
            return Some(0);
        }
        let top = (b - 1).min(horizon);
        Some(top.saturating_sub(a))
    }

    fn arithmetic(&self) -> Option<Arithmetic> {
        Some(Arithmetic::Naturals)
    }
}

pub fn integer_value(z: u64) -> i64 {
    if z.is_multiple_of(2) {
        (z / 2) as i64
    } else {
        -((z / 2) as i64) - 1
    }
}

pub fn integer_code(v: i64) -> u64 {
    if v >= 0 {
        2 * v as u64
    } else {
        2 * (-(v + 1)) as u64 + 1
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl ComputableOrder for Integers {
    fn name(&self) -> String {
        "ℤ".into()
    }

    fn tag(&self) -> OrderTypeTag {
        OrderTypeTag::Zeta
    }

    fn contains(&self, _x: u64, _budget: u64) -> Option<bool> {
        Some(true)
    }

    fn less(&self, a: u64, b: u64, _budget: u64) -> Option<bool> {
        Some(integer_value(a) < integer_value(b))
    }
}

/// Decodes a ℚ code into `(p, q)`; `None` if the pair is not reduced.
pub fn rational_value(z: u64) -> Option<(i64, u64)> {
    let (zp, qm) = unpair(z);
    let p = integer_value(zp);
    let q = qm + 1;
    (p.unsigned_abs().gcd(&q) == 1).then_some((p, q))
}

/// Code of `p/q` after reduction; `None` for `q = 0` or overflow.
pub fn rational_code(p: i64, q: i64) -> Option<u64> {
    if q == 0 {
        return None;
    }
    let (mut p, mut q) = if q < 0 { (-p, -q) } else { (p, q) };
    let g = p.unsigned_abs().gcd(&(q as u64)) as i64;
    if g > 1 {
        p /= g;
        q /= g;
    }
    checked_pair(integer_code(p), q as u64 - 1)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl ComputableOrder for Rationals {
    fn name(&self) -> String {
        "ℚ".into()
    }

    fn tag(&self) -> OrderTypeTag {
        OrderTypeTag::Eta
    }

    fn contains(&self, x: u64, _budget: u64) -> Option<bool> {
        Some(rational_value(x).is_some())
    }

    fn less(&self, a: u64, b: u64, _budget: u64) -> Option<bool> {
        let (p, q) = rational_value(a)?;
        let (r, s) = rational_value(b)?;
        Some((p as i128) * (s as i128) < (r as i128) * (q as i128))
    }
}

pub fn naturals() -> Order {
    Arc::new(Naturals)
}

pub fn naturals_reversed() -> Order {
    reverse(naturals())
}

pub fn integers() -> Order {
    Arc::new(Integers)
}

pub fn rationals() -> Order {
    Arc::new(Rationals)
}

pub fn standard_presentations() -> Vec<Order> {
    vec![naturals(), naturals_reversed(), integers(), rationals()]
}
