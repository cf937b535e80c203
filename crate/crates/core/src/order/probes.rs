//! Finite probes of a presentation: censuses, successor search, prefix dumps
//! and the linear-order axioms on decided members.

use serde::{Deserialize, Serialize};

use super::ComputableOrder;

/// A successor candidate found in `[0, B]` must stay the least candidate in
/// `[0, CONFIRM_FACTOR·(B+1)]`.
pub const CONFIRM_FACTOR: u64 = 8;

pub fn decided_members(l: &dyn ComputableOrder, horizon: u64, budget: u64) -> Vec<u64> {
    (0..=horizon)
        .filter(|&x| l.contains(x, budget) == Some(true))
        .collect()
}

fn lt(l: &dyn ComputableOrder, a: u64, b: u64, budget: u64) -> bool {
    l.less(a, b, budget) == Some(true)
}

/// Decided members of `[0, horizon]` strictly below `z`.
pub fn predecessor_census(l: &dyn ComputableOrder, z: u64, horizon: u64, budget: u64) -> u64 {
    if let Some(p) = l.predecessors(z, budget) {
        return p.iter().filter(|&&x| x <= horizon).count() as u64;
    }
    (0..=horizon)
        .filter(|&x| l.contains(x, budget) == Some(true) && lt(l, x, z, budget))
        .count() as u64
}

/// Decided members of `(a, b) ∩ [0, horizon]`; zero when `b ⪯ a`.
pub fn interval_census(l: &dyn ComputableOrder, a: u64, b: u64, horizon: u64, budget: u64) -> u64 {
    if let Some(c) = l.census_between(a, b, horizon, budget) {
        return c;
    }
    if let Some(m) = l.interval_members(a, b, budget) {
        return m.iter().filter(|&&x| x <= horizon).count() as u64;
    }
    if !lt(l, a, b, budget) {
        return 0;
    }
    (0..=horizon)
        .filter(|&x| {
            l.contains(x, budget) == Some(true) && lt(l, a, x, budget) && lt(l, x, b, budget)
        })
        .count() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Probe {
    Found(u64),
    NotFoundWithin,
}

fn least_above(l: &dyn ComputableOrder, a: u64, bound: u64, budget: u64) -> Option<u64> {
    let mut best: Option<u64> = None;
    for x in 0..=bound {
        if l.contains(x, budget) == Some(true) && lt(l, a, x, budget) {
            best = match best {
                Some(b) if !lt(l, x, b, budget) => Some(b),
                _ => Some(x),
            };
        }
    }
    best
}

/// Immediate-successor search around `a`.
///
/// Reports `Found(b)` only if `b` is the least member above `a` both in
/// `[0, horizon]` and in the confirmation range, and (when the presentation
/// lists intervals) nothing decided lies between.
pub fn successor_probe(l: &dyn ComputableOrder, a: u64, horizon: u64, budget: u64) -> Probe {
    let Some(b) = least_above(l, a, horizon, budget) else {
        return Probe::NotFoundWithin;
    };
    let confirm = CONFIRM_FACTOR.saturating_mul(horizon.saturating_add(1));
    if least_above(l, a, confirm, budget) != Some(b) {
        return Probe::NotFoundWithin;
    }
    if let Some(m) = l.interval_members(a, b, budget) {
        if !m.is_empty() {
            return Probe::NotFoundWithin;
        }
    }
    Probe::Found(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixDump {
    pub order: String,
    pub horizon: u64,
    pub budget: u64,
    /// Decided members of `[0, horizon]` in increasing order.
    pub elements: Vec<u64>,
    /// Numbers whose membership is still pending.
    pub pending: Vec<u64>,
}

pub fn dump_prefix(l: &dyn ComputableOrder, horizon: u64, budget: u64) -> PrefixDump {
    let mut elements = Vec::new();
    let mut pending = Vec::new();
    for x in 0..=horizon {
        match l.contains(x, budget) {
            Some(true) => elements.push(x),
            Some(false) => {}
            None => pending.push(x),
        }
    }
    elements.sort_by(|&a, &b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if lt(l, a, b, budget) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    PrefixDump {
        order: l.name(),
        horizon,
        budget,
        elements,
        pending,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    Reflexive(u64),
    Asymmetry(u64, u64),
    Totality(u64, u64),
    Transitivity(u64, u64, u64),
}

/// Irreflexivity, antisymmetry, totality and transitivity on every decided
/// triple from `[0, bound]`. Returns the number of members checked.
pub fn check_axioms(
    l: &dyn ComputableOrder,
    bound: u64,
    budget: u64,
) -> Result<usize, AxiomViolation> {
    let m = decided_members(l, bound, budget);
    let n = m.len();
    let mut rel = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = l.less(m[i], m[j], budget);
        }
    }
    for i in 0..n {
        if rel[i][i] == Some(true) {
            return Err(AxiomViolation::Reflexive(m[i]));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            match (rel[i][j], rel[j][i]) {
                (Some(true), Some(true)) => return Err(AxiomViolation::Asymmetry(m[i], m[j])),
                (Some(false), Some(false)) => return Err(AxiomViolation::Totality(m[i], m[j])),
                _ => {}
            }
            if rel[i][j] != Some(true) {
                continue;
            }
            for k in 0..n {
                if rel[j][k] == Some(true) && rel[i][k] == Some(false) {
                    return Err(AxiomViolation::Transitivity(m[i], m[j], m[k]));
                }
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::*;

    #[test]
    fn census_examples() {
        let n = naturals();
        assert_eq!(predecessor_census(&*n, 5, 5, 0), 5);
        assert_eq!(predecessor_census(&*n, 5, 50, 0), 5);
        assert_eq!(predecessor_census(&*naturals_reversed(), 5, 100, 0), 95);
        assert_eq!(interval_census(&*n, 3, 7, 100, 0), 3);
        assert_eq!(interval_census(&*n, 4, 4, 100, 0), 0);
    }

    #[test]
    fn integer_zero_has_growing_predecessors() {
        let z = integers();
        let zero = integer_code(0);
        let counts: Vec<u64> = [10, 20, 40, 80]
            .iter()
            .map(|&b| predecessor_census(&*z, zero, b, 0))
            .collect();
        assert!(counts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rational_interval_grows() {
        let q = rationals();
        let a = rational_code(0, 1).unwrap();
        let b = rational_code(1, 1).unwrap();
        let counts: Vec<u64> = [50, 100, 200, 400]
            .iter()
            .map(|&h| interval_census(&*q, a, b, h, 0))
            .collect();
        assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
    }

    #[test]
    fn successor_probe_examples() {
        assert_eq!(successor_probe(&*naturals(), 7, 20, 0), Probe::Found(8));
        let q = rationals();
        for h in [10, 50, 200] {
            for a in decided_members(&*q, h, 0) {
                assert_eq!(
                    successor_probe(&*q, a, h, 0),
                    Probe::NotFoundWithin,
                    "a={a} h={h}"
                );
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn rationals_never_report_successor(a in 0u64..2000, extra in 0u64..2000) {
            let q = rationals();
            if q.contains(a, 0) == Some(true) {
                proptest::prop_assert_eq!(successor_probe(&*q, a, a + extra, 0), Probe::NotFoundWithin);
            }
        }
    }

    #[test]
    fn axioms_hold_for_presentations() {
        let mut all = standard_presentations();
        all.push(sum(naturals_reversed(), naturals()));
        all.push(product(finite(2), naturals()));
        all.push(product(rationals(), integers()));
        all.push(finite(7));
        for l in all {
            assert!(check_axioms(&*l, 64, 0).is_ok(), "{}", l.name());
        }
    }

    #[test]
    fn prefix_of_naturals() {
        let d = dump_prefix(&*naturals(), 10, 0);
        assert_eq!(d.elements, (0..=10).collect::<Vec<_>>());
        assert!(d.pending.is_empty());
    }

    #[test]
    fn rational_prefix_is_dense() {
        let q = rationals();
        let d = dump_prefix(&*q, 40, 0);
        for w in d.elements.windows(2) {
            assert!(interval_census(&*q, w[0], w[1], 8 * 41, 0) > 0);
        }
    }
}
