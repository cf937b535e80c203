//! Immediate successors, far-apart pairs and the witnesses built for them.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{
    dyadic_segments, power_compare, tail_verdict, Evidence, Outcome, PowerContext, PowerElement,
    PowerError, Relation, Verdict, MIN_SEGMENTS,
};
use crate::clocked::{ClockedFunction, Descriptor, Eval};
use crate::order::{interval_census, Arithmetic};
use crate::power::classify::{classify_standard, StandardClass};

/// Whether some decided member lies strictly between `a ≺ b`.
fn gap_nonempty(ctx: &PowerContext, a: u64, b: u64) -> bool {
    let base = ctx.base();
    let budget = ctx.budget();
    if let Some(c) = base.census_between(a, b, u64::MAX, budget) {
        return c > 0;
    }
    if let Some(m) = base.interval_members(a, b, budget) {
        return !m.is_empty();
    }
    (0..=ctx.pair_horizon(a, b)).any(|z| {
        z != a
            && z != b
            && ctx.member(z) == Some(true)
            && ctx.lt(a, z) == Some(true)
            && ctx.lt(z, b) == Some(true)
    })
}

/// Least-coded decided member strictly between `a` and `b` satisfying `pred`.
pub(crate) fn first_between(
    ctx: &PowerContext,
    a: u64,
    b: u64,
    pred: impl Fn(u64) -> bool,
) -> Option<u64> {
    if ctx.lt(a, b) != Some(true) {
        return None;
    }
    if let Some(m) = ctx.base().interval_members(a, b, ctx.budget()) {
        return m.into_iter().filter(|&z| pred(z)).min();
    }
    (0..=ctx.pair_horizon(a, b)).find(|&z| {
        z != a
            && z != b
            && ctx.member(z) == Some(true)
            && ctx.lt(a, z) == Some(true)
            && ctx.lt(z, b) == Some(true)
            && pred(z)
    })
}

/// Evaluates a witness on the window and rejects it if it is undefined at
/// any window index from `cut` on.
pub(crate) fn witness_on_tail(
    ctx: &Arc<PowerContext>,
    f: ClockedFunction,
    cut: usize,
) -> Result<PowerElement, PowerError> {
    let w = ctx.window();
    let failing: Vec<u64> = (cut..w.len())
        .filter(|&i| {
            f.eval(w[i], ctx.budget())
                .value()
                .is_none_or(|v| ctx.member(v) != Some(true))
        })
        .map(|i| w[i])
        .collect();
    if !failing.is_empty() {
        return Err(PowerError::NotFound { failing });
    }
    PowerElement::new(ctx, f)
}

/// `y(n)` is the immediate successor of `x(n)` on the tail. Counts carry
/// the frequency of each judgment.
pub fn immediate_successor_test(
    x: &PowerElement,
    y: &PowerElement,
) -> Result<Verdict<bool>, PowerError> {
    x.check_shared(y)?;
    let ctx = x.context();
    let judgments: Vec<Option<bool>> = x
        .values()
        .iter()
        .zip(y.values())
        .map(|(a, b)| {
            let (a, b) = ((*a)?, (*b)?);
            if a == b || !ctx.lt(a, b)? {
                return Some(false);
            }
            Some(!gap_nonempty(ctx, a, b))
        })
        .collect();
    Ok(tail_verdict(ctx.window(), &judgments, ctx.budget()))
}

/// `x ≪ y`: interval censuses grow without bound.
///
/// Yes when, over the dyadic segments (earliest first), the least census in
/// segment `j` exceeds `j` and these minima strictly increase. No when every
/// census in the upper half of the window is defined and bounded by the
/// largest census in the lower segments. Undecided otherwise.
pub fn far_apart_test(x: &PowerElement, y: &PowerElement) -> Result<Verdict<bool>, PowerError> {
    x.check_shared(y)?;
    let ctx = x.context();
    let w = ctx.window();
    let len = w.len();
    let segs = dyadic_segments(len);
    let mut counts = BTreeMap::new();
    let mut ev = Evidence {
        window_len: len,
        cut: len,
        budget: ctx.budget(),
        ..Default::default()
    };
    if segs.len() < MIN_SEGMENTS {
        counts.insert("segments".into(), segs.len() as u64);
        ev.counts = counts;
        return Ok(Verdict {
            outcome: Outcome::Undecided,
            evidence: ev,
        });
    }
    let start = segs[0].start;
    let census: Vec<Option<u64>> = (start..len)
        .map(|i| {
            let (a, b) = (x.values()[i]?, y.values()[i]?);
            if a != b {
                ctx.lt(a, b)?;
            }
            Some(interval_census(
                ctx.base().as_ref(),
                a,
                b,
                ctx.pair_horizon(a, b),
                ctx.budget(),
            ))
        })
        .collect();
    let at = |i: usize| census[i - start];
    let mut minima = Vec::new();
    for (j, r) in segs.iter().enumerate() {
        let vals: Option<Vec<u64>> = r.clone().map(at).collect();
        match vals {
            Some(v) => {
                let (lo, hi) = (*v.iter().min().unwrap(), *v.iter().max().unwrap());
                counts.insert(format!("segment{j}.min"), lo);
                counts.insert(format!("segment{j}.max"), hi);
                minima.push(Some(lo));
            }
            None => minima.push(None),
        }
    }
    let undefined = census.iter().filter(|c| c.is_none()).count() as u64;
    counts.insert("undefined".into(), undefined);
    let ramp_ok = minima
        .iter()
        .enumerate()
        .all(|(j, m)| m.is_some_and(|m| m > j as u64))
        && minima.windows(2).all(|p| p[0] < p[1]);
    let half = len / 2;
    let upper: Option<Vec<u64>> = (half..len).map(at).collect();
    let lower_max = (start..half).filter_map(at).max().unwrap_or(0);
    ev.counts = counts;
    ev.dissenting = (start..len).filter(|&i| at(i).is_none()).collect();
    if ramp_ok {
        ev.cut = start;
        ev.cut_element = Some(w[start]);
        ev.agreeing = len - start;
        return Ok(Verdict {
            outcome: Outcome::Decided(true),
            evidence: ev,
        });
    }
    if let Some(u) = upper {
        if u.iter().all(|&c| c <= lower_max) {
            ev.cut = half;
            ev.cut_element = Some(w[half]);
            ev.agreeing = len - half;
            return Ok(Verdict {
                outcome: Outcome::Decided(false),
                evidence: ev,
            });
        }
    }
    Ok(Verdict {
        outcome: Outcome::Undecided,
        evidence: ev,
    })
}

/// First element found strictly between `x(n)` and `y(n)`, searching codes
/// in increasing order.
pub fn successor_witness_search(
    x: &PowerElement,
    y: &PowerElement,
) -> Result<PowerElement, PowerError> {
    let v = power_compare(x, y)?;
    if !v.is(&Relation::Less) {
        return Err(PowerError::Precondition(format!(
            "{} ≺ {} is not decided",
            x.label(),
            y.label()
        )));
    }
    let ctx = Arc::clone(x.context());
    let (xr, yr) = (x.representative().clone(), y.representative().clone());
    let c = Arc::clone(&ctx);
    let name = format!("between({}, {})", x.label(), y.label());
    let theta = ClockedFunction::from_fn(Descriptor::Rule(name), move |n, s| {
        let (Eval::Value(a), Eval::Value(b)) = (xr.eval(n, s), yr.eval(n, s)) else {
            return Eval::Pending;
        };
        first_between(&c, a, b, |_| true).into()
    });
    witness_on_tail(&ctx, theta, v.evidence.cut)
}

/// `n ↦ x(n) + 1` over the standard naturals.
pub fn successor_witness(x: &PowerElement) -> Result<PowerElement, PowerError> {
    let ctx = x.context();
    match ctx.base().arithmetic() {
        Some(Arithmetic::Naturals) => {
            let f = x.representative().map("succ", |v| v + 1);
            PowerElement::labeled(ctx, f, format!("{} + 1", x.label()))
        }
        _ => Err(PowerError::UnsupportedBase(ctx.base().name())),
    }
}

/// `n ↦ x(n) ∸ 1` over the standard naturals; `x` must be nonzero on the
/// tail.
pub fn predecessor_witness(x: &PowerElement) -> Result<PowerElement, PowerError> {
    let ctx = x.context();
    if !matches!(ctx.base().arithmetic(), Some(Arithmetic::Naturals)) {
        return Err(PowerError::UnsupportedBase(ctx.base().name()));
    }
    let nonzero: Vec<Option<bool>> = x.values().iter().map(|v| v.map(|v| v != 0)).collect();
    if !tail_verdict(ctx.window(), &nonzero, ctx.budget()).is(&true) {
        return Err(PowerError::Precondition(format!(
            "{} is the least element",
            x.label()
        )));
    }
    let f = x.representative().map("pred", |v| v.saturating_sub(1));
    PowerElement::labeled(ctx, f, format!("{} ∸ 1", x.label()))
}

/// `⌊(x(n) + y(n))/2⌋`; on an even skeleton both ends are first moved to
/// even points and the midpoint is rounded up to even.
pub fn midpoint_witness(x: &PowerElement, y: &PowerElement) -> Result<PowerElement, PowerError> {
    let ctx = x.context();
    if !far_apart_test(x, y)?.is(&true) {
        return Err(PowerError::Precondition(format!(
            "{} ≪ {} is not decided",
            x.label(),
            y.label()
        )));
    }
    let label = format!("mid({}, {})", x.label(), y.label());
    let f = match ctx.base().arithmetic() {
        Some(Arithmetic::Naturals) => x.representative().zip(y.representative(), "mid", |a, b| {
            Some(((a as u128 + b as u128) / 2) as u64)
        }),
        Some(Arithmetic::EvenSkeleton(f)) => {
            let (xr, yr) = (x.representative().clone(), y.representative().clone());
            let evenize = move |v: u64, s: u64| -> Eval {
                if v.is_multiple_of(2) {
                    Eval::Value(v)
                } else {
                    match f.eval((v - 1) / 2, s) {
                        Eval::Value(a) => Eval::Value(2 * a + 2),
                        Eval::Pending => Eval::Pending,
                    }
                }
            };
            ClockedFunction::from_fn(Descriptor::Rule(label.clone()), move |n, s| {
                let (Eval::Value(a), Eval::Value(b)) = (xr.eval(n, s), yr.eval(n, s)) else {
                    return Eval::Pending;
                };
                let (Eval::Value(a), Eval::Value(b)) = (evenize(a, s), evenize(b, s)) else {
                    return Eval::Pending;
                };
                let m = (a + b) / 2;
                Eval::Value(if m % 2 == 0 { m } else { m + 1 })
            })
        }
        None => return Err(PowerError::UnsupportedBase(ctx.base().name())),
    };
    PowerElement::labeled(ctx, f, label)
}

/// `x_0 ≺ x_1 ≺ …` with `x_0` the least-coded member and `x_{i+1}` the
/// least-coded member above `x_i`.
#[derive(Clone, Debug)]
pub struct Ladder {
    points: Vec<u64>,
    next_code: u64,
    limit: u64,
}

impl Ladder {
    fn start(ctx: &PowerContext, limit: u64) -> Result<Self, PowerError> {
        let x0 = (0..=limit)
            .find(|&z| ctx.member(z) == Some(true))
            .ok_or(PowerError::LadderExhausted { limit })?;
        Ok(Ladder {
            points: vec![x0],
            next_code: x0 + 1,
            limit,
        })
    }

    /// Every code below `next_code` is a non-member or `⪯` the top rung.
    fn extend(&mut self, ctx: &PowerContext) -> Result<(), PowerError> {
        let top = *self.points.last().unwrap();
        let mut z = self.next_code;
        while z <= self.limit {
            if ctx.member(z) == Some(true) && ctx.lt(top, z) == Some(true) {
                self.points.push(z);
                self.next_code = z + 1;
                return Ok(());
            }
            z += 1;
        }
        Err(PowerError::LadderExhausted { limit: self.limit })
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    /// The `j` with `x_j ⪯ v ≺ x_{j+1}`, if the ladder reaches past `v`.
    fn index_of(&self, ctx: &PowerContext, v: u64) -> Option<usize> {
        let le = |p: u64| -> Option<bool> { Some(p == v || ctx.lt(p, v)?) };
        if !le(self.points[0])? || le(*self.points.last().unwrap())? {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.points.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if le(self.points[mid])? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

#[derive(Clone, Debug)]
pub struct Flanks {
    pub ladder: Arc<Ladder>,
    /// `x_i` where `x_{2i} ⪯ x(n) ≺ x_{2i+2}`.
    pub lower: PowerElement,
    /// `x_{2i}` where `x_i ⪯ x(n) ≺ x_{i+1}`.
    pub upper: PowerElement,
}

/// Nonstandard elements far below and far above `x`, read off the ladder.
pub fn flank_witnesses(x: &PowerElement) -> Result<Flanks, PowerError> {
    if !matches!(classify_standard(x), StandardClass::Nonstandard { .. }) {
        return Err(PowerError::Precondition(format!(
            "{} is not shown nonstandard",
            x.label()
        )));
    }
    let ctx = Arc::clone(x.context());
    let vals: Vec<u64> = x.values().iter().flatten().copied().collect();
    let maxv = vals.iter().copied().max().unwrap_or(0);
    let mut ladder = Ladder::start(&ctx, ctx.pair_horizon(maxv, maxv))?;
    let mut jmax = 0;
    for &v in &vals {
        loop {
            let top = *ladder.points.last().unwrap();
            if ctx.lt(v, top) == Some(true) {
                break;
            }
            ladder.extend(&ctx)?;
        }
        if let Some(j) = ladder.index_of(&ctx, v) {
            jmax = jmax.max(j);
        }
    }
    while ladder.points.len() <= 2 * jmax {
        ladder.extend(&ctx)?;
    }
    let ladder = Arc::new(ladder);
    let make = |name: &str, pick: fn(usize) -> usize| {
        let (l, c, r) = (
            Arc::clone(&ladder),
            Arc::clone(&ctx),
            x.representative().clone(),
        );
        let label = format!("{name}({})", x.label());
        let f = ClockedFunction::from_fn(Descriptor::Rule(label.clone()), move |n, s| {
            let Eval::Value(v) = r.eval(n, s) else {
                return Eval::Pending;
            };
            l.index_of(&c, v)
                .and_then(|j| l.points.get(pick(j)).copied())
                .into()
        });
        PowerElement::labeled(&ctx, f, label)
    };
    let lower = make("flank-", |j| j / 2)?;
    let upper = make("flank+", |j| 2 * j)?;
    Ok(Flanks {
        ladder,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{rational_code, rationals};
    use crate::power::tests::{nat_ctx, window};
    use crate::power::{canonical_embed, Outcome};
    use crate::staged::build_noncomputable_successor_copy;

    fn el(ctx: &Arc<PowerContext>, name: &str, f: fn(u64) -> u64) -> PowerElement {
        PowerElement::new(ctx, ClockedFunction::rule(name, f)).unwrap()
    }

    #[test]
    fn immediate_successor_examples() {
        let ctx = nat_ctx(128);
        let x = el(&ctx, "sq", |n| n * n);
        let y = successor_witness(&x).unwrap();
        let v = immediate_successor_test(&x, &y).unwrap();
        assert!(v.is(&true));
        assert_eq!(v.evidence.counts["true"], 128);
        assert!(immediate_successor_test(&x, &x).unwrap().is(&false));
        let q = PowerContext::new(rationals(), window((0..64).collect(), 64), 10);
        let a = el(&q, "n/1", |n| rational_code(n as i64, 1).unwrap());
        let b = el(&q, "(n+1)/1", |n| rational_code(n as i64 + 1, 1).unwrap());
        assert!(immediate_successor_test(&a, &b).unwrap().is(&false));
    }

    #[test]
    fn predecessor_of_least_is_refused() {
        let ctx = nat_ctx(64);
        let zero = canonical_embed(&ctx, 0).unwrap();
        assert!(matches!(
            predecessor_witness(&zero),
            Err(PowerError::Precondition(_))
        ));
        let x = el(&ctx, "2n", |n| 2 * n);
        let p = predecessor_witness(&x).unwrap();
        assert!(immediate_successor_test(&p, &x).unwrap().is(&true));
    }

    #[test]
    fn far_apart_examples() {
        let ctx = nat_ctx(128);
        let id = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        let double = el(&ctx, "2n", |n| 2 * n);
        let v = far_apart_test(&id, &double).unwrap();
        assert!(v.is(&true));
        // census n−1 at the start of each segment
        assert_eq!(v.evidence.counts["segment0.min"], 7);
        assert!(far_apart_test(&id, &el(&ctx, "n+3", |n| n + 3))
            .unwrap()
            .is(&false));
        assert!(far_apart_test(&id, &id).unwrap().is(&false));
        assert!(far_apart_test(&double, &id).unwrap().is(&false));
    }

    #[test]
    fn search_examples() {
        let ctx = nat_ctx(64);
        let id = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        let t = successor_witness_search(&id, &el(&ctx, "n+2", |n| n + 2)).unwrap();
        // oracle: the only number strictly between n and n+2
        assert!(t
            .values()
            .iter()
            .enumerate()
            .all(|(n, v)| *v == Some(n as u64 + 1)));
        match successor_witness_search(&id, &el(&ctx, "n+1", |n| n + 1)) {
            Err(PowerError::NotFound { failing }) => assert_eq!(failing.len(), 64),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            successor_witness_search(&id, &id),
            Err(PowerError::Precondition(_))
        ));
    }

    #[test]
    fn midpoint_examples() {
        let ctx = nat_ctx(128);
        let id = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        let quad = el(&ctx, "4n", |n| 4 * n);
        let m = midpoint_witness(&id, &quad).unwrap();
        assert!(m
            .values()
            .iter()
            .enumerate()
            .all(|(n, v)| *v == Some(5 * n as u64 / 2)));
        assert!(far_apart_test(&id, &m).unwrap().is(&true));
        assert!(far_apart_test(&m, &quad).unwrap().is(&true));
        let near = el(&ctx, "n+3", |n| n + 3);
        assert!(matches!(
            midpoint_witness(&id, &near),
            Err(PowerError::Precondition(_))
        ));
        let q = PowerContext::new(rationals(), window((0..64).collect(), 64), 10);
        let a = el(&q, "0", |_| 0);
        assert!(matches!(
            midpoint_witness(&a, &a),
            Err(PowerError::Precondition(_))
        ));
    }

    #[test]
    fn midpoint_on_an_even_skeleton() {
        // f(k) = k: 2k+1 sits right after 2k
        let copy = build_noncomputable_successor_copy(ClockedFunction::identity());
        let base: crate::order::Order = Arc::new(copy);
        let ctx = PowerContext::new(base, window((0..64).collect(), 64), 100);
        let x = el(&ctx, "2n+1", |n| 2 * n + 1);
        let y = el(&ctx, "8n", |n| 8 * n);
        let m = midpoint_witness(&x, &y).unwrap();
        for (n, v) in m.values().iter().enumerate() {
            let n = n as u64;
            // oracle: ends 2n+2 and 8n, midpoint 5n+1 rounded up to even
            let mid = (2 * n + 2 + 8 * n) / 2;
            assert_eq!(*v, Some(mid + mid % 2));
        }
        assert!(far_apart_test(&x, &m).unwrap().is(&true));
        assert!(far_apart_test(&m, &y).unwrap().is(&true));
    }

    #[test]
    fn flanks_over_naturals() {
        let ctx = nat_ctx(128);
        let id = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        let fl = flank_witnesses(&id).unwrap();
        assert_eq!(&fl.ladder.points()[..5], &[0, 1, 2, 3, 4]);
        for (n, (lo, hi)) in fl.lower.values().iter().zip(fl.upper.values()).enumerate() {
            assert_eq!(*lo, Some(n as u64 / 2));
            assert_eq!(*hi, Some(2 * n as u64));
        }
        assert!(far_apart_test(&fl.lower, &id).unwrap().is(&true));
        assert!(far_apart_test(&id, &fl.upper).unwrap().is(&true));
        let embed = canonical_embed(&ctx, 5).unwrap();
        assert!(matches!(
            flank_witnesses(&embed),
            Err(PowerError::Precondition(_))
        ));
    }

    #[test]
    fn flank_lower_is_below() {
        let ctx = nat_ctx(128);
        let x = el(&ctx, "n^2", |n| n * n);
        let fl = flank_witnesses(&x).unwrap();
        for (a, b) in fl.lower.values().iter().zip(x.values()) {
            assert!(a.unwrap() <= b.unwrap());
        }
        let v = power_compare(&fl.lower, &x).unwrap();
        assert_eq!(v.outcome, Outcome::Decided(Relation::Less));
    }
}
