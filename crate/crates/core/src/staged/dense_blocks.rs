//! Enumeration of a function `θ` lying between `ψ` and `φ` far from both,
//! driven by covers that are retracted only when their input is enumerated
//! into `W`.

use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::clocked::{CeSet, ClockedFunction, Descriptor, Eval};
use crate::order::{interval_census, ComputableOrder};

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub stage: u64,
    /// Least number not covered.
    pub l0: u64,
    /// Least number whose cover was lost to a new member of `W`.
    pub l1: Option<u64>,
    pub k: u64,
    pub enumerated: Option<(u64, u64)>,
    /// Inputs whose cover level dropped at this stage.
    pub retracted: Vec<u64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CoverLedger {
    pub records: Vec<StageRecord>,
    /// For each `k` covered at the last stage: the least covering input and
    /// the stage its value was enumerated.
    pub final_covers: Vec<(u64, u64, u64)>,
}

#[derive(Clone)]
pub struct DenseBlocksRun {
    /// `n ↦ (θ(n), stage enumerated)`.
    pub graph: Vec<(u64, u64, u64)>,
    pub ledger: CoverLedger,
    pub stages: u64,
    theta: ClockedFunction,
}

impl DenseBlocksRun {
    /// `θ(n)` is found at budget `s` iff it was enumerated by stage `s`.
    pub fn theta(&self) -> &ClockedFunction {
        &self.theta
    }

    /// Least input covering `k` at the last stage.
    pub fn final_cover(&self, k: u64) -> Option<u64> {
        self.ledger
            .final_covers
            .iter()
            .find(|c| c.0 == k)
            .map(|c| c.1)
    }
}

struct Ctx<'a> {
    psi: &'a ClockedFunction,
    phi: &'a ClockedFunction,
    order: &'a dyn ComputableOrder,
    w: &'a CeSet,
}

impl Ctx<'_> {
    fn ends(&self, n: u64, s: u64) -> Option<(u64, u64)> {
        Some((self.psi.eval(n, s).value()?, self.phi.eval(n, s).value()?))
    }

    fn counts(&self, lo: u64, x: u64, hi: u64, s: u64) -> Option<u64> {
        let l = self.order;
        if l.less(lo, x, s) != Some(true) || l.less(x, hi, s) != Some(true) {
            return None;
        }
        Some(interval_census(l, lo, x, s, s).min(interval_census(l, x, hi, s, s)))
    }

    /// Largest `k` covered by `n` at stage `s`.
    fn level(&self, n: u64, x: u64, s: u64) -> Option<u64> {
        if self.w.contains_at(n, s) {
            return None;
        }
        let (lo, hi) = self.ends(n, s)?;
        self.counts(lo, x, hi, s)
    }
}

/// Runs stages `0..=stages`. At stage `s`, `k_s` is the least of `ℓ0` (least
/// uncovered number) and `ℓ1` (least number whose cover was just lost); the
/// least `n ≤ s` not in `W_s` without a value, with both ends halting within
/// `s` steps, gets the least `x ≤ s` strictly between them with at least
/// `k_s` elements of `[0, s]` on each side.
pub fn dense_blocks_theta(
    psi: &ClockedFunction,
    phi: &ClockedFunction,
    order: &dyn ComputableOrder,
    w: &CeSet,
    stages: u64,
) -> DenseBlocksRun {
    let ctx = Ctx { psi, phi, order, w };
    let mut theta: FxHashMap<u64, (u64, u64)> = FxHashMap::default();
    let mut dom: Vec<u64> = Vec::new();
    let mut prev_levels: FxHashMap<u64, u64> = FxHashMap::default();
    let mut ledger = CoverLedger::default();
    let mut levels: FxHashMap<u64, u64> = FxHashMap::default();
    for s in 0..=stages {
        levels.clear();
        for &n in &dom {
            if let Some(l) = ctx.level(n, theta[&n].0, s) {
                levels.insert(n, l);
            }
        }
        let l0 = levels.values().max().map_or(0, |m| m + 1);
        let mut retracted: Vec<u64> = prev_levels
            .iter()
            .filter(|(n, &lp)| levels.get(n).is_none_or(|&l| l < lp))
            .map(|(&n, _)| n)
            .collect();
        retracted.sort_unstable();
        let mut l1: Option<u64> = None;
        if s > 0 {
            for &n in &dom {
                if !(w.contains_at(n, s) && !w.contains_at(n, s - 1)) {
                    continue;
                }
                let Some(&lp) = prev_levels.get(&n) else {
                    continue;
                };
                let below = levels
                    .iter()
                    .filter(|(&m, _)| m < n)
                    .map(|(_, &l)| l + 1)
                    .max()
                    .unwrap_or(0);
                if below <= lp {
                    l1 = Some(l1.map_or(below, |c: u64| c.min(below)));
                }
            }
        }
        let k = l1.map_or(l0, |l| l.min(l0));
        let mut enumerated = None;
        'search: for n in 0..=s {
            if theta.contains_key(&n) || w.contains_at(n, s) {
                continue;
            }
            let Some((lo, hi)) = ctx.ends(n, s) else {
                continue;
            };
            for x in 0..=s {
                if order.contains(x, s) != Some(true) {
                    continue;
                }
                if ctx.counts(lo, x, hi, s).is_some_and(|c| c >= k) {
                    theta.insert(n, (x, s));
                    dom.push(n);
                    levels.insert(n, ctx.counts(lo, x, hi, s).unwrap());
                    enumerated = Some((n, x));
                    break 'search;
                }
            }
        }
        ledger.records.push(StageRecord {
            stage: s,
            l0,
            l1,
            k,
            enumerated,
            retracted,
        });
        prev_levels = levels.clone();
    }
    let top = levels.values().max().copied();
    if let Some(top) = top {
        for k in 0..=top {
            let n = levels
                .iter()
                .filter(|(_, &l)| l >= k)
                .map(|(&n, _)| n)
                .min()
                .unwrap();
            ledger.final_covers.push((k, n, theta[&n].1));
        }
    }
    let mut graph: Vec<(u64, u64, u64)> = theta.iter().map(|(&n, &(x, s))| (n, x, s)).collect();
    graph.sort_unstable();
    let table = Arc::new(theta);
    let theta_fn = ClockedFunction::from_fn(Descriptor::Rule("θ".into()), move |n, s| match table
        .get(&n)
    {
        Some(&(x, at)) if at <= s => Eval::Value(x),
        _ => Eval::Pending,
    });
    DenseBlocksRun {
        graph,
        ledger,
        stages,
        theta: theta_fn,
    }
}

/// Every retracted cover belongs to an input that entered `W` at that stage
/// or earlier, and every value lies strictly between the two ends.
pub fn audit_cover_ledger(
    run: &DenseBlocksRun,
    psi: &ClockedFunction,
    phi: &ClockedFunction,
    order: &dyn ComputableOrder,
    w: &CeSet,
) -> Result<(), String> {
    for r in &run.ledger.records {
        for &n in &r.retracted {
            if !w.contains_at(n, r.stage) {
                return Err(format!(
                    "stage {}: cover of {n} retracted while outside W",
                    r.stage
                ));
            }
        }
        if r.k != r.l1.map_or(r.l0, |l| l.min(r.l0)) {
            return Err(format!("stage {}: k is not min(l0, l1)", r.stage));
        }
    }
    for &(n, x, s) in &run.graph {
        let (Some(lo), Some(hi)) = (psi.eval(n, s).value(), phi.eval(n, s).value()) else {
            return Err(format!("θ({n}) enumerated before its ends halted"));
        };
        if order.less(lo, x, s) != Some(true) || order.less(x, hi, s) != Some(true) {
            return Err(format!("θ({n}) = {x} not strictly between {lo} and {hi}"));
        }
        if w.contains_at(n, s) {
            return Err(format!("θ({n}) enumerated after {n} entered W"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::naturals;

    fn w_odd_small() -> CeSet {
        CeSet::timestamped("odd<40", (1..40).step_by(2).map(|x| (x, x + 5)))
    }

    #[test]
    fn empty_interval_never_defined() {
        let n = naturals();
        let run = dense_blocks_theta(
            &ClockedFunction::constant(0),
            &ClockedFunction::constant(1),
            &*n,
            &CeSet::empty(),
            60,
        );
        assert!(run.graph.is_empty());
    }

    #[test]
    fn doubling_gap_covers_small_levels() {
        let n = naturals();
        let psi = ClockedFunction::constant(0);
        let phi = ClockedFunction::rule("2n", |n| 2 * n);
        let w = w_odd_small();
        let run = dense_blocks_theta(&psi, &phi, &*n, &w, 150);
        for k in 0..=5 {
            let c = run
                .final_cover(k)
                .unwrap_or_else(|| panic!("k={k} uncovered"));
            assert!(!w.contains_at(c, 150));
        }
        for &(m, x, _) in &run.graph {
            assert!(0 < x && x < 2 * m);
        }
        audit_cover_ledger(&run, &psi, &phi, &*n, &w).unwrap();
        assert!(run.ledger.records.iter().any(|r| !r.retracted.is_empty()));
    }
}
