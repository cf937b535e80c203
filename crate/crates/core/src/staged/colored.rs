//! A colored copy of ω in which, between the values of any two total
//! functions, eventually every small color appears.
//!
//! Requirement `⟨p,N⟩` watches the function pair `(φ_{ℓ(p)}, φ_{r(p)})` with
//! threshold guess `N`. When it acts for input `n` with values `x ≺ y`, it
//! places a chain colored `0..=max(x,y)` immediately below `y`, drawing the new
//! elements from the cell of the bit partitions chosen by the most recent
//! sides of all lower-indexed function pairs.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;
use thiserror::Error;

use super::breaker::PrefixMax;
use super::partition::cell_pattern;
use super::{ActionKind, ActionWitness, Elem, StagedOrder};
use crate::clocked::pairing::{pair, unpair};
use crate::clocked::{CeSet, Numbering, PhiCache};
use crate::order::OrderTypeTag;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoredError {
    #[error("stage {stage}: new element exceeds 128 bits ({bits} fixed bits)")]
    ElementOverflow { stage: u64, bits: u32 },
}

#[derive(Clone, Debug)]
pub struct ColoredConfig {
    pub numbering: Numbering,
    pub stages: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ColoredStats {
    pub stages: u64,
    pub actions: usize,
    pub elements: usize,
    /// Elements too large for the `u64` interface.
    pub unaddressable: usize,
    pub max_fixed_bits: u32,
}

fn bit(v: u64, i: u64) -> u8 {
    if i < 64 {
        ((v >> i) & 1) as u8
    } else {
        0
    }
}

/// `max {q : ⟨q,0⟩ ≤ z}`.
pub(crate) fn top_pair_index(z: u64) -> u64 {
    let mut q = 0;
    while pair(q + 1, 0) <= z {
        q += 1;
    }
    q
}

/// Most recent sides used by any `⟨q,M⟩ ≤ z`, default `(0,0)`.
pub(crate) fn recent_sides(history: &[Vec<(u64, (u8, u8))>], q: u64, z: u64) -> (u8, u8) {
    history
        .get(q as usize)
        .and_then(|h| h.iter().rev().find(|(m, _)| pair(q, *m) <= z))
        .map_or((0, 0), |(_, s)| *s)
}

struct Values {
    vals: Vec<u64>,
    tried_at: u64,
}

struct Runner<'a> {
    o: StagedOrder,
    phi: PhiCache,
    values: FxHashMap<u64, Values>,
    w: &'a CeSet,
    in_w: Vec<bool>,
    tau: PrefixMax,
    sat_by_input: FxHashMap<u64, Vec<bool>>,
    sat_values: FxHashSet<(u64, u64)>,
    history: Vec<Vec<(u64, (u8, u8))>>,
    cursors: FxHashMap<(u32, u128), u128>,
    stats: ColoredStats,
}

impl Runner<'_> {
    /// Halting prefix of `φ_{e,s}` on `0..=s`.
    fn prefix(&mut self, e: u64, s: u64) -> usize {
        let v = self.values.entry(e).or_insert(Values {
            vals: Vec::new(),
            tried_at: u64::MAX,
        });
        if v.tried_at != s {
            v.tried_at = s;
            while (v.vals.len() as u64) <= s {
                match self.phi.eval(e, v.vals.len() as u64, s).value() {
                    Some(x) => v.vals.push(x),
                    None => break,
                }
            }
        }
        v.vals.len()
    }

    fn saturated(&mut self, x: u64, y: u64) -> bool {
        if self.sat_values.contains(&(x, y)) {
            return true;
        }
        let c = x.max(y) as usize;
        let Some(mid) = self.o.between(x as Elem, y as Elem) else {
            return false;
        };
        let mut seen = vec![false; c + 1];
        let mut count = 0;
        for k in mid {
            let col = self.o.color(k).unwrap_or(0) as usize;
            if col <= c && !seen[col] {
                seen[col] = true;
                count += 1;
            }
        }
        let full = count == c + 1;
        if full {
            self.sat_values.insert((x, y));
        }
        full
    }

    /// Lexicographically least action witness `(a, b, n)` for `⟨p,N⟩`.
    fn witness(&mut self, z: u64, s: u64) -> Option<(u8, u8, u64)> {
        let (p, big_n) = unpair(z);
        let (l, r) = unpair(p);
        let hi = self.prefix(l, s).min(self.prefix(r, s)) as u64;
        if hi == 0 || big_n >= hi {
            return None;
        }
        let tau = self.tau.get(&self.o, z);
        let mut bad_l = [false; 2];
        let mut bad_r = [false; 2];
        let mut best: [Option<u64>; 4] = [None; 4];
        for n in big_n..hi.min(s + 1) {
            let x = self.values[&l].vals[n as usize];
            let y = self.values[&r].vals[n as usize];
            let a = bit(x, 2 * p);
            let b = bit(y, 2 * p + 1);
            if !self.in_w[n as usize] {
                bad_l[1 - a as usize] = true;
                bad_r[1 - b as usize] = true;
            }
            let idx = (2 * a + b) as usize;
            if best[idx].is_none()
                && !bad_l[a as usize]
                && !bad_r[b as usize]
                && self.demands(p, n, x, y, tau)
            {
                best[idx] = Some(n);
                if idx == 0 {
                    break;
                }
            }
            let open = (0..4).any(|i| best[i].is_none() && !bad_l[i / 2] && !bad_r[i % 2]);
            if !open {
                break;
            }
        }
        (0..4).find_map(|i| best[i].map(|n| ((i / 2) as u8, (i % 2) as u8, n)))
    }

    /// Conditions on the values: both present, `x ≺ y`, a color missing
    /// between them, and `x` above every element of `0..=z`.
    fn demands(&mut self, p: u64, n: u64, x: u64, y: u64, tau: Elem) -> bool {
        let sat = self.sat_by_input.entry(p).or_default();
        if sat.get(n as usize).copied().unwrap_or(false) {
            return false;
        }
        if self.o.precedes(x as Elem, y as Elem) != Some(true)
            || self.o.precedes(tau, x as Elem) != Some(true)
        {
            return false;
        }
        if self.saturated(x, y) {
            let sat = self.sat_by_input.get_mut(&p).unwrap();
            if sat.len() <= n as usize {
                sat.resize(n as usize + 1, false);
            }
            sat[n as usize] = true;
            return false;
        }
        true
    }

    fn act(&mut self, z: u64, s: u64, (a, b, n): (u8, u8, u64)) -> Result<(), ColoredError> {
        let (p, big_n) = unpair(z);
        let (l, r) = unpair(p);
        let x = self.values[&l].vals[n as usize];
        let y = self.values[&r].vals[n as usize];
        if self.history.len() <= p as usize {
            self.history.resize(p as usize + 1, Vec::new());
        }
        self.history[p as usize].push((big_n, (a, b)));
        let top = top_pair_index(z);
        let cell: Vec<(u8, u8)> = (0..=top)
            .map(|q| recent_sides(&self.history, q, z))
            .collect();
        let complements: Vec<(u8, u8)> = cell.iter().map(|&(a, b)| (1 - a, 1 - b)).collect();
        let (pat, bits) = cell_pattern(&complements);
        if bits >= 128 {
            return Err(ColoredError::ElementOverflow { stage: s, bits });
        }
        self.stats.max_fixed_bits = self.stats.max_fixed_bits.max(bits);
        let c = x.max(y);
        let cur = self.cursors.entry((bits, pat)).or_insert(0);
        let mut chain = Vec::with_capacity(c as usize + 1);
        while chain.len() as u64 <= c {
            let k = cur
                .checked_shl(bits)
                .filter(|v| v >> bits == *cur)
                .and_then(|v| v.checked_add(pat))
                .ok_or(ColoredError::ElementOverflow { stage: s, bits })?;
            *cur += 1;
            if !self.o.has(k) {
                chain.push(k);
            }
        }
        self.stats.unaddressable += chain.iter().filter(|&&k| k > u64::MAX as Elem).count();
        let witness = ActionWitness {
            p,
            threshold: big_n,
            sides: (a, b),
            input: n,
            low: x as Elem,
            high: y as Elem,
            cell,
        };
        self.o
            .insert_chain_before(y as Elem, chain, z, ActionKind::Dense { witness });
        self.sat_values.insert((x, y));
        self.stats.actions += 1;
        Ok(())
    }
}

/// Runs `stages` stages against the enumeration `w` of the complement of the
/// cohesive set.
pub fn build_colored_dense(
    numbering: Numbering,
    w: &CeSet,
    stages: u64,
) -> Result<(StagedOrder, ColoredStats), ColoredError> {
    let mut run = Runner {
        o: StagedOrder::start("colored-dense", OrderTypeTag::Omega),
        phi: PhiCache::new(numbering),
        values: FxHashMap::default(),
        w,
        in_w: Vec::new(),
        tau: PrefixMax::new(),
        sat_by_input: FxHashMap::default(),
        sat_values: FxHashSet::default(),
        history: Vec::new(),
        cursors: FxHashMap::default(),
        stats: ColoredStats::default(),
    };
    for s in 1..=stages {
        run.o.begin_stage(s);
        run.in_w.resize(s as usize + 1, false);
        for m in 0..=s {
            if !run.in_w[m as usize] && run.w.contains_at(m, s) {
                run.in_w[m as usize] = true;
            }
        }
        for z in 0..s {
            if let Some(wit) = run.witness(z, s) {
                run.act(z, s, wit)?;
            }
        }
    }
    run.stats.stages = stages;
    run.stats.elements = run.o.len();
    Ok((run.o, run.stats))
}

/// Re-verifies each action against the order as it stood before it: both
/// functions halt on `0..=n` within the stage, the sides match the values,
/// wrong-side inputs in `[N, n]` lie in `W_s`, the values are present and
/// ordered with a color missing between them, the lower value lies above
/// all of `0..=⟨p,N⟩`, the cell sides are the most recent ones, and the new
/// elements are the least unused members of that cell colored `0..=c`.
pub fn audit_colored(o: &StagedOrder, numbering: Numbering, w: &CeSet) -> Result<usize, String> {
    let mut phi = PhiCache::new(numbering);
    let mut order: Vec<Elem> = Vec::new();
    let mut color: FxHashMap<Elem, u64> = FxHashMap::default();
    let mut history: Vec<Vec<(u64, (u8, u8))>> = Vec::new();
    let mut checked = 0;
    for act in o.trace() {
        let s = act.stage;
        match &act.kind {
            ActionKind::Append => {
                for (&k, &c) in act.added.iter().zip(&act.colors) {
                    order.push(k);
                    color.insert(k, c);
                }
            }
            ActionKind::Break { .. } => return Err(format!("stage {s}: unexpected break action")),
            ActionKind::Dense { witness: wt } => {
                let z = act.pair.ok_or("dense action without pair")?;
                let err = |m: &str| format!("stage {s}, pair {z}, input {}: {m}", wt.input);
                let (p, big_n) = unpair(z);
                let (l, r) = unpair(p);
                let n = wt.input;
                if (p, big_n) != (wt.p, wt.threshold) || n < big_n || n > s {
                    return Err(err("pair or input out of range"));
                }
                for m in 0..=n {
                    let (Some(vx), Some(vy)) =
                        (phi.eval(l, m, s).value(), phi.eval(r, m, s).value())
                    else {
                        return Err(err("function not halted on prefix"));
                    };
                    if m == n && (vx as Elem != wt.low || vy as Elem != wt.high) {
                        return Err(err("values differ"));
                    }
                    if m == n && (bit(vx, 2 * p), bit(vy, 2 * p + 1)) != wt.sides {
                        return Err(err("sides do not match the values"));
                    }
                    if m >= big_n
                        && (bit(vx, 2 * p) != wt.sides.0 || bit(vy, 2 * p + 1) != wt.sides.1)
                        && !w.contains_at(m, s)
                    {
                        return Err(err("wrong-side input outside W"));
                    }
                }
                let pos: FxHashMap<Elem, usize> =
                    order.iter().enumerate().map(|(i, &k)| (k, i)).collect();
                let (Some(&px), Some(&py)) = (pos.get(&wt.low), pos.get(&wt.high)) else {
                    return Err(err("values not present"));
                };
                if px >= py {
                    return Err(err("values not ordered"));
                }
                let c = wt.low.max(wt.high) as u64;
                let present: FxHashSet<u64> = order[px + 1..py].iter().map(|k| color[k]).collect();
                if (0..=c).all(|d| present.contains(&d)) {
                    return Err(err("no color was missing"));
                }
                if (0..=z).any(|j| pos.get(&(j as Elem)).is_some_and(|&pj| pj >= px)) {
                    return Err(err("restraint violated"));
                }
                if history.len() <= p as usize {
                    history.resize(p as usize + 1, Vec::new());
                }
                history[p as usize].push((big_n, wt.sides));
                let top = top_pair_index(z);
                let cell: Vec<(u8, u8)> = (0..=top).map(|q| recent_sides(&history, q, z)).collect();
                if cell != wt.cell {
                    return Err(err("cell sides are not the most recent ones"));
                }
                let comp: Vec<(u8, u8)> = cell.iter().map(|&(a, b)| (1 - a, 1 - b)).collect();
                let (pat, bits) = cell_pattern(&comp);
                let expect: Vec<Elem> = (0u128..)
                    .map(|j| pat + (j << bits))
                    .filter(|k| !pos.contains_key(k))
                    .take(c as usize + 1)
                    .collect();
                if act.added != expect {
                    return Err(err("new elements are not the least unused cell members"));
                }
                if act.colors != (0..=c).collect::<Vec<_>>() {
                    return Err(err("colors are not 0..=c"));
                }
                for (i, &k) in act.added.iter().enumerate() {
                    order.insert(py + i, k);
                    color.insert(k, i as u64);
                }
                checked += 1;
            }
        }
    }
    if order != o.elements() {
        return Err("replayed order differs from final order".into());
    }
    Ok(checked)
}
