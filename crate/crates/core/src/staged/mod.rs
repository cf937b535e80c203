//! Stage-by-stage constructions of computable copies of ω, the enumerated
//! functions built alongside them, and shuffle encodings.
//!
//! A [`StagedOrder`] is the finite approximation after its last stage: the
//! elements placed so far, their relative order (never revised), optional
//! colors, and a trace of every action taken.

mod breaker;
mod colored;
mod dense_blocks;
mod nzq;
mod om;
mod partition;
mod pullback;
mod replay;
mod shuffle;

use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::order::{Coloring, ComputableOrder, OrderTypeTag};

pub use breaker::{audit_breaker, build_successor_breaker, BreakerReport};
pub use colored::{audit_colored, build_colored_dense, ColoredConfig, ColoredStats};
pub use dense_blocks::{
    audit_cover_ledger, dense_blocks_theta, CoverLedger, DenseBlocksRun, StageRecord,
};
pub use nzq::{build_noncomputable_successor_copy, enumeration_bijection, NzqCopy};
pub use om::{Elem, OmList};
pub use partition::{cell_pattern, partition_block};
pub use pullback::{pull_back, PullBack};
pub use replay::{replay_trace, ReplayError, Replayed};
pub use shuffle::{
    collapse_coloring, fiber_size, shuffle_all, shuffle_finite, shuffle_pi2, shuffle_sigma2,
    verify_least_element, Predicate3, Shuffle, ShuffleKind,
};

/// Interval listings longer than this are refused.
pub const INTERVAL_CAP: usize = 1 << 22;

/// Witness recorded for one action of the colored construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionWitness {
    /// Index of the function pair.
    pub p: u64,
    /// Threshold guess.
    pub threshold: u64,
    pub sides: (u8, u8),
    pub input: u64,
    /// Values of the two functions at the input.
    pub low: Elem,
    pub high: Elem,
    /// Sides in force for each `q ≤ r` when the new elements were chosen.
    pub cell: Vec<(u8, u8)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionKind {
    /// The stage number is placed greatest.
    Append,
    /// `added` placed immediately after `n`, below the value `target`.
    Break { e: u64, n: u64, target: u64 },
    /// `added` placed as a chain immediately below `witness.high`.
    Dense { witness: ActionWitness },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Action {
    pub stage: u64,
    /// Code of the acting requirement, if any.
    pub pair: Option<u64>,
    #[serde(flatten)]
    pub kind: ActionKind,
    pub added: Vec<Elem>,
    pub colors: Vec<u64>,
}

#[derive(Clone, Copy, Debug)]
struct Info {
    stage: u64,
    color: u64,
}

#[derive(Clone, Debug)]
pub struct StagedOrder {
    name: String,
    tag: OrderTypeTag,
    list: OmList,
    info: FxHashMap<Elem, Info>,
    stage: u64,
    trace: Vec<Action>,
}

impl StagedOrder {
    /// Stage 0: the single element 0 with color 0.
    pub(crate) fn start(name: impl Into<String>, tag: OrderTypeTag) -> Self {
        let mut o = StagedOrder {
            name: name.into(),
            tag,
            list: OmList::new(),
            info: FxHashMap::default(),
            stage: 0,
            trace: Vec::new(),
        };
        o.list.push_back(0);
        o.info.insert(0, Info { stage: 0, color: 0 });
        o.trace.push(Action {
            stage: 0,
            pair: None,
            kind: ActionKind::Append,
            added: vec![0],
            colors: vec![0],
        });
        o
    }

    /// Opens stage `s`, appending `s` as greatest if it is new.
    pub(crate) fn begin_stage(&mut self, s: u64) {
        self.stage = s;
        let x = s as Elem;
        if !self.list.contains(x) {
            self.list.push_back(x);
            self.info.insert(x, Info { stage: s, color: 0 });
            self.trace.push(Action {
                stage: s,
                pair: None,
                kind: ActionKind::Append,
                added: vec![x],
                colors: vec![0],
            });
        }
    }

    pub(crate) fn insert_after(&mut self, anchor: Elem, x: Elem, pair: u64, kind: ActionKind) {
        self.list.insert_after(anchor, x);
        self.info.insert(
            x,
            Info {
                stage: self.stage,
                color: 0,
            },
        );
        self.trace.push(Action {
            stage: self.stage,
            pair: Some(pair),
            kind,
            added: vec![x],
            colors: vec![0],
        });
    }

    /// Places `xs` in order immediately below `anchor`, coloring `xs[i]` with `i`.
    pub(crate) fn insert_chain_before(
        &mut self,
        anchor: Elem,
        xs: Vec<Elem>,
        pair: u64,
        kind: ActionKind,
    ) {
        let mut prev: Option<Elem> = None;
        for (i, &x) in xs.iter().enumerate() {
            match prev {
                None => self.list.insert_before(anchor, x),
                Some(p) => self.list.insert_after(p, x),
            }
            self.info.insert(
                x,
                Info {
                    stage: self.stage,
                    color: i as u64,
                },
            );
            prev = Some(x);
        }
        let colors = (0..xs.len() as u64).collect();
        self.trace.push(Action {
            stage: self.stage,
            pair: Some(pair),
            kind,
            added: xs,
            colors,
        });
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn trace(&self) -> &[Action] {
        &self.trace
    }

    pub fn list(&self) -> &OmList {
        &self.list
    }

    pub fn has(&self, x: Elem) -> bool {
        self.list.contains(x)
    }

    pub fn precedes(&self, a: Elem, b: Elem) -> Option<bool> {
        self.list.less(a, b)
    }

    pub fn successor_of(&self, x: Elem) -> Option<Elem> {
        self.list.next(x)
    }

    pub fn color(&self, x: Elem) -> Option<u64> {
        self.info.get(&x).map(|i| i.color)
    }

    pub fn stage_added(&self, x: Elem) -> Option<u64> {
        self.info.get(&x).map(|i| i.stage)
    }

    /// Elements in order.
    pub fn elements(&self) -> Vec<Elem> {
        self.list.iter().collect()
    }

    /// The order restricted to elements present by the end of stage `t`.
    pub fn restriction_at(&self, t: u64) -> Vec<Elem> {
        self.list
            .iter()
            .filter(|x| self.info[x].stage <= t)
            .collect()
    }

    /// Elements strictly between `a` and `b`, if both are present and the
    /// interval is short enough to list.
    pub fn between(&self, a: Elem, b: Elem) -> Option<Vec<Elem>> {
        self.list.between(a, b, INTERVAL_CAP)
    }

    /// Action trace as JSON lines.
    pub fn trace_jsonl(&self) -> String {
        let mut out = String::new();
        for a in &self.trace {
            out.push_str(&serde_json::to_string(a).expect("action serializes"));
            out.push('\n');
        }
        out
    }

    /// Coloring view on addressable elements.
    pub fn coloring(self: &Arc<Self>) -> Coloring {
        let me = Arc::clone(self);
        Arc::new(move |x: u64| me.color(x as Elem))
    }

    /// Stability audit: replaying the trace reproduces the final order, the
    /// tags are consistent, and at every checkpoint `t` the replayed order at
    /// `t` equals the final order restricted to elements present at `t`.
    pub fn audit_stability(&self, checkpoints: &[u64]) -> Result<(), String> {
        if !self.list.is_consistent() {
            return Err("tag order disagrees with list links".into());
        }
        let snaps = replay_trace(&self.trace, checkpoints).map_err(|e| e.to_string())?;
        for (t, snap) in checkpoints.iter().zip(&snaps.checkpoints) {
            if *snap != self.restriction_at(*t) {
                return Err(format!("order at stage {t} was later revised"));
            }
        }
        if snaps.final_order != self.elements() {
            return Err("replayed order differs from final order".into());
        }
        Ok(())
    }
}

impl ComputableOrder for StagedOrder {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn tag(&self) -> OrderTypeTag {
        self.tag.clone()
    }

    fn contains(&self, x: u64, _budget: u64) -> Option<bool> {
        self.list.contains(x as Elem).then_some(true)
    }

    fn less(&self, a: u64, b: u64, _budget: u64) -> Option<bool> {
        self.list.less(a as Elem, b as Elem)
    }

    fn predecessors(&self, z: u64, _budget: u64) -> Option<Vec<u64>> {
        if !self.list.contains(z as Elem) {
            return None;
        }
        Some(
            self.list
                .iter()
                .take_while(|&x| x != z as Elem)
                .filter_map(|x| u64::try_from(x).ok())
                .collect(),
        )
    }

    fn interval_members(&self, a: u64, b: u64, _budget: u64) -> Option<Vec<u64>> {
        let v = self.between(a as Elem, b as Elem)?;
        Some(
            v.into_iter()
                .filter_map(|x| u64::try_from(x).ok())
                .collect(),
        )
    }
}
