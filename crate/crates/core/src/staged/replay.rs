//! Independent replay of an action trace on a plain hash-linked list.

use rustc_hash::FxHashMap;
use thiserror::Error;

use super::{Action, ActionKind, Elem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("stage {stage}: anchor {anchor} not present")]
    MissingAnchor { stage: u64, anchor: Elem },
    #[error("stage {stage}: element {elem} added twice")]
    Duplicate { stage: u64, elem: Elem },
    #[error("stage {stage}: stages out of order")]
    StageOrder { stage: u64 },
}

#[derive(Debug, Default)]
pub struct Replayed {
    pub final_order: Vec<Elem>,
    /// Order at the end of each requested stage.
    pub checkpoints: Vec<Vec<Elem>>,
}

#[derive(Default)]
struct Linked {
    links: FxHashMap<Elem, (Option<Elem>, Option<Elem>)>,
    head: Option<Elem>,
    tail: Option<Elem>,
}

impl Linked {
    fn splice(&mut self, prev: Option<Elem>, x: Elem) {
        let next = match prev {
            Some(p) => self.links[&p].1,
            None => self.head,
        };
        self.links.insert(x, (prev, next));
        match prev {
            Some(p) => self.links.get_mut(&p).unwrap().1 = Some(x),
            None => self.head = Some(x),
        }
        match next {
            Some(n) => self.links.get_mut(&n).unwrap().0 = Some(x),
            None => self.tail = Some(x),
        }
    }

    fn order(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.links.len());
        let mut cur = self.head;
        while let Some(x) = cur {
            out.push(x);
            cur = self.links[&x].1;
        }
        out
    }
}

pub fn replay_trace(trace: &[Action], checkpoints: &[u64]) -> Result<Replayed, ReplayError> {
    let mut l = Linked::default();
    let mut cps: Vec<u64> = checkpoints.to_vec();
    cps.sort_unstable();
    let mut snaps: Vec<(u64, Vec<Elem>)> = Vec::new();
    let mut ci = 0;
    let mut last_stage = 0;
    for a in trace {
        if a.stage < last_stage {
            return Err(ReplayError::StageOrder { stage: a.stage });
        }
        while ci < cps.len() && cps[ci] < a.stage {
            snaps.push((cps[ci], l.order()));
            ci += 1;
        }
        last_stage = a.stage;
        for &x in &a.added {
            if l.links.contains_key(&x) {
                return Err(ReplayError::Duplicate {
                    stage: a.stage,
                    elem: x,
                });
            }
        }
        let need = |l: &Linked, y: Elem| {
            if l.links.contains_key(&y) {
                Ok(())
            } else {
                Err(ReplayError::MissingAnchor {
                    stage: a.stage,
                    anchor: y,
                })
            }
        };
        let mut prev = match &a.kind {
            ActionKind::Append => l.tail,
            ActionKind::Break { n, .. } => {
                need(&l, *n as Elem)?;
                Some(*n as Elem)
            }
            ActionKind::Dense { witness } => {
                need(&l, witness.high)?;
                l.links[&witness.high].0
            }
        };
        for &x in &a.added {
            l.splice(prev, x);
            prev = Some(x);
        }
    }
    let fin = l.order();
    while ci < cps.len() {
        snaps.push((cps[ci], fin.clone()));
        ci += 1;
    }
    let mut checkpoints_out = Vec::new();
    for &t in checkpoints {
        let i = snaps
            .iter()
            .position(|(s, _)| *s == t)
            .expect("checkpoint recorded");
        checkpoints_out.push(snaps[i].1.clone());
    }
    Ok(Replayed {
        final_order: fin,
        checkpoints: checkpoints_out,
    })
}
