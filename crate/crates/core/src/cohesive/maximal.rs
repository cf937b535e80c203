//! Friedberg-style maximal set with movable markers, restricted to the
//! markers that sit inside the horizon.

use super::approx::CohesiveApprox;
use super::Provenance;
use crate::clocked::CeSet;

/// The first `k` program domains `W_0, …, W_{k-1}`.
pub fn interpreter_family(k: u64) -> Vec<CeSet> {
    (0..k).map(CeSet::program_domain).collect()
}

#[derive(Clone, Debug)]
pub struct MaximalSetState {
    /// `a_0 < a_1 < …`: complement elements within the horizon.
    pub markers: Vec<u64>,
    /// `σ(e, a_e)` per marker.
    pub e_states: Vec<u64>,
    pub stage: u64,
    pub horizon: u64,
    /// `(element, stage)` for every element enumerated into the maximal set.
    pub enumerated: Vec<(u64, u64)>,
    /// Marker e-state vector after every stage; `trace[s]` is the vector at
    /// the end of stage `s`.
    pub trace: Vec<Vec<u64>>,
    family: Vec<CeSet>,
}

/// Full e-state of `x` at a stage: bit `k-1-i` is set iff `x ∈ W_i`.
fn full_state(entries: &[Vec<Option<u64>>], x: u64, stage: u64) -> u64 {
    let k = entries.len();
    let mut st = 0u64;
    for (i, col) in entries.iter().enumerate() {
        if col[x as usize].is_some_and(|t| t <= stage) {
            st |= 1 << (k - 1 - i);
        }
    }
    st
}

/// `σ(e, ·)` keeps the sets `W_0 … W_e`.
fn truncate_state(full: u64, e: usize, k: usize) -> u64 {
    if e + 1 >= k {
        full
    } else {
        full >> (k - 1 - e)
    }
}

/// Runs `stages` stages. At each stage the least marker `e` that can reach a
/// higher `e`-state at some later marker `j` (least such `j`) moves there by
/// enumerating `a_e … a_{j-1}`.
pub fn build_maximal(family: &[CeSet], stages: u64, horizon: u64) -> MaximalSetState {
    assert!(family.len() <= 63, "e-states are packed into a u64");
    let k = family.len();
    let entries: Vec<Vec<Option<u64>>> = family
        .iter()
        .map(|w| (0..=horizon).map(|x| w.entry_stage(x, stages)).collect())
        .collect();
    let mut markers: Vec<u64> = (0..=horizon).collect();
    let mut enumerated = Vec::new();
    let mut trace = Vec::with_capacity(stages as usize + 1);
    let states_at = |markers: &[u64], s: u64| -> Vec<u64> {
        markers
            .iter()
            .enumerate()
            .map(|(e, &x)| truncate_state(full_state(&entries, x, s), e, k))
            .collect()
    };
    trace.push(states_at(&markers, 0));
    for s in 1..=stages {
        let full: Vec<u64> = markers
            .iter()
            .map(|&x| full_state(&entries, x, s))
            .collect();
        let m = markers.len().min(s as usize + 1);
        // suffix maxima of full states over markers e+1 .. m-1
        let mut sufmax = vec![0u64; m + 1];
        let mut has = vec![false; m + 1];
        for j in (0..m).rev() {
            sufmax[j] = if has[j + 1] {
                sufmax[j + 1].max(full[j])
            } else {
                full[j]
            };
            has[j] = true;
        }
        let mover = (0..m.saturating_sub(1))
            .find(|&e| truncate_state(sufmax[e + 1], e, k) > truncate_state(full[e], e, k));
        if let Some(e) = mover {
            let own = truncate_state(full[e], e, k);
            let j = (e + 1..m)
                .find(|&j| truncate_state(full[j], e, k) > own)
                .expect("suffix maximum guarantees a target");
            for &x in &markers[e..j] {
                enumerated.push((x, s));
            }
            markers.drain(e..j);
        }
        trace.push(states_at(&markers, s));
    }
    let e_states = trace.last().cloned().unwrap_or_default();
    MaximalSetState {
        markers,
        e_states,
        stage: stages,
        horizon,
        enumerated,
        trace,
        family: family.to_vec(),
    }
}

impl MaximalSetState {
    pub fn window(&self) -> &[u64] {
        &self.markers
    }

    pub fn complement_enumerator(&self) -> CeSet {
        CeSet::timestamped("M", self.enumerated.iter().copied())
    }

    pub fn to_approx(&self) -> CohesiveApprox {
        let family = self.family.iter().map(|w| w.label().to_string()).collect();
        CohesiveApprox::new(
            self.markers.clone(),
            self.stage.max(self.horizon),
            self.horizon,
            Provenance::Maximal { family },
            self.complement_enumerator(),
        )
        .expect("markers are never enumerated")
    }

    /// Whether the marker e-state vector never decreases lexicographically.
    pub fn trace_is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[0] <= w[1])
    }

    /// No retained marker could move to a later retained marker with a
    /// higher e-state at the final stage.
    pub fn is_locally_maximal(&self) -> bool {
        let k = self.family.len();
        let ents: Vec<Vec<Option<u64>>> = self
            .family
            .iter()
            .map(|w| {
                (0..=self.horizon)
                    .map(|x| w.entry_stage(x, self.stage))
                    .collect()
            })
            .collect();
        let full: Vec<u64> = self
            .markers
            .iter()
            .map(|&x| full_state(&ents, x, self.stage))
            .collect();
        let m = self.markers.len().min(self.stage as usize + 1);
        (0..m).all(|e| {
            let own = truncate_state(full[e], e, k);
            (e + 1..m).all(|j| truncate_state(full[j], e, k) <= own)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_family() -> Vec<CeSet> {
        vec![
            CeSet::decidable("evens", |x| x % 2 == 0),
            CeSet::decidable("mult3", |x| x % 3 == 0),
            CeSet::timestamped("late", (0..100).filter(|x| x % 5 == 1).map(|x| (x, 3 * x))),
        ]
    }

    #[test]
    fn stage_zero_keeps_all() {
        let st = build_maximal(&toy_family(), 0, 30);
        assert_eq!(st.window(), (0..=30).collect::<Vec<_>>());
        assert!(st.enumerated.is_empty());
    }

    #[test]
    fn monotone_trace_and_maximal_states() {
        let st = build_maximal(&toy_family(), 400, 100);
        assert!(st.trace_is_monotone());
        assert!(st.is_locally_maximal());
        assert!(st.window().windows(2).all(|w| w[0] < w[1]));
        assert!(!st.window().is_empty());
    }

    #[test]
    fn refresh_never_readmits() {
        let a = build_maximal(&toy_family(), 150, 100);
        let b = build_maximal(&toy_family(), 300, 100);
        assert!(b.window().iter().all(|x| a.window().contains(x)));
    }

    #[test]
    fn interpreter_family_runs() {
        let st = build_maximal(&interpreter_family(6), 2000, 512);
        assert!(st.trace_is_monotone());
        assert!(st.is_locally_maximal());
        let c = st.to_approx();
        assert!(c
            .elements()
            .iter()
            .all(|&x| !c.complement().contains_at(x, c.stage())));
    }
}
