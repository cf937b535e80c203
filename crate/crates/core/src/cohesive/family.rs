use super::approx::complement_of_window;
use super::interpreter_family;
use super::{CohesiveApprox, CohesiveError, Provenance};
use crate::clocked::CeSet;

/// Number of program domains in the default family.
pub const DEFAULT_FAMILY_SIZE: u64 = 6;
pub const DEFAULT_STAGE: u64 = 2000;
pub const DEFAULT_HORIZON: u64 = 512;

/// A side of a split is kept only if it has at least this many elements and
/// reaches the upper half of the horizon.
pub const MIN_RETAIN: usize = 4;

fn viable(side: &[u64], horizon: u64) -> bool {
    side.len() >= MIN_RETAIN && side.last().is_some_and(|&x| x > horizon / 2)
}

/// Window cohesive for a finite family, exact at `stage`.
///
/// Sets are processed in order; each either keeps the members of the current
/// candidate set that lie in `W_{i,stage}` (preferred, the higher e-state) or
/// those outside it. A side counts as infinite when it is [`viable`].
pub fn family_cohesive(
    family: &[CeSet],
    stage: u64,
    horizon: u64,
) -> Result<CohesiveApprox, CohesiveError> {
    let mut cand: Vec<u64> = (0..=horizon).collect();
    for w in family {
        let (inside, outside): (Vec<u64>, Vec<u64>) =
            cand.iter().partition(|&&x| w.contains_at(x, stage));
        cand = if viable(&inside, horizon) {
            inside
        } else if viable(&outside, horizon) {
            outside
        } else {
            return Err(CohesiveError::EmptyWindow { horizon });
        };
    }
    let labels = family.iter().map(|w| w.label().to_string()).collect();
    let complement = complement_of_window(&cand, horizon);
    CohesiveApprox::new(
        cand,
        stage,
        horizon,
        Provenance::Family { family: labels },
        complement,
    )
}

/// `family_cohesive` over the first [`DEFAULT_FAMILY_SIZE`] program domains
/// followed by `extra`, at the default stage and horizon.
pub fn default_cohesive(extra: &[CeSet]) -> Result<CohesiveApprox, CohesiveError> {
    let mut family = interpreter_family(DEFAULT_FAMILY_SIZE);
    family.extend_from_slice(extra);
    family_cohesive(&family, DEFAULT_STAGE, DEFAULT_HORIZON)
}

/// For each set, the least `m` with `window ∩ [m, B]` inside `W_{i,stage}` or
/// disjoint from it.
pub fn family_contract_cuts(window: &[u64], family: &[CeSet], stage: u64) -> Vec<u64> {
    family
        .iter()
        .map(|w| {
            let flags: Vec<bool> = window.iter().map(|&x| w.contains_at(x, stage)).collect();
            match flags.last() {
                None => 0,
                Some(&last) => {
                    let tail = flags.iter().rev().take_while(|&&f| f == last).count();
                    let idx = flags.len() - tail;
                    if idx == 0 {
                        0
                    } else {
                        window[idx - 1] + 1
                    }
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evens() -> CeSet {
        CeSet::decidable("evens", |x| x % 2 == 0)
    }

    #[test]
    fn default_window_is_wide() {
        let c = default_cohesive(&[]).unwrap();
        assert!(c.len() >= 64, "{}", c.len());
        assert!(c.elements().last().unwrap() > &(DEFAULT_HORIZON / 2));
        let cuts = family_contract_cuts(c.elements(), &interpreter_family(6), DEFAULT_STAGE);
        assert!(cuts.iter().all(|&m| m == 0));
    }

    #[test]
    fn empty_family_keeps_everything() {
        let c = family_cohesive(&[], 0, 20).unwrap();
        assert_eq!(c.elements(), (0..=20).collect::<Vec<_>>());
    }

    #[test]
    fn single_split() {
        let c = family_cohesive(&[evens()], 100, 100).unwrap();
        assert!(c.elements().iter().all(|x| x % 2 == 0));
    }

    #[test]
    fn two_sets_pick_maximal_infinite_state() {
        let fam = [evens(), CeSet::decidable("mult3", |x| x % 3 == 0)];
        let c = family_cohesive(&fam, 300, 300).unwrap();
        // brute force over the four e-states, preferring membership
        let mut best = None;
        for state in [(true, true), (true, false), (false, true), (false, false)] {
            let cell: Vec<u64> = (0..=300)
                .filter(|x| (x % 2 == 0) == state.0 && (x % 3 == 0) == state.1)
                .collect();
            if cell.len() >= MIN_RETAIN {
                best = Some(cell);
                break;
            }
        }
        assert_eq!(c.elements(), best.unwrap().as_slice());
        assert!(c.elements().iter().all(|x| x % 6 == 0));
    }

    #[test]
    fn finite_sets_are_avoided() {
        let fam = [CeSet::decidable("small", |x| x < 10)];
        let c = family_cohesive(&fam, 100, 100).unwrap();
        assert_eq!(c.elements().first(), Some(&10));
    }

    #[test]
    fn tiny_horizon_is_empty() {
        assert_eq!(
            family_cohesive(&[evens()], 3, 3).unwrap_err(),
            CohesiveError::EmptyWindow { horizon: 3 }
        );
    }

    #[test]
    fn contract_cuts() {
        let w = [1, 3, 4, 6, 8];
        assert_eq!(family_contract_cuts(&w, &[evens()], 10), vec![4]);
    }
}
