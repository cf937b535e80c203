use serde::{Deserialize, Serialize};

use super::{CohesiveApprox, CohesiveError};

/// `R = {x > cutoff : x ≡ parity (mod 2)}`, a computable subset of the
/// complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReservedSet {
    pub parity: u64,
    pub cutoff: u64,
}

impl ReservedSet {
    pub fn contains(&self, x: u64) -> bool {
        x > self.cutoff && x % 2 == self.parity
    }

    /// Least member of `R` that is at least `x`.
    pub fn next_from(&self, x: u64) -> u64 {
        let mut y = x.max(self.cutoff + 1);
        if y % 2 != self.parity {
            y += 1;
        }
        y
    }
}

/// Parity rule: if the window is eventually even, `R` is the odd numbers past
/// the last odd window element, and symmetrically. The parity tail must cover
/// at least half the window and at least two elements.
pub fn reserved_computable_subset(c: &CohesiveApprox) -> Result<ReservedSet, CohesiveError> {
    let w = c.elements();
    let Some(&last) = w.last() else {
        return Err(CohesiveError::Undetermined { len: 0 });
    };
    let tail_parity = last % 2;
    let tail = w
        .iter()
        .rev()
        .take_while(|&&x| x % 2 == tail_parity)
        .count();
    if tail < 2 || 2 * tail < w.len() {
        return Err(CohesiveError::Undetermined { len: w.len() });
    }
    let cutoff = if tail == w.len() {
        0
    } else {
        w[w.len() - tail - 1]
    };
    Ok(ReservedSet {
        parity: 1 - tail_parity,
        cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win(v: Vec<u64>, h: u64) -> CohesiveApprox {
        CohesiveApprox::injected(v, h, "t").unwrap()
    }

    #[test]
    fn eventually_even() {
        let mut v: Vec<u64> = vec![1, 3, 5, 6, 7, 9, 11, 13, 15, 17];
        v.extend((18..60).step_by(2));
        let c = win(v, 60);
        let r = reserved_computable_subset(&c).unwrap();
        assert_eq!(
            r,
            ReservedSet {
                parity: 1,
                cutoff: 17
            }
        );
        assert!(c.elements().iter().all(|&x| !r.contains(x)));
        assert!(r.contains(19));
    }

    #[test]
    fn all_odd() {
        let c = win((1..50).step_by(2).collect(), 50);
        let r = reserved_computable_subset(&c).unwrap();
        assert_eq!(r.parity, 0);
        assert!(c.elements().iter().all(|&x| !r.contains(x)));
    }

    #[test]
    fn alternating_is_undetermined() {
        let c = win((0..40).collect(), 40);
        assert!(matches!(
            reserved_computable_subset(&c),
            Err(CohesiveError::Undetermined { .. })
        ));
    }

    #[test]
    fn next_member() {
        let r = ReservedSet {
            parity: 1,
            cutoff: 10,
        };
        assert_eq!(r.next_from(0), 11);
        assert_eq!(r.next_from(12), 13);
        assert_eq!(r.next_from(13), 13);
    }
}
