//! Staged copies against their own traces and the order axioms.

use std::sync::Arc;

use cohepow_core::clocked::{CeSet, ClockedFunction, Numbering};
use cohepow_core::order::{check_axioms, naturals, predecessor_census, Coloring};
use cohepow_core::staged::{
    build_colored_dense, build_successor_breaker, pull_back, replay_trace, shuffle_all,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn breaker_trace_replays(stages in 20u64..400, t_frac in 0u64..100) {
        let o = build_successor_breaker(Numbering::Interpreter, |x| x % 2 == 1, stages);
        let t = stages * t_frac / 100;
        let r = replay_trace(o.trace(), &[t]).unwrap();
        prop_assert_eq!(&r.final_order, &o.elements());
        prop_assert_eq!(&r.checkpoints[0], &o.restriction_at(t));
        prop_assert!(check_axioms(&o, 60, stages).is_ok());
    }

    #[test]
    fn pull_back_lists_in_order_of_enumeration(horizon in 50u64..400) {
        let f: Coloring = Arc::new(|x| Some(x % 3));
        let m = Arc::new(shuffle_all(naturals(), f));
        let pb = pull_back(m, horizon);
        for b in 0..pb.listed() as u64 {
            let z = pb.f(b).unwrap();
            prop_assert_eq!(pb.inverse(z), Some(b));
        }
        prop_assert!(check_axioms(&pb, 40, horizon).is_ok());
    }
}

#[test]
fn colored_copy_replays_and_is_omega_like() {
    let gap = Numbering::Overlay(vec![
        ClockedFunction::rule("4n", |n| 4 * n),
        ClockedFunction::rule("8n", |n| 8 * n),
    ]);
    let w = CeSet::decidable("zero", |x| x == 0);
    let (o, _) = build_colored_dense(gap, &w, 120).unwrap();
    let r = replay_trace(o.trace(), &[]).unwrap();
    assert_eq!(r.final_order, o.elements());
    // every element has finitely many predecessors, listed without gaps
    let census: Vec<u64> = (0..20)
        .map(|z| predecessor_census(&o, z, u64::MAX, 120))
        .collect();
    let mut sorted = census.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), census.len());
}
