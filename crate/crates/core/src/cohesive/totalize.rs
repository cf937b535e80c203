use crate::clocked::{ClockedFunction, Descriptor, Eval};

use super::CohesiveApprox;

/// Total version of `f` on `[0, horizon]`, agreeing with `f` on the window.
///
/// Inputs up to `cutoff` map to `default`. Above it, `f(n)` races the
/// complement enumeration of `n`: whichever event happens at the smaller
/// budget decides; a tie goes to `f`.
pub fn totalize(
    f: &ClockedFunction,
    c: &CohesiveApprox,
    default: u64,
    cutoff: u64,
) -> ClockedFunction {
    let f = f.clone();
    let w = c.complement().clone();
    let name = format!("totalize({}, {default}, {cutoff})", f.label());
    ClockedFunction::from_fn(Descriptor::Rule(name), move |n, s| {
        if s == 0 {
            return Eval::Pending;
        }
        if n <= cutoff {
            return Eval::Value(default);
        }
        let tf = f.halting_budget(n, s);
        let tw = w.entry_stage(n, s);
        match (tf, tw) {
            (Some(a), Some(b)) if b < a => Eval::Value(default),
            (Some(_), _) => f.eval(n, s),
            (None, Some(_)) => Eval::Value(default),
            (None, None) => Eval::Pending,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clocked::CeSet;
    use crate::cohesive::family_cohesive;

    fn parity_window() -> CohesiveApprox {
        family_cohesive(&[CeSet::decidable("evens", |x| x % 2 == 0)], 200, 200).unwrap()
    }

    #[test]
    fn total_function_unchanged_above_cutoff() {
        let c = parity_window();
        let f = ClockedFunction::rule("3n", |n| 3 * n);
        let t = totalize(&f, &c, 0, 5);
        for n in 6..=200 {
            assert_eq!(t.eval(n, 1000), Eval::Value(3 * n));
        }
    }

    #[test]
    fn diverging_on_complement_gets_default() {
        let c = parity_window();
        let f = ClockedFunction::partial_rule("even-only", |n| (n % 2 == 0).then_some(n / 2));
        let t = totalize(&f, &c, 99, 0);
        for n in 1..=200 {
            let v = t.eval(n, 10_000).value().unwrap();
            if n % 2 == 0 {
                assert_eq!(v, n / 2)
            } else {
                assert_eq!(v, 99)
            }
        }
    }

    #[test]
    fn cutoff_past_horizon_is_constant() {
        let c = parity_window();
        let t = totalize(&ClockedFunction::identity(), &c, 7, 500);
        assert!(c
            .elements()
            .iter()
            .all(|&n| t.eval(n, 10) == Eval::Value(7)));
    }

    #[test]
    fn monotone_in_budget() {
        let c = parity_window();
        let f = ClockedFunction::costed_rule("slow", |n| (n, (n % 3 != 0).then_some(n)));
        let t = totalize(&f, &c, 1, 0);
        for n in 1..100 {
            for s in 0..150 {
                if let Eval::Value(v) = t.eval(n, s) {
                    assert_eq!(t.eval(n, s + 40), Eval::Value(v));
                }
            }
        }
    }
}
