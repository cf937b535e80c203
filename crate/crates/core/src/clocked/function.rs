//! Clocked partial functions ℕ → ℕ.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::machine::Program;

/// Result of a budgeted evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eval {
    Pending,
    Value(u64),
}

impl Eval {
    pub fn value(self) -> Option<u64> {
        match self {
            Eval::Value(v) => Some(v),
            Eval::Pending => None,
        }
    }

    pub fn is_pending(self) -> bool {
        matches!(self, Eval::Pending)
    }
}

impl From<Option<u64>> for Eval {
    fn from(o: Option<u64>) -> Self {
        o.map_or(Eval::Pending, Eval::Value)
    }
}

/// What a clocked function was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Program(BigUint),
    Table(usize),
    Rule(String),
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Program(e) => {
                let s = e.to_string();
                if s.len() > 24 {
                    write!(f, "program#{}…({} digits)", &s[..12], s.len())
                } else {
                    write!(f, "program#{s}")
                }
            }
            Descriptor::Table(n) => write!(f, "table[{n}]"),
            Descriptor::Rule(name) => f.write_str(name),
        }
    }
}

type EvalFn = dyn Fn(u64, u64) -> Eval + Send + Sync;

/// A deterministic, budget-monotone partial function.
///
/// Closures handed to [`ClockedFunction::from_fn`] must respect both
/// properties; every other constructor does so by construction.
#[derive(Clone)]
pub struct ClockedFunction {
    descriptor: Descriptor,
    imp: Arc<EvalFn>,
}

impl fmt::Debug for ClockedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClockedFunction({})", self.descriptor)
    }
}

impl ClockedFunction {
    pub fn from_fn(
        descriptor: Descriptor,
        f: impl Fn(u64, u64) -> Eval + Send + Sync + 'static,
    ) -> Self {
        ClockedFunction {
            descriptor,
            imp: Arc::new(f),
        }
    }

    /// Total rule costing one step.
    pub fn rule(name: impl Into<String>, f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        Self::from_fn(Descriptor::Rule(name.into()), move |n, s| {
            if s == 0 {
                Eval::Pending
            } else {
                Eval::Value(f(n))
            }
        })
    }

    /// Partial rule costing one step where defined; `None` means divergence.
    pub fn partial_rule(
        name: impl Into<String>,
        f: impl Fn(u64) -> Option<u64> + Send + Sync + 'static,
    ) -> Self {
        Self::from_fn(Descriptor::Rule(name.into()), move |n, s| {
            if s == 0 {
                Eval::Pending
            } else {
                f(n).into()
            }
        })
    }

    /// Rule with an explicit step cost per input.
    pub fn costed_rule(
        name: impl Into<String>,
        f: impl Fn(u64) -> (u64, Option<u64>) + Send + Sync + 'static,
    ) -> Self {
        Self::from_fn(Descriptor::Rule(name.into()), move |n, s| {
            let (cost, v) = f(n);
            if s < cost.max(1) {
                Eval::Pending
            } else {
                v.into()
            }
        })
    }

    pub fn constant(c: u64) -> Self {
        Self::rule(format!("const {c}"), move |_| c)
    }

    pub fn identity() -> Self {
        Self::rule("id", |n| n)
    }

    /// Finite table; inputs beyond the table and `None` entries diverge.
    pub fn table(values: Vec<Option<u64>>) -> Self {
        let len = values.len();
        let values = Arc::new(values);
        Self::from_fn(Descriptor::Table(len), move |n, s| {
            if s == 0 {
                return Eval::Pending;
            }
            usize::try_from(n)
                .ok()
                .and_then(|i| values.get(i).copied().flatten())
                .into()
        })
    }

    pub fn program(p: &Program) -> Self {
        let index = p.index();
        let compiled = Arc::new(p.compile());
        Self::from_fn(Descriptor::Program(index), move |n, s| {
            compiled.run(n, s).into()
        })
    }

    /// `φ_e`.
    pub fn index(e: &BigUint) -> Self {
        let p = Program::decode(e);
        let compiled = Arc::new(p.compile());
        Self::from_fn(Descriptor::Program(e.clone()), move |n, s| {
            compiled.run(n, s).into()
        })
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn label(&self) -> String {
        self.descriptor.to_string()
    }

    pub fn relabel(mut self, name: impl Into<String>) -> Self {
        self.descriptor = Descriptor::Rule(name.into());
        self
    }

    pub fn eval(&self, n: u64, budget: u64) -> Eval {
        (self.imp)(n, budget)
    }

    /// Least budget at which `n` yields a value, searching up to `limit`.
    pub fn halting_budget(&self, n: u64, limit: u64) -> Option<u64> {
        if self.eval(n, limit).is_pending() {
            return None;
        }
        if !self.eval(n, 0).is_pending() {
            return Some(0);
        }
        // gallop, then bisect with eval(lo) pending and eval(hi) a value
        let (mut lo, mut hi) = (0u64, 1u64.min(limit));
        while self.eval(n, hi).is_pending() {
            lo = hi;
            hi = hi.saturating_mul(2).min(limit);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.eval(n, mid).is_pending() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }

    /// `outer ∘ self`, charging both budgets against the same clock.
    pub fn then(&self, outer: &ClockedFunction) -> ClockedFunction {
        let inner = self.clone();
        let o = outer.clone();
        let name = format!("({}) ∘ ({})", outer.label(), self.label());
        Self::from_fn(Descriptor::Rule(name), move |n, s| match inner.eval(n, s) {
            Eval::Value(v) => o.eval(v, s),
            Eval::Pending => Eval::Pending,
        })
    }

    /// Post-composition with a total map.
    pub fn map(
        &self,
        name: &str,
        f: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> ClockedFunction {
        let inner = self.clone();
        let label = format!("{name} ∘ ({})", self.label());
        Self::from_fn(Descriptor::Rule(label), move |n, s| {
            match inner.eval(n, s) {
                Eval::Value(v) => Eval::Value(f(v)),
                Eval::Pending => Eval::Pending,
            }
        })
    }

    /// Post-composition with a partial map; `None` diverges.
    pub fn map_partial(
        &self,
        name: &str,
        f: impl Fn(u64) -> Option<u64> + Send + Sync + 'static,
    ) -> ClockedFunction {
        let inner = self.clone();
        let label = format!("{name} ∘ ({})", self.label());
        Self::from_fn(Descriptor::Rule(label), move |n, s| {
            match inner.eval(n, s) {
                Eval::Value(v) => f(v).into(),
                Eval::Pending => Eval::Pending,
            }
        })
    }

    /// Pointwise combination of two functions; defined where both are.
    pub fn zip(
        &self,
        other: &ClockedFunction,
        name: &str,
        f: impl Fn(u64, u64) -> Option<u64> + Send + Sync + 'static,
    ) -> ClockedFunction {
        let a = self.clone();
        let b = other.clone();
        let label = format!("{name}({}, {})", self.label(), other.label());
        Self::from_fn(Descriptor::Rule(label), move |n, s| {
            match (a.eval(n, s), b.eval(n, s)) {
                (Eval::Value(x), Eval::Value(y)) => f(x, y).into(),
                _ => Eval::Pending,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clocked::machine::library;
    use proptest::prelude::*;

    #[test]
    fn identity_and_successor() {
        assert_eq!(ClockedFunction::identity().eval(7, 1000), Eval::Value(7));
        let succ = ClockedFunction::program(&library::successor());
        assert_eq!(succ.eval(41, 1000), Eval::Value(42));
        assert_eq!(succ.eval(41, 0), Eval::Pending);
    }

    #[test]
    fn diverging_program_is_pending() {
        let f = ClockedFunction::program(&library::diverge());
        for s in [0, 1, 5, 10_000] {
            assert_eq!(f.eval(9, s), Eval::Pending);
        }
    }

    #[test]
    fn index_zero_is_identity() {
        let f = ClockedFunction::index(&BigUint::from(0u32));
        assert_eq!(f.eval(0, 5), Eval::Value(0));
        assert_eq!(f.eval(5, 5), Eval::Value(5));
        assert_eq!(f.eval(5, 0), Eval::Pending);
    }

    #[test]
    fn halting_budget_is_least() {
        let f = ClockedFunction::program(&library::affine(2, 0));
        for n in 0..20 {
            let b = f.halting_budget(n, 10_000).unwrap();
            assert!(f.eval(n, b).value().is_some());
            assert!(f.eval(n, b - 1).is_pending());
        }
        assert_eq!(
            ClockedFunction::program(&library::diverge()).halting_budget(0, 500),
            None
        );
    }

    #[test]
    fn builtins_realized_by_indices() {
        let pairs: Vec<(ClockedFunction, Program)> = vec![
            (ClockedFunction::identity(), library::identity()),
            (ClockedFunction::constant(5), library::constant(5)),
            (
                ClockedFunction::rule("n+1", |n| n + 1),
                library::successor(),
            ),
            (
                ClockedFunction::rule("2n", |n| 2 * n),
                library::affine(2, 0),
            ),
            (
                ClockedFunction::rule("4n", |n| 4 * n),
                library::affine(4, 0),
            ),
            (
                ClockedFunction::rule("8n", |n| 8 * n),
                library::affine(8, 0),
            ),
            (
                ClockedFunction::rule("n∸1", |n| n.saturating_sub(1)),
                library::predecessor(),
            ),
        ];
        for (rule, prog) in pairs {
            let by_index = ClockedFunction::index(&prog.index());
            for n in 0..64 {
                assert_eq!(
                    rule.eval(n, 100_000),
                    by_index.eval(n, 100_000),
                    "{}",
                    rule.label()
                );
            }
        }
    }

    #[test]
    fn table_lookup() {
        let t = ClockedFunction::table(vec![Some(3), None, Some(1)]);
        assert_eq!(t.eval(0, 1), Eval::Value(3));
        assert_eq!(t.eval(1, 100), Eval::Pending);
        assert_eq!(t.eval(5, 100), Eval::Pending);
    }

    proptest! {
        #[test]
        fn composition_is_monotone(n in 0u64..40, s in 0u64..400) {
            let f = ClockedFunction::program(&library::affine(2, 1))
                .then(&ClockedFunction::program(&library::add_const(3)));
            if let Eval::Value(v) = f.eval(n, s) {
                prop_assert_eq!(v, 2 * n + 4);
                prop_assert_eq!(f.eval(n, s + 50), Eval::Value(v));
            }
            prop_assert_eq!(f.eval(n, s), f.eval(n, s));
        }
    }
}
