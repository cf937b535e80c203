//! Enumerations `(φ_e)` consulted by the stage constructions, with a cache of
//! resumable runs so that `φ_{e,s}(n)` costs amortized O(1) per stage.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::function::{ClockedFunction, Eval};
use super::machine::{Compiled, Machine, Program, NUMBERING_VERSION};

/// Which functions `φ_0, φ_1, …` a construction diagonalizes against.
#[derive(Clone, Debug)]
pub enum Numbering {
    /// `φ_e` is the `e`-th register-machine program.
    Interpreter,
    /// The listed functions come first, then the interpreter shifted by their
    /// count. A finite shift keeps the numbering acceptable.
    Overlay(Vec<ClockedFunction>),
    /// Only the listed functions; every other index diverges.
    Finite(Vec<ClockedFunction>),
}

impl Numbering {
    pub fn version(&self) -> String {
        match self {
            Numbering::Interpreter => NUMBERING_VERSION.to_string(),
            Numbering::Overlay(fs) => format!(
                "{NUMBERING_VERSION}+overlay[{}]",
                fs.iter().map(|f| f.label()).collect::<Vec<_>>().join(", ")
            ),
            Numbering::Finite(fs) => format!(
                "finite[{}]",
                fs.iter().map(|f| f.label()).collect::<Vec<_>>().join(", ")
            ),
        }
    }

    pub fn function(&self, e: u64) -> ClockedFunction {
        let interp = |i: u64| ClockedFunction::index(&i.into());
        match self {
            Numbering::Interpreter => interp(e),
            Numbering::Overlay(fs) => match fs.get(e as usize) {
                Some(f) => f.clone(),
                None => interp(e - fs.len() as u64),
            },
            Numbering::Finite(fs) => fs
                .get(e as usize)
                .cloned()
                .unwrap_or_else(|| ClockedFunction::partial_rule("⊥", |_| None)),
        }
    }
}

enum Source {
    Machine(Arc<Compiled>),
    Black(ClockedFunction),
    Never,
}

enum Run {
    Machine(Machine),
    /// Black-box function: value and the budget it was found at, otherwise
    /// the largest budget tried.
    Black(Result<(u64, u64), u64>),
}

/// Memoized `φ_{e,s}(n)` for a fixed numbering.
pub struct PhiCache {
    numbering: Numbering,
    sources: FxHashMap<u64, Arc<Source>>,
    runs: FxHashMap<(u64, u64), Run>,
}

impl PhiCache {
    pub fn new(numbering: Numbering) -> Self {
        PhiCache {
            numbering,
            sources: FxHashMap::default(),
            runs: FxHashMap::default(),
        }
    }

    pub fn numbering(&self) -> &Numbering {
        &self.numbering
    }

    fn source(&mut self, e: u64) -> Arc<Source> {
        let numbering = &self.numbering;
        self.sources
            .entry(e)
            .or_insert_with(|| {
                let machine = |i: u64| Source::Machine(Arc::new(Program::decode_u64(i).compile()));
                Arc::new(match numbering {
                    Numbering::Interpreter => machine(e),
                    Numbering::Overlay(fs) => match fs.get(e as usize) {
                        Some(f) => Source::Black(f.clone()),
                        None => machine(e - fs.len() as u64),
                    },
                    Numbering::Finite(fs) => match fs.get(e as usize) {
                        Some(f) => Source::Black(f.clone()),
                        None => Source::Never,
                    },
                })
            })
            .clone()
    }

    /// `φ_{e,s}(n)`.
    pub fn eval(&mut self, e: u64, n: u64, s: u64) -> Eval {
        let src = self.source(e);
        match &*src {
            Source::Never => Eval::Pending,
            Source::Machine(c) => {
                let run = self
                    .runs
                    .entry((e, n))
                    .or_insert_with(|| Run::Machine(c.start(n)));
                match run {
                    Run::Machine(m) => match m.advance(c, s) {
                        Some(v) if m.steps() <= s => Eval::Value(v),
                        _ => Eval::Pending,
                    },
                    Run::Black(_) => unreachable!(),
                }
            }
            Source::Black(f) => {
                let run = self.runs.entry((e, n)).or_insert(Run::Black(Err(0)));
                match run {
                    Run::Black(Ok((v, at))) if *at <= s => Eval::Value(*v),
                    Run::Black(Ok(_)) => f.eval(n, s),
                    Run::Black(Err(tried)) if *tried >= s => Eval::Pending,
                    Run::Black(state) => {
                        let r = f.eval(n, s);
                        *state = match r {
                            Eval::Value(v) => Ok((v, s)),
                            Eval::Pending => Err(s),
                        };
                        r
                    }
                    Run::Machine(_) => unreachable!(),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overlay_shifts_interpreter() {
        let four = ClockedFunction::rule("4n", |n| 4 * n);
        let mut c = PhiCache::new(Numbering::Overlay(vec![four]));
        assert_eq!(c.eval(0, 3, 10), Eval::Value(12));
        // index 1 is interpreter index 0, the identity
        assert_eq!(c.eval(1, 3, 10), Eval::Value(3));
        // index 3 is interpreter index 2, the successor
        assert_eq!(c.eval(3, 3, 10), Eval::Value(4));
    }

    #[test]
    fn finite_numbering_diverges_elsewhere() {
        let mut c = PhiCache::new(Numbering::Finite(vec![ClockedFunction::identity()]));
        assert_eq!(c.eval(0, 3, 10), Eval::Value(3));
        assert_eq!(c.eval(1, 3, 1_000_000), Eval::Pending);
    }

    proptest! {
        #[test]
        fn cache_agrees_with_fresh_runs(e in 0u64..3000, n in 0u64..30, budgets in proptest::collection::vec(0u64..300, 1..6)) {
            let mut c = PhiCache::new(Numbering::Interpreter);
            let f = Numbering::Interpreter.function(e);
            for s in budgets {
                prop_assert_eq!(c.eval(e, n, s), f.eval(n, s));
            }
        }
    }
}
