//! Recipes, their execution, and reports.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use cohepow_core::clocked::{CeSet, NUMBERING_VERSION};
use cohepow_core::cohesive::{
    default_cohesive, family_cohesive, CohesiveApprox, CohesiveError, DEFAULT_HORIZON,
    DEFAULT_STAGE,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::orders::{parse_order, OrderSpecError};
use crate::suites::{run_check, Check};

#[derive(Debug, Error)]
pub enum RecipeError {
    #[error("recipe schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Order(#[from] OrderSpecError),
    #[error("cohesive source: {0}")]
    Cohesive(#[from] CohesiveError),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Order expression, see [`crate::orders`].
    #[serde(default = "default_base")]
    pub base: String,
    #[serde(default = "default_stages")]
    pub stages: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_base() -> String {
    "N".into()
}

fn default_stages() -> u64 {
    DEFAULT_STAGE
}

fn default_budget() -> u64 {
    DEFAULT_STAGE
}

impl Default for Params {
    fn default() -> Self {
        Params {
            base: default_base(),
            stages: default_stages(),
            budget: default_budget(),
            seed: 0,
        }
    }
}

/// Where the window comes from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CohesiveSource {
    /// The first program domains at the default stage and horizon.
    #[default]
    Default,
    /// The default family followed by the named sets.
    DefaultWith {
        extra: Vec<String>,
    },
    Family {
        sets: Vec<String>,
        #[serde(default = "default_stages")]
        stage: u64,
        #[serde(default = "default_horizon")]
        horizon: u64,
    },
    File {
        path: PathBuf,
    },
    Injected {
        elements: Vec<u64>,
        horizon: u64,
    },
}

fn default_horizon() -> u64 {
    DEFAULT_HORIZON
}

/// Named c.e. sets usable in recipes: `evens`, `odds`, `mult3`, `bit2`,
/// `bit4`, `halting-diagonal`, `W<e>` (domain of program `e`).
pub fn named_set(name: &str) -> Result<CeSet, RecipeError> {
    let set = match name {
        "evens" => CeSet::decidable("evens", |x| x % 2 == 0),
        "odds" => CeSet::decidable("odds", |x| x % 2 == 1),
        "mult3" => CeSet::decidable("mult3", |x| x % 3 == 0),
        "bit2" => CeSet::decidable("bit2", |x| (x >> 2) & 1 == 1),
        "bit4" => CeSet::decidable("bit4", |x| (x >> 4) & 1 == 1),
        "halting-diagonal" => CeSet::halting_diagonal(),
        _ => match name.strip_prefix('W').and_then(|e| e.parse().ok()) {
            Some(e) => CeSet::program_domain(e),
            None => return Err(RecipeError::Schema(format!("unknown c.e. set `{name}`"))),
        },
    };
    Ok(set)
}

impl CohesiveSource {
    pub fn load(&self) -> Result<CohesiveApprox, RecipeError> {
        let named = |v: &[String]| {
            v.iter()
                .map(|s| named_set(s))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(match self {
            CohesiveSource::Default => default_cohesive(&[])?,
            CohesiveSource::DefaultWith { extra } => default_cohesive(&named(extra)?)?,
            CohesiveSource::Family {
                sets,
                stage,
                horizon,
            } => family_cohesive(&named(sets)?, *stage, *horizon)?,
            CohesiveSource::File { path } => CohesiveApprox::load(path)?,
            CohesiveSource::Injected { elements, horizon } => {
                CohesiveApprox::injected(elements.clone(), *horizon, "recipe")?
            }
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    #[default]
    Pass,
    Fail,
    Undecided,
    Error,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default)]
    pub outcome: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub id: String,
    #[serde(flatten)]
    pub check: Check,
    #[serde(default)]
    pub expect: Expect,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    pub name: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub cohesive: CohesiveSource,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

impl Recipe {
    pub fn from_json(s: &str) -> Result<Recipe, RecipeError> {
        serde_json::from_str(s).map_err(|e| RecipeError::Schema(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Recipe, RecipeError> {
        let s = std::fs::read_to_string(path).map_err(|source| RecipeError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Recipe::from_json(&s)
    }

    /// Ids are unique and non-empty, and the base and window can be built.
    pub fn validate(&self) -> Result<(), RecipeError> {
        let mut seen = BTreeSet::new();
        for c in &self.checks {
            if c.id.is_empty() || !seen.insert(c.id.as_str()) {
                return Err(RecipeError::Schema(format!(
                    "check id `{}` is empty or repeated",
                    c.id
                )));
            }
        }
        if !self.checks.is_empty() {
            parse_order(&self.params.base)?;
            self.cohesive.load()?;
        }
        Ok(())
    }
}

/// What one check produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub status: Status,
    pub summary: String,
    pub evidence: Value,
}

impl CheckOutcome {
    pub fn new(passed: bool, summary: impl Into<String>, evidence: Value) -> Self {
        CheckOutcome {
            status: if passed { Status::Pass } else { Status::Fail },
            summary: summary.into(),
            evidence,
        }
    }

    pub fn error(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        CheckOutcome {
            status: Status::Error,
            summary: msg.clone(),
            evidence: Value::Null,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub kind: String,
    pub status: Status,
    pub expected: Expect,
    /// Status matches the expectation and the runtime is within bounds.
    pub met: bool,
    pub summary: String,
    pub evidence: Value,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub tool: String,
    pub version: String,
    pub numbering: String,
    pub os: String,
    pub arch: String,
    pub optimized: bool,
    pub parallel: bool,
}

impl Fingerprint {
    pub fn current(parallel: bool) -> Self {
        Fingerprint {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            numbering: NUMBERING_VERSION.into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            optimized: !cfg!(debug_assertions),
            parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub recipe: Recipe,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
    pub environment: Fingerprint,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with runtimes zeroed, for replay comparisons.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.runtime_ms = 0;
            c.met = c.status == c.expected.outcome;
        }
        r.passed = r.checks.iter().all(|c| c.met);
        r
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub parallel: bool,
}

/// Inputs shared by the checks of one recipe.
pub struct RunContext {
    pub params: Params,
    pub cohesive: Arc<CohesiveApprox>,
}

fn execute(spec: &CheckSpec, ctx: &RunContext) -> CheckReport {
    let start = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(|| run_check(&spec.check, ctx))).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        CheckOutcome::error(format!("check panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let in_time = spec
        .expect
        .max_seconds
        .is_none_or(|m| elapsed.as_secs_f64() <= m);
    CheckReport {
        id: spec.id.clone(),
        kind: spec.check.kind().into(),
        status: out.status,
        expected: spec.expect.clone(),
        met: out.status == spec.expect.outcome && in_time,
        summary: out.summary,
        evidence: out.evidence,
        runtime_ms: elapsed.as_millis() as u64,
    }
}

/// Runs the checks in declared order (or concurrently with `parallel`; the
/// report order is the declared order either way).
pub fn run_recipe(r: &Recipe, opts: RunOptions) -> Result<Report, RecipeError> {
    r.validate()?;
    let checks = if r.checks.is_empty() {
        Vec::new()
    } else {
        let ctx = RunContext {
            params: r.params.clone(),
            cohesive: Arc::new(r.cohesive.load()?),
        };
        if opts.parallel {
            std::thread::scope(|s| {
                let handles: Vec<_> = r
                    .checks
                    .iter()
                    .map(|c| s.spawn(|| execute(c, &ctx)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("check threads catch panics"))
                    .collect()
            })
        } else {
            r.checks.iter().map(|c| execute(c, &ctx)).collect()
        }
    };
    Ok(Report {
        recipe: r.clone(),
        passed: checks.iter().all(|c| c.met),
        checks,
        environment: Fingerprint::current(opts.parallel),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_recipe_gives_empty_report() {
        let r = Recipe::from_json(r#"{"name": "empty"}"#).unwrap();
        let rep = run_recipe(&r, RunOptions::default()).unwrap();
        assert!(rep.checks.is_empty());
        assert!(rep.passed);
    }

    #[test]
    fn schema_errors() {
        assert!(Recipe::from_json(r#"{"name": "x", "bogus": 1}"#).is_err());
        let r = Recipe::from_json(
            r#"{"name": "x", "checks": [
                {"id": "a", "kind": "axioms"},
                {"id": "a", "kind": "axioms"}]}"#,
        )
        .unwrap();
        assert!(matches!(r.validate(), Err(RecipeError::Schema(_))));
        let bad_base = Recipe::from_json(
            r#"{"name": "x", "params": {"base": "R"}, "checks": [{"id": "a", "kind": "axioms"}]}"#,
        )
        .unwrap();
        assert!(matches!(bad_base.validate(), Err(RecipeError::Order(_))));
    }

    #[test]
    fn named_sets() {
        assert!(named_set("W3").is_ok());
        assert!(named_set("evens").unwrap().contains_at(4, 4));
        assert!(!named_set("odds").unwrap().contains_at(4, 100));
        assert!(named_set("Wx").is_err());
    }
}
