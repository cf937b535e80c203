//! One line per acceptance criterion; exits nonzero if any fails.
//!
//! `ACCEPTANCE_ONLY=3,7` restricts the run to the listed criteria.

use std::process::ExitCode;

use cohepow_cli::recipe::{run_recipe, Recipe, RunOptions, Status};
use cohepow_cli::suites::acceptance;

fn main() -> ExitCode {
    let mut recipe = acceptance();
    if let Ok(only) = std::env::var("ACCEPTANCE_ONLY") {
        let keep: Vec<&str> = only.split(',').map(str::trim).collect();
        recipe
            .checks
            .retain(|c| keep.iter().any(|k| c.id.split('-').next() == Some(*k)));
    }
    let mut failed = 0;
    for check in &recipe.checks {
        let single = Recipe {
            checks: vec![check.clone()],
            ..recipe.clone()
        };
        let line = match run_recipe(&single, RunOptions::default()) {
            Ok(report) => {
                let c = &report.checks[0];
                let limit = c
                    .expected
                    .max_seconds
                    .map(|m| format!(" limit {m:.0}s"))
                    .unwrap_or_default();
                let verdict = if c.met { "PASS" } else { "FAIL" };
                failed += !c.met as usize;
                let status = if c.status == Status::Pass {
                    String::new()
                } else {
                    format!(" status {:?}", c.status)
                };
                format!(
                    "criterion {} [{}]: {verdict} ({:.1}s{limit}){status} | {}",
                    c.id,
                    c.kind,
                    c.runtime_ms as f64 / 1000.0,
                    c.summary
                )
            }
            Err(e) => {
                failed += 1;
                format!("criterion {}: FAIL | {e}", check.id)
            }
        };
        println!("{line}");
    }
    println!(
        "acceptance: {} of {} criteria passed",
        recipe.checks.len() - failed,
        recipe.checks.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
