use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cohepow_cli::config::Config;
use cohepow_cli::orders::{
    breaker_reserved, colored_complement, gap_overlay, parse_order, parse_staged,
};
use cohepow_cli::plot::{cells, prefix_svg};
use cohepow_cli::recipe::{run_recipe, Recipe, Report, RunOptions, Status};
use cohepow_cli::report::write_csv;
use cohepow_cli::suites::{builtin, canonical_family, test_suite};
use cohepow_core::clocked::{ClockedFunction, Numbering};
use cohepow_core::cohesive::build_maximal;
use cohepow_core::order::{dump_prefix, naturals};
use cohepow_core::staged::{
    audit_breaker, audit_colored, audit_cover_ledger, build_colored_dense, build_successor_breaker,
    dense_blocks_theta, replay_trace, Action, StagedOrder,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "cohepow",
    version,
    about = "Cohesive powers of computable orders"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON settings file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Run checks concurrently (reports keep the declared order).
    #[arg(long, global = true)]
    parallel: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    stages: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Breaker,
    Colored,
    DenseBlocks,
    Maximal,
}

#[derive(Subcommand)]
enum Command {
    /// Run a staged construction, write its trace and audit it.
    Build { construction: Construction },
    /// Run a single-base suite: embedding, std-power, density, axioms, all.
    Test {
        suite: String,
        #[arg(long)]
        base: Option<String>,
        /// Serialized window file.
        #[arg(long)]
        cohesive: Option<PathBuf>,
    },
    /// Write the decided prefix of an order to a file.
    Dump {
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 64)]
        horizon: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also draw the prefix as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Replay a trace (`.jsonl`) or re-run the recipe of a saved report.
    Replay {
        file: PathBuf,
        /// Staged order expression to compare a trace against.
        #[arg(long)]
        against: Option<String>,
        #[arg(long, value_delimiter = ',')]
        checkpoints: Vec<u64>,
    },
    /// Run a built-in recipe (std-power, example-4-5, acceptance, empty) or a
    /// recipe file.
    Suite { recipe: String },
}

/// Exit status: 0 all passed, 1 some check failed, 2 bad configuration.
enum Failure {
    Checks(String),
    Config(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn settings(
    g: &Global,
    base: Option<String>,
    cohesive: Option<PathBuf>,
) -> Result<Config, Failure> {
    let flags = Config {
        base,
        stages: g.stages,
        budget: g.budget,
        seed: g.seed,
        cohesive,
        parallel: g.parallel.then_some(true),
        out_dir: g.out_dir.clone(),
    };
    let file = match &g.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    Ok(flags.over(file))
}

fn write(path: &Path, contents: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match cli.command {
        Command::Build { construction } => build(&settings(g, None, None)?, construction),
        Command::Test {
            suite,
            base,
            cohesive,
        } => {
            let cfg = settings(g, base, cohesive)?;
            let mut r = test_suite(&suite, "N")
                .ok_or_else(|| Failure::Config(format!("unknown suite `{suite}`")))?;
            cfg.apply(&mut r);
            run_and_report(&cfg, &r)
        }
        Command::Dump {
            base,
            horizon,
            out,
            svg,
        } => {
            let cfg = settings(g, base, None)?;
            dump(&cfg, horizon, &out, svg.as_deref())
        }
        Command::Replay {
            file,
            against,
            checkpoints,
        } => {
            let cfg = settings(g, None, None)?;
            if file.extension().is_some_and(|e| e == "jsonl") {
                replay_actions(&file, against.as_deref(), &checkpoints)
            } else {
                replay_report(&cfg, &file)
            }
        }
        Command::Suite { recipe } => {
            let cfg = settings(g, None, None)?;
            let mut r = match builtin(&recipe) {
                Some(r) => r,
                None => Recipe::load(Path::new(&recipe))?,
            };
            cfg.apply(&mut r);
            run_and_report(&cfg, &r)
        }
    }
}

fn run_and_report(cfg: &Config, r: &Recipe) -> Outcome {
    let opts = RunOptions {
        parallel: cfg.parallel.unwrap_or(false),
    };
    let report = run_recipe(r, opts)?;
    for c in &report.checks {
        println!(
            "{:<28} {:<10} {:>8.1}s  {}",
            c.id,
            format!("{:?}", c.status).to_lowercase(),
            c.runtime_ms as f64 / 1000.0,
            c.summary
        );
    }
    if let Some(dir) = &cfg.out_dir {
        write(&dir.join(format!("{}.json", r.name)), &report.to_json())?;
        let mut csv = Vec::new();
        write_csv(&report, &mut csv)?;
        write(
            &dir.join(format!("{}.csv", r.name)),
            &String::from_utf8_lossy(&csv),
        )?;
        if !r.checks.is_empty() {
            let base = parse_order(&r.params.base)?;
            let staged = parse_staged(&r.params.base).transpose()?;
            let d = dump_prefix(&*base, 96, r.params.budget);
            write(
                &dir.join(format!("{}-prefix.svg", r.name)),
                &prefix_svg(&d.order, &cells(&*base, staged.as_ref(), &d)),
            )?;
        }
    }
    verdict(&report)
}

fn verdict(report: &Report) -> Outcome {
    let unmet: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.met)
        .map(|c| c.id.as_str())
        .collect();
    if unmet.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(format!(
            "unmet checks: {}",
            unmet.join(", ")
        )))
    }
}

fn dump(cfg: &Config, horizon: u64, out: &Path, svg: Option<&Path>) -> Outcome {
    let spec = cfg.base.clone().unwrap_or_else(|| "N".into());
    let budget = cfg.budget.unwrap_or(2000);
    let base = parse_order(&spec)?;
    let staged = parse_staged(&spec).transpose()?;
    let d = dump_prefix(&*base, horizon, budget);
    write(out, &(serde_json::to_string_pretty(&d)? + "\n"))?;
    if let Some(p) = svg {
        write(
            p,
            &prefix_svg(&d.order, &cells(&*base, staged.as_ref(), &d)),
        )?;
    }
    println!(
        "{}: {} decided, {} pending below {horizon}",
        d.order,
        d.elements.len(),
        d.pending.len()
    );
    Ok(())
}

fn build(cfg: &Config, c: Construction) -> Outcome {
    let stages = cfg.stages.unwrap_or(2000);
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let save_trace =
        |name: &str, o: &StagedOrder| write(&dir.join(format!("{name}.jsonl")), &o.trace_jsonl());
    let (name, summary, passed) = match c {
        Construction::Breaker => {
            let o = build_successor_breaker(Numbering::Interpreter, breaker_reserved, stages);
            save_trace("breaker", &o)?;
            let a = audit_breaker(&o, Numbering::Interpreter, breaker_reserved);
            let s = json!({ "stages": stages, "elements": o.len(), "report": a });
            ("breaker", s, a.passed())
        }
        Construction::Colored => {
            let w = colored_complement();
            let (o, stats) = build_colored_dense(gap_overlay(), &w, stages)?;
            save_trace("colored", &o)?;
            let a = audit_colored(&o, gap_overlay(), &w);
            let s = json!({ "stats": stats, "audit": a });
            ("colored", s, a.is_ok())
        }
        Construction::DenseBlocks => {
            let w = colored_complement();
            let (psi, phi) = (
                ClockedFunction::constant(0),
                ClockedFunction::rule("2n", |n| 2 * n),
            );
            let n = naturals();
            let run = dense_blocks_theta(&psi, &phi, &*n, &w, stages);
            let a = audit_cover_ledger(&run, &psi, &phi, &*n, &w);
            let s = json!({ "graph": run.graph, "ledger": run.ledger, "audit": a.as_ref().err() });
            ("dense-blocks", s, a.is_ok())
        }
        Construction::Maximal => {
            let m = build_maximal(&canonical_family(), stages, 512);
            let ok = m.trace_is_monotone() && m.is_locally_maximal();
            let s = json!({
                "markers": m.markers,
                "e_states": m.e_states,
                "enumerated": m.enumerated,
                "monotone": m.trace_is_monotone(),
                "locally_maximal": m.is_locally_maximal(),
            });
            ("maximal", s, ok)
        }
    };
    write(
        &dir.join(format!("{name}-summary.json")),
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )?;
    println!("{name}: audit {}", if passed { "passed" } else { "failed" });
    if passed {
        Ok(())
    } else {
        Err(Failure::Checks(format!("{name} audit failed")))
    }
}

fn replay_actions(file: &Path, against: Option<&str>, checkpoints: &[u64]) -> Outcome {
    let text = std::fs::read_to_string(file)?;
    let trace = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str::<Action>)
        .collect::<Result<Vec<_>, _>>()?;
    let r = replay_trace(&trace, checkpoints).map_err(|e| Failure::Checks(e.to_string()))?;
    println!(
        "replayed {} actions, {} elements",
        trace.len(),
        r.final_order.len()
    );
    for (s, order) in checkpoints.iter().zip(&r.checkpoints) {
        println!("stage {s}: {} elements", order.len());
    }
    if let Some(spec) = against {
        let o = parse_staged(spec)
            .ok_or_else(|| Failure::Config(format!("`{spec}` is not a staged order")))??;
        if o.elements() != r.final_order {
            return Err(Failure::Checks(format!("replay differs from {spec}")));
        }
        println!("matches {spec}");
    }
    Ok(())
}

fn replay_report(cfg: &Config, file: &Path) -> Outcome {
    let text = std::fs::read_to_string(file)?;
    let saved: Report = serde_json::from_str(&text)?;
    let again = run_recipe(
        &saved.recipe,
        RunOptions {
            parallel: cfg.parallel.unwrap_or(saved.environment.parallel),
        },
    )?;
    let (a, mut b) = (saved.without_timings(), again.without_timings());
    b.environment.parallel = a.environment.parallel;
    if a != b {
        let differing: Vec<&str> = a
            .checks
            .iter()
            .zip(&b.checks)
            .filter(|(x, y)| x != y)
            .map(|(x, _)| x.id.as_str())
            .collect();
        return Err(Failure::Checks(format!(
            "replay differs at: {}",
            differing.join(", ")
        )));
    }
    let failing = again
        .checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .count();
    println!(
        "replay identical: {} checks, {failing} not passing",
        again.checks.len()
    );
    Ok(())
}
