//! Check kinds, their execution, and the built-in recipes.

use std::sync::Arc;
use std::time::Instant;

use cohepow_core::clocked::{checked_pair, interpret, pair, CeSet, ClockedFunction, Numbering};
use cohepow_core::cohesive::{
    build_maximal, default_cohesive, family_cohesive, family_contract_cuts,
    reserved_computable_subset, CohesiveApprox, MIN_RETAIN,
};
use cohepow_core::order::{
    check_axioms, decided_members, integer_code, interval_census, naturals, predecessor_census,
    rational_code, rationals, reverse, sum, Coloring, ComputableOrder, Order,
};
use cohepow_core::power::{
    audit_transport, canonical_embed, classify_standard, color_density_witness, far_apart_test,
    immediate_successor_test, induced_color, midpoint_witness, power_compare, predecessor_witness,
    product_transport, reverse_transport, successor_witness, successor_witness_search,
    sum_code_from_integer, sum_transport, transport_iso, ColorKind, ColorTarget, Outcome,
    PowerContext, PowerElement, PowerError, Relation, TransportAudit,
};
use cohepow_core::staged::{
    audit_breaker, audit_cover_ledger, build_colored_dense, build_successor_breaker,
    dense_blocks_theta, fiber_size, pull_back, shuffle_all, shuffle_finite, shuffle_pi2,
    shuffle_sigma2, Elem, NzqCopy, Predicate3, Shuffle, StagedOrder,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::orders::{breaker_reserved, colored_complement, gap_overlay, parse_order};
use crate::recipe::{
    CheckOutcome, CheckSpec, CohesiveSource, Expect, Params, Recipe, RunContext, Status,
};

macro_rules! default_fn {
    ($($name:ident: $t:ty = $v:expr;)*) => {
        $(fn $name() -> $t { $v })*
    };
}

default_fn! {
    d_bound: u64 = 50;
    d_reps: usize = 20;
    d_probe: u64 = 30;
    d_low: u64 = 2000;
    d_high: u64 = 4000;
    d_colored_low: u64 = 400;
    d_colored_high: u64 = 800;
    d_programs: u64 = 8;
    d_stages: u64 = 2000;
    d_colored_stages: u64 = 400;
    d_max_color: u64 = 6;
    d_max_x: u64 = 500;
    d_search_budget: u64 = 10_000;
    d_pairs: usize = 200;
    d_dense_stages: u64 = 400;
    d_max_k: u64 = 10;
    d_family_stage: u64 = 2000;
    d_family_horizon: u64 = 512;
    d_density_pairs: usize = 50;
    d_density_bound: u64 = 64;
    d_transport_bound: u64 = 128;
    d_axiom_bound: u64 = 200;
}

fn all_witnesses() -> Vec<WitnessKind> {
    vec![
        WitnessKind::Successor,
        WitnessKind::Predecessor,
        WitnessKind::Midpoint,
    ]
}

fn stabilization_orders() -> Vec<String> {
    [
        "N",
        "nzq",
        "breaker",
        "colored",
        "shuffle-finite",
        "shuffle-all",
        "shuffle-pi2",
        "shuffle-sigma2",
    ]
    .map(String::from)
    .to_vec()
}

/// Every base order shipped with the tool.
pub fn shipped_bases() -> Vec<String> {
    [
        "N",
        "N*",
        "Z",
        "Q",
        "ZQ",
        "N+ZQ",
        "rev(Q)",
        "finite:7",
        "nzq",
        "breaker:200",
        "colored:100",
    ]
    .map(String::from)
    .to_vec()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Successor,
    Predecessor,
    Midpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransportTarget {
    /// `ℤ ≅ ℕ* + ℕ`, then the sum and reverse transports.
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "ZQ")]
    IntegersByRationals,
    #[serde(rename = "N+ZQ")]
    NaturalsPlusZq,
    #[serde(rename = "rev(Q)")]
    ReversedRationals,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    /// Canonical embeds compare like the base, on every listed base (the
    /// recipe base when empty).
    EmbeddingFidelity {
        #[serde(default)]
        bases: Vec<String>,
        #[serde(default = "d_bound")]
        bound: u64,
    },
    /// Successor, predecessor and midpoint witnesses over ℕ.
    StdPowerWitnesses {
        #[serde(default = "d_reps")]
        representatives: usize,
        #[serde(default = "all_witnesses")]
        witnesses: Vec<WitnessKind>,
    },
    /// Predecessor censuses agree at two stage or horizon levels.
    OmegaStabilization {
        #[serde(default = "d_probe")]
        probe_max: u64,
        #[serde(default = "stabilization_orders")]
        orders: Vec<String>,
        #[serde(default = "d_low")]
        low: u64,
        #[serde(default = "d_high")]
        high: u64,
        #[serde(default = "d_colored_low")]
        colored_low: u64,
        #[serde(default = "d_colored_high")]
        colored_high: u64,
        #[serde(default)]
        max_seconds_per_order: Option<f64>,
    },
    SuccessorBreaking {
        #[serde(default = "d_programs")]
        programs: u64,
        #[serde(default = "d_stages")]
        stages: u64,
    },
    ColorDensity {
        #[serde(default = "d_colored_stages")]
        stages: u64,
        #[serde(default = "d_max_color")]
        max_color: u64,
    },
    ShuffleFibers {
        #[serde(default = "d_max_x")]
        max_x: u64,
        #[serde(default = "d_search_budget")]
        budget: u64,
    },
    /// Sum, product, reverse and the integer pipeline together.
    TransportAudits {
        #[serde(default = "d_pairs")]
        pairs: usize,
        #[serde(default = "d_transport_bound")]
        window_bound: u64,
    },
    Transport {
        target: TransportTarget,
        #[serde(default = "d_pairs")]
        pairs: usize,
        #[serde(default = "d_transport_bound")]
        window_bound: u64,
    },
    DenseBlocks {
        #[serde(default = "d_dense_stages")]
        stages: u64,
        #[serde(default = "d_max_k")]
        max_k: u64,
    },
    FamilyContract {
        #[serde(default = "d_family_stage")]
        stage: u64,
        #[serde(default = "d_family_horizon")]
        horizon: u64,
    },
    /// Between-element searches over the recipe base.
    Density {
        /// Overrides the recipe base.
        #[serde(default)]
        base: Option<String>,
        #[serde(default = "d_density_pairs")]
        pairs: usize,
        #[serde(default = "d_density_bound")]
        window_bound: u64,
    },
    Axioms {
        #[serde(default = "d_axiom_bound")]
        bound: u64,
    },
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::EmbeddingFidelity { .. } => "embedding_fidelity",
            Check::StdPowerWitnesses { .. } => "std_power_witnesses",
            Check::OmegaStabilization { .. } => "omega_stabilization",
            Check::SuccessorBreaking { .. } => "successor_breaking",
            Check::ColorDensity { .. } => "color_density",
            Check::ShuffleFibers { .. } => "shuffle_fibers",
            Check::TransportAudits { .. } => "transport_audits",
            Check::Transport { .. } => "transport",
            Check::DenseBlocks { .. } => "dense_blocks",
            Check::FamilyContract { .. } => "family_contract",
            Check::Density { .. } => "density",
            Check::Axioms { .. } => "axioms",
        }
    }
}

type CheckResult = Result<CheckOutcome, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn run_check(check: &Check, ctx: &RunContext) -> CheckOutcome {
    let out = match check {
        Check::EmbeddingFidelity { bases, bound } => embedding_fidelity(ctx, bases, *bound),
        Check::StdPowerWitnesses {
            representatives,
            witnesses,
        } => std_power(ctx, *representatives, witnesses),
        Check::OmegaStabilization {
            probe_max,
            orders,
            low,
            high,
            colored_low,
            colored_high,
            max_seconds_per_order,
        } => omega_stabilization(
            ctx,
            *probe_max,
            orders,
            (*low, *high),
            (*colored_low, *colored_high),
            *max_seconds_per_order,
        ),
        Check::SuccessorBreaking { programs, stages } => successor_breaking(*programs, *stages),
        Check::ColorDensity { stages, max_color } => color_density(ctx, *stages, *max_color),
        Check::ShuffleFibers { max_x, budget } => shuffle_fibers(*max_x, *budget),
        Check::TransportAudits {
            pairs,
            window_bound,
        } => transport_audits(ctx, *pairs, *window_bound),
        Check::Transport {
            target,
            pairs,
            window_bound,
        } => transport_check(ctx, *target, *pairs, *window_bound),
        Check::DenseBlocks { stages, max_k } => dense_blocks(*stages, *max_k),
        Check::FamilyContract { stage, horizon } => family_contract(*stage, *horizon),
        Check::Density {
            base,
            pairs,
            window_bound,
        } => density(ctx, base.as_deref(), *pairs, *window_bound),
        Check::Axioms { bound } => axioms(ctx, *bound),
    };
    out.unwrap_or_else(CheckOutcome::error)
}

fn relation(base: &dyn ComputableOrder, a: u64, b: u64, budget: u64) -> Option<Relation> {
    if a == b {
        return Some(Relation::Equal);
    }
    base.less(a, b, budget).map(|lt| {
        if lt {
            Relation::Less
        } else {
            Relation::Greater
        }
    })
}

fn element(
    ctx: &Arc<PowerContext>,
    name: impl Into<String>,
    f: impl Fn(u64) -> u64 + Send + Sync + 'static,
) -> Result<PowerElement, PowerError> {
    PowerElement::new(ctx, ClockedFunction::rule(name, f))
}

fn embedding_fidelity(ctx: &RunContext, bases: &[String], bound: u64) -> CheckResult {
    let names = if bases.is_empty() {
        vec![ctx.params.base.clone()]
    } else {
        bases.to_vec()
    };
    let budget = ctx.params.budget;
    let mut per_base = Vec::new();
    let mut total_failures = 0usize;
    for name in &names {
        let base = parse_order(name).map_err(err)?;
        let pctx = PowerContext::new(base.clone(), ctx.cohesive.clone(), budget);
        let members: Vec<u64> = (0..bound)
            .filter(|&a| base.contains(a, budget) == Some(true))
            .collect();
        let embeds = members
            .iter()
            .map(|&a| canonical_embed(&pctx, a))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let mut failures = Vec::new();
        let mut pairs = 0usize;
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                pairs += 1;
                let expected = relation(&*base, a, b, budget);
                let got = power_compare(&embeds[i], &embeds[j]).map_err(err)?;
                if expected.is_none() || got.decided() != expected.as_ref() {
                    failures.push(json!([a, b, expected, got.outcome]));
                }
            }
        }
        total_failures += failures.len();
        failures.truncate(5);
        per_base.push(json!({
            "base": base.name(),
            "members": members.len(),
            "pairs": pairs,
            "failures": failures,
        }));
    }
    Ok(CheckOutcome::new(
        total_failures == 0,
        format!("{} bases, {total_failures} failures", names.len()),
        json!({ "bases": per_base }),
    ))
}

type Rule = fn(u64) -> u64;

/// Twenty fixed nonstandard representatives over ℕ, all positive on `n ≥ 1`.
pub const STD_REPRESENTATIVES: [(&str, Rule); 20] = [
    ("n", |n| n),
    ("n+1", |n| n + 1),
    ("n+5", |n| n + 5),
    ("2n", |n| 2 * n),
    ("2n+3", |n| 2 * n + 3),
    ("3n", |n| 3 * n),
    ("3n+7", |n| 3 * n + 7),
    ("5n+2", |n| 5 * n + 2),
    ("7n", |n| 7 * n),
    ("10n", |n| 10 * n),
    ("n²", |n| n * n),
    ("n²+1", |n| n * n + 1),
    ("n²+n", |n| n * n + n),
    ("n(n+1)/2", |n| n * (n + 1) / 2),
    ("2n²+3", |n| 2 * n * n + 3),
    ("n³", |n| n * n * n),
    ("n+√n", |n| n + n.isqrt()),
    ("n·√n", |n| n * n.isqrt()),
    ("4n+log n", |n| 4 * n + n.max(1).ilog2() as u64),
    ("n(1+n mod 3)", |n| n * (1 + n % 3)),
];

fn std_power(ctx: &RunContext, count: usize, witnesses: &[WitnessKind]) -> CheckResult {
    let base = parse_order(&ctx.params.base).map_err(err)?;
    let pctx = PowerContext::new(base, ctx.cohesive.clone(), ctx.params.budget);
    let mut verdicts = 0usize;
    let mut yes = 0usize;
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for &(name, f) in STD_REPRESENTATIVES.iter().cycle().take(count) {
        let x = element(&pctx, name, f).map_err(err)?;
        let nonstandard = classify_standard(&x).is_nonstandard();
        let mut row = json!({ "representative": name, "nonstandard": nonstandard });
        let mut record =
            |key: &str, v: Result<cohepow_core::Verdict<bool>, PowerError>, inputs: &[&str]| {
                verdicts += 1;
                let ok = matches!(&v, Ok(v) if v.is(&true));
                yes += ok as usize;
                row[key] = match &v {
                    Ok(v) => serde_json::to_value(&v.outcome).unwrap_or(Value::Null),
                    Err(e) => json!({ "error": e.to_string() }),
                };
                if samples.len() < 6 {
                    if let Ok(v) = &v {
                        samples.push(v.report(key, inputs, &pctx));
                    }
                }
            };
        for w in witnesses {
            match w {
                WitnessKind::Successor => {
                    let v = successor_witness(&x).and_then(|s| immediate_successor_test(&x, &s));
                    record("successor", v, &[name, "succ"]);
                }
                WitnessKind::Predecessor => {
                    let v = predecessor_witness(&x).and_then(|p| immediate_successor_test(&p, &x));
                    record("predecessor", v, &["pred", name]);
                }
                WitnessKind::Midpoint => {
                    let upper_name = format!("3·({name})+n");
                    let upper =
                        element(&pctx, upper_name.clone(), move |n| 3 * f(n) + n).map_err(err)?;
                    let m = midpoint_witness(&x, &upper);
                    let (lo, hi) = match m {
                        Ok(m) => (far_apart_test(&x, &m), far_apart_test(&m, &upper)),
                        Err(e) => (Err(e.clone()), Err(e)),
                    };
                    record("midpoint_lower", lo, &[name, "mid"]);
                    record("midpoint_upper", hi, &["mid", &upper_name]);
                }
            }
        }
        rows.push(row);
    }
    Ok(CheckOutcome::new(
        verdicts > 0 && yes == verdicts,
        format!("{yes}/{verdicts} Decided(yes)"),
        json!({ "window": ctx.cohesive.len(), "decided_yes": yes, "verdicts": verdicts,
                "representatives": rows, "samples": samples }),
    ))
}

pub type ToyShuffle = (String, Arc<Shuffle>, Box<dyn Fn(u64) -> u64>);

/// The four toy shuffles over ℕ: `(name, shuffle, expected fiber size)`.
pub fn toy_shuffles(budget: u64) -> Vec<ToyShuffle> {
    let mod_n = |m: u64| -> Coloring { Arc::new(move |x| Some(x % m)) };
    let r_true: Predicate3 = Arc::new(|_, _, _| true);
    // fails at a = 7 for every k ≥ 3
    let r_fail: Predicate3 = Arc::new(|k, a, _| a != 7 || k <= 2);
    let ks = vec![1, 2, 3];
    let k0 = 2;
    let mut out: Vec<ToyShuffle> = Vec::new();
    {
        let ks2 = ks.clone();
        out.push((
            "shuffle-finite".into(),
            Arc::new(shuffle_finite(naturals(), mod_n(3), ks)),
            Box::new(move |x| ks2[(x % 3) as usize]),
        ));
    }
    out.push((
        "shuffle-all".into(),
        Arc::new(shuffle_all(naturals(), mod_n(4))),
        Box::new(|x| if x % 4 == 0 { x + 1 } else { x % 4 }),
    ));
    for (label, r) in [("true", r_true), ("fail", r_fail)] {
        let rp = r.clone();
        out.push((
            format!("shuffle-pi2-{label}"),
            Arc::new(shuffle_pi2(naturals(), mod_n(5), r.clone(), k0)),
            Box::new(move |x| {
                let c = x % 5;
                if c < k0 {
                    x + 1
                } else if brute_search(&rp, c, x, budget) {
                    c
                } else {
                    k0
                }
            }),
        ));
        out.push((
            format!("shuffle-sigma2-{label}"),
            Arc::new(shuffle_sigma2(naturals(), mod_n(5), r.clone())),
            Box::new(move |x| {
                let c = x % 5;
                if c == 0 {
                    x + 1
                } else if brute_search(&r, c, x, budget) {
                    c.max(x + 1)
                } else {
                    c
                }
            }),
        ));
    }
    out
}

/// `(∀a ≤ x)(∃b) R(k, a, b)` within `budget` tests of `R` in total.
fn brute_search(r: &Predicate3, k: u64, x: u64, budget: u64) -> bool {
    let mut total = 0u64;
    for a in 0..=x {
        let Some(b) = (0..budget).find(|&b| r(k, a, b)) else {
            return false;
        };
        total += b + 1;
    }
    total <= budget
}

fn shuffle_fibers(max_x: u64, budget: u64) -> CheckResult {
    let mut rows = Vec::new();
    let mut mismatches = 0usize;
    for (name, m, oracle) in toy_shuffles(budget) {
        let mut bad = Vec::new();
        for x in 0..=max_x {
            let got = fiber_size(&*m, x, budget, 4 * (max_x + 2));
            let want = oracle(x);
            if got != want {
                bad.push(json!([x, got, want]));
            }
        }
        mismatches += bad.len();
        bad.truncate(5);
        rows.push(json!({ "shuffle": name, "mismatches": bad }));
    }
    Ok(CheckOutcome::new(
        mismatches == 0,
        format!("{mismatches} mismatches over x ≤ {max_x}"),
        json!({ "shuffles": rows }),
    ))
}

struct Level {
    order: Order,
    horizon: u64,
    budget: u64,
}

fn stabilization_levels(
    name: &str,
    (low, high): (u64, u64),
    (clow, chigh): (u64, u64),
) -> Result<(Level, Level), String> {
    let plain = |o: Order| {
        (
            Level {
                order: o.clone(),
                horizon: low,
                budget: low,
            },
            Level {
                order: o,
                horizon: high,
                budget: high,
            },
        )
    };
    let staged = |a: StagedOrder, sa: u64, b: StagedOrder, sb: u64| {
        (
            Level {
                order: Arc::new(a),
                horizon: u64::MAX,
                budget: sa,
            },
            Level {
                order: Arc::new(b),
                horizon: u64::MAX,
                budget: sb,
            },
        )
    };
    Ok(match name {
        "N" => plain(naturals()),
        "nzq" => plain(Arc::new(NzqCopy::over_halting_diagonal())),
        "breaker" => {
            let r = breaker_reserved;
            staged(
                build_successor_breaker(Numbering::Interpreter, r, low),
                low,
                build_successor_breaker(Numbering::Interpreter, r, high),
                high,
            )
        }
        "colored" => {
            let w = colored_complement();
            let (a, _) = build_colored_dense(gap_overlay(), &w, clow).map_err(err)?;
            let (b, _) = build_colored_dense(gap_overlay(), &w, chigh).map_err(err)?;
            staged(a, clow, b, chigh)
        }
        _ => {
            let prefix = format!("{name}-");
            let (_, m, _) = toy_shuffles(d_search_budget())
                .into_iter()
                .find(|(n, _, _)| *n == name || n.starts_with(&prefix) && n.ends_with("fail"))
                .ok_or_else(|| format!("unknown order `{name}`"))?;
            let mk = |h: u64| {
                let pb = pull_back(m.clone(), h);
                let listed = pb.listed() as u64;
                Level {
                    order: Arc::new(pb),
                    horizon: listed,
                    budget: h,
                }
            };
            (mk(low), mk(high))
        }
    })
}

fn omega_stabilization(
    _ctx: &RunContext,
    probe_max: u64,
    orders: &[String],
    levels: (u64, u64),
    colored: (u64, u64),
    max_per_order: Option<f64>,
) -> CheckResult {
    let mut rows = Vec::new();
    let mut discrepancies = 0usize;
    let mut slow = 0usize;
    for name in orders {
        let start = Instant::now();
        let (a, b) = stabilization_levels(name, levels, colored)?;
        let census = |l: &Level| -> Vec<u64> {
            (0..=probe_max)
                .map(|z| predecessor_census(&*l.order, z, l.horizon, l.budget))
                .collect()
        };
        let (ca, cb) = (census(&a), census(&b));
        let diff: Vec<u64> = (0..=probe_max)
            .filter(|&z| ca[z as usize] != cb[z as usize])
            .collect();
        let secs = start.elapsed().as_secs_f64();
        slow += max_per_order.is_some_and(|m| secs > m) as usize;
        discrepancies += diff.len();
        rows.push(json!({
            "order": name,
            "low": ca,
            "discrepancies": diff,
            "seconds": (secs * 10.0).round() / 10.0,
        }));
    }
    Ok(CheckOutcome::new(
        discrepancies == 0 && slow == 0,
        format!(
            "{} orders, {discrepancies} discrepancies, {slow} over time",
            orders.len()
        ),
        json!({ "orders": rows }),
    ))
}

fn successor_breaking(programs: u64, stages: u64) -> CheckResult {
    let extra = [CeSet::decidable("evens", |x| x % 2 == 0)];
    let c = default_cohesive(&extra).map_err(err)?;
    let r = reserved_computable_subset(&c).map_err(err)?;
    let o = build_successor_breaker(Numbering::Interpreter, |x| r.contains(x), stages);
    let audit = audit_breaker(&o, Numbering::Interpreter, |x| r.contains(x));
    let (mut checked, mut reversed, mut separated, mut absent) = (0usize, 0, 0, 0);
    let mut failures = Vec::new();
    for e in 0..programs {
        for &n in c.elements() {
            // requirement ⟨e,n⟩ runs only at stages above its code
            if checked_pair(e, n).is_none_or(|code| code >= stages) {
                continue;
            }
            let Some(v) = interpret(&e.into(), n, stages).value() else {
                continue;
            };
            let above = (0..=e).all(|j| j != n && o.precedes(j as Elem, n as Elem) == Some(true));
            if !above {
                continue;
            }
            checked += 1;
            if !o.has(v as Elem) {
                absent += 1;
            } else if o.precedes(n as Elem, v as Elem) != Some(true) {
                reversed += 1;
            } else if interval_census(&o, n, v, u64::MAX, stages) > 0 {
                separated += 1;
            } else {
                failures.push(json!({ "e": e, "n": n, "value": v }));
            }
        }
    }
    Ok(CheckOutcome::new(
        failures.is_empty() && audit.passed(),
        format!(
            "{checked} halting pairs, {} not broken, audit {} actions {}",
            failures.len(),
            audit.actions,
            if audit.passed() { "ok" } else { "failed" }
        ),
        json!({
            "reserved": r,
            "checked": checked,
            "separated": separated,
            "reversed": reversed,
            "target_absent": absent,
            "failures": failures,
            "audit_actions": audit.actions,
            "audit_violations": audit.violations,
        }),
    ))
}

fn color_density(ctx: &RunContext, stages: u64, max_color: u64) -> CheckResult {
    let (o, stats) =
        build_colored_dense(gap_overlay(), &colored_complement(), stages).map_err(err)?;
    let o = Arc::new(o);
    let coloring = o.coloring();
    let window = Arc::new(ctx.cohesive.truncate(stages / 8));
    let pctx = PowerContext::new(o.clone(), window, stages);
    let x = element(&pctx, "4n", |n| 4 * n).map_err(err)?;
    let y = element(&pctx, "8n", |n| 8 * n).map_err(err)?;
    let mut rows = Vec::new();
    let mut ok = 0usize;
    let targets: Vec<ColorTarget> = (0..=max_color)
        .map(ColorTarget::Solid)
        .chain([ColorTarget::Striped])
        .collect();
    for &t in &targets {
        let row = match color_density_witness(&x, &y, &coloring, t) {
            Ok(theta) => {
                let kind = induced_color(&coloring, &theta).kind;
                let between = power_compare(&x, &theta).map_err(err)?.is(&Relation::Less)
                    && power_compare(&theta, &y).map_err(err)?.is(&Relation::Less);
                let right_kind = match t {
                    ColorTarget::Solid(d) => kind == ColorKind::Solid(d),
                    ColorTarget::Striped => matches!(kind, ColorKind::StripedEvidence(_)),
                };
                ok += (between && right_kind) as usize;
                json!({ "target": t, "kind": kind, "between": between })
            }
            Err(e) => json!({ "target": t, "error": e.to_string() }),
        };
        rows.push(row);
    }
    Ok(CheckOutcome::new(
        ok == targets.len(),
        format!("{ok}/{} targets witnessed", targets.len()),
        json!({ "stats": stats, "window": pctx.window().len(), "targets": rows }),
    ))
}

/// Representatives for transport audits, drawn from a seeded generator.
struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn nat(&mut self) -> (String, Rule2) {
        let (a, b) = (self.rng.gen_range(0..3u64), self.rng.gen_range(0..20u64));
        (format!("{a}n+{b}"), Arc::new(move |n| a * n + b))
    }

    fn int(&mut self) -> (String, Rule2) {
        let (a, b) = (
            self.rng.gen_range(-2..=2i64),
            self.rng.gen_range(-10..=10i64),
        );
        (
            format!("ℤ({a}n{b:+})"),
            Arc::new(move |n| integer_code(a * n as i64 + b)),
        )
    }

    /// `(a·n + b) / d` with `d = n + e` when `moving`, else a constant.
    fn rat(&mut self, moving: bool) -> (String, Rule2) {
        let a = self.rng.gen_range(-1..=1i64);
        let b = self.rng.gen_range(-5..=5i64);
        let e = self.rng.gen_range(1..=3i64);
        let moving = moving && self.rng.gen_bool(0.5);
        let label = if moving {
            format!("ℚ(({a}n{b:+})/(n+{e}))")
        } else {
            format!("ℚ(({a}n{b:+})/{e})")
        };
        (
            label,
            Arc::new(move |n| {
                let d = if moving { n as i64 + e } else { e };
                rational_code(a * n as i64 + b, d).expect("small codes")
            }),
        )
    }

    fn zq(&mut self, moving: bool) -> (String, Rule2) {
        let (lq, q) = self.rat(moving);
        let (lz, z) = self.int();
        (format!("⟨{lq},{lz}⟩"), Arc::new(move |n| pair(q(n), z(n))))
    }

    fn nat_plus_zq(&mut self) -> (String, Rule2) {
        let tag = self.rng.gen_range(0..2u64);
        let late = self.rng.gen_bool(0.2);
        let (lc, c) = if tag == 0 { self.nat() } else { self.zq(false) };
        (
            format!("⟨{tag},{lc}⟩{}", if late { "'" } else { "" }),
            Arc::new(move |n| {
                let t = if late && n < 4 { 1 - tag } else { tag };
                pair(t, c(n))
            }),
        )
    }
}

type Rule2 = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

fn pool(
    ctx: &Arc<PowerContext>,
    size: usize,
    mut gen: impl FnMut() -> (String, Rule2),
) -> Result<Vec<PowerElement>, String> {
    (0..size)
        .map(|_| {
            let (label, f) = gen();
            element(ctx, label, move |n| f(n)).map_err(err)
        })
        .collect()
}

fn sample_pairs(
    rng: &mut ChaCha8Rng,
    pool: &[PowerElement],
    count: usize,
) -> Vec<(PowerElement, PowerElement)> {
    (0..count)
        .map(|_| {
            let i = rng.gen_range(0..pool.len());
            let j = rng.gen_range(0..pool.len());
            (pool[i].clone(), pool[j].clone())
        })
        .collect()
}

fn sum_image_compare(
    a: &cohepow_core::power::SumImage,
    b: &cohepow_core::power::SumImage,
) -> Result<Outcome<Relation>, PowerError> {
    if a.tag != b.tag || a.tag == 0 {
        return a.compare(b);
    }
    // the ℤℚ summand: compare through the product coordinates
    product_transport(&a.component)?.compare(&product_transport(&b.component)?)
}

fn audit_json(a: &TransportAudit) -> Value {
    let mut v = serde_json::to_value(a).unwrap_or(Value::Null);
    if let Some(f) = v.get_mut("failures").and_then(Value::as_array_mut) {
        f.truncate(5);
    }
    v
}

fn run_transport(
    ctx: &RunContext,
    target: TransportTarget,
    pairs: usize,
    window_bound: u64,
) -> Result<TransportAudit, String> {
    let window = Arc::new(ctx.cohesive.truncate(window_bound));
    let budget = ctx.params.budget;
    let mut s = Sampler::new(ctx.params.seed ^ target as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.params.seed.wrapping_add(1 + target as u64));
    let size = 40;
    Ok(match target {
        TransportTarget::Integers => {
            let zctx = PowerContext::new(parse_order("Z").map_err(err)?, window, budget);
            let sctx = zctx.rebased(sum(reverse(naturals()), naturals()));
            let p = pool(&zctx, size, || s.int())?;
            let g = ClockedFunction::rule("g", sum_code_from_integer);
            let map = |x: &PowerElement| -> Result<(u64, PowerElement), PowerError> {
                let img = sum_transport(&transport_iso(&g, &sctx, x)?)?;
                let part = if img.tag == 0 {
                    reverse_transport(&img.component)?
                } else {
                    img.component
                };
                Ok((img.tag, part))
            };
            let compare = |a: &(u64, PowerElement), b: &(u64, PowerElement)| {
                if a.0 != b.0 {
                    return Ok(Outcome::Decided(a.0.cmp(&b.0).into()));
                }
                Ok(match power_compare(&a.1, &b.1)?.outcome {
                    Outcome::Decided(r) if a.0 == 0 => Outcome::Decided(r.flip()),
                    o => o,
                })
            };
            audit_transport(&sample_pairs(&mut rng, &p, pairs), map, compare, false)
        }
        TransportTarget::IntegersByRationals => {
            let c = PowerContext::new(parse_order("ZQ").map_err(err)?, window, budget);
            let p = pool(&c, size, || s.zq(true))?;
            audit_transport(
                &sample_pairs(&mut rng, &p, pairs),
                product_transport,
                |a, b| a.compare(b),
                false,
            )
        }
        TransportTarget::NaturalsPlusZq => {
            let c = PowerContext::new(parse_order("N+ZQ").map_err(err)?, window, budget);
            let p = pool(&c, size, || s.nat_plus_zq())?;
            audit_transport(
                &sample_pairs(&mut rng, &p, pairs),
                sum_transport,
                sum_image_compare,
                false,
            )
        }
        TransportTarget::ReversedRationals => {
            let c = PowerContext::new(parse_order("rev(Q)").map_err(err)?, window, budget);
            let p = pool(&c, size, || s.rat(true))?;
            audit_transport(
                &sample_pairs(&mut rng, &p, pairs),
                reverse_transport,
                |a, b| Ok(power_compare(a, b)?.outcome),
                true,
            )
        }
    })
}

fn target_name(t: TransportTarget) -> &'static str {
    match t {
        TransportTarget::Integers => "Z≅N*+N",
        TransportTarget::IntegersByRationals => "ZQ product",
        TransportTarget::NaturalsPlusZq => "N+ZQ sum",
        TransportTarget::ReversedRationals => "rev(Q) reverse",
    }
}

fn transport_check(
    ctx: &RunContext,
    target: TransportTarget,
    pairs: usize,
    window_bound: u64,
) -> CheckResult {
    let a = run_transport(ctx, target, pairs, window_bound)?;
    Ok(CheckOutcome::new(
        a.passed() && a.decided > 0,
        format!(
            "{}: {}/{} decided verdicts preserved",
            target_name(target),
            a.preserved,
            a.decided
        ),
        audit_json(&a),
    ))
}

fn transport_audits(ctx: &RunContext, pairs: usize, window_bound: u64) -> CheckResult {
    let targets = [
        TransportTarget::NaturalsPlusZq,
        TransportTarget::IntegersByRationals,
        TransportTarget::ReversedRationals,
        TransportTarget::Integers,
    ];
    let mut rows = Vec::new();
    let mut ok = true;
    let mut failures = 0usize;
    for t in targets {
        let a = run_transport(ctx, t, pairs, window_bound)?;
        ok &= a.passed() && a.decided > 0;
        failures += a.failures.len();
        rows.push(json!({ "target": target_name(t), "audit": audit_json(&a) }));
    }
    Ok(CheckOutcome::new(
        ok,
        format!("4 transports x {pairs} pairs, {failures} failures"),
        json!({ "audits": rows }),
    ))
}

fn dense_blocks(stages: u64, max_k: u64) -> CheckResult {
    let c = default_cohesive(&[]).map_err(err)?;
    let w = c.complement().clone();
    let psi = ClockedFunction::constant(0);
    let phi = ClockedFunction::rule("2n", |n| 2 * n);
    let n = naturals();
    let run = dense_blocks_theta(&psi, &phi, &*n, &w, stages);
    let mut uncovered = Vec::new();
    let mut covers = Vec::new();
    for k in 0..=max_k {
        match run.final_cover(k) {
            Some(m) if !w.contains_at(m, stages) => covers.push(json!([k, m])),
            other => uncovered.push(json!([k, other])),
        }
    }
    let outside: Vec<u64> = run
        .graph
        .iter()
        .filter(|&&(m, x, _)| !(0 < x && x < 2 * m))
        .map(|&(m, _, _)| m)
        .collect();
    let audit = audit_cover_ledger(&run, &psi, &phi, &*n, &w);
    Ok(CheckOutcome::new(
        uncovered.is_empty() && outside.is_empty() && audit.is_ok(),
        format!(
            "{} of {} levels covered, {} values outside (ψ, φ), audit {}",
            covers.len(),
            max_k + 1,
            outside.len(),
            if audit.is_ok() { "ok" } else { "failed" }
        ),
        json!({
            "covers": covers,
            "uncovered": uncovered,
            "defined": run.graph.len(),
            "outside": outside,
            "audit": audit.err(),
        }),
    ))
}

/// Six c.e. sets for the family contract.
pub fn canonical_family() -> Vec<CeSet> {
    vec![
        CeSet::decidable("evens", |x| x % 2 == 0),
        CeSet::decidable("mult3", |x| x % 3 == 0),
        CeSet::halting_diagonal(),
        CeSet::program_domain(7),
        CeSet::decidable("bit4", |x| (x >> 4) & 1 == 1),
        CeSet::from_entry("slow-odds", |x, limit| {
            (x % 2 == 1 && 4 * x <= limit).then_some(4 * x)
        }),
    ]
}

/// Lexicographically greatest sign vector (membership first) whose every
/// prefix cell is large and reaches the upper half; its final cell.
fn brute_family_window(family: &[CeSet], stage: u64, horizon: u64) -> Option<Vec<u64>> {
    let k = family.len();
    let member: Vec<Vec<bool>> = family
        .iter()
        .map(|w| (0..=horizon).map(|x| w.contains_at(x, stage)).collect())
        .collect();
    (0..1u64 << k).rev().find_map(|bits| {
        let sign = |i: usize| (bits >> (k - 1 - i)) & 1 == 1;
        let mut cell: Vec<u64> = (0..=horizon).collect();
        for (i, m) in member.iter().enumerate() {
            cell.retain(|&x| m[x as usize] == sign(i));
            let viable = cell.len() >= MIN_RETAIN && cell.last().is_some_and(|&x| x > horizon / 2);
            if !viable {
                return None;
            }
        }
        Some(cell)
    })
}

fn family_contract(stage: u64, horizon: u64) -> CheckResult {
    let family = canonical_family();
    let c: CohesiveApprox = family_cohesive(&family, stage, horizon).map_err(err)?;
    let cuts = family_contract_cuts(c.elements(), &family, stage);
    let exact = cuts.iter().all(|&m| m == 0);
    let brute = brute_family_window(&family, stage, horizon);
    let agrees = brute.as_deref() == Some(c.elements());
    let m = build_maximal(&family, stage, horizon);
    let monotone = m.trace_is_monotone();
    let local = m.is_locally_maximal();
    Ok(CheckOutcome::new(
        exact && agrees && monotone && local,
        format!(
            "window {} elements, cuts {cuts:?}, brute force {}, maximal trace {}",
            c.len(),
            if agrees { "agrees" } else { "differs" },
            if monotone && local {
                "monotone"
            } else {
                "violated"
            }
        ),
        json!({
            "window": c.elements(),
            "cuts": cuts,
            "brute_force_agrees": agrees,
            "maximal_markers": m.markers.len(),
            "maximal_enumerated": m.enumerated.len(),
            "trace_monotone": monotone,
            "locally_maximal": local,
        }),
    ))
}

/// Fixed ℚ representatives `(label, p(n), q(n))`.
type RatRule = (&'static str, fn(i64) -> i64, fn(i64) -> i64);

pub const RATIONAL_POOL: [RatRule; 14] = [
    ("0", |_| 0, |_| 1),
    ("1", |_| 1, |_| 1),
    ("1/2", |_| 1, |_| 2),
    ("1/(n+2)", |_| 1, |n| n + 2),
    ("2/(n+2)", |_| 2, |n| n + 2),
    ("(n+1)/(n+2)", |n| n + 1, |n| n + 2),
    ("(n+3)/(n+2)", |n| n + 3, |n| n + 2),
    ("n", |n| n, |_| 1),
    ("n+1", |n| n + 1, |_| 1),
    ("2n", |n| 2 * n, |_| 1),
    ("-n", |n| -n, |_| 1),
    ("-1/(n+2)", |_| -1, |n| n + 2),
    ("n+1/2", |n| 2 * n + 1, |_| 2),
    ("3/(n+2)", |_| 3, |n| n + 2),
];

fn density_pool(ctx: &Arc<PowerContext>, is_q: bool) -> Result<Vec<PowerElement>, String> {
    if is_q {
        return RATIONAL_POOL
            .iter()
            .map(|&(label, p, q)| {
                element(ctx, label, move |n| {
                    rational_code(p(n as i64), q(n as i64)).expect("small codes")
                })
                .map_err(err)
            })
            .collect();
    }
    let base = ctx.base();
    decided_members(&**base, 1000, ctx.budget())
        .into_iter()
        .take(16)
        .map(|a| canonical_embed(ctx, a).map_err(err))
        .collect()
}

fn density(ctx: &RunContext, base: Option<&str>, pairs: usize, window_bound: u64) -> CheckResult {
    let base = parse_order(base.unwrap_or(&ctx.params.base)).map_err(err)?;
    let is_q = base.name() == rationals().name();
    let window = Arc::new(ctx.cohesive.truncate(window_bound));
    let pctx = PowerContext::new(base, window, ctx.params.budget);
    let pool = density_pool(&pctx, is_q)?;
    let mut found = 0usize;
    let mut tried = 0usize;
    let mut endpoint = 0usize;
    let mut rows = Vec::new();
    'outer: for x in &pool {
        for y in &pool {
            if tried == pairs {
                break 'outer;
            }
            if !power_compare(x, y).map_err(err)?.is(&Relation::Less) {
                continue;
            }
            tried += 1;
            let row = match successor_witness_search(x, y) {
                Ok(t) => {
                    let lo = power_compare(x, &t).map_err(err)?;
                    let hi = power_compare(&t, y).map_err(err)?;
                    endpoint += (lo.is(&Relation::Equal) || hi.is(&Relation::Equal)) as usize;
                    let ok = lo.is(&Relation::Less) && hi.is(&Relation::Less);
                    found += ok as usize;
                    json!([x.label(), y.label(), ok])
                }
                Err(e) => json!([x.label(), y.label(), e.to_string()]),
            };
            rows.push(row);
        }
    }
    Ok(CheckOutcome::new(
        tried == pairs && found == tried && endpoint == 0,
        format!("{found}/{tried} strictly between, {endpoint} endpoint verdicts"),
        json!({ "pairs": rows, "window": pctx.window().len() }),
    ))
}

fn axioms(ctx: &RunContext, bound: u64) -> CheckResult {
    let base = parse_order(&ctx.params.base).map_err(err)?;
    Ok(match check_axioms(&*base, bound, ctx.params.budget) {
        Ok(n) => CheckOutcome::new(
            true,
            format!("{n} decided members ordered linearly"),
            json!({ "members": n }),
        ),
        Err(v) => CheckOutcome::new(
            false,
            format!("{v:?}"),
            json!({ "violation": format!("{v:?}") }),
        ),
    })
}

fn spec(id: &str, check: Check, max_seconds: Option<f64>) -> CheckSpec {
    CheckSpec {
        id: id.into(),
        check,
        expect: Expect {
            outcome: Status::Pass,
            max_seconds,
        },
    }
}

fn recipe(name: &str, checks: Vec<CheckSpec>) -> Recipe {
    Recipe {
        name: name.into(),
        params: Params::default(),
        cohesive: CohesiveSource::Default,
        checks,
    }
}

/// The acceptance suite, one check per criterion.
pub fn acceptance() -> Recipe {
    recipe(
        "acceptance",
        vec![
            spec(
                "1-embedding-fidelity",
                Check::EmbeddingFidelity {
                    bases: shipped_bases(),
                    bound: 50,
                },
                Some(5.0),
            ),
            spec(
                "2-standard-power-witnesses",
                Check::StdPowerWitnesses {
                    representatives: 20,
                    witnesses: all_witnesses(),
                },
                Some(60.0),
            ),
            spec(
                "3-omega-stabilization",
                Check::OmegaStabilization {
                    probe_max: 30,
                    orders: stabilization_orders(),
                    low: 2000,
                    high: 4000,
                    colored_low: 400,
                    colored_high: 800,
                    max_seconds_per_order: Some(120.0),
                },
                None,
            ),
            spec(
                "4-successor-breaking",
                Check::SuccessorBreaking {
                    programs: 8,
                    stages: 2000,
                },
                None,
            ),
            spec(
                "5-color-density",
                Check::ColorDensity {
                    stages: d_colored_stages(),
                    max_color: 6,
                },
                Some(120.0),
            ),
            spec(
                "6-shuffle-fibers",
                Check::ShuffleFibers {
                    max_x: 500,
                    budget: d_search_budget(),
                },
                None,
            ),
            spec(
                "7-transport-audits",
                Check::TransportAudits {
                    pairs: 200,
                    window_bound: d_transport_bound(),
                },
                None,
            ),
            spec(
                "8-dense-blocks",
                Check::DenseBlocks {
                    stages: d_dense_stages(),
                    max_k: 10,
                },
                None,
            ),
            spec(
                "9-family-contract",
                Check::FamilyContract {
                    stage: 2000,
                    horizon: 512,
                },
                Some(30.0),
            ),
            spec(
                "10-rational-density",
                Check::Density {
                    base: Some("Q".into()),
                    pairs: 50,
                    window_bound: d_density_bound(),
                },
                None,
            ),
        ],
    )
}

/// Built-in recipes: `std-power`, `example-4-5`, `acceptance`, `empty`.
pub fn builtin(name: &str) -> Option<Recipe> {
    let witness = |id: &str, w: WitnessKind| {
        spec(
            id,
            Check::StdPowerWitnesses {
                representatives: 20,
                witnesses: vec![w],
            },
            None,
        )
    };
    let transport = |id: &str, t: TransportTarget| {
        spec(
            id,
            Check::Transport {
                target: t,
                pairs: 200,
                window_bound: d_transport_bound(),
            },
            None,
        )
    };
    Some(match name {
        "std-power" => recipe(
            "std-power",
            vec![
                witness("succ", WitnessKind::Successor),
                witness("pred", WitnessKind::Predecessor),
                witness("midpoint", WitnessKind::Midpoint),
            ],
        ),
        "example-4-5" => recipe(
            "example-4-5",
            vec![
                transport("Z", TransportTarget::Integers),
                transport("ZQ", TransportTarget::IntegersByRationals),
                transport("N+ZQ", TransportTarget::NaturalsPlusZq),
            ],
        ),
        "acceptance" => acceptance(),
        "empty" => recipe("empty", Vec::new()),
        _ => return None,
    })
}

/// Single-base suites for `cohepow test`: `embedding`, `std-power`,
/// `density`, `axioms`, `all`.
pub fn test_suite(name: &str, base: &str) -> Option<Recipe> {
    let check = |id: &str| -> Option<CheckSpec> {
        Some(spec(
            id,
            match id {
                "embedding" => Check::EmbeddingFidelity {
                    bases: Vec::new(),
                    bound: 50,
                },
                "std-power" => Check::StdPowerWitnesses {
                    representatives: 20,
                    witnesses: all_witnesses(),
                },
                "density" => Check::Density {
                    base: None,
                    pairs: 50,
                    window_bound: d_density_bound(),
                },
                "axioms" => Check::Axioms { bound: 200 },
                _ => return None,
            },
            None,
        ))
    };
    let checks = if name == "all" {
        ["embedding", "std-power", "density", "axioms"]
            .iter()
            .map(|id| check(id))
            .collect::<Option<Vec<_>>>()?
    } else {
        vec![check(name)?]
    };
    let mut r = recipe(&format!("test-{name}"), checks);
    r.params.base = base.into();
    Some(r)
}
