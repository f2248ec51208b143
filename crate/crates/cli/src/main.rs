//! `measlat`: demonstrations and seeded property suites.
//!
//! Exit codes: 0 when every assertion holds, 1 on a violated assertion,
//! 2 on a configuration error. With `--output json` every record is one
//! line of JSON and identical flags give byte-identical output.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use measlat::algebra_star::{astar_ladder, FiniteAlgebra};
use measlat::completion_engine::EngineConfig;
use measlat::interval_sets::metric_d;
use measlat::measure_algebra::{
    bisection_ladder, decode_typewriter_index, row_start, stretched_term_index, stretched_typewriter, typewriter,
    typewriter_membership_count, BElement, SeededOracle,
};
use measlat::properties::{run_suite, Suite, SuiteConfig, SuiteResult};
use measlat::rational::{format_rational, parse_rational, pow2_inv, rat, Rational};
use measlat::scenarios::{
    run_scenario, run_scenario_corrupted, scenario_approx, Order, ScenarioError, ScenarioKind, ScenarioOutcome,
    MAX_INDEX,
};
use measlat::IntervalSet;
use num_traits::{One, Signed};
use serde_json::{json, Value};

const MAX_ROWS: u64 = 2000;
const MAX_STRETCHED_ROWS: u64 = 20;
const MAX_STEPS: usize = 4096;

#[derive(Parser)]
#[command(name = "measlat", version, about = "Exact demonstrations and property checks for metrized rings and lattices")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Last row H of the completion pipeline
    #[arg(long, global = true, default_value_t = 64)]
    horizon: usize,
    /// Random triples per interval-set suite
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,
    /// Largest subset size in exhaustive searches
    #[arg(long = "size-cap", global = true, default_value_t = 4)]
    size_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Target accuracy for approximate limits, as p/q
    #[arg(long, global = true, default_value = "1/256", value_parser = parse_epsilon)]
    epsilon: Rational,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Join,
    Meet,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Terms of the typewriter sequence and membership counts
    DemoTypewriter {
        /// Rows of the sequence to emit (distinct terms with --stretched)
        #[arg(long, default_value_t = 50)]
        rows: u64,
        /// Show the variant that repeats the m-th term 2^m times
        #[arg(long)]
        stretched: bool,
        /// Points whose membership is counted, as p/q
        #[arg(long = "t", default_value = "1/7", value_parser = parse_rational_arg)]
        points: Vec<Rational>,
    },
    /// Bisection toward 1 in the measure algebra and in A* over Z/6Z
    DemoBisection {
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Completion pipeline on the built-in scenarios with its inequality table
    DemoCompletion {
        /// Run only this scenario
        #[arg(long, value_parser = parse_scenario)]
        scenario: Option<ScenarioKind>,
        #[arg(long, value_enum, default_value_t = OrderArg::Both)]
        order: OrderArg,
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Seeded property suites over every module
    CheckProperties {
        /// Run only this suite
        #[arg(long, value_parser = parse_suite)]
        suite: Option<Suite>,
    },
}

fn parse_epsilon(s: &str) -> Result<Rational, String> {
    let e = parse_rational_arg(s)?;
    if e.is_positive() {
        Ok(e)
    } else {
        Err(format!("epsilon must be positive, got {s}"))
    }
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_scenario(s: &str) -> Result<ScenarioKind, String> {
    s.parse().map_err(|e: String| e)
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

struct ConfigError(String);

/// Text lines or JSON records on stdout, never both.
struct Out {
    json: bool,
    stdout: io::StdoutLock<'static>,
}

impl Out {
    fn text(&mut self, line: impl AsRef<str>) {
        if !self.json {
            writeln!(self.stdout, "{}", line.as_ref()).expect("stdout");
        }
    }

    fn record(&mut self, v: Value) {
        if self.json {
            writeln!(self.stdout, "{v}").expect("stdout");
        }
    }
}

/// Failed assertions, with the first one kept for the error message.
#[derive(Default)]
struct Assertions {
    checked: usize,
    failed: usize,
    first: Option<String>,
}

impl Assertions {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out {
        json: cli.common.output == Output::Json,
        stdout: io::stdout().lock(),
    };
    let result = match cli.command {
        Command::DemoTypewriter {
            rows,
            stretched,
            points,
        } => demo_typewriter(&mut out, rows, stretched, &points),
        Command::DemoBisection { steps } => demo_bisection(&mut out, &cli.common, steps),
        Command::DemoCompletion {
            scenario,
            order,
            corrupt,
        } => demo_completion(&mut out, &cli.common, scenario, order, corrupt),
        Command::CheckProperties { suite } => check_properties(&mut out, &cli.common, suite),
    };
    match result {
        Ok(a) => {
            out.record(json!({ "passed": a.failed == 0, "checked": a.checked, "violations": a.failed }));
            if let Some(first) = &a.first {
                eprintln!("violation: {first}");
            }
            out.text(format!("{} checks, {} violations", a.checked, a.failed));
            if a.failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(ConfigError(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn check_horizon(common: &Common) -> Result<EngineConfig, ConfigError> {
    let lookahead = EngineConfig::default().lookahead;
    if common.horizon == 0 || common.horizon + lookahead > MAX_INDEX {
        return Err(ConfigError(format!(
            "horizon must be between 1 and {} (lookahead {lookahead})",
            MAX_INDEX - lookahead
        )));
    }
    Ok(EngineConfig {
        horizon: common.horizon,
        lookahead,
    })
}

fn demo_typewriter(out: &mut Out, rows: u64, stretched: bool, points: &[Rational]) -> Result<Assertions, ConfigError> {
    let limit = if stretched { MAX_STRETCHED_ROWS } else { MAX_ROWS };
    if rows == 0 || rows > limit {
        return Err(ConfigError(format!("rows must be between 1 and {limit}")));
    }
    let mut a = Assertions::default();
    if stretched {
        for m in 1..=rows {
            let (first, last) = ((1u64 << m) - 1, (1u64 << (m + 1)) - 2);
            let term = typewriter(m);
            let run_ok = (first..=last).all(|k| stretched_term_index(k) == m && stretched_typewriter(k) == term);
            let bounded = (first == 1 || stretched_term_index(first - 1) != m) && stretched_term_index(last + 1) != m;
            a.check(run_ok && bounded, || format!("term {m} is not repeated exactly 2^{m} times"));
            out.text(format!("term {m:>2} x{:<7} {term}", 1u64 << m));
            out.record(json!({ "m": m, "first_k": first, "repeats": last - first + 1, "set": term, "measure": format_rational(&term.measure()) }));
        }
    } else {
        for k in 1..row_start(rows + 1) {
            let pos = decode_typewriter_index(k);
            let term = typewriter(k);
            let expect = rat(1, pos.row as i64);
            let measure = term.measure();
            let to_empty = term.dist(&BElement::zero());
            a.check(measure == expect, || format!("measure of term {k} is {measure}, not {expect}"));
            a.check(to_empty == expect, || format!("distance of term {k} to ∅ is {to_empty}, not {expect}"));
            out.text(format!(
                "k={k:<5} row {:>3} offset {:>3}  {term}  measure {}",
                pos.row,
                pos.offset,
                format_rational(&measure)
            ));
            out.record(json!({
                "k": k,
                "row": pos.row,
                "offset": pos.offset,
                "set": term,
                "measure": format_rational(&measure),
                "distance_to_empty": format_rational(&to_empty),
            }));
        }
    }
    for t in points {
        let count = typewriter_membership_count(t, rows);
        let inside = !t.is_negative() && *t < Rational::one();
        let expected = if inside { rows } else { 0 };
        a.check(count == expected, || {
            format!("t={} lies in {count} of {rows} rows, expected {expected}", format_rational(t))
        });
        out.text(format!("t={} lies in {count} of rows 1..{rows}", format_rational(t)));
        out.record(json!({ "t": format_rational(t), "rows": rows, "count": count }));
    }
    Ok(a)
}

fn demo_bisection(out: &mut Out, common: &Common, steps: usize) -> Result<Assertions, ConfigError> {
    if steps > MAX_STEPS {
        return Err(ConfigError(format!("steps must be at most {MAX_STEPS}")));
    }
    let mut a = Assertions::default();
    let ladder = bisection_ladder(&BElement::one(), &mut SeededOracle::new(common.seed), steps)
        .expect("[0, 1) has positive measure");
    let z6 = FiniteAlgebra::integers_mod(6);
    let star = astar_ladder(&z6, &mut SeededOracle::new(common.seed), steps).expect("Z/6Z has add and mul");
    out.text(format!("{:>4}  {:>12}  {:>12}  {:>12}  U", "step", "measure", "d(1+U, 1)", "Z/6Z"));
    for (r, s) in ladder.iter().zip(&star) {
        let expect = pow2_inv(r.step as u32);
        a.check(r.distance_to_one == expect, || {
            format!("step {}: distance {} is not {}", r.step, r.distance_to_one, expect)
        });
        a.check(s.distance_to_one == expect && s.measure == r.measure, || {
            format!("step {}: Z/6Z ladder differs", r.step)
        });
        out.text(format!(
            "{:>4}  {:>12}  {:>12}  {:>12}  {}",
            r.step,
            format_rational(&r.measure),
            format_rational(&r.distance_to_one),
            format_rational(&s.distance_to_one),
            r.set
        ));
        let mut rec = json!(r);
        rec["ring"] = json!("B");
        out.record(rec);
        let mut rec = json!(s);
        rec["ring"] = json!("Z/6Z");
        out.record(rec);
    }
    Ok(a)
}

fn demo_completion(
    out: &mut Out,
    common: &Common,
    only: Option<ScenarioKind>,
    order: OrderArg,
    corrupt: bool,
) -> Result<Assertions, ConfigError> {
    let config = check_horizon(common)?;
    let kinds: Vec<ScenarioKind> = match only {
        Some(k) => vec![k],
        None => ScenarioKind::ALL.to_vec(),
    };
    let orders: &[Order] = match order {
        OrderArg::Join => &[Order::Join],
        OrderArg::Meet => &[Order::Meet],
        OrderArg::Both => &[Order::Join, Order::Meet],
    };
    let config_error = |e: ScenarioError| ConfigError(e.to_string());
    let mut approxes = Vec::new();
    for &kind in &kinds {
        for &ord in orders {
            approxes.push(scenario_approx(kind, ord, &common.epsilon, config.horizon).map_err(config_error)?);
        }
    }
    let mut approxes = approxes.into_iter();
    let mut a = Assertions::default();
    for &kind in &kinds {
        for &ord in orders {
            let outcome = if corrupt {
                run_scenario_corrupted(kind, ord, config)
            } else {
                run_scenario(kind, ord, config)
            }
            .map_err(config_error)?;
            print_outcome(out, &outcome, &mut a);

            let approx = approxes.next().expect("one approximation per run");
            for s in &approx {
                let label = s.label.as_deref().unwrap_or("-");
                a.check(s.violations == 0 && s.approx.bound <= common.epsilon, || {
                    format!("{kind}/{ord}: approximate limit for {label} is not certified")
                });
                out.text(format!(
                    "  approx eps={} label {label}: h={} j={} bound {}  {}  ({} checks, {} violations)",
                    format_rational(&common.epsilon),
                    s.approx.h,
                    s.approx.j,
                    format_rational(&s.approx.bound),
                    s.approx.element,
                    s.checks,
                    s.violations
                ));
                out.record(json!({
                    "scenario": kind,
                    "order": ord,
                    "epsilon": format_rational(&common.epsilon),
                    "approx": s,
                }));
            }
            if kind == ScenarioKind::Typewriter && ord == Order::Join {
                let to_empty = metric_d(&approx[0].approx.element, &IntervalSet::empty());
                a.check(to_empty <= common.epsilon, || {
                    format!("approximate limit lies {} from ∅", format_rational(&to_empty))
                });
            }
        }
    }
    Ok(a)
}

fn print_outcome(out: &mut Out, outcome: &ScenarioOutcome, a: &mut Assertions) {
    let summary = outcome.summary();
    out.text(format!(
        "{} / {}  horizon {}  error bound {}",
        outcome.kind,
        outcome.order,
        summary.horizon,
        format_rational(&summary.error_bound)
    ));
    out.text(format!("  {:<24} {:>8} {:>10}  tightest", "inequality", "checked", "violations"));
    for f in &summary.families {
        let tight = f
            .tightest
            .as_ref()
            .map(|c| format!("{} <= {} at {:?}", format_rational(&c.lhs), format_rational(&c.rhs), c.indices))
            .unwrap_or_default();
        out.text(format!("  {:<24} {:>8} {:>10}  {tight}", f.name, f.checked, f.violations));
    }
    let checks = outcome.all_checks();
    for c in &checks.checks {
        a.check(c.ok, || {
            format!(
                "{}/{}: {} violated at {:?}: {} > {}",
                outcome.kind,
                outcome.order,
                c.name,
                c.indices,
                format_rational(&c.lhs),
                format_rational(&c.rhs)
            )
        });
    }
    for c in checks.violations().take(5) {
        out.text(format!(
            "  VIOLATED {} at {:?}: {} > {}",
            c.name,
            c.indices,
            format_rational(&c.lhs),
            format_rational(&c.rhs)
        ));
    }
    a.check(outcome.limit_matches(), || {
        format!("{}/{}: final limit differs from the expected limit", outcome.kind, outcome.order)
    });
    let shown = match &outcome.final_limit {
        Some(l) => serde_json::to_string(l).expect("limit serializes"),
        None => "unavailable".to_string(),
    };
    out.text(format!("  final limit {shown}"));
    out.record(json!(summary));
}

fn check_properties(out: &mut Out, common: &Common, only: Option<Suite>) -> Result<Assertions, ConfigError> {
    if common.samples == 0 {
        return Err(ConfigError("samples must be positive".into()));
    }
    if common.size_cap == 0 {
        return Err(ConfigError("size-cap must be positive".into()));
    }
    check_horizon(common)?;
    let cfg = SuiteConfig {
        seed: common.seed,
        samples: common.samples,
        size_cap: common.size_cap,
        horizon: common.horizon,
        epsilon: common.epsilon.clone(),
    };
    out.record(json!({ "command": "check-properties", "config": cfg }));
    let suites: Vec<Suite> = match only {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let mut a = Assertions::default();
    out.text(format!("{:<18} {:>9} {:>10}  status", "suite", "checked", "violations"));
    for s in suites {
        let r = run_suite(s, &cfg);
        a.checked += r.checked;
        a.failed += r.violations;
        if a.first.is_none() {
            a.first = r.first_violation.as_ref().map(|v| format!("{}: {v}", r.suite));
        }
        print_suite(out, &r);
        out.record(json!(r));
    }
    Ok(a)
}

fn print_suite(out: &mut Out, r: &SuiteResult) {
    let status = if r.passed { "pass" } else { "FAIL" };
    out.text(format!("{:<18} {:>9} {:>10}  {status}", r.suite.name(), r.checked, r.violations));
    if r.suite == Suite::DvWitness {
        if let Some(w) = r.details.get("witness").filter(|w| !w.is_null()) {
            out.text(format!(
                "  witness x={} y={} z={}: {} > {}",
                set_text(&w["x"]),
                set_text(&w["y"]),
                set_text(&w["z"]),
                w["lhs"].as_str().unwrap_or("?"),
                w["rhs"].as_str().unwrap_or("?")
            ));
        }
    }
    for law in r.laws.iter().filter(|l| l.violations > 0) {
        out.text(format!("  {}: {} of {} violated", law.law, law.violations, law.checked));
    }
    if let Some(v) = &r.first_violation {
        out.text(format!("  first violation: {v}"));
    }
}

fn set_text(v: &Value) -> String {
    let names: Vec<&str> = v.as_array().into_iter().flatten().filter_map(Value::as_str).collect();
    format!("{{{}}}", names.join(","))
}
