//! Built-in sequences for the completion engine, each runnable with unions
//! as joins or, on the order dual, with intersections as joins.
//!
//! - `typewriter`: the first term of row `2^i` of the typewriter sequence,
//!   `[0, 2^{-i})`, converging to `∅`.
//! - `increasing-sets`: `[0, 1 - 2^{-i})`, converging to `[0, 1)`.
//! - `step-functions`: three-valued step functions whose break points
//!   wobble around `1/3` and `2/3` by `2^{-n-2}`; each level set runs through
//!   its own pipeline and the limits are reassembled.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra_star::{assemble_limit, d_prime, Label, StarError, StepFunction};
use crate::completion_engine::{
    approx_limit, full_tlat_pipeline, verify_approx, verify_run, ApproxLimit, CompletionRun, EngineConfig,
    EngineError, FamilySummary, LimitSource, SourceOracle, Verification,
};
use crate::interval_sets::IntervalSet;
use crate::measure_algebra::typewriter_term;
use crate::metrized_lattice::{Dual, GapCertificate, IntervalCarrier, MetrizedLattice};
use crate::rational::{int, pow2_inv, rat, Rational};

/// Largest index any scenario term may have; the typewriter rows `2^i` are
/// addressed with `u128`.
pub const MAX_INDEX: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Typewriter,
    IncreasingSets,
    StepFunctions,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [
        ScenarioKind::Typewriter,
        ScenarioKind::IncreasingSets,
        ScenarioKind::StepFunctions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Typewriter => "typewriter",
            ScenarioKind::IncreasingSets => "increasing-sets",
            ScenarioKind::StepFunctions => "step-functions",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown scenario {s:?}"))
    }
}

/// Which lattice operation plays the join.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    /// Union.
    Join,
    /// Intersection, i.e. the order dual.
    Meet,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::Join => "join",
            Order::Meet => "meet",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("scenario indices are limited to {MAX_INDEX}, got {0}")]
    IndexTooLarge(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("assembling the limit failed: {0}")]
    Assemble(#[from] StarError),
}

/// A scenario limit: an interval set, or a step function for the
/// step-function scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ScenarioLimit {
    Set(IntervalSet),
    Step(StepFunction),
}

impl fmt::Display for ScenarioLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioLimit::Set(s) => write!(f, "{s}"),
            ScenarioLimit::Step(g) => write!(f, "{g}"),
        }
    }
}

fn iv(lo: Rational, hi: Rational) -> IntervalSet {
    if lo >= hi {
        IntervalSet::empty()
    } else {
        IntervalSet::interval(lo, hi).expect("nonempty interval in [0, 1)")
    }
}

/// First term of row `2^i`, i.e. `[0, 2^{-i})`; gaps `2^{-i-1}`, tail `2^{-h}`.
pub fn typewriter_certificate() -> GapCertificate<IntervalSet> {
    GapCertificate::new(
        |i| typewriter_term(1u128 << i, 1).into_set(),
        |i| pow2_inv(i as u32 + 1),
        |h| pow2_inv(h as u32),
    )
}

/// `[0, 1 - 2^{-i})`; gaps `2^{-i-1}`, tail `2^{-h}`.
pub fn increasing_certificate() -> GapCertificate<IntervalSet> {
    GapCertificate::new(
        |i| iv(int(0), int(1) - pow2_inv(i as u32)),
        |i| pow2_inv(i as u32 + 1),
        |h| pow2_inv(h as u32),
    )
}

pub const STEP_LABELS: [&str; 3] = ["a", "b", "c"];

/// `a` on `[0, 1/3)`, `b` on `[1/3, 2/3)`, `c` on `[2/3, 1)`.
pub fn step_target() -> StepFunction {
    step_with_breaks(rat(1, 3), rat(2, 3))
}

fn step_with_breaks(p: Rational, q: Rational) -> StepFunction {
    StepFunction::new([
        (iv(int(0), p.clone()), "a".to_string()),
        (iv(p, q.clone()), "b".to_string()),
        (iv(q, int(1)), "c".to_string()),
    ])
    .expect("three consecutive pieces partition [0, 1)")
}

/// With `δ = 2^{-n-2}`: even `n` moves the first break to `1/3 + δ`, odd
/// `n` moves the second to `2/3 + δ`.
pub fn step_term(n: usize) -> StepFunction {
    let delta = pow2_inv(n as u32 + 2);
    if n.is_multiple_of(2) {
        step_with_breaks(rat(1, 3) + delta, rat(2, 3))
    } else {
        step_with_breaks(rat(1, 3), rat(2, 3) + delta)
    }
}

/// Level set of `label` along [`step_term`]. Consecutive level sets differ
/// by at most `δ_n + δ_{n+1} = 3·2^{-n-3}`, so the tail is `3·2^{-h-2}`.
pub fn step_label_certificate(label: &str) -> GapCertificate<IntervalSet> {
    let label = label.to_string();
    GapCertificate::new(
        move |n| step_term(n).level_set(&label),
        |n| int(3) * pow2_inv(n as u32 + 3),
        |h| int(3) * pow2_inv(h as u32 + 2),
    )
}

/// Step-function certificate under `d'`, with the same bounds as one label.
pub fn step_certificate() -> GapCertificate<StepFunction> {
    GapCertificate::new(
        step_term,
        |n| int(3) * pow2_inv(n as u32 + 3),
        |h| int(3) * pow2_inv(h as u32 + 2),
    )
}

pub fn expected_limit(kind: ScenarioKind) -> ScenarioLimit {
    match kind {
        ScenarioKind::Typewriter => ScenarioLimit::Set(IntervalSet::empty()),
        ScenarioKind::IncreasingSets => ScenarioLimit::Set(IntervalSet::unit()),
        ScenarioKind::StepFunctions => ScenarioLimit::Step(step_target()),
    }
}

/// Stabilization where the limit is reached in finitely many steps,
/// injected values where it is not.
fn oracle(kind: ScenarioKind, order: Order, label: Option<&str>) -> SourceOracle<IntervalSet> {
    let stable = LimitSource::stabilize;
    match (kind, order) {
        (ScenarioKind::Typewriter, Order::Join) => SourceOracle::new(stable(), LimitSource::value(IntervalSet::empty())),
        (ScenarioKind::Typewriter, Order::Meet) => SourceOracle::new(LimitSource::value(IntervalSet::empty()), stable()),
        (ScenarioKind::IncreasingSets, Order::Join) => {
            SourceOracle::new(LimitSource::value(IntervalSet::unit()), stable())
        }
        (ScenarioKind::IncreasingSets, Order::Meet) => {
            SourceOracle::new(stable(), LimitSource::value(IntervalSet::unit()))
        }
        (ScenarioKind::StepFunctions, _) => {
            let target = step_target().level_set(label.expect("step scenario runs per label"));
            SourceOracle::new(stable(), LimitSource::value(target))
        }
    }
}

fn certificate(kind: ScenarioKind, label: Option<&str>) -> GapCertificate<IntervalSet> {
    match kind {
        ScenarioKind::Typewriter => typewriter_certificate(),
        ScenarioKind::IncreasingSets => increasing_certificate(),
        ScenarioKind::StepFunctions => step_label_certificate(label.expect("step scenario runs per label")),
    }
}

fn components(kind: ScenarioKind) -> Vec<Option<&'static str>> {
    match kind {
        ScenarioKind::StepFunctions => STEP_LABELS.iter().map(|l| Some(*l)).collect(),
        _ => vec![None],
    }
}

/// One pipeline run: the whole scenario, or one label of the step scenario.
#[derive(Debug, Clone)]
pub struct ComponentRun {
    pub label: Option<Label>,
    pub run: CompletionRun<IntervalSet>,
    pub verification: Verification,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub kind: ScenarioKind,
    pub order: Order,
    pub config: EngineConfig,
    pub components: Vec<ComponentRun>,
    pub final_limit: Option<ScenarioLimit>,
    pub expected: ScenarioLimit,
    /// Step scenario only: `d'(f_h, F) <= (#labels)·tail(h)` for the
    /// assembled limit `F`.
    pub assembled: Verification,
}

impl ScenarioOutcome {
    pub fn limit_matches(&self) -> bool {
        self.final_limit.as_ref() == Some(&self.expected)
    }

    pub fn violations(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.verification.violations().count())
            .sum::<usize>()
            + self.assembled.violations().count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0 && self.limit_matches()
    }

    /// Every check of every component, then the assembled checks.
    pub fn all_checks(&self) -> Verification {
        let mut checks = Vec::new();
        for c in &self.components {
            checks.extend(c.verification.checks.iter().cloned());
        }
        checks.extend(self.assembled.checks.iter().cloned());
        Verification { checks }
    }

    pub fn summary(&self) -> ScenarioSummary {
        let error_bound = match self.kind {
            ScenarioKind::StepFunctions => {
                int(STEP_LABELS.len() as i64) * self.components[0].run.tail(self.config.horizon)
            }
            _ => self.components[0].run.error_bound(),
        };
        ScenarioSummary {
            scenario: self.kind,
            order: self.order,
            horizon: self.config.horizon,
            lookahead: self.config.lookahead,
            final_limit: self.final_limit.clone(),
            expected_limit: self.expected.clone(),
            limit_matches: self.limit_matches(),
            error_bound,
            violations: self.violations(),
            families: self.all_checks().families(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioSummary {
    pub scenario: ScenarioKind,
    pub order: Order,
    pub horizon: usize,
    pub lookahead: usize,
    pub final_limit: Option<ScenarioLimit>,
    pub expected_limit: ScenarioLimit,
    pub limit_matches: bool,
    #[serde(with = "crate::rational::as_str")]
    pub error_bound: Rational,
    pub violations: usize,
    pub families: Vec<FamilySummary>,
}

pub fn run_scenario(kind: ScenarioKind, order: Order, config: EngineConfig) -> Result<ScenarioOutcome, ScenarioError> {
    run_inner(kind, order, config, false)
}

/// Like [`run_scenario`] but overwrites the row limit `x_{1,∞}` of every
/// component before verification.
#[doc(hidden)]
pub fn run_scenario_corrupted(
    kind: ScenarioKind,
    order: Order,
    config: EngineConfig,
) -> Result<ScenarioOutcome, ScenarioError> {
    run_inner(kind, order, config, true)
}

fn run_inner(kind: ScenarioKind, order: Order, config: EngineConfig, corrupt: bool) -> Result<ScenarioOutcome, ScenarioError> {
    let last = config.horizon + config.lookahead;
    if last > MAX_INDEX {
        return Err(ScenarioError::IndexTooLarge(last));
    }
    let mut runs = Vec::new();
    for label in components(kind) {
        let cert = certificate(kind, label);
        let oracle = oracle(kind, order, label);
        let comp = match order {
            Order::Join => component(&IntervalCarrier, &cert, &oracle, config, label, corrupt)?,
            Order::Meet => component(&Dual(IntervalCarrier), &cert, &oracle, config, label, corrupt)?,
        };
        runs.push(comp);
    }

    let mut assembled = Verification::default();
    let final_limit = match kind {
        ScenarioKind::StepFunctions => {
            let finals: Option<Vec<(Label, IntervalSet)>> = runs
                .iter()
                .map(|c| Some((c.label.clone()?, c.run.final_limit()?.clone())))
                .collect();
            match finals {
                Some(finals) => {
                    let limit = assemble_limit(&finals)?;
                    let k = int(finals.len() as i64);
                    let tails = step_certificate();
                    for h in 0..=config.horizon {
                        assembled.record(
                            "assembled-bound",
                            vec![h],
                            d_prime(&step_term(h), &limit),
                            &k * tails.tail(h),
                        );
                    }
                    Some(ScenarioLimit::Step(limit))
                }
                None => None,
            }
        }
        _ => runs[0].run.final_limit().cloned().map(ScenarioLimit::Set),
    };

    Ok(ScenarioOutcome {
        kind,
        order,
        config,
        components: runs,
        final_limit,
        expected: expected_limit(kind),
        assembled,
    })
}

fn component<C>(
    carrier: &C,
    cert: &GapCertificate<IntervalSet>,
    oracle: &SourceOracle<IntervalSet>,
    config: EngineConfig,
    label: Option<&str>,
    corrupt: bool,
) -> Result<ComponentRun, ScenarioError>
where
    C: MetrizedLattice<Elem = IntervalSet>,
{
    let mut run = full_tlat_pipeline(carrier, cert, oracle, config)?;
    if corrupt {
        if let Some(current) = run.row_limits().and_then(|r| r.get(1)).cloned() {
            let bad = if current == IntervalSet::unit() {
                IntervalSet::empty()
            } else {
                IntervalSet::unit()
            };
            run.corrupt_row_limit(1, bad);
        }
    }
    let verification = verify_run(carrier, &run);
    Ok(ComponentRun {
        label: label.map(str::to_string),
        run,
        verification,
    })
}

/// `approx_limit` for one scenario component, with its certificate check.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioApprox {
    pub label: Option<Label>,
    pub approx: ApproxLimit<IntervalSet>,
    pub checks: usize,
    pub violations: usize,
}

pub fn scenario_approx(
    kind: ScenarioKind,
    order: Order,
    eps: &Rational,
    horizon: usize,
) -> Result<Vec<ScenarioApprox>, ScenarioError> {
    if horizon > MAX_INDEX {
        return Err(ScenarioError::IndexTooLarge(horizon));
    }
    let mut out = Vec::new();
    for label in components(kind) {
        let cert = certificate(kind, label);
        let (approx, v) = match order {
            Order::Join => {
                let a = approx_limit(&IntervalCarrier, &cert, eps, horizon)?;
                let v = verify_approx(&IntervalCarrier, &cert, &a);
                (a, v)
            }
            Order::Meet => {
                let c = Dual(IntervalCarrier);
                let a = approx_limit(&c, &cert, eps, horizon)?;
                let v = verify_approx(&c, &cert, &a);
                (a, v)
            }
        };
        out.push(ScenarioApprox {
            label: label.map(str::to_string),
            approx,
            checks: v.checks.len(),
            violations: v.violations().count(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval_sets::metric_d;
    use crate::measure_algebra::{row_start, typewriter};
    use crate::algebra_star::StepMetric;

    fn cfg() -> EngineConfig {
        EngineConfig {
            horizon: 10,
            lookahead: 6,
        }
    }

    #[test]
    fn typewriter_terms_are_row_heads() {
        let cert = typewriter_certificate();
        for i in 0..12u32 {
            let k = row_start(1 << i);
            assert_eq!(&cert.term(i as usize), typewriter(k).set());
            assert_eq!(cert.term(i as usize).measure(), pow2_inv(i));
        }
        assert!(cert.verify(&IntervalCarrier, 100).passed());
    }

    #[test]
    fn certificates_hold_on_their_carriers() {
        assert!(increasing_certificate().verify(&IntervalCarrier, 60).passed());
        for l in STEP_LABELS {
            assert!(step_label_certificate(l).verify(&IntervalCarrier, 60).passed());
        }
        assert!(step_certificate().verify(&StepMetric, 40).passed());
    }

    #[test]
    fn step_terms_approach_target() {
        for n in 0..20 {
            assert_eq!(d_prime(&step_term(n), &step_target()), pow2_inv(n as u32 + 2));
        }
    }

    #[test]
    fn every_scenario_passes_in_both_orders() {
        for kind in ScenarioKind::ALL {
            for order in [Order::Join, Order::Meet] {
                let out = run_scenario(kind, order, cfg()).unwrap();
                assert!(out.limit_matches(), "{kind} {order}: {:?}", out.final_limit);
                assert_eq!(out.violations(), 0, "{kind} {order}");
            }
        }
    }

    #[test]
    fn typewriter_final_bound_is_exact_measure() {
        let out = run_scenario(ScenarioKind::Typewriter, Order::Join, cfg()).unwrap();
        for c in out.all_checks().of("final-bound") {
            let h = c.indices[0] as u32;
            assert_eq!(c.lhs, pow2_inv(h));
            assert_eq!(c.rhs, pow2_inv(h) * int(2));
        }
    }

    #[test]
    fn step_scenario_assembles_target() {
        let out = run_scenario(ScenarioKind::StepFunctions, Order::Join, cfg()).unwrap();
        assert_eq!(out.final_limit, Some(ScenarioLimit::Step(step_target())));
        assert_eq!(out.assembled.checks.len(), 11);
        assert!(out.assembled.passed());
    }

    #[test]
    fn corruption_is_caught() {
        for kind in ScenarioKind::ALL {
            let out = run_scenario_corrupted(kind, Order::Join, cfg()).unwrap();
            assert!(out.violations() > 0, "{kind}");
            assert!(out.all_checks().violations().any(|c| c.name == "row-limit"));
        }
    }

    #[test]
    fn approx_at_two_to_minus_eight() {
        let eps = pow2_inv(8);
        let res = scenario_approx(ScenarioKind::Typewriter, Order::Join, &eps, 64).unwrap();
        let a = &res[0].approx;
        assert_eq!((a.h, a.bound.clone()), (9, eps.clone()));
        assert_eq!(a.element, IntervalSet::interval(int(0), pow2_inv(9)).unwrap());
        assert!(metric_d(&a.element, &IntervalSet::empty()) <= eps);
        assert_eq!(res[0].violations, 0);
        assert_eq!(res[0].checks, 64 - 9 + 1);
    }

    #[test]
    fn oversized_horizon_is_rejected() {
        let cfg = EngineConfig {
            horizon: 118,
            lookahead: 8,
        };
        assert!(matches!(
            run_scenario(ScenarioKind::Typewriter, Order::Join, cfg),
            Err(ScenarioError::IndexTooLarge(126))
        ));
    }
}
