//! Seeded property suites over every module, each reduced to counts of
//! checked instances and violations per law.
//!
//! Suites expected to find counterexamples (the Lipschitz join inequality
//! in the diameter lattice, the weak meet inequality on disjoint sets in
//! `L'`) count a found witness as a pass.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra_star::{
    astar_ladder, d_prime_half_sum, d_prime_refinement, lift_op, normalize_partition, FiniteAlgebra, StepFunction,
};
use crate::completion_engine::{EngineConfig, Verification};
use crate::counterexamples::{
    check_increasing_gap, check_l_metric, check_lprime_metric, check_singleton_isometry, check_weak_join_exhaustive,
    find_dv_violation, isolation_survey, join_discontinuity_witness, nonconvergence_check, weak_meet_split,
    DiameterCarrier, Isolation, LPrimeCarrier, PointSpace,
};
use crate::interval_sets::{metric_d, IntervalSet};
use crate::measure_algebra::{
    bisection_ladder, decode_typewriter_index, row_start, stretched_term_index, stretched_typewriter, typewriter,
    typewriter_membership_count, typewriter_modulus, BElement, SeededOracle,
};
use crate::metrized_lattice::{
    check_absorption, check_chain_bound, check_join_laws, check_join_lipschitz, check_meet_lipschitz,
    check_metric_axioms, check_weak_join, check_weak_meet, extract_fast_subsequence, CappedIntervalCarrier, Dual,
    IntervalCarrier, Report,
};
use crate::rational::{format_rational, int, pow2_inv, rat, Rational};
use crate::sampling::{
    random_deficient_candidate, random_interval_set, random_partition_candidate, random_step_function,
    random_unit_set, stream_rng,
};
use crate::scenarios::{run_scenario, scenario_approx, Order, ScenarioKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    MetricAxioms,
    RingContinuity,
    IntervalLaws,
    LatticeLaws,
    Typewriter,
    Bisection,
    LiftLipschitz,
    Partition,
    Completion,
    Duality,
    Counterexamples,
    DvWitness,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::MetricAxioms,
        Suite::RingContinuity,
        Suite::IntervalLaws,
        Suite::LatticeLaws,
        Suite::Typewriter,
        Suite::Bisection,
        Suite::LiftLipschitz,
        Suite::Partition,
        Suite::Completion,
        Suite::Duality,
        Suite::Counterexamples,
        Suite::DvWitness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MetricAxioms => "metric-axioms",
            Suite::RingContinuity => "ring-continuity",
            Suite::IntervalLaws => "interval-laws",
            Suite::LatticeLaws => "lattice-laws",
            Suite::Typewriter => "typewriter",
            Suite::Bisection => "bisection",
            Suite::LiftLipschitz => "lift-lipschitz",
            Suite::Partition => "partition",
            Suite::Completion => "completion",
            Suite::Duality => "duality",
            Suite::Counterexamples => "counterexamples",
            Suite::DvWitness => "dv-witness",
        }
    }

    fn stream(self) -> u64 {
        Suite::ALL.iter().position(|s| *s == self).unwrap() as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random triples for the interval-set suites; the step-function and
    /// partition suites draw a tenth of this.
    pub samples: usize,
    pub size_cap: usize,
    pub horizon: usize,
    #[serde(with = "crate::rational::as_str")]
    pub epsilon: Rational,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 10_000,
            size_cap: 4,
            horizon: 64,
            epsilon: pow2_inv(8),
        }
    }
}

impl SuiteConfig {
    fn minor_samples(&self) -> usize {
        (self.samples / 10).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawTally {
    pub law: String,
    pub checked: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub checked: usize,
    pub violations: usize,
    pub passed: bool,
    pub laws: Vec<LawTally>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

#[derive(Default)]
struct Tally {
    laws: BTreeMap<String, (usize, usize)>,
    first_violation: Option<Value>,
    details: BTreeMap<String, Value>,
}

impl Tally {
    fn absorb<E: Serialize>(&mut self, prefix: &str, report: &Report<E>) {
        for (law, n) in &report.laws {
            self.laws.entry(format!("{prefix}{law}")).or_default().0 += n;
        }
        for v in &report.violations {
            self.laws.entry(format!("{prefix}{}", v.law)).or_default().1 += 1;
            self.first_violation.get_or_insert_with(|| {
                json!({
                    "law": format!("{prefix}{}", v.law),
                    "inputs": v.inputs,
                    "lhs": format_rational(&v.lhs),
                    "rhs": format_rational(&v.rhs),
                })
            });
        }
    }

    fn absorb_checks(&mut self, prefix: &str, v: &Verification) {
        for c in &v.checks {
            let e = self.laws.entry(format!("{prefix}{}", c.name)).or_default();
            e.0 += 1;
            if !c.ok {
                e.1 += 1;
                self.first_violation
                    .get_or_insert_with(|| json!({ "law": format!("{prefix}{}", c.name), "instance": c }));
            }
        }
    }

    /// One instance of a claim that must hold.
    fn expect(&mut self, law: &str, ok: bool, context: impl FnOnce() -> Value) {
        let e = self.laws.entry(law.to_string()).or_default();
        e.0 += 1;
        if !ok {
            e.1 += 1;
            self.first_violation
                .get_or_insert_with(|| json!({ "law": law, "context": context() }));
        }
    }

    fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }

    fn finish(self, suite: Suite) -> SuiteResult {
        let laws: Vec<LawTally> = self
            .laws
            .into_iter()
            .map(|(law, (checked, violations))| LawTally {
                law,
                checked,
                violations,
            })
            .collect();
        let checked = laws.iter().map(|l| l.checked).sum();
        let violations = laws.iter().map(|l| l.violations).sum();
        SuiteResult {
            suite,
            checked,
            violations,
            passed: violations == 0,
            laws,
            first_violation: self.first_violation,
            details: self.details,
        }
    }
}

fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteResult {
    let mut rng = stream_rng(cfg.seed, suite.stream());
    let mut t = Tally::default();
    match suite {
        Suite::MetricAxioms => metric_axioms(&mut t, &mut rng, cfg),
        Suite::RingContinuity => ring_continuity(&mut t, &mut rng, cfg),
        Suite::IntervalLaws => interval_laws(&mut t, &mut rng, cfg),
        Suite::LatticeLaws => lattice_laws(&mut t, &mut rng, cfg),
        Suite::Typewriter => typewriter_suite(&mut t),
        Suite::Bisection => bisection(&mut t, &mut rng),
        Suite::LiftLipschitz => lift_lipschitz(&mut t, &mut rng, cfg),
        Suite::Partition => partition(&mut t, &mut rng, cfg),
        Suite::Completion => completion(&mut t, cfg, Order::Join),
        Suite::Duality => completion(&mut t, cfg, Order::Meet),
        Suite::Counterexamples => counterexamples(&mut t, &mut rng, cfg),
        Suite::DvWitness => dv_witness(&mut t, cfg),
    }
    t.finish(suite)
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteResult> {
    Suite::ALL.iter().map(|s| run_suite(*s, cfg)).collect()
}

type Triple = (IntervalSet, IntervalSet, IntervalSet);

/// Sets inside `[0, 4)`, so that caps below the ambient measure matter.
fn wide_triples<R: Rng>(rng: &mut R, n: usize) -> Vec<Triple> {
    (0..n)
        .map(|_| {
            (
                random_interval_set(rng, 4, 4),
                random_interval_set(rng, 4, 4),
                random_interval_set(rng, 4, 4),
            )
        })
        .collect()
}

fn metric_axioms<R: Rng>(t: &mut Tally, rng: &mut R, cfg: &SuiteConfig) {
    let triples = wide_triples(rng, cfg.samples);
    t.absorb("d/", &check_metric_axioms(&IntervalCarrier, &triples));
    for cap in [rat(1, 2), int(1), int(3)] {
        let c = CappedIntervalCarrier::new(cap.clone()).expect("positive cap");
        t.absorb(&format!("d_{}/", format_rational(&cap)), &check_metric_axioms(&c, &triples));
    }
    t.detail("triples", json!(triples.len()));
}

fn ring_continuity<R: Rng>(t: &mut Tally, rng: &mut R, cfg: &SuiteConfig) {
    let triples = wide_triples(rng, cfg.samples);
    let mut r = Report::default();
    for (a, b, u) in &triples {
        let inputs = [a.clone(), b.clone(), u.clone()];
        let base = metric_d(a, b);
        let shifted = metric_d(&a.symdiff(u), &b.symdiff(u));
        r.check("translation-invariance", &inputs, (shifted - &base).abs(), Rational::zero());
        r.check("product-contraction", &inputs, metric_d(&a.intersect(u), &b.intersect(u)), base);
    }
    t.absorb("", &r);
    t.detail("triples", json!(triples.len()));
}

fn interval_laws<R: Rng>(t: &mut Tally, rng: &mut R, cfg: &SuiteConfig) {
    let triples = wide_triples(rng, cfg.samples);
    let zero = Rational::zero();
    let mut r = Report::default();
    for (a, b, c) in &triples {
        let inputs = [a.clone(), b.clone(), c.clone()];
        r.check("symdiff-nilpotent", &inputs, a.symdiff(a).measure(), zero.clone());
        r.check("intersect-idempotent", &inputs, metric_d(&a.intersect(a), a), zero.clone());
        let lhs = a.intersect(&b.symdiff(c));
        let rhs = a.intersect(b).symdiff(&a.intersect(c));
        r.check("distributivity", &inputs, metric_d(&lhs, &rhs), zero.clone());
        let ie = a.union(b).measure() + a.intersect(b).measure() - a.measure() - b.measure();
        r.check("inclusion-exclusion", &inputs, ie.abs(), zero.clone());
        if !a.is_empty() {
            let h = a.find_halving_point().expect("nonempty set");
            let (left, right) = a.split_at(&h);
            r.check("halving", &inputs, (left.measure() * int(2) - a.measure()).abs(), zero.clone());
            r.check("split-partition", &inputs, metric_d(&left.union(&right), a), zero.clone());
            r.check("split-disjoint", &inputs, left.intersect(&right).measure(), zero.clone());
        }
    }
    t.absorb("", &r);
    t.detail("triples", json!(triples.len()));
}

fn lattice_laws<R: Rng>(t: &mut Tally, rng: &mut R, cfg: &SuiteConfig) {
    let triples: Vec<Triple> = (0..cfg.minor_samples())
        .map(|_| (random_unit_set(rng), random_unit_set(rng), random_unit_set(rng)))
        .collect();
    let pairs: Vec<(IntervalSet, IntervalSet)> = triples.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
    let chains: Vec<Vec<IntervalSet>> = (0..cfg.minor_samples() / 10 + 1)
        .map(|_| (0..6).map(|_| random_unit_set(rng)).collect())
        .collect();

    macro_rules! lattice {
        ($prefix:expr, $c:expr) => {{
            let c = $c;
            t.absorb($prefix, &check_join_laws(&c, &triples));
            t.absorb($prefix, &check_absorption(&c, &pairs));
            t.absorb($prefix, &check_join_lipschitz(&c, &triples));
            t.absorb($prefix, &check_meet_lipschitz(&c, &triples));
            t.absorb($prefix, &check_weak_join(&c, &pairs));
            t.absorb($prefix, &check_weak_meet(&c, &pairs));
            for chain in &chains {
                t.absorb($prefix, &check_chain_bound(&c, chain));
            }
        }};
    }
    lattice!("union/", IntervalCarrier);
    lattice!("intersect/", Dual(IntervalCarrier));
    lattice!("capped-1/2/", CappedIntervalCarrier::new(rat(1, 2)).expect("positive cap"));
    t.detail("triples", json!(triples.len()));
}

fn typewriter_suite(t: &mut Tally) {
    let fifth = typewriter(5);
    t.expect("fifth-term", fifth.set() == &IntervalSet::interval(rat(1, 3), rat(2, 3)).unwrap(), || {
        json!(fifth.to_string())
    });
    let rows = 50u64;
    for n in 1..=rows {
        for k in row_start(n)..row_start(n + 1) {
            let term = typewriter(k);
            t.expect("row-measure", term.measure() == rat(1, n as i64), || json!({ "k": k }));
            t.expect("distance-to-empty", term.dist(&BElement::zero()) == rat(1, n as i64), || json!({ "k": k }));
            t.expect("decode-row", decode_typewriter_index(k).row == n, || json!({ "k": k }));
        }
    }
    let count = typewriter_membership_count(&rat(1, 7), rows);
    t.expect("membership-count", count == rows, || json!({ "count": count }));
    t.detail("membership_count_1/7", json!(count));

    for m in 1..=10u64 {
        let span = (1u64 << m) - 1..=(1u64 << (m + 1)) - 2;
        let ok = span.clone().all(|k| stretched_term_index(k) == m && stretched_typewriter(k) == typewriter(m));
        t.expect("stretched-repeats", ok && span.count() as u64 == 1 << m, || json!({ "m": m }));
    }

    let horizon = 20;
    match extract_fast_subsequence(&IntervalCarrier, |k| typewriter(k as u64 + 1).into_set(), typewriter_modulus, horizon + 1) {
        Ok(cert) => {
            t.absorb("fast-subsequence/", &cert.verify(&IntervalCarrier, horizon + 1));
            let heads: Vec<Value> = (0..=4).map(|i| json!(cert.term(i))).collect();
            t.detail("fast_subsequence_heads", Value::Array(heads));
        }
        Err(e) => t.expect("fast-subsequence/extract", false, || json!(e.to_string())),
    }
}

fn bisection<R: Rng>(t: &mut Tally, rng: &mut R) {
    let oracles = 100;
    let steps = 20;
    let z6 = FiniteAlgebra::integers_mod(6);
    for _ in 0..oracles {
        let seed: u64 = rng.random();
        let ladder = bisection_ladder(&BElement::one(), &mut SeededOracle::new(seed), steps).expect("[0, 1) is not null");
        for r in &ladder {
            t.expect("measure-ladder", r.distance_to_one == pow2_inv(r.step as u32), || {
                json!({ "seed": seed, "step": r.step, "distance": q(&r.distance_to_one) })
            });
        }
        let star = astar_ladder(&z6, &mut SeededOracle::new(seed), steps).expect("Z/6Z is a ring");
        for (r, b) in star.iter().zip(&ladder) {
            t.expect("z6-ladder", r.distance_to_one == pow2_inv(r.step as u32), || {
                json!({ "seed": seed, "step": r.step, "distance": q(&r.distance_to_one) })
            });
            t.expect("z6-matches-measure", r.measure == b.measure, || json!({ "seed": seed, "step": r.step }));
        }
    }
    t.detail("oracles", json!(oracles));
    t.detail("steps", json!(steps));
}

fn lift_lipschitz<R: Rng>(t: &mut Tally, rng: &mut R, cfg: &SuiteConfig) {
    let z6 = FiniteAlgebra::integers_mod(6);
    let n = cfg.minor_samples();
    let agree = |t: &mut Tally, f: &StepFunction, g: &StepFunction| {
        let (a, b) = (d_prime_refinement(f, g), d_prime_half_sum(f, g));
        t.expect("d'-formulas-agree", a == b, || json!({ "f": f, "g": g }));
        a
    };
    for op in ["add", "mul", "neg"] {
        let arity = z6.operation(op).expect("Z/6Z op").arity();
        let mut r: Report<StepFunction> = Report::default();
        for _ in 0..n {
            let fs: Vec<StepFunction> = (0..arity).map(|_| random_step_function(rng, &z6)).collect();
            let gs: Vec<StepFunction> = (0..arity).map(|_| random_step_function(rng, &z6)).collect();
            let bound: Rational = fs.iter().zip(&gs).map(|(f, g)| agree(t, f, g)).sum();
            let uf = lift_op(&z6, op, &fs.iter().collect::<Vec<_>>()).expect("arity matches");
            let ug = lift_op(&z6, op, &gs.iter().collect::<Vec<_>>()).expect("arity matches");
            let lhs = agree(t, &uf, &ug);
            let inputs: Vec<StepFunction> = fs.into_iter().chain(gs).collect();
            r.check("sum-bound", &inputs, lhs, bound);
        }
        t.absorb(&format!("{op}/"), &r);
    }
    t.detail("tuples_per_operation", json!(n));
}

fn partition<R: Rng>(t: &mut Tally, rng: &mut R, cfg: &SuiteConfig) {
    let n = cfg.minor_samples();
    let exact = |t: &mut Tally, out: &[IntervalSet], law: &str| {
        let mut union = IntervalSet::empty();
        let mut disjoint = true;
        for s in out {
            disjoint &= union.intersect(s).is_empty();
            union = union.union(s);
        }
        t.expect(law, disjoint && union == IntervalSet::unit(), || json!(out));
    };
    for _ in 0..n {
        let cand = random_partition_candidate(rng);
        let out = normalize_partition(&cand).expect("sets inside [0, 1)");
        exact(t, &out, "valid/exact-partition");
        for (s, o) in cand.iter().zip(&out) {
            t.expect("valid/unchanged", metric_d(s, o).is_zero(), || json!({ "input": s, "output": o }));
        }

        let def = random_deficient_candidate(rng);
        let out = normalize_partition(&def).expect("sets inside [0, 1)");
        exact(t, &out, "deficient/exact-partition");
        let deficit = Rational::one() - def.iter().map(IntervalSet::measure).sum::<Rational>();
        t.expect("deficient/deficit-in-first", out[0].measure() - def[0].measure() == deficit, || {
            json!({ "input": def, "output": out })
        });
        t.expect("deficient/first-grows", def[0].is_subset(&out[0]), || json!({ "input": def }));
        for (s, o) in def.iter().zip(&out).skip(1) {
            t.expect("deficient/rest-unchanged", s == o, || json!({ "input": s, "output": o }));
        }
    }
    t.detail("candidates", json!(n));
}

fn completion(t: &mut Tally, cfg: &SuiteConfig, order: Order) {
    let engine = EngineConfig {
        horizon: cfg.horizon,
        lookahead: EngineConfig::default().lookahead,
    };
    let mut finals = serde_json::Map::new();
    for kind in ScenarioKind::ALL {
        let prefix = format!("{kind}/");
        match run_scenario(kind, order, engine) {
            Ok(out) => {
                t.absorb_checks(&prefix, &out.all_checks());
                t.expect(&format!("{prefix}final-limit"), out.limit_matches(), || {
                    json!({ "got": out.final_limit, "expected": out.expected })
                });
                finals.insert(kind.name().to_string(), json!(out.final_limit));
            }
            Err(e) => t.expect(&format!("{prefix}run"), false, || json!(e.to_string())),
        }
        match scenario_approx(kind, order, &cfg.epsilon, cfg.horizon) {
            Ok(res) => {
                for a in &res {
                    t.expect(&format!("{prefix}approx-certificate"), a.violations == 0, || json!(a));
                    t.expect(&format!("{prefix}approx-within-epsilon"), a.approx.bound <= cfg.epsilon, || json!(a));
                }
                if kind == ScenarioKind::Typewriter {
                    let a = &res[0].approx;
                    let to_empty = metric_d(&a.element, &IntervalSet::empty());
                    t.expect(&format!("{prefix}approx-near-empty"), to_empty <= cfg.epsilon, || json!(a));
                    t.detail("typewriter_approx", json!(a));
                }
            }
            Err(e) => t.expect(&format!("{prefix}approx"), false, || json!(e.to_string())),
        }
    }
    t.detail("final_limits", Value::Object(finals));
    t.detail("horizon", json!(cfg.horizon));
}

fn counterexamples<R: Rng>(t: &mut Tally, rng: &mut R, cfg: &SuiteConfig) {
    let cap = cfg.size_cap;
    let m3 = PointSpace::integers(&[0, 1, 10]);
    let h6 = PointSpace::harmonic(6);
    for (name, space) in [("{0,1,10}", &m3), ("{1/n:n<=6}", &h6)] {
        t.absorb(&format!("{name}/"), &check_weak_join_exhaustive(space, cap));
        t.absorb(&format!("{name}/"), &check_singleton_isometry(space));
    }
    let h4 = PointSpace::harmonic(4);
    for (name, space) in [("{0,1,10}", &m3), ("{1/n:n<=4}", &h4)] {
        t.absorb(&format!("{name}/L/"), &check_l_metric(space, cap));
        t.absorb(&format!("{name}/L'/"), &check_lprime_metric(&LPrimeCarrier::new(space.clone()), cap));
    }

    for (name, space) in [("{0,1,10}", &m3), ("{1/n:n<=6}", &h6)] {
        let split = weak_meet_split(&LPrimeCarrier::new(space.clone()), cap);
        t.absorb(&format!("{name}/L'/intersecting-"), &split.intersecting);
        t.expect(&format!("{name}/L'/disjoint-weak-meet-fails"), !split.disjoint.passed(), || {
            json!(split.disjoint.checked)
        });
        if let Some(v) = split.disjoint.violations.first() {
            t.detail(
                &format!("weak_meet_witness_{name}"),
                json!({ "inputs": v.inputs, "lhs": q(&v.lhs), "rhs": q(&v.rhs) }),
            );
        }
    }

    let chain = [
        m3.subset([0]).unwrap(),
        m3.subset([0, 1]).unwrap(),
        m3.subset([0, 1, 2]).unwrap(),
    ];
    match check_increasing_gap(&m3, &chain) {
        Ok(r) => t.absorb("", &r),
        Err(e) => t.expect("increasing-gap", false, || json!(e.to_string())),
    }
    let carrier = DiameterCarrier { space: h6.clone() };
    let subsets = h6.subsets_up_to(cap);
    for _ in 0..cfg.minor_samples() / 10 + 1 {
        let chain: Vec<_> = (0..5).map(|_| subsets[rng.random_range(0..subsets.len())].clone()).collect();
        t.absorb("diameter/", &check_chain_bound(&carrier, &chain));
    }

    let nc = nonconvergence_check(6, cap);
    t.absorb("nonconvergence/", &nc.cauchy);
    t.absorb("nonconvergence/", &nc.separated);
    t.absorb("nonconvergence/", &nc.singletons);
    t.detail("nonconvergence_candidates", json!(nc.candidates));

    let n = 32;
    let z = PointSpace::harmonic_with_zero(n);
    let seq: Vec<usize> = (0..n).collect();
    let w = join_discontinuity_witness(&z, &seq, n, 0);
    t.absorb("join-discontinuity/", &w.checks);
    t.expect("join-discontinuity/separated", w.discontinuous, || json!(w));
    let last = w.singleton_distances.last().cloned().unwrap_or_default();
    t.expect("join-discontinuity/singletons-shrink", last == rat(1, n as i64), || json!(q(&last)));
    let min_pair = w.pair_distances.iter().min().cloned().unwrap_or_default();
    t.expect("join-discontinuity/pairs-stay-apart", min_pair >= int(1), || json!(q(&min_pair)));
    t.detail("join_discontinuity_pair_floor", q(&w.pair_floor));

    let lp = LPrimeCarrier::new(h6.clone());
    for (e, r) in isolation_survey(&lp, cap) {
        let ok = matches!(&r, Isolation::Radius(x) if x.is_positive());
        t.expect("isolation/positive-radius", ok, || json!({ "element": e, "radius": r }));
    }
    let third = h6.singleton(2);
    let r = crate::counterexamples::isolation_radius(&lp, &crate::counterexamples::LPrimeElement::Set(third));
    t.expect("isolation/one-third", r == Isolation::Radius(rat(1, 12)), || json!(r));
}

fn dv_witness(t: &mut Tally, cfg: &SuiteConfig) {
    let m3 = PointSpace::integers(&[0, 1, 10]);
    let w = find_dv_violation(&m3, cfg.size_cap);
    let expected = (
        vec!["0".to_string()],
        vec!["1".to_string()],
        vec!["10".to_string()],
        int(10),
        int(9),
    );
    let ok = w
        .as_ref()
        .is_some_and(|w| (w.x.clone(), w.y.clone(), w.z.clone(), w.lhs.clone(), w.rhs.clone()) == expected);
    t.expect("witness-on-{0,1,10}", ok, || json!(w));
    t.detail("witness", json!(w));
    for pts in [&[0i64, 1][..], &[0][..]] {
        let none = find_dv_violation(&PointSpace::integers(pts), cfg.size_cap);
        t.expect("no-witness-on-small-spaces", none.is_none(), || json!(none));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            seed: 1,
            samples: 300,
            size_cap: 3,
            horizon: 12,
            epsilon: pow2_inv(8),
        }
    }

    #[test]
    fn every_suite_passes_on_a_small_run() {
        for r in run_all(&small()) {
            assert!(r.passed, "{}: {:?}", r.suite, r.first_violation);
            assert!(r.checked > 0, "{}", r.suite);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn same_seed_same_result() {
        let a = run_suite(Suite::MetricAxioms, &small());
        let b = run_suite(Suite::MetricAxioms, &small());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
