//! Metrized semilattices and lattices, with exact checkers for the
//! inequalities relating the metric to joins and meets.
//!
//! A carrier is a value (not a trait on the element type) so that the same
//! elements can be viewed under different metrics or orders: interval sets
//! under `d` or `d_C`, or the order dual of any lattice via [`Dual`].
//!
//! Every checker compares exact rationals and returns a [`Report`] listing
//! each violating input with both sides of the inequality. Equational laws
//! are reported as `d(lhs, rhs) <= 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::interval_sets::{metric_d, metric_dc, IntervalError, IntervalSet};
use crate::rational::{int, pow2_inv, Rational};

/// A set with an exact metric.
pub trait MetricCarrier {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn dist(&self, a: &Self::Elem, b: &Self::Elem) -> Rational;
}

/// An upper semilattice with a metric.
pub trait MetrizedJoin: MetricCarrier {
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Whether `d(x ∨ y, x ∨ z) <= d(y, z)` is known to hold identically.
    /// The completion engine only runs on carriers where it does.
    fn join_is_lipschitz(&self) -> bool;

    /// Derived order: `a <= b` iff `a ∨ b = b`.
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.join(a, b) == *b
    }

    fn join_all<'a, I>(&self, items: I) -> Option<Self::Elem>
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut it = items.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, x| self.join(&acc, x)))
    }
}

/// A lattice with a metric.
pub trait MetrizedLattice: MetrizedJoin {
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Whether `d(x ∧ y, x ∧ z) <= d(y, z)` is known to hold identically.
    fn meet_is_lipschitz(&self) -> bool;
}

/// Interval sets under union/intersection and `d(A, B) = μ(A + B)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntervalCarrier;

impl MetricCarrier for IntervalCarrier {
    type Elem = IntervalSet;

    fn dist(&self, a: &IntervalSet, b: &IntervalSet) -> Rational {
        metric_d(a, b)
    }
}

impl MetrizedJoin for IntervalCarrier {
    fn join(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.union(b)
    }

    fn join_is_lipschitz(&self) -> bool {
        true
    }
}

impl MetrizedLattice for IntervalCarrier {
    fn meet(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.intersect(b)
    }

    fn meet_is_lipschitz(&self) -> bool {
        true
    }
}

/// Interval sets under the capped metric `d_C = min(d, C)`.
#[derive(Debug, Clone)]
pub struct CappedIntervalCarrier {
    cap: Rational,
}

impl CappedIntervalCarrier {
    pub fn new(cap: Rational) -> Result<Self, IntervalError> {
        if !cap.is_positive() {
            return Err(IntervalError::NonPositiveCap(cap));
        }
        Ok(Self { cap })
    }

    pub fn cap(&self) -> &Rational {
        &self.cap
    }
}

impl MetricCarrier for CappedIntervalCarrier {
    type Elem = IntervalSet;

    fn dist(&self, a: &IntervalSet, b: &IntervalSet) -> Rational {
        metric_dc(a, b, &self.cap).expect("cap validated at construction")
    }
}

impl MetrizedJoin for CappedIntervalCarrier {
    fn join(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.union(b)
    }

    fn join_is_lipschitz(&self) -> bool {
        true
    }
}

impl MetrizedLattice for CappedIntervalCarrier {
    fn meet(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.intersect(b)
    }

    fn meet_is_lipschitz(&self) -> bool {
        true
    }
}

/// The order dual: joins become meets and vice versa; the metric is kept.
#[derive(Debug, Clone, Default)]
pub struct Dual<C>(pub C);

impl<C: MetricCarrier> MetricCarrier for Dual<C> {
    type Elem = C::Elem;

    fn dist(&self, a: &C::Elem, b: &C::Elem) -> Rational {
        self.0.dist(a, b)
    }
}

impl<C: MetrizedLattice> MetrizedJoin for Dual<C> {
    fn join(&self, a: &C::Elem, b: &C::Elem) -> C::Elem {
        self.0.meet(a, b)
    }

    fn join_is_lipschitz(&self) -> bool {
        self.0.meet_is_lipschitz()
    }
}

impl<C: MetrizedLattice> MetrizedLattice for Dual<C> {
    fn meet(&self, a: &C::Elem, b: &C::Elem) -> C::Elem {
        self.0.join(a, b)
    }

    fn meet_is_lipschitz(&self) -> bool {
        self.0.join_is_lipschitz()
    }
}

/// One failed instance of an inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation<E> {
    pub law: &'static str,
    pub inputs: Vec<E>,
    #[serde(with = "crate::rational::as_str")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::as_str")]
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report<E> {
    pub checked: usize,
    /// Instances checked per law.
    pub laws: BTreeMap<&'static str, usize>,
    pub violations: Vec<Violation<E>>,
}

impl<E> Default for Report<E> {
    fn default() -> Self {
        Self {
            checked: 0,
            laws: BTreeMap::new(),
            violations: Vec::new(),
        }
    }
}

impl<E: Clone> Report<E> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records one instance of `lhs <= rhs`.
    pub fn check(&mut self, law: &'static str, inputs: &[E], lhs: Rational, rhs: Rational) {
        self.checked += 1;
        *self.laws.entry(law).or_default() += 1;
        if lhs > rhs {
            self.violations.push(Violation {
                law,
                inputs: inputs.to_vec(),
                lhs,
                rhs,
            });
        }
    }

    pub fn merge(&mut self, other: Report<E>) {
        self.checked += other.checked;
        for (law, n) in other.laws {
            *self.laws.entry(law).or_default() += n;
        }
        self.violations.extend(other.violations);
    }
}

/// Nonnegativity, `d(a, a) = 0`, symmetry, identity of indiscernibles and
/// the triangle inequality, on each sampled triple.
pub fn check_metric_axioms<C: MetricCarrier>(
    carrier: &C,
    samples: &[(C::Elem, C::Elem, C::Elem)],
) -> Report<C::Elem> {
    let mut report = Report::default();
    let zero = Rational::zero();
    for (a, b, c) in samples {
        let inputs = [a.clone(), b.clone(), c.clone()];
        let ab = carrier.dist(a, b);
        let ba = carrier.dist(b, a);
        let bc = carrier.dist(b, c);
        let ac = carrier.dist(a, c);
        report.check("nonnegativity", &inputs, -ab.clone(), zero.clone());
        report.check("self-distance", &inputs, carrier.dist(a, a), zero.clone());
        report.check("symmetry", &inputs, (&ab - &ba).abs(), zero.clone());
        // d(a, b) = 0 must force a = b; encode as 1 <= 0 when it fails.
        let indiscernible_ok = !ab.is_zero() || a == b;
        report.check(
            "identity-of-indiscernibles",
            &inputs,
            if indiscernible_ok { zero.clone() } else { int(1) },
            zero.clone(),
        );
        report.check("triangle", &inputs, ac, &ab + &bc);
    }
    report
}

/// Idempotence, commutativity and associativity of the join.
pub fn check_join_laws<C: MetrizedJoin>(
    carrier: &C,
    samples: &[(C::Elem, C::Elem, C::Elem)],
) -> Report<C::Elem> {
    let mut report = Report::default();
    let zero = Rational::zero();
    for (a, b, c) in samples {
        let inputs = [a.clone(), b.clone(), c.clone()];
        let j = |x: &C::Elem, y: &C::Elem| carrier.join(x, y);
        report.check("join-idempotent", &inputs, carrier.dist(&j(a, a), a), zero.clone());
        report.check("join-commutative", &inputs, carrier.dist(&j(a, b), &j(b, a)), zero.clone());
        report.check(
            "join-associative",
            &inputs,
            carrier.dist(&j(&j(a, b), c), &j(a, &j(b, c))),
            zero.clone(),
        );
    }
    report
}

/// `a ∨ (a ∧ b) = a` and `a ∧ (a ∨ b) = a`.
pub fn check_absorption<C: MetrizedLattice>(
    carrier: &C,
    samples: &[(C::Elem, C::Elem)],
) -> Report<C::Elem> {
    let mut report = Report::default();
    let zero = Rational::zero();
    for (a, b) in samples {
        let inputs = [a.clone(), b.clone()];
        let jm = carrier.join(a, &carrier.meet(a, b));
        let mj = carrier.meet(a, &carrier.join(a, b));
        report.check("absorption-join", &inputs, carrier.dist(&jm, a), zero.clone());
        report.check("absorption-meet", &inputs, carrier.dist(&mj, a), zero.clone());
    }
    report
}

/// `d(x ∨ y, x ∨ z) <= d(y, z)` on triples `(x, y, z)`.
pub fn check_join_lipschitz<C: MetrizedJoin>(
    carrier: &C,
    samples: &[(C::Elem, C::Elem, C::Elem)],
) -> Report<C::Elem> {
    let mut report = Report::default();
    for (x, y, z) in samples {
        let lhs = carrier.dist(&carrier.join(x, y), &carrier.join(x, z));
        let rhs = carrier.dist(y, z);
        report.check("join-lipschitz", &[x.clone(), y.clone(), z.clone()], lhs, rhs);
    }
    report
}

/// `d(x ∧ y, x ∧ z) <= d(y, z)` on triples `(x, y, z)`.
pub fn check_meet_lipschitz<C: MetrizedLattice>(
    carrier: &C,
    samples: &[(C::Elem, C::Elem, C::Elem)],
) -> Report<C::Elem> {
    let mut report = Report::default();
    for (x, y, z) in samples {
        let lhs = carrier.dist(&carrier.meet(x, y), &carrier.meet(x, z));
        let rhs = carrier.dist(y, z);
        report.check("meet-lipschitz", &[x.clone(), y.clone(), z.clone()], lhs, rhs);
    }
    report
}

/// `d(x, x ∨ y) <= d(x, y)`.
pub fn check_weak_join<C: MetrizedJoin>(carrier: &C, samples: &[(C::Elem, C::Elem)]) -> Report<C::Elem> {
    let mut report = Report::default();
    for (x, y) in samples {
        let lhs = carrier.dist(x, &carrier.join(x, y));
        report.check("weak-join", &[x.clone(), y.clone()], lhs, carrier.dist(x, y));
    }
    report
}

/// `d(x, x ∧ y) <= d(x, y)`.
pub fn check_weak_meet<C: MetrizedLattice>(carrier: &C, samples: &[(C::Elem, C::Elem)]) -> Report<C::Elem> {
    let mut report = Report::default();
    for (x, y) in samples {
        let lhs = carrier.dist(x, &carrier.meet(x, y));
        report.check("weak-meet", &[x.clone(), y.clone()], lhs, carrier.dist(x, y));
    }
    report
}

/// `d(x_0, x_0 ∨ … ∨ x_i) <= Σ_{ℓ<i} d(x_ℓ, x_{ℓ+1})` for every prefix of
/// the chain.
pub fn check_chain_bound<C: MetrizedJoin>(carrier: &C, chain: &[C::Elem]) -> Report<C::Elem> {
    let mut report = Report::default();
    let Some(first) = chain.first() else {
        return report;
    };
    let mut joined = first.clone();
    let mut path = Rational::zero();
    report.check("chain-bound", &chain[..1], carrier.dist(first, &joined), path.clone());
    for i in 1..chain.len() {
        joined = carrier.join(&joined, &chain[i]);
        path += carrier.dist(&chain[i - 1], &chain[i]);
        report.check("chain-bound", &chain[..=i], carrier.dist(first, &joined), path.clone());
    }
    report
}

type TermFn<E> = Arc<dyn Fn(usize) -> E + Send + Sync>;
type BoundFn = Arc<dyn Fn(usize) -> Rational + Send + Sync>;

/// A sequence `x_0, x_1, …` together with proven bounds
/// `d(x_i, x_{i+1}) <= gap_bound(i)` and the closed-form tail
/// `tail(h) = Σ_{ℓ >= h} gap_bound(ℓ)`.
///
/// Terms and bounds are accessors, never materialized lists.
#[derive(Clone)]
pub struct GapCertificate<E> {
    terms: TermFn<E>,
    gap_bound: BoundFn,
    tail: BoundFn,
    source_index: Option<Arc<dyn Fn(usize) -> usize + Send + Sync>>,
}

impl<E> fmt::Debug for GapCertificate<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GapCertificate")
            .field("tail(0)", &(self.tail)(0).to_string())
            .finish_non_exhaustive()
    }
}

impl<E> GapCertificate<E> {
    pub fn new(
        terms: impl Fn(usize) -> E + Send + Sync + 'static,
        gap_bound: impl Fn(usize) -> Rational + Send + Sync + 'static,
        tail: impl Fn(usize) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Self {
            terms: Arc::new(terms),
            gap_bound: Arc::new(gap_bound),
            tail: Arc::new(tail),
            source_index: None,
        }
    }

    /// Constant sequence: all gaps and tails are zero.
    pub fn constant(value: E) -> Self
    where
        E: Clone + Send + Sync + 'static,
    {
        Self::new(move |_| value.clone(), |_| Rational::zero(), |_| Rational::zero())
    }

    /// Geometric gaps `gap_bound(i) = scale · 2^{-i}`, `tail(h) = scale · 2^{1-h}`.
    pub fn geometric(terms: impl Fn(usize) -> E + Send + Sync + 'static, scale: Rational) -> Self {
        let s2 = scale.clone();
        Self::new(
            terms,
            move |i| &scale * pow2_inv(i as u32),
            move |h| &s2 * pow2_inv(h as u32) * int(2),
        )
    }

    pub fn term(&self, i: usize) -> E {
        (self.terms)(i)
    }

    pub fn gap_bound(&self, i: usize) -> Rational {
        (self.gap_bound)(i)
    }

    pub fn tail(&self, h: usize) -> Rational {
        (self.tail)(h)
    }

    /// For certificates extracted from a longer sequence, the index of the
    /// `i`-th certified term in that sequence.
    pub fn source_index(&self, i: usize) -> Option<usize> {
        self.source_index.as_ref().map(|f| f(i))
    }

    /// Checks the gap bounds against the carrier's metric for `i < horizon`,
    /// and that the tail is consistent: `tail(i) = gap_bound(i) + tail(i+1)`
    /// and `tail(i) >= 0`.
    pub fn verify<C>(&self, carrier: &C, horizon: usize) -> Report<E>
    where
        C: MetricCarrier<Elem = E>,
        E: Clone + PartialEq + fmt::Debug,
    {
        let mut report = Report::default();
        let mut prev = self.term(0);
        for i in 0..horizon {
            let next = self.term(i + 1);
            let inputs = [prev.clone(), next.clone()];
            report.check("gap-bound", &inputs, carrier.dist(&prev, &next), self.gap_bound(i));
            let tail_i = self.tail(i);
            let split = self.gap_bound(i) + self.tail(i + 1);
            report.check("tail-split", &inputs, (&tail_i - &split).abs(), Rational::zero());
            report.check("tail-nonnegative", &inputs, -tail_i, Rational::zero());
            prev = next;
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("modulus promised d <= {bound} beyond index {index}, but terms {index} and {next} are {dist} apart")]
    ModulusBreach {
        index: usize,
        next: usize,
        dist: Box<Rational>,
        bound: Box<Rational>,
    },
}

/// Index of the `i`-th term of the fast subsequence:
/// `n_i = max(N(2^{-i}), n_{i-1} + 1)`.
fn fast_index(modulus: &(dyn Fn(&Rational) -> usize + Send + Sync), i: usize) -> usize {
    let mut n = modulus(&int(1));
    for k in 1..=i {
        n = modulus(&pow2_inv(k as u32)).max(n + 1);
    }
    n
}

/// Picks a subsequence with `d(t_i, t_{i+1}) <= 2^{-i}` from a Cauchy
/// sequence given with a modulus `N(ε)`: any two terms at indices `>= N(ε)`
/// are at most `ε` apart. The resulting certificate has
/// `gap_bound(i) = 2^{-i}` and `tail(h) = 2^{1-h}`; its bounds are verified
/// for `i < horizon`.
pub fn extract_fast_subsequence<C>(
    carrier: &C,
    seq: impl Fn(usize) -> C::Elem + Send + Sync + 'static,
    modulus: impl Fn(&Rational) -> usize + Send + Sync + 'static,
    horizon: usize,
) -> Result<GapCertificate<C::Elem>, LatticeError>
where
    C: MetricCarrier,
    C::Elem: 'static,
{
    let seq = Arc::new(seq);
    let modulus: Arc<dyn Fn(&Rational) -> usize + Send + Sync> = Arc::new(modulus);

    let mut indices = Vec::with_capacity(horizon + 1);
    let mut n = modulus(&int(1));
    indices.push(n);
    for k in 1..=horizon {
        n = modulus(&pow2_inv(k as u32)).max(n + 1);
        indices.push(n);
    }
    for i in 0..horizon {
        let dist = carrier.dist(&seq(indices[i]), &seq(indices[i + 1]));
        let bound = pow2_inv(i as u32);
        if dist > bound {
            return Err(LatticeError::ModulusBreach {
                index: indices[i],
                next: indices[i + 1],
                dist: dist.into(),
                bound: bound.into(),
            });
        }
    }

    let cached = Arc::new(indices);
    let index_of = {
        let modulus = Arc::clone(&modulus);
        let cached = Arc::clone(&cached);
        move |i: usize| cached.get(i).copied().unwrap_or_else(|| fast_index(&*modulus, i))
    };
    let index_of = Arc::new(index_of);
    let terms = {
        let index_of = Arc::clone(&index_of);
        move |i: usize| seq(index_of(i))
    };
    let mut cert = GapCertificate::geometric(terms, int(1));
    cert.source_index = Some(index_of);
    Ok(cert)
}
