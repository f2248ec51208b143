//! Limits of summable-gap sequences in a metrized upper semilattice.
//!
//! Given a [`GapCertificate`] for `x_0, x_1, …` the engine materializes the
//! running joins `x_{h,j} = x_h ∨ … ∨ x_j`, asks a [`MonotoneLimitOracle`]
//! for the limits `x_{h,∞}` of the rows (increasing in `j`) and for the limit
//! `x_{∞,∞}` of those row limits (decreasing in `h`), and records every
//! distance bound the construction promises so that [`verify_run`] can
//! recheck them exactly.
//!
//! [`approx_limit`] needs no oracle: it only uses distances among
//! materialized terms, so it works in carriers that are not complete.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::metrized_lattice::{GapCertificate, MetrizedJoin};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("carrier only satisfies the weak join inequality; the completion bounds do not apply")]
    WeakOnlyCarrier,
    #[error("running join needs h <= j, got h = {h}, j = {j}")]
    InvalidRange { h: usize, j: usize },
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Rational),
    #[error("2·tail(h) stays above {eps} for every h <= {horizon} (2·tail({horizon}) = {reached})")]
    HorizonExceeded {
        eps: Box<Rational>,
        horizon: usize,
        reached: Box<Rational>,
    },
}

/// Supplies limits of monotone sequences, as far as the carrier has them.
///
/// `increasing_limit` receives row `h` as `x_{h,h}, …, x_{h,J}`;
/// `decreasing_limit` receives the row limits `x_{0,∞}, …, x_{H,∞}`.
/// `None` means the limit is unavailable.
pub trait MonotoneLimitOracle<E> {
    fn increasing_limit(&self, row: usize, terms: &[E]) -> Option<E>;
    fn decreasing_limit(&self, terms: &[E]) -> Option<E>;
}

/// How one kind of limit is obtained.
#[derive(Clone)]
pub enum LimitSource<E> {
    /// The last term, once the final `window` terms are all equal.
    Stabilize { window: usize },
    /// A known value; for rows the closure receives the row index, for the
    /// final limit it receives 0.
    Inject(Arc<dyn Fn(usize) -> E + Send + Sync>),
    Unavailable,
}

impl<E> fmt::Debug for LimitSource<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitSource::Stabilize { window } => write!(f, "Stabilize({window})"),
            LimitSource::Inject(_) => f.write_str("Inject"),
            LimitSource::Unavailable => f.write_str("Unavailable"),
        }
    }
}

impl<E: Clone + PartialEq> LimitSource<E> {
    pub fn stabilize() -> Self {
        LimitSource::Stabilize { window: 4 }
    }

    pub fn value(v: E) -> Self
    where
        E: Send + Sync + 'static,
    {
        LimitSource::Inject(Arc::new(move |_| v.clone()))
    }

    pub fn per_row(f: impl Fn(usize) -> E + Send + Sync + 'static) -> Self {
        LimitSource::Inject(Arc::new(f))
    }

    fn resolve(&self, key: usize, terms: &[E]) -> Option<E> {
        match self {
            LimitSource::Stabilize { window } => {
                let w = (*window).max(1);
                if terms.len() < w {
                    return None;
                }
                let tail = &terms[terms.len() - w..];
                tail.iter().all(|t| *t == tail[0]).then(|| tail[0].clone())
            }
            LimitSource::Inject(f) => Some(f(key)),
            LimitSource::Unavailable => None,
        }
    }
}

/// An oracle assembled from one source for rows and one for the final limit.
#[derive(Debug, Clone)]
pub struct SourceOracle<E> {
    pub rows: LimitSource<E>,
    pub last: LimitSource<E>,
}

impl<E: Clone + PartialEq> SourceOracle<E> {
    pub fn new(rows: LimitSource<E>, last: LimitSource<E>) -> Self {
        Self { rows, last }
    }

    pub fn stabilizing() -> Self {
        Self::new(LimitSource::stabilize(), LimitSource::stabilize())
    }

    pub fn unavailable() -> Self {
        Self::new(LimitSource::Unavailable, LimitSource::Unavailable)
    }
}

impl<E: Clone + PartialEq> MonotoneLimitOracle<E> for SourceOracle<E> {
    fn increasing_limit(&self, row: usize, terms: &[E]) -> Option<E> {
        self.rows.resolve(row, terms)
    }

    fn decreasing_limit(&self, terms: &[E]) -> Option<E> {
        self.last.resolve(0, terms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    /// Rows `h = 0..=horizon` are built and checked.
    pub horizon: usize,
    /// Each row runs to `j = horizon + lookahead`.
    pub lookahead: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            horizon: 64,
            lookahead: 8,
        }
    }
}

impl EngineConfig {
    pub fn with_horizon(horizon: usize) -> Self {
        Self {
            horizon,
            ..Self::default()
        }
    }

    fn last_index(&self) -> usize {
        self.horizon + self.lookahead
    }
}

/// `x_h ∨ x_{h+1} ∨ … ∨ x_j`.
pub fn running_join<C: MetrizedJoin>(
    carrier: &C,
    cert: &GapCertificate<C::Elem>,
    h: usize,
    j: usize,
) -> Result<C::Elem, EngineError> {
    if h > j {
        return Err(EngineError::InvalidRange { h, j });
    }
    let mut acc = cert.term(h);
    for i in h + 1..=j {
        acc = carrier.join(&acc, &cert.term(i));
    }
    Ok(acc)
}

/// `y = x_{h,j}` with the certified bound `d(x_m, y) <= 2·tail(h)` for all
/// `h <= m <= j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxLimit<E> {
    pub element: E,
    pub h: usize,
    pub j: usize,
    #[serde(with = "crate::rational::as_str")]
    pub bound: Rational,
}

/// Picks the least `h <= horizon` with `2·tail(h) <= eps` and returns
/// `running_join(h, max(h, horizon))`.
pub fn approx_limit<C: MetrizedJoin>(
    carrier: &C,
    cert: &GapCertificate<C::Elem>,
    eps: &Rational,
    horizon: usize,
) -> Result<ApproxLimit<C::Elem>, EngineError> {
    if !carrier.join_is_lipschitz() {
        return Err(EngineError::WeakOnlyCarrier);
    }
    if *eps <= Rational::zero() {
        return Err(EngineError::NonPositiveEpsilon(eps.clone()));
    }
    let two = int(2);
    let h = (0..=horizon)
        .find(|&h| &two * cert.tail(h) <= *eps)
        .ok_or_else(|| EngineError::HorizonExceeded {
            eps: Box::new(eps.clone()),
            horizon,
            reached: Box::new(&two * cert.tail(horizon)),
        })?;
    let j = horizon.max(h);
    Ok(ApproxLimit {
        element: running_join(carrier, cert, h, j)?,
        h,
        j,
        bound: two * cert.tail(h),
    })
}

/// Rechecks `d(x_m, y) <= bound` for every `m` in `[h, j]`.
pub fn verify_approx<C: MetrizedJoin>(
    carrier: &C,
    cert: &GapCertificate<C::Elem>,
    approx: &ApproxLimit<C::Elem>,
) -> Verification {
    let mut v = Verification::default();
    for m in approx.h..=approx.j {
        v.record(
            "approx-bound",
            vec![m],
            carrier.dist(&cert.term(m), &approx.element),
            approx.bound.clone(),
        );
    }
    v
}

/// Everything materialized by [`full_tlat_pipeline`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionRun<E> {
    config: EngineConfig,
    terms: Vec<E>,
    gap_bounds: Vec<Rational>,
    tails: Vec<Rational>,
    joins: Vec<Vec<E>>,
    row_limits: Option<Vec<E>>,
    final_limit: Option<E>,
    approx: ApproxLimit<E>,
}

impl<E: Clone> CompletionRun<E> {
    pub fn config(&self) -> EngineConfig {
        self.config
    }

    pub fn terms(&self) -> &[E] {
        &self.terms
    }

    pub fn gap_bounds(&self) -> &[Rational] {
        &self.gap_bounds
    }

    pub fn tail(&self, h: usize) -> &Rational {
        &self.tails[h]
    }

    /// `x_{h,j}` if materialized.
    pub fn join(&self, h: usize, j: usize) -> Option<&E> {
        self.joins.get(h)?.get(j.checked_sub(h)?)
    }

    pub fn row_limits(&self) -> Option<&[E]> {
        self.row_limits.as_deref()
    }

    pub fn final_limit(&self) -> Option<&E> {
        self.final_limit.as_ref()
    }

    /// `x_{H, H+L}` with bound `2·tail(H)`; always present, even when the
    /// oracle gives up.
    pub fn approx(&self) -> &ApproxLimit<E> {
        &self.approx
    }

    /// `2·tail(H)`: how far `x_H` and every later materialized term may be
    /// from the limit.
    pub fn error_bound(&self) -> Rational {
        int(2) * &self.tails[self.config.horizon]
    }

    /// Overwrites a row limit. Test fixture for [`verify_run`].
    #[doc(hidden)]
    pub fn corrupt_row_limit(&mut self, h: usize, value: E) {
        if let Some(rows) = self.row_limits.as_mut() {
            rows[h] = value;
        }
    }

    pub fn transcript(&self, verification: &Verification) -> Transcript<E> {
        Transcript {
            indices: (0..self.terms.len()).collect(),
            gap_bounds: self.gap_bounds.clone(),
            joins: self.joins.clone(),
            row_limits: self.row_limits.clone(),
            final_limit: self.final_limit.clone(),
            checked_inequalities: verification.checks.clone(),
        }
    }
}

/// Builds a [`CompletionRun`] for rows `0..=horizon`.
pub fn full_tlat_pipeline<C, O>(
    carrier: &C,
    cert: &GapCertificate<C::Elem>,
    oracle: &O,
    config: EngineConfig,
) -> Result<CompletionRun<C::Elem>, EngineError>
where
    C: MetrizedJoin,
    O: MonotoneLimitOracle<C::Elem> + ?Sized,
{
    if !carrier.join_is_lipschitz() {
        return Err(EngineError::WeakOnlyCarrier);
    }
    let last = config.last_index();
    let terms: Vec<C::Elem> = (0..=last).map(|i| cert.term(i)).collect();
    let gap_bounds: Vec<Rational> = (0..last).map(|i| cert.gap_bound(i)).collect();
    let tails: Vec<Rational> = (0..=last).map(|h| cert.tail(h)).collect();

    let joins: Vec<Vec<C::Elem>> = (0..=config.horizon)
        .map(|h| {
            let mut row = Vec::with_capacity(last - h + 1);
            let mut acc = terms[h].clone();
            row.push(acc.clone());
            for t in &terms[h + 1..] {
                acc = carrier.join(&acc, t);
                row.push(acc.clone());
            }
            row
        })
        .collect();

    let row_limits: Option<Vec<C::Elem>> = joins
        .iter()
        .enumerate()
        .map(|(h, row)| oracle.increasing_limit(h, row))
        .collect();
    let final_limit = row_limits.as_ref().and_then(|rows| oracle.decreasing_limit(rows));

    let approx = ApproxLimit {
        element: joins[config.horizon][config.lookahead].clone(),
        h: config.horizon,
        j: last,
        bound: int(2) * &tails[config.horizon],
    };

    Ok(CompletionRun {
        config,
        terms,
        gap_bounds,
        tails,
        joins,
        row_limits,
        final_limit,
        approx,
    })
}

/// One instance of `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckedInequality {
    pub name: &'static str,
    pub indices: Vec<usize>,
    #[serde(with = "crate::rational::as_str")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::as_str")]
    pub rhs: Rational,
    pub ok: bool,
}

impl CheckedInequality {
    fn slack(&self) -> Rational {
        &self.rhs - &self.lhs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySummary {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// The instance with the least slack `rhs - lhs`.
    pub tightest: Option<CheckedInequality>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Verification {
    pub checks: Vec<CheckedInequality>,
}

impl Verification {
    /// Records one instance of `lhs <= rhs`.
    pub fn record(&mut self, name: &'static str, indices: Vec<usize>, lhs: Rational, rhs: Rational) {
        let ok = lhs <= rhs;
        self.checks.push(CheckedInequality {
            name,
            indices,
            lhs,
            rhs,
            ok,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn violations(&self) -> impl Iterator<Item = &CheckedInequality> {
        self.checks.iter().filter(|c| !c.ok)
    }

    pub fn of(&self, name: &str) -> impl Iterator<Item = &CheckedInequality> + '_ {
        let name = name.to_string();
        self.checks.iter().filter(move |c| c.name == name)
    }

    /// Per-family counts, in the order families first appear.
    pub fn families(&self) -> Vec<FamilySummary> {
        let mut out: Vec<FamilySummary> = Vec::new();
        for c in &self.checks {
            let idx = match out.iter().position(|f| f.name == c.name) {
                Some(i) => i,
                None => {
                    out.push(FamilySummary {
                        name: c.name,
                        checked: 0,
                        violations: 0,
                        tightest: None,
                    });
                    out.len() - 1
                }
            };
            let fam = &mut out[idx];
            fam.checked += 1;
            if !c.ok {
                fam.violations += 1;
            }
            if fam.tightest.as_ref().is_none_or(|t| c.slack() < t.slack()) {
                fam.tightest = Some(c.clone());
            }
        }
        out
    }
}

/// Rechecks every bound of the construction at all materialized indices:
///
/// - `gap-bound`: `d(x_ℓ, x_{ℓ+1}) <= gap_bound(ℓ)`
/// - `join-step`: `d(x_{h,j}, x_{h,j+1}) <= d(x_j, x_{j+1})`
/// - `join-spread`: `d(x_{h,j}, x_{h,k}) <= Σ_{j<=ℓ<k} gap_bound(ℓ)`
/// - `row-monotone`: `x_{h,j} <= x_{h,j+1}`
/// - `row-limit`: `d(x_{h,j}, x_{h,∞}) <= tail(j)`
/// - `row-limits-decreasing`: `x_{i,∞} <= x_{h,∞}` for `h <= i`
/// - `row-limit-spread`: `d(x_{h,∞}, x_{i,∞}) <= Σ_{h<=ℓ<i} gap_bound(ℓ)`
/// - `final-row`: `d(x_{h,∞}, x_{∞,∞}) <= tail(h)`
/// - `final-bound`: `d(x_h, x_{∞,∞}) <= 2·tail(h)`
///
/// Order relations are recorded as `d(a ∨ b, b) <= 0`.
pub fn verify_run<C: MetrizedJoin>(carrier: &C, run: &CompletionRun<C::Elem>) -> Verification {
    let mut v = Verification::default();
    let zero = Rational::zero();
    let last = run.config.last_index();
    let horizon = run.config.horizon;
    let order_gap = |a: &C::Elem, b: &C::Elem| carrier.dist(&carrier.join(a, b), b);

    // prefix[k] = Σ_{ℓ<k} gap_bound(ℓ)
    let mut prefix = Vec::with_capacity(last + 1);
    prefix.push(Rational::zero());
    for g in &run.gap_bounds {
        let next = prefix.last().unwrap() + g;
        prefix.push(next);
    }
    let step: Vec<Rational> = (0..last)
        .map(|l| carrier.dist(&run.terms[l], &run.terms[l + 1]))
        .collect();

    for (l, (s, g)) in step.iter().zip(&run.gap_bounds).enumerate() {
        v.record("gap-bound", vec![l, l + 1], s.clone(), g.clone());
    }

    for (h, row) in run.joins.iter().enumerate() {
        for j in h..last {
            let (a, b) = (&row[j - h], &row[j + 1 - h]);
            v.record("join-step", vec![h, j], carrier.dist(a, b), step[j].clone());
            v.record("row-monotone", vec![h, j], order_gap(a, b), zero.clone());
        }
        for j in h..=last {
            for k in j + 1..=last {
                v.record(
                    "join-spread",
                    vec![h, j, k],
                    carrier.dist(&row[j - h], &row[k - h]),
                    &prefix[k] - &prefix[j],
                );
            }
        }
    }

    let Some(rows) = run.row_limits.as_ref() else {
        return v;
    };
    for (h, row) in run.joins.iter().enumerate() {
        for j in h..=last {
            v.record(
                "row-limit",
                vec![h, j],
                carrier.dist(&row[j - h], &rows[h]),
                run.tails[j].clone(),
            );
        }
    }
    for h in 0..=horizon {
        for i in h + 1..=horizon {
            v.record("row-limits-decreasing", vec![h, i], order_gap(&rows[i], &rows[h]), zero.clone());
            v.record(
                "row-limit-spread",
                vec![h, i],
                carrier.dist(&rows[h], &rows[i]),
                &prefix[i] - &prefix[h],
            );
        }
    }

    let Some(limit) = run.final_limit.as_ref() else {
        return v;
    };
    for (h, row) in rows.iter().enumerate().take(horizon + 1) {
        v.record("final-row", vec![h], carrier.dist(row, limit), run.tails[h].clone());
    }
    for h in 0..=horizon {
        v.record(
            "final-bound",
            vec![h],
            carrier.dist(&run.terms[h], limit),
            int(2) * &run.tails[h],
        );
    }
    v
}

/// JSON transcript of a run and its verification.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Transcript<E> {
    pub indices: Vec<usize>,
    #[serde(with = "crate::rational::vec_as_str")]
    pub gap_bounds: Vec<Rational>,
    pub joins: Vec<Vec<E>>,
    pub row_limits: Option<Vec<E>>,
    pub final_limit: Option<E>,
    pub checked_inequalities: Vec<CheckedInequality>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval_sets::IntervalSet;
    use crate::metrized_lattice::{Dual, IntervalCarrier, MetricCarrier};
    use crate::rational::{pow2_inv, rat};

    fn prefix(k: u32) -> IntervalSet {
        IntervalSet::interval(int(0), pow2_inv(k)).unwrap()
    }

    /// `[0, 2^{-i})`, gaps `2^{-i-1}`, tail `2^{-h}`.
    fn halving() -> GapCertificate<IntervalSet> {
        GapCertificate::new(
            |i| prefix(i as u32),
            |i| pow2_inv(i as u32 + 1),
            |h| pow2_inv(h as u32),
        )
    }

    fn small() -> EngineConfig {
        EngineConfig {
            horizon: 12,
            lookahead: 6,
        }
    }

    #[test]
    fn running_join_examples() {
        let c = IntervalCarrier;
        let cert = halving();
        assert_eq!(running_join(&c, &cert, 3, 3).unwrap(), prefix(3));
        for h in 0..6 {
            for j in h..10 {
                assert_eq!(running_join(&c, &cert, h, j).unwrap(), prefix(h as u32));
            }
        }
        assert_eq!(
            running_join(&c, &cert, 4, 2),
            Err(EngineError::InvalidRange { h: 4, j: 2 })
        );
        let halves = GapCertificate::new(
            |i| {
                if i % 2 == 0 {
                    IntervalSet::interval(int(0), rat(1, 2)).unwrap()
                } else {
                    IntervalSet::interval(rat(1, 2), int(1)).unwrap()
                }
            },
            |_| int(1),
            |_| int(0),
        );
        assert_eq!(running_join(&c, &halves, 0, 1).unwrap(), IntervalSet::unit());
    }

    #[test]
    fn approx_limit_constant_sequence() {
        let s = IntervalSet::interval(rat(1, 5), rat(2, 3)).unwrap();
        let cert = GapCertificate::constant(s.clone());
        let a = approx_limit(&IntervalCarrier, &cert, &rat(1, 1000), 64).unwrap();
        assert_eq!((a.element.clone(), a.h, a.bound.clone()), (s, 0, int(0)));
        assert!(verify_approx(&IntervalCarrier, &cert, &a).passed());
    }

    #[test]
    fn approx_limit_halving_at_two_to_minus_eight() {
        let cert = halving();
        let eps = pow2_inv(8);
        let a = approx_limit(&IntervalCarrier, &cert, &eps, 64).unwrap();
        assert_eq!(a.h, 9);
        assert_eq!(a.element, prefix(9));
        assert_eq!(a.bound, eps);
        let d = IntervalCarrier.dist(&a.element, &IntervalSet::empty());
        assert_eq!(d, pow2_inv(9));
        assert!(d <= a.bound);
        let v = verify_approx(&IntervalCarrier, &cert, &a);
        assert_eq!(v.checks.len(), 64 - 9 + 1);
        assert!(v.passed());
    }

    #[test]
    fn approx_limit_increasing_sets() {
        let cert = GapCertificate::new(
            |i| {
                let hi = int(1) - pow2_inv(i as u32);
                if hi.is_zero() {
                    IntervalSet::empty()
                } else {
                    IntervalSet::interval(int(0), hi).unwrap()
                }
            },
            |i| pow2_inv(i as u32 + 1),
            |h| pow2_inv(h as u32),
        );
        let a = approx_limit(&IntervalCarrier, &cert, &rat(1, 10), 20).unwrap();
        // least h with 2·2^{-h} <= 1/10
        assert_eq!(a.h, 5);
        assert_eq!(a.element, IntervalSet::interval(int(0), int(1) - pow2_inv(20)).unwrap());
        for m in a.h..=a.j {
            // direct measure: d(x_m, y) = 2^{-m} - 2^{-j}
            let expected = pow2_inv(m as u32) - pow2_inv(a.j as u32);
            assert_eq!(IntervalCarrier.dist(&cert.term(m), &a.element), expected);
        }
        assert!(verify_approx(&IntervalCarrier, &cert, &a).passed());
    }

    #[test]
    fn approx_limit_errors() {
        let cert = halving();
        assert!(matches!(
            approx_limit(&IntervalCarrier, &cert, &int(0), 64),
            Err(EngineError::NonPositiveEpsilon(_))
        ));
        assert!(matches!(
            approx_limit(&IntervalCarrier, &cert, &pow2_inv(20), 10),
            Err(EngineError::HorizonExceeded { horizon: 10, .. })
        ));
    }

    #[test]
    fn typewriter_pipeline_reaches_empty() {
        let oracle = SourceOracle::new(LimitSource::stabilize(), LimitSource::value(IntervalSet::empty()));
        let run = full_tlat_pipeline(&IntervalCarrier, &halving(), &oracle, small()).unwrap();
        assert_eq!(run.final_limit(), Some(&IntervalSet::empty()));
        for h in 0..=12 {
            assert_eq!(run.row_limits().unwrap()[h], prefix(h as u32));
            assert_eq!(IntervalCarrier.dist(&run.terms()[h], &IntervalSet::empty()), pow2_inv(h as u32));
        }
        let v = verify_run(&IntervalCarrier, &run);
        assert!(v.passed(), "{:?}", v.violations().next());
        let names: Vec<_> = v.families().iter().map(|f| f.name).collect();
        assert_eq!(
            names,
            [
                "gap-bound",
                "join-step",
                "row-monotone",
                "join-spread",
                "row-limit",
                "row-limits-decreasing",
                "row-limit-spread",
                "final-row",
                "final-bound"
            ]
        );
    }

    #[test]
    fn stabilizing_constant_sequence() {
        let s = IntervalSet::interval(rat(1, 3), rat(1, 2)).unwrap();
        let cert = GapCertificate::constant(s.clone());
        let run = full_tlat_pipeline(&IntervalCarrier, &cert, &SourceOracle::stabilizing(), small()).unwrap();
        assert_eq!(run.final_limit(), Some(&s));
        assert!(verify_run(&IntervalCarrier, &run).passed());
    }

    #[test]
    fn unavailable_oracle_keeps_approx_data() {
        let run = full_tlat_pipeline(&IntervalCarrier, &halving(), &SourceOracle::unavailable(), small()).unwrap();
        assert!(run.row_limits().is_none());
        assert!(run.final_limit().is_none());
        assert_eq!(run.approx().element, prefix(12));
        assert_eq!(run.approx().bound, pow2_inv(11));
        assert_eq!(run.error_bound(), pow2_inv(11));
        let v = verify_run(&IntervalCarrier, &run);
        assert!(v.passed());
        assert_eq!(v.of("row-limit").count(), 0);
    }

    #[test]
    fn corrupted_row_limit_is_reported() {
        let oracle = SourceOracle::new(LimitSource::stabilize(), LimitSource::value(IntervalSet::empty()));
        let mut run = full_tlat_pipeline(&IntervalCarrier, &halving(), &oracle, small()).unwrap();
        run.corrupt_row_limit(3, IntervalSet::unit());
        let v = verify_run(&IntervalCarrier, &run);
        assert!(!v.passed());
        let bad: Vec<_> = v.violations().map(|c| c.name).collect();
        assert!(bad.contains(&"row-limit"));
        assert!(bad.contains(&"final-row"));
    }

    #[test]
    fn dual_pipeline_on_intersections() {
        let carrier = Dual(IntervalCarrier);
        let oracle = SourceOracle::new(LimitSource::value(IntervalSet::empty()), LimitSource::stabilize());
        let run = full_tlat_pipeline(&carrier, &halving(), &oracle, small()).unwrap();
        assert_eq!(run.join(2, 7), Some(&prefix(7)));
        assert_eq!(run.final_limit(), Some(&IntervalSet::empty()));
        assert!(verify_run(&carrier, &run).passed());
    }

    #[test]
    fn weak_only_carrier_is_refused() {
        struct Weak;
        impl MetricCarrier for Weak {
            type Elem = IntervalSet;
            fn dist(&self, a: &IntervalSet, b: &IntervalSet) -> Rational {
                IntervalCarrier.dist(a, b)
            }
        }
        impl MetrizedJoin for Weak {
            fn join(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
                a.union(b)
            }
            fn join_is_lipschitz(&self) -> bool {
                false
            }
        }
        assert_eq!(
            full_tlat_pipeline(&Weak, &halving(), &SourceOracle::stabilizing(), small()).unwrap_err(),
            EngineError::WeakOnlyCarrier
        );
        assert_eq!(
            approx_limit(&Weak, &halving(), &int(1), 8).unwrap_err(),
            EngineError::WeakOnlyCarrier
        );
    }

    #[test]
    fn transcript_shape() {
        let oracle = SourceOracle::new(LimitSource::stabilize(), LimitSource::value(IntervalSet::empty()));
        let cfg = EngineConfig {
            horizon: 2,
            lookahead: 4,
        };
        let run = full_tlat_pipeline(&IntervalCarrier, &halving(), &oracle, cfg).unwrap();
        let v = verify_run(&IntervalCarrier, &run);
        let json = serde_json::to_value(run.transcript(&v)).unwrap();
        let keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        assert_eq!(
            keys,
            ["checkedInequalities", "finalLimit", "gapBounds", "indices", "joins", "rowLimits"]
        );
        assert_eq!(json["gapBounds"][0], "1/2");
        assert_eq!(json["finalLimit"], serde_json::json!([]));
        let first = &json["checkedInequalities"][0];
        assert_eq!(first["name"], "gap-bound");
        assert_eq!(first["ok"], true);
    }
}
