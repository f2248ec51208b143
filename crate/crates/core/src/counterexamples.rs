//! Finite nonempty subsets of a metric space under the diameter metric.
//!
//! `L` is the upper semilattice of finite nonempty subsets of a metric space
//! `M` with `d_L(S, T) = diam(S ∪ T)` for `S ≠ T`. Unions satisfy the weak
//! join inequality `d(S, S ∪ T) <= d(S, T)` but not the Lipschitz one
//! `d(X ∪ Y, X ∪ Z) <= d(Y, Z)`, and `L` is complete exactly when `M` is.
//! `L' = L ∪ {∅}` adds a bottom at distance `1 + d_L(P, S)` from each `S`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrized_lattice::{
    check_metric_axioms, check_weak_join, check_weak_meet, MetricCarrier, MetrizedJoin, MetrizedLattice, Report,
};
use crate::rational::{format_rational, int, parse_rational, rat, ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("point space is empty")]
    Empty,
    #[error("point {0} appears twice")]
    DuplicatePoint(String),
    #[error("distance table is {rows} rows by {cols} columns, expected {n} by {n}")]
    TableShape { n: usize, rows: usize, cols: usize },
    #[error("distance table is not a metric: {0}")]
    NotAMetric(String),
    #[error("no point with index {0}")]
    UnknownPoint(usize),
    #[error("subsets must be nonempty")]
    EmptySubset,
    #[error("chain needs at least two sets")]
    ShortChain,
    #[error("chain is not strictly increasing at position {0}")]
    NotIncreasing(usize),
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
    #[error("invalid point space JSON: {0}")]
    Json(String),
}

/// A finite metric space given by a full distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSpace {
    names: Vec<String>,
    coords: Option<Vec<Rational>>,
    table: Vec<Vec<Rational>>,
    /// Points that are limits of other points in the space being modelled;
    /// their singletons are not isolated.
    limit_points: BTreeSet<usize>,
}

/// JSON forms: `["0", "1", "10"]`, or
/// `{"names": [...], "distances": [["0", "1"], ["1", "0"]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Points(Vec<String>),
    Table {
        #[serde(default)]
        names: Option<Vec<String>>,
        distances: Vec<Vec<String>>,
    },
}

impl PointSpace {
    /// Points on the line with `d(p, q) = |p - q|`, kept in the given order.
    pub fn line(points: Vec<Rational>) -> Result<Self, SpaceError> {
        if points.is_empty() {
            return Err(SpaceError::Empty);
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.clone()) {
                return Err(SpaceError::DuplicatePoint(format_rational(p)));
            }
        }
        let table = points
            .iter()
            .map(|p| points.iter().map(|q| (p - q).abs()).collect())
            .collect();
        Ok(Self {
            names: points.iter().map(format_rational).collect(),
            coords: Some(points),
            table,
            limit_points: BTreeSet::new(),
        })
    }

    pub fn integers(points: &[i64]) -> Self {
        Self::line(points.iter().map(|&p| int(p)).collect()).expect("distinct integers")
    }

    /// `{1, 1/2, …, 1/n}`.
    pub fn harmonic(n: usize) -> Self {
        Self::line((1..=n as i64).map(|k| rat(1, k)).collect()).expect("distinct reciprocals")
    }

    /// `{1, 1/2, …, 1/n, 0}` with `0` marked as a limit point.
    pub fn harmonic_with_zero(n: usize) -> Self {
        let mut pts: Vec<Rational> = (1..=n as i64).map(|k| rat(1, k)).collect();
        pts.push(int(0));
        let mut space = Self::line(pts).expect("distinct points");
        space.limit_points.insert(n);
        space
    }

    /// An arbitrary finite metric.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<Rational>>) -> Result<Self, SpaceError> {
        let n = names.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name) {
                return Err(SpaceError::DuplicatePoint(name.clone()));
            }
        }
        let cols = table.iter().map(Vec::len).find(|&c| c != n).unwrap_or(n);
        if table.len() != n || cols != n {
            return Err(SpaceError::TableShape {
                n,
                rows: table.len(),
                cols,
            });
        }
        for i in 0..n {
            for j in 0..n {
                let d = &table[i][j];
                if i == j && !d.is_zero() {
                    return Err(SpaceError::NotAMetric(format!("d({0}, {0}) = {d}", names[i])));
                }
                if i != j && !d.is_positive() {
                    return Err(SpaceError::NotAMetric(format!("d({}, {}) = {d}", names[i], names[j])));
                }
                if *d != table[j][i] {
                    return Err(SpaceError::NotAMetric(format!("d({}, {}) is not symmetric", names[i], names[j])));
                }
                for k in 0..n {
                    if *d > &table[i][k] + &table[k][j] {
                        return Err(SpaceError::NotAMetric(format!(
                            "triangle fails for {}, {}, {}",
                            names[i], names[k], names[j]
                        )));
                    }
                }
            }
        }
        Ok(Self {
            names,
            coords: None,
            table,
            limit_points: BTreeSet::new(),
        })
    }

    pub fn from_spec(spec: SpaceSpec) -> Result<Self, SpaceError> {
        match spec {
            SpaceSpec::Points(pts) => Self::line(pts.iter().map(|p| parse_rational(p)).collect::<Result<_, _>>()?),
            SpaceSpec::Table { names, distances } => {
                let table: Vec<Vec<Rational>> = distances
                    .iter()
                    .map(|row| row.iter().map(|d| parse_rational(d)).collect::<Result<_, _>>())
                    .collect::<Result<_, _>>()?;
                let names = names.unwrap_or_else(|| (0..table.len()).map(|i| i.to_string()).collect());
                Self::from_table(names, table)
            }
        }
    }

    pub fn from_json(json: &str) -> Result<Self, SpaceError> {
        let spec: SpaceSpec = serde_json::from_str(json).map_err(|e| SpaceError::Json(e.to_string()))?;
        Self::from_spec(spec)
    }

    /// Marks point `i` as a limit of other points of the modelled space.
    pub fn with_limit_point(mut self, i: usize) -> Result<Self, SpaceError> {
        if i >= self.len() {
            return Err(SpaceError::UnknownPoint(i));
        }
        self.limit_points.insert(i);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn coord(&self, i: usize) -> Option<&Rational> {
        self.coords.as_ref().map(|c| &c[i])
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.table[i][j]
    }

    pub fn is_limit_point(&self, i: usize) -> bool {
        self.limit_points.contains(&i)
    }

    /// Distance from `i` to its nearest other point.
    pub fn nearest_neighbor(&self, i: usize) -> Option<Rational> {
        (0..self.len()).filter(|&j| j != i).map(|j| self.table[i][j].clone()).min()
    }

    pub fn singleton(&self, i: usize) -> FiniteSubset {
        FiniteSubset(vec![i])
    }

    pub fn subset(&self, idx: impl IntoIterator<Item = usize>) -> Result<FiniteSubset, SpaceError> {
        let set: BTreeSet<usize> = idx.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&i| i >= self.len()) {
            return Err(SpaceError::UnknownPoint(bad));
        }
        if set.is_empty() {
            return Err(SpaceError::EmptySubset);
        }
        Ok(FiniteSubset(set.into_iter().collect()))
    }

    /// All nonempty subsets with at most `cap` points, by size and then
    /// lexicographically.
    pub fn subsets_up_to(&self, cap: usize) -> Vec<FiniteSubset> {
        (1..=cap.min(self.len()))
            .flat_map(|k| (0..self.len()).combinations(k).map(FiniteSubset))
            .collect()
    }

    pub fn names_of(&self, s: &FiniteSubset) -> Vec<String> {
        s.0.iter().map(|&i| self.names[i].clone()).collect()
    }

    pub fn show(&self, s: &FiniteSubset) -> String {
        format!("{{{}}}", self.names_of(s).join(", "))
    }
}

/// A nonempty set of point indices, sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FiniteSubset(Vec<usize>);

impl FiniteSubset {
    pub fn points(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &FiniteSubset) -> FiniteSubset {
        FiniteSubset(self.0.iter().chain(&other.0).copied().collect::<BTreeSet<_>>().into_iter().collect())
    }

    /// `None` when the sets are disjoint.
    pub fn intersect(&self, other: &FiniteSubset) -> Option<FiniteSubset> {
        let common: Vec<usize> = self.0.iter().filter(|i| other.0.contains(i)).copied().collect();
        (!common.is_empty()).then_some(FiniteSubset(common))
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        self.0.iter().all(|i| other.0.contains(i))
    }
}

impl fmt::Display for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(", "))
    }
}

/// `max_{x,y ∈ S} d(x, y)`.
pub fn diam(space: &PointSpace, s: &FiniteSubset) -> Rational {
    let pts = s.points();
    let mut best = Rational::zero();
    for (a, &i) in pts.iter().enumerate() {
        for &j in &pts[a + 1..] {
            if *space.dist(i, j) > best {
                best = space.dist(i, j).clone();
            }
        }
    }
    best
}

/// `0` if `S = T`, else `diam(S ∪ T)`.
pub fn d_l(space: &PointSpace, s: &FiniteSubset, t: &FiniteSubset) -> Rational {
    if s == t {
        Rational::zero()
    } else {
        diam(space, &s.union(t))
    }
}

/// `L` as a metrized upper semilattice under union.
#[derive(Debug, Clone)]
pub struct DiameterCarrier {
    pub space: PointSpace,
}

impl MetricCarrier for DiameterCarrier {
    type Elem = FiniteSubset;

    fn dist(&self, a: &FiniteSubset, b: &FiniteSubset) -> Rational {
        d_l(&self.space, a, b)
    }
}

impl MetrizedJoin for DiameterCarrier {
    fn join(&self, a: &FiniteSubset, b: &FiniteSubset) -> FiniteSubset {
        a.union(b)
    }

    fn join_is_lipschitz(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LPrimeElement {
    Empty,
    Set(FiniteSubset),
}

/// `L' = L ∪ {∅}` with `d(∅, S) = 1 + d_L(P, S)` for a fixed anchor `P`.
/// Unions and intersections make it a lattice.
#[derive(Debug, Clone)]
pub struct LPrimeCarrier {
    pub space: PointSpace,
    pub anchor: FiniteSubset,
}

impl LPrimeCarrier {
    /// Anchor defaults to the singleton of the least point (by coordinate
    /// when the space has coordinates, else the first point).
    pub fn new(space: PointSpace) -> Self {
        let least = match &space.coords {
            Some(c) => (0..c.len()).min_by(|&a, &b| c[a].cmp(&c[b])).unwrap_or(0),
            None => 0,
        };
        let anchor = space.singleton(least);
        Self { space, anchor }
    }

    pub fn with_anchor(space: PointSpace, anchor: FiniteSubset) -> Result<Self, SpaceError> {
        if let Some(&bad) = anchor.points().iter().find(|&&i| i >= space.len()) {
            return Err(SpaceError::UnknownPoint(bad));
        }
        Ok(Self { space, anchor })
    }

    /// Every element with at most `cap` points, `∅` first.
    pub fn elements_up_to(&self, cap: usize) -> Vec<LPrimeElement> {
        std::iter::once(LPrimeElement::Empty)
            .chain(self.space.subsets_up_to(cap).into_iter().map(LPrimeElement::Set))
            .collect()
    }
}

pub fn d_lprime(carrier: &LPrimeCarrier, a: &LPrimeElement, b: &LPrimeElement) -> Rational {
    match (a, b) {
        (LPrimeElement::Empty, LPrimeElement::Empty) => Rational::zero(),
        (LPrimeElement::Empty, LPrimeElement::Set(s)) | (LPrimeElement::Set(s), LPrimeElement::Empty) => {
            int(1) + d_l(&carrier.space, &carrier.anchor, s)
        }
        (LPrimeElement::Set(s), LPrimeElement::Set(t)) => d_l(&carrier.space, s, t),
    }
}

impl MetricCarrier for LPrimeCarrier {
    type Elem = LPrimeElement;

    fn dist(&self, a: &LPrimeElement, b: &LPrimeElement) -> Rational {
        d_lprime(self, a, b)
    }
}

impl MetrizedJoin for LPrimeCarrier {
    fn join(&self, a: &LPrimeElement, b: &LPrimeElement) -> LPrimeElement {
        match (a, b) {
            (LPrimeElement::Empty, x) | (x, LPrimeElement::Empty) => x.clone(),
            (LPrimeElement::Set(s), LPrimeElement::Set(t)) => LPrimeElement::Set(s.union(t)),
        }
    }

    fn join_is_lipschitz(&self) -> bool {
        false
    }
}

impl MetrizedLattice for LPrimeCarrier {
    fn meet(&self, a: &LPrimeElement, b: &LPrimeElement) -> LPrimeElement {
        match (a, b) {
            (LPrimeElement::Set(s), LPrimeElement::Set(t)) => s.intersect(t).map_or(LPrimeElement::Empty, LPrimeElement::Set),
            _ => LPrimeElement::Empty,
        }
    }

    fn meet_is_lipschitz(&self) -> bool {
        false
    }
}

/// A triple with `d_L(x ∪ y, x ∪ z) > d_L(y, z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DvWitness {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    #[serde(with = "crate::rational::as_str")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::as_str")]
    pub rhs: Rational,
}

/// First triple `(x, y, z)` of subsets with at most `size_cap` points that
/// breaks `d(x ∪ y, x ∪ z) <= d(y, z)`, searching `x`, then `y`, then `z`
/// in the order of [`PointSpace::subsets_up_to`].
pub fn find_dv_violation(space: &PointSpace, size_cap: usize) -> Option<DvWitness> {
    let subsets = space.subsets_up_to(size_cap);
    for x in &subsets {
        for y in &subsets {
            let xy = x.union(y);
            for z in &subsets {
                let lhs = d_l(space, &xy, &x.union(z));
                let rhs = d_l(space, y, z);
                if lhs > rhs {
                    return Some(DvWitness {
                        x: space.names_of(x),
                        y: space.names_of(y),
                        z: space.names_of(z),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    None
}

fn pairs<T: Clone>(items: &[T]) -> Vec<(T, T)> {
    items.iter().cartesian_product(items).map(|(a, b)| (a.clone(), b.clone())).collect()
}

fn triples<T: Clone>(items: &[T]) -> Vec<(T, T, T)> {
    let mut out = Vec::with_capacity(items.len().pow(3));
    for a in items {
        for b in items {
            for c in items {
                out.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    out
}

/// Metric axioms of `d_L` on every triple of subsets up to `size_cap`.
pub fn check_l_metric(space: &PointSpace, size_cap: usize) -> Report<FiniteSubset> {
    let carrier = DiameterCarrier { space: space.clone() };
    check_metric_axioms(&carrier, &triples(&space.subsets_up_to(size_cap)))
}

/// Metric axioms of `d_{L'}` on every triple of elements up to `size_cap`.
pub fn check_lprime_metric(carrier: &LPrimeCarrier, size_cap: usize) -> Report<LPrimeElement> {
    check_metric_axioms(carrier, &triples(&carrier.elements_up_to(size_cap)))
}

/// `d_L(S, S ∪ T) <= d_L(S, T)` on every pair of subsets up to `size_cap`.
pub fn check_weak_join_exhaustive(space: &PointSpace, size_cap: usize) -> Report<FiniteSubset> {
    let carrier = DiameterCarrier { space: space.clone() };
    check_weak_join(&carrier, &pairs(&space.subsets_up_to(size_cap)))
}

/// `d_L({x}, {y}) = d_M(x, y)` for all points.
pub fn check_singleton_isometry(space: &PointSpace) -> Report<FiniteSubset> {
    let mut report = Report::default();
    for i in 0..space.len() {
        for j in 0..space.len() {
            let (si, sj) = (space.singleton(i), space.singleton(j));
            let gap = (d_l(space, &si, &sj) - space.dist(i, j)).abs();
            report.check("singleton-isometry", &[si, sj], gap, Rational::zero());
        }
    }
    report
}

/// The weak meet inequality `d(S, S ∩ T) <= d(S, T)` in `L'`, split by
/// whether `S ∩ T` is empty.
#[derive(Debug, Clone, Serialize)]
pub struct WeakMeetSplit {
    /// Pairs with `S ∩ T ≠ ∅`; expected to pass.
    pub intersecting: Report<LPrimeElement>,
    /// Pairs of disjoint sets; expected to contain violations.
    pub disjoint: Report<LPrimeElement>,
}

pub fn weak_meet_split(carrier: &LPrimeCarrier, size_cap: usize) -> WeakMeetSplit {
    let subsets = carrier.space.subsets_up_to(size_cap);
    let (meeting, apart): (Vec<_>, Vec<_>) = pairs(&subsets)
        .into_iter()
        .partition(|(s, t)| s.intersect(t).is_some());
    let lift = |v: Vec<(FiniteSubset, FiniteSubset)>| {
        v.into_iter()
            .map(|(s, t)| (LPrimeElement::Set(s), LPrimeElement::Set(t)))
            .collect::<Vec<_>>()
    };
    WeakMeetSplit {
        intersecting: check_weak_meet(carrier, &lift(meeting)),
        disjoint: check_weak_meet(carrier, &lift(apart)),
    }
}

/// Checks `d_L(S_i, S_{i+1}) >= diam(S_1)` along a strictly increasing chain
/// `S_0 ⊂ S_1 ⊂ …`, for every consecutive pair. For `i = 0` it holds with
/// equality, since `S_0 ∪ S_1 = S_1`.
pub fn check_increasing_gap(space: &PointSpace, chain: &[FiniteSubset]) -> Result<Report<FiniteSubset>, SpaceError> {
    if chain.len() < 2 {
        return Err(SpaceError::ShortChain);
    }
    for i in 0..chain.len() - 1 {
        if chain[i] == chain[i + 1] || !chain[i].is_subset(&chain[i + 1]) {
            return Err(SpaceError::NotIncreasing(i));
        }
    }
    let floor = diam(space, &chain[1]);
    let mut report = Report::default();
    for w in chain.windows(2) {
        report.check("increasing-gap", w, floor.clone(), d_l(space, &w[0], &w[1]));
    }
    Ok(report)
}

/// Distance from an element of `L'` to the nearest other element, or
/// `NotIsolated`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Isolation {
    Radius(#[serde(with = "crate::rational::as_str")] Rational),
    NotIsolated,
}

/// In `L`, a set with two or more points is at distance `>= diam(S)` from
/// every other set, with equality at any of its singletons; a singleton
/// `{x}` is as isolated as `x` is in `M`. In `L'` the distance to `∅`,
/// `1 + d_L(P, S)`, also competes, and `∅` itself is at distance `>= 1`
/// from everything, with equality at `P`.
pub fn isolation_radius(carrier: &LPrimeCarrier, e: &LPrimeElement) -> Isolation {
    let space = &carrier.space;
    match e {
        LPrimeElement::Empty => Isolation::Radius(int(1)),
        LPrimeElement::Set(s) => {
            let to_empty = int(1) + d_l(space, &carrier.anchor, s);
            let in_l = if s.len() >= 2 {
                Some(diam(space, s))
            } else {
                let x = s.points()[0];
                if space.is_limit_point(x) {
                    return Isolation::NotIsolated;
                }
                space.nearest_neighbor(x)
            };
            Isolation::Radius(in_l.map_or(to_empty.clone(), |r| r.min(to_empty)))
        }
    }
}

/// Non-convergence of `{1}, {1/2}, {1/3}, …` in `L` over `M = {1/n}`.
#[derive(Debug, Clone, Serialize)]
pub struct NonconvergenceReport {
    /// Candidates are subsets of `{1/n : n <= points}`; sequence terms run to
    /// `4·points`.
    pub points: usize,
    pub size_cap: usize,
    pub candidates: usize,
    /// `d_L({1/m}, {1/n}) <= 1/min(m, n)`.
    pub cauchy: Report<FiniteSubset>,
    /// `d_L(S, {1/n}) >= diam(S) > 0` for `|S| >= 2`.
    pub separated: Report<FiniteSubset>,
    /// `d_L({1/k}, {1/n}) >= 1/(2k)` and nondecreasing for `n >= 2k`.
    pub singletons: Report<FiniteSubset>,
}

impl NonconvergenceReport {
    pub fn passed(&self) -> bool {
        self.cauchy.passed() && self.separated.passed() && self.singletons.passed()
    }
}

pub fn nonconvergence_check(points: usize, size_cap: usize) -> NonconvergenceReport {
    let last = 4 * points;
    let space = PointSpace::harmonic(last);
    // index i holds 1/(i+1)
    let term = |n: usize| space.singleton(n - 1);

    let mut cauchy = Report::default();
    for m in 1..=last {
        for n in m..=last {
            cauchy.check("cauchy-modulus", &[term(m), term(n)], d_l(&space, &term(m), &term(n)), rat(1, m as i64));
        }
    }

    let small = PointSpace::harmonic(points);
    let mut candidates = small.subsets_up_to(size_cap);
    let mut separated = Report::default();
    for s in candidates.iter().filter(|s| s.len() >= 2) {
        let floor = diam(&space, s);
        separated.check("diam-positive", std::slice::from_ref(s), Rational::zero() - &floor, Rational::zero());
        for n in 1..=last {
            separated.check("separated", &[s.clone(), term(n)], floor.clone(), d_l(&space, s, &term(n)));
        }
    }

    let extra: Vec<FiniteSubset> = (points + 1..=2 * points).map(term).collect();
    candidates.extend(extra);
    let mut singletons = Report::default();
    for s in candidates.iter().filter(|s| s.len() == 1) {
        let k = s.points()[0] + 1;
        let floor = rat(1, 2 * k as i64);
        let mut prev = Rational::zero();
        for n in 2 * k..=last {
            let d = d_l(&space, s, &term(n));
            singletons.check("singleton-floor", &[s.clone(), term(n)], floor.clone(), d.clone());
            singletons.check("singleton-monotone", &[s.clone(), term(n)], prev, d.clone());
            prev = d;
        }
    }

    NonconvergenceReport {
        points,
        size_cap,
        candidates: candidates.len(),
        cauchy,
        separated,
        singletons,
    }
}

/// `{x_i} → {y}` while `{x_i, z}` stays away from `{y, z}`.
#[derive(Debug, Clone, Serialize)]
pub struct JoinDiscontinuity {
    #[serde(with = "crate::rational::vec_as_str")]
    pub singleton_distances: Vec<Rational>,
    #[serde(with = "crate::rational::vec_as_str")]
    pub pair_distances: Vec<Rational>,
    /// `d_M(y, z)`.
    #[serde(with = "crate::rational::as_str")]
    pub pair_floor: Rational,
    pub checks: Report<FiniteSubset>,
    /// The last singleton distance is below every pair distance.
    pub discontinuous: bool,
}

/// `seq` indexes `x_0, x_1, …`; `y` is its limit in `M` and `z ≠ y`.
pub fn join_discontinuity_witness(space: &PointSpace, seq: &[usize], y: usize, z: usize) -> JoinDiscontinuity {
    let (sy, yz) = (space.singleton(y), space.singleton(y).union(&space.singleton(z)));
    let floor = space.dist(y, z).clone();
    let mut checks = Report::default();
    let mut singles = Vec::with_capacity(seq.len());
    let mut pairs = Vec::with_capacity(seq.len());
    for &x in seq {
        let sx = space.singleton(x);
        let xz = sx.union(&space.singleton(z));
        let ds = d_l(space, &sx, &sy);
        let dp = d_l(space, &xz, &yz);
        if xz != yz {
            checks.check("pair-floor", &[xz.clone(), yz.clone()], floor.clone(), dp.clone());
        }
        if let Some(prev) = singles.last() {
            checks.check("singleton-nonincreasing", &[sx.clone(), sy.clone()], ds.clone(), Rational::clone(prev));
        }
        singles.push(ds);
        pairs.push(dp);
    }
    let discontinuous = match (singles.last(), pairs.iter().min()) {
        (Some(s), Some(p)) => s < p,
        _ => false,
    };
    JoinDiscontinuity {
        singleton_distances: singles,
        pair_distances: pairs,
        pair_floor: floor,
        checks,
        discontinuous,
    }
}

/// Isolation radii of every `L'` element up to `size_cap`.
pub fn isolation_survey(carrier: &LPrimeCarrier, size_cap: usize) -> Vec<(LPrimeElement, Isolation)> {
    carrier
        .elements_up_to(size_cap)
        .into_iter()
        .map(|e| {
            let r = isolation_radius(carrier, &e);
            (e, r)
        })
        .collect()
}
