//! Step functions on `[0, 1)` valued in a finite algebra.
//!
//! A [`StepFunction`] assigns a label to every point of `[0, 1)` and is
//! stored as the family of level sets `f_x`, one canonical interval set per
//! label. Operations of a [`FiniteAlgebra`] lift pointwise by intersecting
//! level sets, the distance `d'` is the measure of the disagreement set, and
//! the `{0,1}`-valued characteristic functions give the bisection argument
//! in the lifted ring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval_sets::{metric_d, Ambient, Interval, IntervalError, IntervalSet};
use crate::measure_algebra::{ChooserOracle, Side};
use crate::metrized_lattice::MetricCarrier;
use crate::rational::Rational;

pub type Label = String;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    #[error("carrier label {0:?} appears twice")]
    DuplicateCarrierLabel(Label),
    #[error("operation {op:?} expects a table of {expected} entries, got {got}")]
    TableSize { op: String, expected: usize, got: usize },
    #[error("label {0:?} is not in the carrier")]
    UnknownLabel(Label),
    #[error("no operation named {0:?}")]
    UnknownOperation(String),
    #[error("operation {op:?} has arity {arity} but was given {got} arguments")]
    ArityMismatch { op: String, arity: usize, got: usize },
    #[error("label {0:?} labels more than one part")]
    DuplicateLabel(Label),
    #[error("part for label {0:?} is empty")]
    EmptyPart(Label),
    #[error("parts for {first:?} and {second:?} overlap in a set of measure {measure}")]
    Overlap { first: Label, second: Label, measure: Rational },
    #[error("parts fall short of covering [0, 1) by measure {0}")]
    Deficit(Rational),
    #[error("set {0} is not contained in [0, 1)")]
    OutsideUnit(IntervalSet),
    #[error("algebra lacks a binary `mul` acting as a ring product on labels \"0\" and \"1\"")]
    NotARing,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// A binary, unary, or nullary operation given by its full table.
///
/// `table[r]` is the output for the argument tuple whose carrier indices,
/// read as base-`|carrier|` digits with the first argument most significant,
/// equal `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    arity: usize,
    table: Vec<usize>,
}

impl Operation {
    pub fn arity(&self) -> usize {
        self.arity
    }

    fn apply(&self, args: &[usize], carrier_len: usize) -> usize {
        let idx = args.iter().fold(0, |acc, &a| acc * carrier_len + a);
        self.table[idx]
    }
}

/// A finite carrier with finitely many finitary operations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraSpec", into = "AlgebraSpec")]
pub struct FiniteAlgebra {
    carrier: Vec<Label>,
    index: BTreeMap<Label, usize>,
    ops: BTreeMap<String, Operation>,
}

/// JSON description: `{carrier: [...], ops: {name: {arity, table}}}` with
/// `table` a flat list of output labels in the order described on
/// [`Operation`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub carrier: Vec<Label>,
    pub ops: BTreeMap<String, OperationSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperationSpec {
    pub arity: usize,
    pub table: Vec<Label>,
}

impl TryFrom<AlgebraSpec> for FiniteAlgebra {
    type Error = StarError;

    fn try_from(spec: AlgebraSpec) -> Result<Self, StarError> {
        let mut index = BTreeMap::new();
        for (i, label) in spec.carrier.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(StarError::DuplicateCarrierLabel(label.clone()));
            }
        }
        let n = spec.carrier.len();
        let mut ops = BTreeMap::new();
        for (name, op) in spec.ops {
            let expected = n.pow(op.arity as u32);
            if op.table.len() != expected {
                return Err(StarError::TableSize {
                    op: name,
                    expected,
                    got: op.table.len(),
                });
            }
            let table = op
                .table
                .iter()
                .map(|l| index.get(l).copied().ok_or_else(|| StarError::UnknownLabel(l.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            ops.insert(name, Operation { arity: op.arity, table });
        }
        Ok(FiniteAlgebra {
            carrier: spec.carrier,
            index,
            ops,
        })
    }
}

impl From<FiniteAlgebra> for AlgebraSpec {
    fn from(alg: FiniteAlgebra) -> Self {
        let ops = alg
            .ops
            .iter()
            .map(|(name, op)| {
                let table = op.table.iter().map(|&i| alg.carrier[i].clone()).collect();
                (name.clone(), OperationSpec { arity: op.arity, table })
            })
            .collect();
        AlgebraSpec {
            carrier: alg.carrier,
            ops,
        }
    }
}

impl FiniteAlgebra {
    pub fn from_spec(spec: AlgebraSpec) -> Result<Self, StarError> {
        spec.try_into()
    }

    pub fn from_json(json: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(json)
    }

    /// `Z/nZ` with `add`, `mul`, `neg`, and constants `zero`, `one`.
    pub fn integers_mod(n: usize) -> Self {
        assert!(n >= 2, "Z/nZ needs n >= 2");
        let carrier: Vec<Label> = (0..n).map(|i| i.to_string()).collect();
        let binary = |f: &dyn Fn(usize, usize) -> usize| {
            let mut table = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    table.push(f(a, b));
                }
            }
            Operation { arity: 2, table }
        };
        let mut ops = BTreeMap::new();
        ops.insert("add".to_string(), binary(&|a, b| (a + b) % n));
        ops.insert("mul".to_string(), binary(&|a, b| (a * b) % n));
        ops.insert(
            "neg".to_string(),
            Operation {
                arity: 1,
                table: (0..n).map(|a| (n - a) % n).collect(),
            },
        );
        ops.insert("zero".to_string(), Operation { arity: 0, table: vec![0] });
        ops.insert("one".to_string(), Operation { arity: 0, table: vec![1] });
        let index = carrier.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        FiniteAlgebra { carrier, index, ops }
    }

    pub fn carrier(&self) -> &[Label] {
        &self.carrier
    }

    pub fn operation(&self, name: &str) -> Result<&Operation, StarError> {
        self.ops
            .get(name)
            .ok_or_else(|| StarError::UnknownOperation(name.to_string()))
    }

    pub fn operation_names(&self) -> impl Iterator<Item = &str> {
        self.ops.keys().map(String::as_str)
    }

    fn label_index(&self, label: &str) -> Result<usize, StarError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| StarError::UnknownLabel(label.to_string()))
    }

    /// Evaluates `name` on carrier labels.
    pub fn apply(&self, name: &str, args: &[&str]) -> Result<&Label, StarError> {
        let op = self.operation(name)?;
        if args.len() != op.arity {
            return Err(StarError::ArityMismatch {
                op: name.to_string(),
                arity: op.arity,
                got: args.len(),
            });
        }
        let idx = args
            .iter()
            .map(|a| self.label_index(a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(&self.carrier[op.apply(&idx, self.carrier.len())])
    }

    fn is_ring_on_zero_one(&self) -> bool {
        let table = [("0", "0", "0"), ("0", "1", "0"), ("1", "0", "0"), ("1", "1", "1")];
        table
            .iter()
            .all(|(a, b, c)| matches!(self.apply("mul", &[a, b]), Ok(out) if out == c))
    }
}

/// A function `[0, 1) → labels`, constant on each of finitely many parts.
///
/// Invariants: parts nonempty, pairwise disjoint, covering `[0, 1)`; labels
/// distinct. Pieces are ordered by the left end of their part, which makes
/// structural equality coincide with equality as functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Piece>", into = "Vec<Piece>")]
pub struct StepFunction {
    pieces: Vec<Piece>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub part: IntervalSet,
    pub label: Label,
}

impl TryFrom<Vec<Piece>> for StepFunction {
    type Error = StarError;

    fn try_from(pieces: Vec<Piece>) -> Result<Self, StarError> {
        StepFunction::new(pieces.into_iter().map(|p| (p.part, p.label)))
    }
}

impl From<StepFunction> for Vec<Piece> {
    fn from(f: StepFunction) -> Self {
        f.pieces
    }
}

impl StepFunction {
    pub fn new<I>(pieces: I) -> Result<Self, StarError>
    where
        I: IntoIterator<Item = (IntervalSet, Label)>,
    {
        let mut seen = BTreeSet::new();
        let mut out: Vec<Piece> = Vec::new();
        for (part, label) in pieces {
            if part.is_empty() {
                return Err(StarError::EmptyPart(label));
            }
            if !part.is_within(&Ambient::unit()) {
                return Err(StarError::OutsideUnit(part));
            }
            if !seen.insert(label.clone()) {
                return Err(StarError::DuplicateLabel(label));
            }
            for prev in &out {
                let overlap = prev.part.intersect(&part);
                if !overlap.is_empty() {
                    return Err(StarError::Overlap {
                        first: prev.label.clone(),
                        second: label,
                        measure: overlap.measure(),
                    });
                }
            }
            out.push(Piece { part, label });
        }
        let covered: Rational = out.iter().map(|p| p.part.measure()).sum();
        if !covered.is_one() {
            return Err(StarError::Deficit(Rational::one() - covered));
        }
        out.sort_by(|a, b| a.part.intervals()[0].lo().cmp(b.part.intervals()[0].lo()));
        Ok(Self { pieces: out })
    }

    pub fn constant(label: impl Into<Label>) -> Self {
        Self {
            pieces: vec![Piece {
                part: IntervalSet::unit(),
                label: label.into(),
            }],
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.pieces.iter().map(|p| &p.label)
    }

    /// The level set `f_x`, empty if `x` is not taken.
    pub fn level_set(&self, label: &str) -> IntervalSet {
        self.pieces
            .iter()
            .find(|p| p.label == label)
            .map(|p| p.part.clone())
            .unwrap_or_default()
    }

    /// Value at `t`; `None` outside `[0, 1)`.
    pub fn eval(&self, t: &Rational) -> Option<&Label> {
        self.pieces
            .iter()
            .find(|p| p.part.contains(t))
            .map(|p| &p.label)
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{}: {}", p.label, p.part)?;
        }
        Ok(())
    }
}

/// `d'(f, g)` as the measure of `{t | f(t) ≠ g(t)}`, summed over the cells
/// of the common refinement.
pub fn d_prime_refinement(f: &StepFunction, g: &StepFunction) -> Rational {
    let mut total = Rational::zero();
    for p in &f.pieces {
        for q in &g.pieces {
            if p.label != q.label {
                total += p.part.intersect(&q.part).measure();
            }
        }
    }
    total
}

/// `d'(f, g)` as `(Σ_x d(f_x, g_x)) / 2`.
pub fn d_prime_half_sum(f: &StepFunction, g: &StepFunction) -> Rational {
    let labels: BTreeSet<&Label> = f.labels().chain(g.labels()).collect();
    let sum: Rational = labels
        .into_iter()
        .map(|x| metric_d(&f.level_set(x), &g.level_set(x)))
        .sum();
    sum / Rational::from_integer(2.into())
}

/// `d'(f, g)`. Both formulas are evaluated and must agree.
pub fn d_prime(f: &StepFunction, g: &StepFunction) -> Rational {
    let refined = d_prime_refinement(f, g);
    let halved = d_prime_half_sum(f, g);
    assert_eq!(refined, halved, "the two expressions for d' disagree");
    refined
}

/// Step functions as a metric space under `d'`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepMetric;

impl MetricCarrier for StepMetric {
    type Elem = StepFunction;

    fn dist(&self, a: &StepFunction, b: &StepFunction) -> Rational {
        d_prime(a, b)
    }
}

/// Applies operation `name` pointwise: the level set of `x` in the result is
/// the union, over tuples with `u(x_0, …) = x`, of `f0_{x_0} ∩ f1_{x_1} ∩ …`.
pub fn lift_op(alg: &FiniteAlgebra, name: &str, args: &[&StepFunction]) -> Result<StepFunction, StarError> {
    let op = alg.operation(name)?;
    if args.len() != op.arity {
        return Err(StarError::ArityMismatch {
            op: name.to_string(),
            arity: op.arity,
            got: args.len(),
        });
    }
    let mut cells: Vec<(IntervalSet, Vec<usize>)> = vec![(IntervalSet::unit(), Vec::new())];
    for f in args {
        let mut refined = Vec::new();
        for (cell, tuple) in &cells {
            for piece in &f.pieces {
                let meet = cell.intersect(&piece.part);
                if meet.is_empty() {
                    continue;
                }
                let mut t = tuple.clone();
                t.push(alg.label_index(&piece.label)?);
                refined.push((meet, t));
            }
        }
        cells = refined;
    }
    let mut by_output: BTreeMap<usize, Vec<Interval>> = BTreeMap::new();
    for (cell, tuple) in cells {
        let out = op.apply(&tuple, alg.carrier.len());
        by_output
            .entry(out)
            .or_default()
            .extend(cell.intervals().iter().cloned());
    }
    let pieces = by_output
        .into_iter()
        .map(|(out, ivs)| (IntervalSet::normalize(ivs), alg.carrier[out].clone()));
    StepFunction::new(pieces)
}

fn check_in_unit(sets: &[IntervalSet]) -> Result<(), StarError> {
    match sets.iter().find(|s| !s.is_within(&Ambient::unit())) {
        Some(bad) => Err(StarError::OutsideUnit(bad.clone())),
        None => Ok(()),
    }
}

/// Turns `S_0, S_1, …` into an exact partition `T_0, T_1, …` of `[0, 1)`:
/// `T_i = S_i \ ∪_{j<i} S_j` for `i > 0`, and `T_0` takes everything left.
pub fn normalize_partition(cand: &[IntervalSet]) -> Result<Vec<IntervalSet>, StarError> {
    check_in_unit(cand)?;
    if cand.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![IntervalSet::empty(); cand.len()];
    let mut seen = cand[0].clone();
    let mut rest = IntervalSet::empty();
    for i in 1..cand.len() {
        out[i] = cand[i].difference(&seen);
        seen = seen.union(&cand[i]);
        rest = rest.union(&out[i]);
    }
    out[0] = IntervalSet::unit().difference(&rest);
    Ok(out)
}

/// Builds the limit step function from per-label limit sets, which must be
/// pairwise disjoint with total measure one.
pub fn assemble_limit(per_label: &[(Label, IntervalSet)]) -> Result<StepFunction, StarError> {
    let sets: Vec<IntervalSet> = per_label.iter().map(|(_, s)| s.clone()).collect();
    check_in_unit(&sets)?;
    let mut seen = BTreeSet::new();
    for (label, _) in per_label {
        if !seen.insert(label) {
            return Err(StarError::DuplicateLabel(label.clone()));
        }
    }
    for (i, (li, si)) in per_label.iter().enumerate() {
        for (lj, sj) in &per_label[i + 1..] {
            let overlap = si.intersect(sj);
            if !overlap.is_empty() {
                return Err(StarError::Overlap {
                    first: li.clone(),
                    second: lj.clone(),
                    measure: overlap.measure(),
                });
            }
        }
    }
    let total: Rational = sets.iter().map(IntervalSet::measure).sum();
    if !total.is_one() {
        return Err(StarError::Deficit(Rational::one() - total));
    }
    let parts = normalize_partition(&sets)?;
    StepFunction::new(
        per_label
            .iter()
            .zip(parts)
            .filter(|(_, part)| !part.is_empty())
            .map(|((label, _), part)| (part, label.clone())),
    )
}

/// `1_S`: label `"1"` on `S`, `"0"` elsewhere.
pub fn characteristic_step(s: &IntervalSet) -> Result<StepFunction, StarError> {
    let complement = s
        .complement(&Ambient::unit())
        .map_err(|_| StarError::OutsideUnit(s.clone()))?;
    StepFunction::new(
        [(s.clone(), "1".to_string()), (complement, "0".to_string())]
            .into_iter()
            .filter(|(part, _)| !part.is_empty()),
    )
}

/// `d'(1_{[0,1) \ U}, 1)`, which equals `μ(U)`.
pub fn astar_distance_to_one(u: &IntervalSet) -> Result<Rational, StarError> {
    let complement = u.complement(&Ambient::unit())?;
    Ok(d_prime(&characteristic_step(&complement)?, &StepFunction::constant("1")))
}

/// The bisection step in the lifted ring. `U` is split into halves `S`, `T`
/// of equal measure; the central idempotents `1_{[0,1)\S}` and `1_{[0,1)\T}`
/// multiply to `1_{[0,1)\U}`, so a prime ideal containing the latter
/// contains one of the former, and the oracle says which.
pub fn astar_bisection_step(
    u: &IntervalSet,
    alg: &FiniteAlgebra,
    oracle: &mut dyn ChooserOracle,
) -> Result<IntervalSet, StarError> {
    if !alg.is_ring_on_zero_one() {
        return Err(StarError::NotARing);
    }
    check_in_unit(std::slice::from_ref(u))?;
    let t = u.find_halving_point()?;
    let (s, rest) = u.split_at(&t);
    let unit = Ambient::unit();
    let e_s = characteristic_step(&s.complement(&unit)?)?;
    let e_t = characteristic_step(&rest.complement(&unit)?)?;
    let e_u = characteristic_step(&u.complement(&unit)?)?;
    let product = lift_op(alg, "mul", &[&e_s, &e_t])?;
    assert_eq!(product, e_u, "product of idempotents must be 1 off U");
    Ok(match oracle.choose(&s, &rest) {
        Side::Left => s,
        Side::Right => rest,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarRung {
    pub step: usize,
    #[serde(with = "crate::rational::as_str")]
    pub measure: Rational,
    #[serde(with = "crate::rational::as_str")]
    pub distance_to_one: Rational,
}

/// `n` bisection steps from `[0, 1)` in the lifted ring over `alg`.
pub fn astar_ladder(
    alg: &FiniteAlgebra,
    oracle: &mut dyn ChooserOracle,
    n: usize,
) -> Result<Vec<StarRung>, StarError> {
    let mut u = IntervalSet::unit();
    let mut rungs = Vec::with_capacity(n + 1);
    for step in 0..=n {
        if step > 0 {
            u = astar_bisection_step(&u, alg, oracle)?;
        }
        rungs.push(StarRung {
            step,
            measure: u.measure(),
            distance_to_one: astar_distance_to_one(&u)?,
        });
    }
    Ok(rungs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure_algebra::{AlwaysLeft, SeededOracle};
    use crate::rational::{int, pow2_inv, rat};

    fn iv(lo: (i64, i64), hi: (i64, i64)) -> IntervalSet {
        IntervalSet::interval(rat(lo.0, lo.1), rat(hi.0, hi.1)).unwrap()
    }

    fn indicator(s: IntervalSet) -> StepFunction {
        characteristic_step(&s).unwrap()
    }

    /// Pointwise oracle: evaluate at midpoints of a fine grid.
    fn sample_points(den: i64) -> Vec<Rational> {
        (0..den).map(|k| rat(2 * k + 1, 2 * den)).collect()
    }

    #[test]
    fn z_mod_n_tables() {
        let z6 = FiniteAlgebra::integers_mod(6);
        assert_eq!(z6.apply("add", &["4", "5"]).unwrap(), "3");
        assert_eq!(z6.apply("mul", &["4", "5"]).unwrap(), "2");
        assert_eq!(z6.apply("neg", &["2"]).unwrap(), "4");
        assert_eq!(z6.apply("one", &[]).unwrap(), "1");
        assert!(matches!(z6.apply("add", &["1"]), Err(StarError::ArityMismatch { .. })));
    }

    #[test]
    fn algebra_json_round_trip_and_validation() {
        let z2 = FiniteAlgebra::integers_mod(2);
        let json = serde_json::to_string(&z2).unwrap();
        assert_eq!(FiniteAlgebra::from_json(&json).unwrap(), z2);
        let bad = r#"{"carrier":["a","b"],"ops":{"f":{"arity":2,"table":["a","b","a"]}}}"#;
        assert!(FiniteAlgebra::from_json(bad).is_err());
        let bad_label = r#"{"carrier":["a"],"ops":{"f":{"arity":1,"table":["z"]}}}"#;
        assert!(FiniteAlgebra::from_json(bad_label).is_err());
    }

    #[test]
    fn step_function_invariants_are_enforced() {
        let half = iv((0, 1), (1, 2));
        let other = iv((1, 2), (1, 1));
        assert!(StepFunction::new([(half.clone(), "a".into()), (other.clone(), "b".into())]).is_ok());
        assert!(matches!(
            StepFunction::new([(half.clone(), "a".into()), (other.clone(), "a".into())]),
            Err(StarError::DuplicateLabel(_))
        ));
        assert!(matches!(
            StepFunction::new([(half.clone(), "a".into())]),
            Err(StarError::Deficit(d)) if d == rat(1, 2)
        ));
        assert!(matches!(
            StepFunction::new([(half.clone(), "a".into()), (IntervalSet::unit(), "b".into())]),
            Err(StarError::Overlap { .. })
        ));
        assert!(matches!(
            StepFunction::new([(IntervalSet::empty(), "a".into()), (IntervalSet::unit(), "b".into())]),
            Err(StarError::EmptyPart(_))
        ));
    }

    #[test]
    fn d_prime_examples() {
        let f = indicator(iv((0, 1), (1, 2)));
        let g = indicator(iv((1, 4), (3, 4)));
        assert_eq!(d_prime(&f, &f), int(0));
        assert_eq!(d_prime(&f, &g), rat(1, 2));
        assert_eq!(d_prime(&StepFunction::constant("a"), &StepFunction::constant("b")), int(1));
    }

    #[test]
    fn lifted_z2_operations_match_pointwise_evaluation() {
        let z2 = FiniteAlgebra::integers_mod(2);
        let f = indicator(iv((0, 1), (1, 2)));
        let g = indicator(iv((1, 4), (3, 4)));
        let sum = lift_op(&z2, "add", &[&f, &g]).unwrap();
        let prod = lift_op(&z2, "mul", &[&f, &g]).unwrap();
        assert_eq!(sum, indicator(IntervalSet::from_pairs([(rat(0, 1), rat(1, 4)), (rat(1, 2), rat(3, 4))]).unwrap()));
        assert_eq!(prod, indicator(iv((1, 4), (1, 2))));
        for t in sample_points(16) {
            let (a, b) = (f.eval(&t).unwrap(), g.eval(&t).unwrap());
            assert_eq!(sum.eval(&t).unwrap(), z2.apply("add", &[a, b]).unwrap());
            assert_eq!(prod.eval(&t).unwrap(), z2.apply("mul", &[a, b]).unwrap());
        }
    }

    #[test]
    fn unary_identity_lifts_to_identity() {
        let spec = AlgebraSpec {
            carrier: vec!["0".into(), "1".into(), "2".into()],
            ops: [("id".to_string(), OperationSpec { arity: 1, table: vec!["0".into(), "1".into(), "2".into()] })]
                .into_iter()
                .collect(),
        };
        let alg = FiniteAlgebra::from_spec(spec).unwrap();
        let f = StepFunction::new([
            (iv((0, 1), (1, 3)), "2".to_string()),
            (iv((1, 3), (1, 1)), "0".to_string()),
        ])
        .unwrap();
        assert_eq!(lift_op(&alg, "id", &[&f]).unwrap(), f);
        assert!(matches!(lift_op(&alg, "id", &[&f, &f]), Err(StarError::ArityMismatch { .. })));
        assert!(matches!(lift_op(&alg, "nope", &[&f]), Err(StarError::UnknownOperation(_))));
    }

    #[test]
    fn lifting_coalesces_equal_outputs() {
        let z6 = FiniteAlgebra::integers_mod(6);
        let f = StepFunction::new([
            (iv((0, 1), (1, 2)), "2".to_string()),
            (iv((1, 2), (1, 1)), "5".to_string()),
        ])
        .unwrap();
        let g = StepFunction::new([
            (iv((0, 1), (1, 2)), "3".to_string()),
            (iv((1, 2), (1, 1)), "0".to_string()),
        ])
        .unwrap();
        // 2*3 = 0 and 5*0 = 0 everywhere
        assert_eq!(lift_op(&z6, "mul", &[&f, &g]).unwrap(), StepFunction::constant("0"));
        assert_eq!(lift_op(&z6, "one", &[]).unwrap(), StepFunction::constant("1"));
    }

    #[test]
    fn normalize_partition_examples() {
        let exact = [iv((0, 1), (1, 2)), iv((1, 2), (1, 1))];
        assert_eq!(normalize_partition(&exact).unwrap(), exact.to_vec());

        let deficient = [iv((0, 1), (1, 2)), iv((1, 2), (3, 4))];
        let out = normalize_partition(&deficient).unwrap();
        assert_eq!(out[1], iv((1, 2), (3, 4)));
        assert_eq!(out[0], IntervalSet::from_pairs([(rat(0, 1), rat(1, 2)), (rat(3, 4), rat(1, 1))]).unwrap());
        assert_eq!(metric_d(&deficient[0], &out[0]), rat(1, 4));

        let overlapping = [iv((0, 1), (1, 2)), iv((1, 4), (1, 1))];
        let out = normalize_partition(&overlapping).unwrap();
        assert_eq!(out, vec![iv((0, 1), (1, 2)), iv((1, 2), (1, 1))]);

        assert!(normalize_partition(&[iv((0, 1), (2, 1))]).is_err());
    }

    #[test]
    fn assemble_limit_examples() {
        let f = assemble_limit(&[
            ("a".into(), iv((0, 1), (1, 2))),
            ("b".into(), iv((1, 2), (1, 1))),
        ])
        .unwrap();
        assert_eq!(f.level_set("a"), iv((0, 1), (1, 2)));
        assert_eq!(assemble_limit(&[("a".into(), IntervalSet::unit())]).unwrap(), StepFunction::constant("a"));
        let err = assemble_limit(&[
            ("a".into(), iv((0, 1), (1, 2))),
            ("b".into(), iv((1, 2), (3, 4))),
        ])
        .unwrap_err();
        assert_eq!(err, StarError::Deficit(rat(1, 4)));
        assert!(matches!(
            assemble_limit(&[("a".into(), iv((0, 1), (3, 4))), ("b".into(), iv((1, 2), (1, 1)))]),
            Err(StarError::Overlap { measure, .. }) if measure == rat(1, 4)
        ));
    }

    #[test]
    fn characteristic_functions() {
        assert_eq!(indicator(IntervalSet::unit()), StepFunction::constant("1"));
        assert_eq!(indicator(IntervalSet::empty()), StepFunction::constant("0"));
        let f = indicator(iv((0, 1), (1, 2)));
        assert_eq!(f.eval(&rat(1, 4)).unwrap(), "1");
        assert_eq!(f.eval(&rat(1, 2)).unwrap(), "0");
        // central idempotent
        let z6 = FiniteAlgebra::integers_mod(6);
        assert_eq!(lift_op(&z6, "mul", &[&f, &f]).unwrap(), f);
    }

    #[test]
    fn astar_bisection() {
        let z6 = FiniteAlgebra::integers_mod(6);
        let got = astar_bisection_step(&IntervalSet::unit(), &z6, &mut AlwaysLeft).unwrap();
        assert_eq!(got, iv((0, 1), (1, 2)));
        let half = iv((1, 2), (1, 1));
        let next = astar_bisection_step(&half, &z6, &mut SeededOracle::new(3)).unwrap();
        assert_eq!(next.measure(), rat(1, 4));
        let ladder = astar_ladder(&z6, &mut SeededOracle::new(11), 12).unwrap();
        for rung in &ladder {
            assert_eq!(rung.distance_to_one, pow2_inv(rung.step as u32));
        }
        assert!(astar_bisection_step(&IntervalSet::empty(), &z6, &mut AlwaysLeft).is_err());
        let no_mul = FiniteAlgebra::from_spec(AlgebraSpec { carrier: vec!["0".into(), "1".into()], ops: BTreeMap::new() }).unwrap();
        assert_eq!(astar_bisection_step(&half, &no_mul, &mut AlwaysLeft), Err(StarError::NotARing));
    }

    #[test]
    fn step_function_json() {
        let f = indicator(iv((1, 3), (1, 2)));
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"[{"part":[["0","1/3"],["1/2","1"]],"label":"0"},{"part":[["1/3","1/2"]],"label":"1"}]"#
        );
        let back: StepFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<StepFunction>(r#"[{"part":[["0","1/3"]],"label":"0"}]"#).is_err());
    }
}
