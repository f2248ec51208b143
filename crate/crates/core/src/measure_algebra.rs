//! The measure algebra of the unit interval.
//!
//! Elements are canonical interval sets inside `[0, 1)`; addition is
//! symmetric difference and multiplication is intersection. This module also
//! holds the typewriter sequences (Cauchy in measure, yet every point lies in
//! infinitely many terms) and the bisection procedure showing that any prime
//! ideal has elements arbitrarily close to `1`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval_sets::{metric_d, Ambient, IntervalError, IntervalSet};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("set {0} is not contained in [0, 1)")]
    OutsideUnit(IntervalSet),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// An element `[S]` of the measure algebra over `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IntervalSet", into = "IntervalSet")]
pub struct BElement(IntervalSet);

impl BElement {
    pub fn new(set: IntervalSet) -> Result<Self, AlgebraError> {
        if !set.is_within(&Ambient::unit()) {
            return Err(AlgebraError::OutsideUnit(set));
        }
        Ok(Self(set))
    }

    pub fn zero() -> Self {
        Self(IntervalSet::empty())
    }

    pub fn one() -> Self {
        Self(IntervalSet::unit())
    }

    pub fn set(&self) -> &IntervalSet {
        &self.0
    }

    pub fn into_set(self) -> IntervalSet {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.0.measure()
    }

    pub fn dist(&self, other: &BElement) -> Rational {
        metric_d(&self.0, &other.0)
    }
}

impl TryFrom<IntervalSet> for BElement {
    type Error = AlgebraError;

    fn try_from(set: IntervalSet) -> Result<Self, Self::Error> {
        BElement::new(set)
    }
}

impl From<BElement> for IntervalSet {
    fn from(b: BElement) -> Self {
        b.0
    }
}

impl fmt::Display for BElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn ring_add(a: &BElement, b: &BElement) -> BElement {
    BElement(a.0.symdiff(&b.0))
}

pub fn ring_mul(a: &BElement, b: &BElement) -> BElement {
    BElement(a.0.intersect(&b.0))
}

/// `1 + a`, the complement in `[0, 1)`.
pub fn one_plus(a: &BElement) -> BElement {
    ring_add(&BElement::one(), a)
}

/// Position of a 1-based typewriter index: `k = 1 + 2 + … + (n-1) + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowPosition {
    pub row: u64,
    pub offset: u64,
}

/// First index of row `n`, i.e. `n(n-1)/2 + 1`.
pub fn row_start(n: u64) -> u64 {
    n * (n - 1) / 2 + 1
}

pub fn decode_typewriter_index(k: u64) -> RowPosition {
    assert!(k >= 1, "typewriter indices start at 1");
    // Floating estimate, then fix up exactly.
    let mut n = ((2.0 * k as f64).sqrt() as u64).max(1);
    while row_start(n) > k {
        n -= 1;
    }
    while row_start(n + 1) <= k {
        n += 1;
    }
    RowPosition {
        row: n,
        offset: k - row_start(n) + 1,
    }
}

/// The `k`-th term (1-based) of the typewriter sequence: `[(i-1)/n, i/n)`.
pub fn typewriter(k: u64) -> BElement {
    let RowPosition { row, offset } = decode_typewriter_index(k);
    typewriter_term(row as u128, offset as u128)
}

/// Term `i` (1-based) of row `n`, addressed directly so that rows far past
/// the `u64` index range stay reachable.
pub fn typewriter_term(row: u128, offset: u128) -> BElement {
    assert!(row >= 1 && (1..=row).contains(&offset), "offset must lie in 1..=row");
    let n = BigInt::from(row);
    let lo = Rational::new(BigInt::from(offset - 1), n.clone());
    let hi = Rational::new(BigInt::from(offset), n);
    BElement(IntervalSet::interval(lo, hi).expect("row term is nonempty"))
}

/// Cauchy modulus of the 0-based sequence `k ↦ typewriter(k + 1)`: any two
/// terms from rows `>= n` are at most `2/n` apart, so for `ε` we start at row
/// `⌈2/ε⌉`.
pub fn typewriter_modulus(eps: &Rational) -> usize {
    assert!(eps.is_positive(), "modulus needs a positive epsilon");
    let rows = (Rational::from_integer(2.into()) / eps).ceil().to_integer();
    let n = u64::try_from(rows).expect("row index fits in u64").max(1);
    (row_start(n) - 1) as usize
}

/// Which typewriter term sits at position `k` of the stretched sequence, in
/// which term `m` is repeated `2^m` times. Term `m` occupies positions
/// `2^m - 1 ..= 2^{m+1} - 2`.
pub fn stretched_term_index(k: u64) -> u64 {
    assert!(k >= 1, "stretched typewriter indices start at 1");
    let bits = u64::BITS - (k + 1).leading_zeros();
    (bits - 1) as u64
}

pub fn stretched_typewriter(k: u64) -> BElement {
    typewriter(stretched_term_index(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Stand-in for a prime ideal: told the two halves `(S, T)` of a split of
/// `U`, it answers which of `1 + S`, `1 + T` it contains.
pub trait ChooserOracle {
    fn choose(&mut self, left: &IntervalSet, right: &IntervalSet) -> Side;
}

impl<F> ChooserOracle for F
where
    F: FnMut(&IntervalSet, &IntervalSet) -> Side,
{
    fn choose(&mut self, left: &IntervalSet, right: &IntervalSet) -> Side {
        self(left, right)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysLeft;

impl ChooserOracle for AlwaysLeft {
    fn choose(&mut self, _: &IntervalSet, _: &IntervalSet) -> Side {
        Side::Left
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysRight;

impl ChooserOracle for AlwaysRight {
    fn choose(&mut self, _: &IntervalSet, _: &IntervalSet) -> Side {
        Side::Right
    }
}

/// Coin-flipping oracle, reproducible from its seed.
#[derive(Debug, Clone)]
pub struct SeededOracle {
    rng: ChaCha8Rng,
}

impl SeededOracle {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl ChooserOracle for SeededOracle {
    fn choose(&mut self, _: &IntervalSet, _: &IntervalSet) -> Side {
        if self.rng.random::<bool>() {
            Side::Left
        } else {
            Side::Right
        }
    }
}

/// Splits `U` at its halving point and keeps the half the oracle names.
pub fn prime_bisection_step(
    u: &IntervalSet,
    oracle: &mut dyn ChooserOracle,
) -> Result<IntervalSet, IntervalError> {
    let t = u.find_halving_point()?;
    let (left, right) = u.split_at(&t);
    debug_assert_eq!(left.measure(), right.measure());
    Ok(match oracle.choose(&left, &right) {
        Side::Left => left,
        Side::Right => right,
    })
}

/// One rung of the bisection ladder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BisectionRung {
    pub step: usize,
    pub set: IntervalSet,
    #[serde(with = "crate::rational::as_str")]
    pub measure: Rational,
    #[serde(with = "crate::rational::as_str")]
    pub distance_to_one: Rational,
}

/// `n` bisection steps from `U0`, recording every rung including step 0.
/// The distance `d(1 + U, 1)` is measured, not inferred from the halving.
pub fn bisection_ladder(
    u0: &BElement,
    oracle: &mut dyn ChooserOracle,
    n: usize,
) -> Result<Vec<BisectionRung>, AlgebraError> {
    if u0.measure().is_zero() {
        return Err(IntervalError::NullSet.into());
    }
    let mut rungs = Vec::with_capacity(n + 1);
    let mut u = u0.set().clone();
    for step in 0..=n {
        if step > 0 {
            u = prime_bisection_step(&u, oracle)?;
        }
        let complement = one_plus(&BElement(u.clone()));
        rungs.push(BisectionRung {
            step,
            measure: u.measure(),
            distance_to_one: complement.dist(&BElement::one()),
            set: u.clone(),
        });
    }
    Ok(rungs)
}

/// Final `U_n` and `d(1 + U_n, 1)`.
pub fn approach_one(
    u0: &BElement,
    oracle: &mut dyn ChooserOracle,
    n: usize,
) -> Result<(BElement, Rational), AlgebraError> {
    let last = bisection_ladder(u0, oracle, n)?
        .pop()
        .expect("ladder has at least step 0");
    Ok((BElement(last.set), last.distance_to_one))
}

/// `(V · (1 + U), d(V · (1 + U), V))`: an element of the ideal generated by
/// `1 + U` that lies within `μ(U)` of `V`.
pub fn approach_element(v: &BElement, one_minus_u: &BElement) -> (BElement, Rational) {
    let product = ring_mul(v, one_minus_u);
    let dist = product.dist(v);
    (product, dist)
}

/// Number of terms in rows `1..=rows` of the typewriter sequence containing `t`.
pub fn typewriter_membership_count(t: &Rational, rows: u64) -> u64 {
    (1..=rows)
        .flat_map(|n| (row_start(n)..row_start(n + 1)).map(typewriter))
        .filter(|b| b.set().contains(t))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, pow2_inv, rat};

    fn b(lo: (i64, i64), hi: (i64, i64)) -> BElement {
        BElement::new(IntervalSet::interval(rat(lo.0, lo.1), rat(hi.0, hi.1)).unwrap()).unwrap()
    }

    #[test]
    fn ring_identities() {
        let one = BElement::one();
        assert!(ring_add(&one, &one).is_zero());
        let a = b((1, 5), (2, 3));
        assert_eq!(ring_mul(&one, &a), a);
        let sum = ring_add(&b((0, 1), (1, 2)), &b((1, 4), (3, 4)));
        let expected = IntervalSet::from_pairs([(rat(0, 1), rat(1, 4)), (rat(1, 2), rat(3, 4))]).unwrap();
        assert_eq!(sum.set(), &expected);
        assert_eq!(ring_mul(&a, &a), a);
    }

    #[test]
    fn rejects_sets_outside_unit() {
        let s = IntervalSet::interval(rat(1, 2), rat(3, 2)).unwrap();
        assert!(matches!(BElement::new(s), Err(AlgebraError::OutsideUnit(_))));
    }

    #[test]
    fn typewriter_terms() {
        assert_eq!(typewriter(1), BElement::one());
        assert_eq!(typewriter(2), b((0, 1), (1, 2)));
        assert_eq!(typewriter(3), b((1, 2), (1, 1)));
        assert_eq!(typewriter(4), b((0, 1), (1, 3)));
        assert_eq!(typewriter(5), b((1, 3), (2, 3)));
        assert_eq!(typewriter(6), b((2, 3), (1, 1)));
        assert_eq!(typewriter(7), b((0, 1), (1, 4)));
    }

    #[test]
    fn decoding_matches_brute_force_enumeration() {
        let mut k = 1;
        for n in 1..=60u64 {
            for i in 1..=n {
                assert_eq!(decode_typewriter_index(k), RowPosition { row: n, offset: i });
                k += 1;
            }
        }
        // large indices stay exact
        let n = 1u64 << 21;
        assert_eq!(decode_typewriter_index(row_start(n)), RowPosition { row: n, offset: 1 });
        assert_eq!(decode_typewriter_index(row_start(n) - 1), RowPosition { row: n - 1, offset: n - 1 });
    }

    #[test]
    fn direct_row_addressing_agrees_with_decoding() {
        for k in 1..200u64 {
            let p = decode_typewriter_index(k);
            assert_eq!(typewriter(k), typewriter_term(p.row as u128, p.offset as u128));
        }
        let far = typewriter_term(1u128 << 70, 1);
        assert_eq!(far.measure(), pow2_inv(70));
    }

    #[test]
    fn stretched_terms() {
        // brute force: expand term m into 2^m copies
        let mut expanded = Vec::new();
        for m in 1..=6u64 {
            for _ in 0..(1u64 << m) {
                expanded.push(m);
            }
        }
        for (pos, m) in expanded.iter().enumerate() {
            assert_eq!(stretched_term_index(pos as u64 + 1), *m);
        }
        assert_eq!(stretched_typewriter(1), BElement::one());
        assert_eq!(stretched_typewriter(2), BElement::one());
        assert_eq!(stretched_typewriter(3), b((0, 1), (1, 2)));
        assert_eq!(stretched_typewriter(6), b((0, 1), (1, 2)));
        assert_eq!(stretched_typewriter(7), b((1, 2), (1, 1)));
    }

    #[test]
    fn bisection_steps() {
        let unit = IntervalSet::unit();
        assert_eq!(
            prime_bisection_step(&unit, &mut AlwaysLeft).unwrap(),
            b((0, 1), (1, 2)).into_set()
        );
        assert_eq!(
            prime_bisection_step(&unit, &mut AlwaysRight).unwrap(),
            b((1, 2), (1, 1)).into_set()
        );
        let mut u = unit;
        for _ in 0..3 {
            u = prime_bisection_step(&u, &mut AlwaysLeft).unwrap();
        }
        assert_eq!(u, b((0, 1), (1, 8)).into_set());
        assert_eq!(
            prime_bisection_step(&IntervalSet::empty(), &mut AlwaysLeft),
            Err(IntervalError::NullSet)
        );
    }

    #[test]
    fn approach_one_distances() {
        let (_, d) = approach_one(&BElement::one(), &mut SeededOracle::new(7), 10).unwrap();
        assert_eq!(d, pow2_inv(10));
        let (u, d) = approach_one(&BElement::one(), &mut AlwaysLeft, 0).unwrap();
        assert_eq!((u, d), (BElement::one(), int(1)));
        let (_, d) = approach_one(&b((0, 1), (1, 2)), &mut AlwaysRight, 1).unwrap();
        assert_eq!(d, rat(1, 4));
        assert!(approach_one(&BElement::zero(), &mut AlwaysLeft, 3).is_err());
    }

    #[test]
    fn approach_element_distances() {
        let v = b((1, 7), (5, 6));
        assert_eq!(approach_element(&v, &BElement::one()), (v.clone(), int(0)));
        let u = b((0, 1), (1, 4));
        let (_, d) = approach_element(&b((0, 1), (1, 2)), &one_plus(&u));
        assert_eq!(d, rat(1, 4));
        let (_, d) = approach_element(&b((1, 2), (1, 1)), &one_plus(&u));
        assert_eq!(d, int(0));
    }

    #[test]
    fn modulus_is_sound_on_materialized_rows() {
        for (eps, row) in [(rat(1, 1), 2u64), (rat(1, 2), 4), (rat(1, 3), 6), (rat(2, 5), 5)] {
            let start = typewriter_modulus(&eps);
            assert_eq!(start as u64, row_start(row) - 1);
            // brute force: every pair among the next few rows
            let terms: Vec<_> = (start..start + 40).map(|k| typewriter(k as u64 + 1)).collect();
            for a in &terms {
                for b in &terms {
                    assert!(a.dist(b) <= eps);
                }
            }
        }
    }

    #[test]
    fn every_row_covers_each_point_once() {
        for t in [rat(0, 1), rat(1, 7), rat(1, 2), rat(99, 100)] {
            assert_eq!(typewriter_membership_count(&t, 30), 30);
        }
    }

    #[test]
    fn closure_oracle_is_usable() {
        let mut pick_larger_lo = |l: &IntervalSet, r: &IntervalSet| {
            if r.intervals()[0].lo() > l.intervals()[0].lo() { Side::Right } else { Side::Left }
        };
        let got = prime_bisection_step(&IntervalSet::unit(), &mut pick_larger_lo).unwrap();
        assert_eq!(got, b((1, 2), (1, 1)).into_set());
    }
}
