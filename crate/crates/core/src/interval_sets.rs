//! Finite unions of half-open rational intervals.
//!
//! An [`IntervalSet`] is kept in canonical form: intervals sorted by their
//! left endpoint, pairwise separated by a gap of positive length (touching
//! intervals are merged). Two canonical sets are equal as values iff they
//! contain the same points, and since every nonempty half-open interval has
//! positive length, two distinct canonical sets are at positive distance.
//! The ring of such sets therefore models measurable sets modulo null sets
//! without any quotient bookkeeping.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("malformed interval [{lo}, {hi}): lower end must be strictly below upper end")]
    Malformed { lo: Box<Rational>, hi: Box<Rational> },
    #[error("interval [{lo}, {hi}) starts below 0")]
    Negative { lo: Box<Rational>, hi: Box<Rational> },
    #[error("complement requires a bounded ambient; the ring of finite-measure sets has no unit")]
    UnboundedAmbient,
    #[error("ambient upper end must be positive, got {0}")]
    EmptyAmbient(Rational),
    #[error("set is not contained in the ambient [0, {0})")]
    OutsideAmbient(Rational),
    #[error("distance cap must be positive, got {0}")]
    NonPositiveCap(Rational),
    #[error("operation needs a set of positive measure")]
    NullSet,
}

/// A nonempty half-open interval `[lo, hi)` with `0 <= lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, IntervalError> {
        if lo >= hi {
            return Err(IntervalError::Malformed { lo: lo.into(), hi: hi.into() });
        }
        if lo.is_negative() {
            return Err(IntervalError::Negative { lo: lo.into(), hi: hi.into() });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.lo <= t && t < &self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Where the complement of a set is taken: `[0, hi)` or the whole half-line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    Bounded(Rational),
    Unbounded,
}

impl Ambient {
    /// The unit interval `[0, 1)`.
    pub fn unit() -> Self {
        Ambient::Bounded(Rational::from_integer(1.into()))
    }

    pub fn bounded(hi: Rational) -> Result<Self, IntervalError> {
        if !hi.is_positive() {
            return Err(IntervalError::EmptyAmbient(hi));
        }
        Ok(Ambient::Bounded(hi))
    }
}

/// Canonical finite disjoint union of half-open intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[0, 1)`.
    pub fn unit() -> Self {
        Self::interval(Rational::zero(), Rational::from_integer(1.into()))
            .expect("unit interval is well formed")
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self, IntervalError> {
        Ok(Self {
            intervals: vec![Interval::new(lo, hi)?],
        })
    }

    /// Builds the canonical set covering the union of `raw`.
    pub fn normalize(mut raw: Vec<Interval>) -> Self {
        raw.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    /// Validates each `(lo, hi)` pair and normalizes.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, IntervalError>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let raw = pairs
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::normalize(raw))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.intervals.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        // Index of the first interval whose lo is > t; the candidate is the one before.
        let idx = self.intervals.partition_point(|iv| &iv.lo <= t);
        idx > 0 && self.intervals[idx - 1].contains(t)
    }

    /// Least upper bound of the set, `0` when empty.
    pub fn sup(&self) -> Rational {
        self.intervals
            .last()
            .map(|iv| iv.hi.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_within(&self, ambient: &Ambient) -> bool {
        match ambient {
            Ambient::Unbounded => true,
            Ambient::Bounded(hi) => &self.sup() <= hi,
        }
    }

    /// Sweeps the merged endpoint list and keeps the elementary segments
    /// `[p_k, p_{k+1})` whose membership pattern satisfies `keep`.
    fn combine(&self, other: &IntervalSet, keep: impl Fn(bool, bool) -> bool) -> IntervalSet {
        let mut cuts: Vec<&Rational> = self
            .intervals
            .iter()
            .chain(other.intervals.iter())
            .flat_map(|iv| [&iv.lo, &iv.hi])
            .collect();
        cuts.sort();
        cuts.dedup();

        let mut out: Vec<Interval> = Vec::new();
        for pair in cuts.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            // No endpoint lies strictly inside [a, b), so membership of `a`
            // decides membership of the whole segment.
            if !keep(self.contains(a), other.contains(a)) {
                continue;
            }
            match out.last_mut() {
                Some(last) if &last.hi == a => last.hi = b.clone(),
                _ => out.push(Interval {
                    lo: a.clone(),
                    hi: b.clone(),
                }),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a && b)
    }

    /// Boolean-ring addition `S + T`.
    pub fn symdiff(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a != b)
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self, within: &Ambient) -> Result<IntervalSet, IntervalError> {
        let hi = match within {
            Ambient::Unbounded => return Err(IntervalError::UnboundedAmbient),
            Ambient::Bounded(hi) => hi,
        };
        if !hi.is_positive() {
            return Err(IntervalError::EmptyAmbient(hi.clone()));
        }
        if &self.sup() > hi {
            return Err(IntervalError::OutsideAmbient(hi.clone()));
        }
        Ok(IntervalSet::interval(Rational::zero(), hi.clone())?.difference(self))
    }

    pub fn measure(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, iv| acc + iv.length())
    }

    /// `(A ∩ [0, t), A ∩ [t, ∞))`.
    pub fn split_at(&self, t: &Rational) -> (IntervalSet, IntervalSet) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for iv in &self.intervals {
            if &iv.hi <= t {
                left.push(iv.clone());
            } else if &iv.lo >= t {
                right.push(iv.clone());
            } else {
                left.push(Interval {
                    lo: iv.lo.clone(),
                    hi: t.clone(),
                });
                right.push(Interval {
                    lo: t.clone(),
                    hi: iv.hi.clone(),
                });
            }
        }
        (
            IntervalSet { intervals: left },
            IntervalSet { intervals: right },
        )
    }

    /// Smallest `t` with `measure(A ∩ [0, t)) = measure(A) / 2`.
    pub fn find_halving_point(&self) -> Result<Rational, IntervalError> {
        let half = self.measure() / Rational::from_integer(2.into());
        if half.is_zero() {
            return Err(IntervalError::NullSet);
        }
        let mut acc = Rational::zero();
        for iv in &self.intervals {
            let len = iv.length();
            if &acc + &len >= half {
                return Ok(&iv.lo + (&half - &acc));
            }
            acc += len;
        }
        unreachable!("cumulative length reaches the full measure")
    }
}

/// `d(A, B) = μ(A + B)`.
pub fn metric_d(a: &IntervalSet, b: &IntervalSet) -> Rational {
    a.symdiff(b).measure()
}

/// `d_C(A, B) = min(μ(A + B), C)`.
pub fn metric_dc(a: &IntervalSet, b: &IntervalSet, cap: &Rational) -> Result<Rational, IntervalError> {
    if !cap.is_positive() {
        return Err(IntervalError::NonPositiveCap(cap.clone()));
    }
    Ok(crate::rational::min(metric_d(a, b), cap.clone()))
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = self
            .intervals
            .iter()
            .map(|iv| [format_rational(&iv.lo), format_rational(&iv.hi)])
            .collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[String; 2]>::deserialize(d)?;
        let parsed = pairs
            .iter()
            .map(|[lo, hi]| Ok((parse_rational(lo)?, parse_rational(hi)?)))
            .collect::<Result<Vec<_>, crate::rational::ParseRationalError>>()
            .map_err(D::Error::custom)?;
        IntervalSet::from_pairs(parsed).map_err(D::Error::custom)
    }
}
