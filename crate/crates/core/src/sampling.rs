//! Seeded generators for interval sets, step functions and partition
//! candidates. All randomness goes through a caller-supplied RNG, so a
//! fixed seed reproduces the same samples.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra_star::{FiniteAlgebra, Label, StepFunction};
use crate::interval_sets::{Interval, IntervalSet};
use crate::rational::{rat, Rational};

const DENOMINATORS: [i64; 8] = [1, 2, 3, 4, 6, 8, 12, 16];

/// A ChaCha8 generator for `seed`, on its own stream so that independent
/// suites sharing a seed do not share samples.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `k` distinct grid points `p/q` in `[0, hi]`, sorted, for a random
/// denominator `q`.
fn grid_points<R: Rng + ?Sized>(rng: &mut R, hi: i64, k: usize) -> Vec<Rational> {
    let q = DENOMINATORS[rng.random_range(0..DENOMINATORS.len())];
    let slots = (q * hi + 1) as usize;
    let k = k.min(slots);
    let mut nums: Vec<usize> = sample(rng, slots, k).into_vec();
    nums.sort_unstable();
    nums.into_iter().map(|n| rat(n as i64, q)).collect()
}

/// A union of up to `max_pieces` intervals inside `[0, hi)`, possibly empty.
pub fn random_interval_set<R: Rng + ?Sized>(rng: &mut R, hi: i64, max_pieces: usize) -> IntervalSet {
    let pieces = rng.random_range(0..=max_pieces);
    let pts = grid_points(rng, hi, 2 * pieces);
    let raw = pts
        .chunks_exact(2)
        .map(|w| Interval::new(w[0].clone(), w[1].clone()).expect("sorted distinct endpoints"))
        .collect();
    IntervalSet::normalize(raw)
}

pub fn random_unit_set<R: Rng + ?Sized>(rng: &mut R) -> IntervalSet {
    random_interval_set(rng, 1, 3)
}

/// Cells `[c_0, c_1), [c_1, c_2), …` of `[0, 1)` for up to `max_cuts`
/// random interior cut points.
fn random_cells<R: Rng + ?Sized>(rng: &mut R, max_cuts: usize) -> Vec<IntervalSet> {
    let cuts = rng.random_range(0..=max_cuts);
    let mut pts: Vec<Rational> = grid_points(rng, 1, cuts + 2)
        .into_iter()
        .filter(|p| *p > rat(0, 1) && *p < rat(1, 1))
        .collect();
    pts.insert(0, rat(0, 1));
    pts.push(rat(1, 1));
    pts.windows(2)
        .map(|w| IntervalSet::interval(w[0].clone(), w[1].clone()).expect("increasing cut points"))
        .collect()
}

/// A step function valued in `alg`'s carrier with up to five cells, each
/// labelled independently.
pub fn random_step_function<R: Rng + ?Sized>(rng: &mut R, alg: &FiniteAlgebra) -> StepFunction {
    let carrier = alg.carrier();
    let mut parts: BTreeMap<Label, IntervalSet> = BTreeMap::new();
    for cell in random_cells(rng, 4) {
        let label = carrier[rng.random_range(0..carrier.len())].clone();
        let part = parts.entry(label).or_default();
        *part = part.union(&cell);
    }
    StepFunction::new(parts.into_iter().map(|(l, p)| (p, l))).expect("cells partition [0, 1)")
}

/// Pairwise disjoint sets covering `[0, 1)`: random cells dealt to `k`
/// sets, some of which may stay empty.
pub fn random_partition_candidate<R: Rng + ?Sized>(rng: &mut R) -> Vec<IntervalSet> {
    let k = rng.random_range(1..=4);
    let mut sets = vec![IntervalSet::empty(); k];
    for cell in random_cells(rng, 6) {
        let i = rng.random_range(0..k);
        sets[i] = sets[i].union(&cell);
    }
    sets
}

/// A partition candidate with at least one cell removed, so the measures
/// sum to less than one.
pub fn random_deficient_candidate<R: Rng + ?Sized>(rng: &mut R) -> Vec<IntervalSet> {
    let k = rng.random_range(1..=4);
    let cells = random_cells(rng, 6);
    let drop = rng.random_range(0..cells.len());
    let mut sets = vec![IntervalSet::empty(); k];
    for (c, cell) in cells.into_iter().enumerate() {
        if c != drop {
            let i = rng.random_range(0..k);
            sets[i] = sets[i].union(&cell);
        }
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval_sets::Ambient;
    use num_traits::One;

    #[test]
    fn sets_stay_inside_ambient() {
        let mut rng = stream_rng(7, 0);
        for _ in 0..500 {
            let s = random_interval_set(&mut rng, 4, 4);
            assert!(s.is_within(&Ambient::bounded(rat(4, 1)).unwrap()));
        }
    }

    #[test]
    fn same_seed_same_samples() {
        let a: Vec<_> = (0..20).map(|_| random_unit_set(&mut stream_rng(3, 1))).collect();
        let b: Vec<_> = (0..20).map(|_| random_unit_set(&mut stream_rng(3, 1))).collect();
        assert_eq!(a, b);
        let mut r1 = stream_rng(3, 1);
        let mut r2 = stream_rng(3, 2);
        let x: Vec<_> = (0..20).map(|_| random_unit_set(&mut r1)).collect();
        let y: Vec<_> = (0..20).map(|_| random_unit_set(&mut r2)).collect();
        assert_ne!(x, y);
    }

    #[test]
    fn candidates_partition_or_fall_short() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..200 {
            let c = random_partition_candidate(&mut rng);
            let total: Rational = c.iter().map(IntervalSet::measure).sum();
            assert!(total.is_one());
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    assert!(c[i].intersect(&c[j]).is_empty());
                }
            }
            let d = random_deficient_candidate(&mut rng);
            let total: Rational = d.iter().map(IntervalSet::measure).sum();
            assert!(total < Rational::one());
        }
    }

    #[test]
    fn step_functions_use_carrier_labels() {
        let z6 = FiniteAlgebra::integers_mod(6);
        let mut rng = stream_rng(5, 0);
        for _ in 0..200 {
            let f = random_step_function(&mut rng, &z6);
            assert!(f.labels().all(|l| z6.carrier().contains(l)));
        }
    }
}
