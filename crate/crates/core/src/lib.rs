//! Exact measure algebras and metrized lattices.
//!
//! - [`interval_sets`]: canonical finite unions of half-open rational
//!   intervals, the Boolean ring they form, and the metrics `d`, `d_C`.
//! - [`measure_algebra`]: the ring over `[0, 1)`, typewriter sequences, and
//!   the bisection argument against closed prime ideals.
//! - [`algebra_star`]: step functions valued in a finite algebra, the metric
//!   `d'`, and pointwise-lifted operations.
//! - [`metrized_lattice`]: carrier abstractions and exact checkers for the
//!   Lipschitz-type inequalities on joins and meets.
//! - [`completion_engine`]: running joins, monotone limits and certified
//!   error bounds for summable-gap sequences.
//! - [`counterexamples`]: finite subsets of a metric space under the
//!   diameter metric.
//! - [`scenarios`]: built-in sequences run through the completion engine.
//! - [`properties`]: seeded property suites over all of the above.
//! - [`sampling`]: seeded generators for sets, step functions and
//!   partition candidates.

pub mod algebra_star;
pub mod completion_engine;
pub mod counterexamples;
pub mod interval_sets;
pub mod measure_algebra;
pub mod metrized_lattice;
pub mod properties;
pub mod rational;
pub mod sampling;
pub mod scenarios;

pub use interval_sets::{metric_d, metric_dc, Ambient, Interval, IntervalError, IntervalSet};
pub use rational::Rational;
