//! Seeded random instances for the claim checkers.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::groups::Group;
use crate::measure::{Density, MeasurableSet, Measure, Space};

/// Per-atom values drawn from `[lo, hi)`.
pub fn table(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// A random partition of `[a, b]` into 2 to 8 cells with values in `[lo, hi)`.
pub fn cells(rng: &mut ChaCha8Rng, a: f64, b: f64, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let k = rng.gen_range(2..=8);
    let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(a..b)).collect();
    cuts.sort_by(f64::total_cmp);
    let mut edges = vec![a];
    edges.extend(cuts);
    edges.push(b);
    edges.dedup();
    let values = table(rng, edges.len() - 1, lo, hi);
    (edges, values)
}

/// Density with values in `[lo, hi)` relative to the base measure of `space`.
pub fn density(rng: &mut ChaCha8Rng, space: &Space, lo: f64, hi: f64) -> Density {
    match *space {
        Space::Finite { ref atoms } => Density::table(table(rng, atoms.len(), lo, hi)),
        Space::Interval { lo: a, hi: b } => {
            let (edges, values) = cells(rng, a, b, lo, hi);
            Density::piecewise_constant(edges, values)
        }
    }
}

/// A measure whose density relative to `reference` lies in `[lo, hi)`.
pub fn relative(rng: &mut ChaCha8Rng, reference: &Measure, lo: f64, hi: f64, label: &str) -> Measure {
    let q = density(rng, reference.space(), lo, hi);
    Measure::with_reference(reference, &q, label)
}

/// An information measure for `reference`: relative density in `[0, 1)`.
pub fn information(rng: &mut ChaCha8Rng, reference: &Measure, label: &str) -> Measure {
    relative(rng, reference, 0.0, 1.0, label)
}

/// An information measure with relative density bounded away from zero,
/// so every other measure on the space is absolutely continuous to it.
pub fn positive_information(rng: &mut ChaCha8Rng, reference: &Measure, label: &str) -> Measure {
    relative(rng, reference, 0.05, 1.0, label)
}

/// A nonempty random subset of a finite space, or a union of one to three
/// intervals inside an interval space.
pub fn set(rng: &mut ChaCha8Rng, space: &Space) -> Result<MeasurableSet> {
    match *space {
        Space::Finite { ref atoms } => {
            let n = atoms.len();
            let k = rng.gen_range(1..=n);
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            Ok(MeasurableSet::atoms(idx.into_iter().take(k)))
        }
        Space::Interval { lo, hi } => {
            let k = rng.gen_range(1..=3);
            let width = (hi - lo) / k as f64;
            let mut pieces = Vec::new();
            for i in 0..k {
                let base = lo + width * i as f64;
                let u: f64 = rng.gen_range(0.0..0.45);
                let v: f64 = rng.gen_range(0.55..1.0);
                pieces.push((base + u * width, base + v * width));
            }
            MeasurableSet::intervals(pieces)
        }
    }
}

/// A random subset of `[lo, hi]` that fits inside a window of the given
/// width, so that many translates of it stay in the group window.
pub fn small_set(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<MeasurableSet> {
    let sub = Space::interval(lo, hi)?;
    set(rng, &sub)
}

/// One of the finite groups used by the claim checkers.
pub fn finite_group(rng: &mut ChaCha8Rng) -> Group {
    match rng.gen_range(0..4) {
        0 => Group::Cyclic(rng.gen_range(2..=24)),
        1 => Group::Dihedral(rng.gen_range(2..=8)),
        2 => Group::Symmetric(rng.gen_range(3..=4)),
        _ => Group::Cyclic(12),
    }
}
