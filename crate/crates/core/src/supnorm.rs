//! Sup-normalization, information-measure classification and the
//! translate bounds satisfied by sup-normalized pairs.
//!
//! Suprema of black-box densities are estimated on a grid seeded at the
//! declared breakpoints and refined around the best points. A grid sup can
//! only undershoot, so classification allows [`SUP_TOL`] of slack.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};
use crate::measure::{self, Density, MeasurableSet, Measure};
use crate::quadrature::Integrator;
use crate::verifier::VerificationReport;

/// Slack used when classifying densities against a grid-estimated sup.
pub const SUP_TOL: f64 = 1e-6;
/// Default number of sampled translations on continuous groups.
pub const DEFAULT_SAMPLES: usize = 64;

const GRID: usize = 256;
const ROUNDS: usize = 3;
const ZOOM: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupNormalizationReport {
    /// The common supremum after scaling.
    pub c: f64,
    /// Factors applied to `(ρ, ξ)`.
    pub scale_applied: (f64, f64),
    /// Points where each density came within `1e-9` relative of its sup.
    pub achieved_at: (Vec<f64>, Vec<f64>),
}

/// `sup_s dm/dref`.
pub fn sup_density(m: &Measure, reference: &Measure, s: &MeasurableSet) -> Result<f64> {
    Ok(sup_density_with_witness(m, reference, s)?.0)
}

/// The sup together with the sample points that attain it.
///
/// A declared analytic sup is used only when `s` is the whole space, since
/// it says nothing about the sup over a proper subset.
pub fn sup_density_with_witness(m: &Measure, reference: &Measure, s: &MeasurableSet) -> Result<(f64, Vec<f64>)> {
    m.space().ensure_contains(s)?;
    let q = measure::radon_nikodym(m, reference)?;
    if s.is_empty() {
        return Ok((0.0, Vec::new()));
    }
    let (mut best, mut at) = grid_sup(&q, s);
    if let Some(sup) = q.analytic_sup() {
        if *s == m.space().full_set() {
            if sup > best || at.is_empty() {
                at.clear();
            }
            best = sup;
        }
    }
    Ok((best, at))
}

fn grid_sup(q: &Density, s: &MeasurableSet) -> (f64, Vec<f64>) {
    let mut samples: Vec<(f64, f64)> = Vec::new();
    match s {
        MeasurableSet::Atoms(idx) => {
            samples.extend(idx.iter().map(|&i| (i as f64, q.eval(i as f64))));
        }
        MeasurableSet::Intervals(pieces) => {
            for &(a, b) in pieces {
                let h = (b - a) / GRID as f64;
                let mut pts: Vec<f64> = (0..=GRID).map(|k| a + h * k as f64).collect();
                pts.push(a.next_up());
                pts.push(b.next_down());
                for &p in q.breakpoints().iter().filter(|&&p| p >= a && p <= b) {
                    pts.extend([p.next_down().max(a), p, p.next_up().min(b)]);
                }
                let mut local: Vec<(f64, f64)> = pts.into_iter().map(|x| (x, q.eval(x))).collect();
                // zoom in around the current best point
                let mut width = h;
                for _ in 0..ROUNDS {
                    let (x0, _) = best_of(&local);
                    let (lo, hi) = ((x0 - width).max(a), (x0 + width).min(b));
                    let step = (hi - lo) / ZOOM as f64;
                    local.extend((0..=ZOOM).map(|k| {
                        let x = lo + step * k as f64;
                        (x, q.eval(x))
                    }));
                    width = 2.0 * step;
                }
                samples.extend(local);
            }
        }
    }
    let (_, best) = best_of(&samples);
    if !best.is_finite() {
        return (best, samples.iter().filter(|p| !p.1.is_finite()).map(|p| p.0).take(8).collect());
    }
    let cut = best - 1e-9 * best.abs();
    let mut at: Vec<f64> = samples.iter().filter(|p| p.1 >= cut).map(|p| p.0).collect();
    at.sort_by(f64::total_cmp);
    at.dedup();
    at.truncate(8);
    (best, at)
}

fn best_of(samples: &[(f64, f64)]) -> (f64, f64) {
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for &(x, v) in samples {
        if v > best.1 || v.is_nan() && !best.1.is_nan() {
            best = (x, v);
        }
    }
    best
}

/// Rescales `rho` and `xi` so both densities have sup `target` relative to
/// `reference` on `s`.
pub fn sup_normalize(
    rho: &Measure,
    xi: &Measure,
    reference: &Measure,
    s: &MeasurableSet,
    target: f64,
) -> Result<(Measure, Measure, SupNormalizationReport)> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::Normalization(format!("target must be positive, got {target}")));
    }
    let (sr, wr) = sup_density_with_witness(rho, reference, s)?;
    let (sx, wx) = sup_density_with_witness(xi, reference, s)?;
    for (m, sup) in [(rho, sr), (xi, sx)] {
        if !(sup > 0.0 && sup.is_finite()) {
            return Err(Error::Normalization(format!("'{}' has density sup {sup} on {s}", m.label())));
        }
    }
    let (kr, kx) = (target / sr, target / sx);
    let report = SupNormalizationReport {
        c: target,
        scale_applied: (kr, kx),
        achieved_at: (wr, wx),
    };
    Ok((rho.scaled(kr), xi.scaled(kx), report))
}

/// Whether `dρ/dref` lies in `[-tol, 1 + tol]` at every check point of `s`.
pub fn is_information_measure(rho: &Measure, reference: &Measure, s: &MeasurableSet, tol: f64) -> Result<bool> {
    rho.space().ensure_contains(s)?;
    let q = measure::radon_nikodym(rho, reference)?;
    let ok = rho
        .space()
        .check_points(s, q.breakpoints())
        .into_iter()
        .all(|x| {
            let v = q.eval(x);
            v >= -tol && v <= 1.0 + tol
        });
    Ok(ok)
}

/// Deterministic translations for probing `a`: every element of a finite
/// group; otherwise `count` van der Corput points over the parameters that
/// keep `a` inside the window (a log scale for the multiplicative group,
/// the full turn for the circle).
pub fn sample_translations(group: &Group, a: &MeasurableSet, count: usize) -> Result<Vec<GroupElement>> {
    if let Some(n) = group.order() {
        return (0..n).map(|i| group.element(i)).collect();
    }
    let ends = a.endpoints();
    let (amin, amax) = match (ends.first(), ends.last()) {
        (Some(&l), Some(&h)) => (l, h),
        _ => return Ok(vec![group.identity()]),
    };
    let (p0, p1, log_scale) = match *group {
        Group::AdditiveReals { lo, hi } => (lo - amin, hi - amax, false),
        Group::MultiplicativeReals { lo, hi } => ((lo / amin).ln(), (hi / amax).ln(), true),
        Group::Circle => (0.0, std::f64::consts::TAU, false),
        _ => unreachable!("finite groups handled above"),
    };
    if p0 > p1 {
        let w = group.space().full_set().endpoints();
        return Err(Error::WindowOverflow {
            lo: amin,
            hi: amax,
            window_lo: w[0],
            window_hi: w[w.len() - 1],
        });
    }
    // keep clear of the window edges, where roundoff in the translate can
    // push an endpoint one ulp outside
    let margin = (p1 - p0).min(1.0) * 1e-9;
    let (p0, p1) = if p1 - p0 > 2.0 * margin { (p0 + margin, p1 - margin) } else { (p0, p1) };
    (0..count)
        .map(|k| {
            let t = p0 + (p1 - p0) * van_der_corput(k as u64);
            group.continuous_element(if log_scale { t.exp() } else { t })
        })
        .collect()
}

fn van_der_corput(mut k: u64) -> f64 {
    let (mut v, mut base) = (0.0, 0.5);
    while k > 0 {
        if k & 1 == 1 {
            v += base;
        }
        k >>= 1;
        base *= 0.5;
    }
    v
}

/// Checks `max_g ρ(gA) <= c · min_g ν(gA)` over the sampled translations,
/// where `c = sup dρ/dν` over the whole space. Samples whose translate
/// leaves the window are skipped and counted in the scope note.
pub fn check_translate_bound(
    rho: &Measure,
    nu: &Measure,
    group: &Group,
    a: &MeasurableSet,
    samples: &[GroupElement],
    tol: f64,
) -> Result<VerificationReport> {
    let cfg = Integrator::default();
    let c = sup_density(rho, nu, &rho.space().full_set())?;
    let mut top: Option<(f64, String)> = None;
    let mut bottom: Option<(f64, String)> = None;
    let mut skipped = 0usize;
    for g in samples {
        let ga = match group.translate_set(g, a) {
            Ok(s) => s,
            Err(Error::WindowOverflow { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let (r, n) = match (measure::mass(rho, &ga, &cfg), measure::mass(nu, &ga, &cfg)) {
            (Ok(r), Ok(n)) => (r, n),
            (Err(Error::Domain(_)), _) | (_, Err(Error::Domain(_))) => {
                skipped += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        if top.as_ref().is_none_or(|t| r > t.0) {
            top = Some((r, group.label(g)));
        }
        if bottom.as_ref().is_none_or(|b| n < b.0) {
            bottom = Some((n, group.label(g)));
        }
    }
    let check = format!("translate-bound {a}");
    let (Some((r, gr)), Some((n, gn))) = (top, bottom) else {
        return Ok(VerificationReport::skipped(
            "prop-supnorm-bounds",
            &check,
            &format!("no translate of {a} fits the window"),
        ));
    };
    let scope = format!(
        "c={c:e}; max rho(gA) at g={gr}; min nu(gA) at g={gn}; {} translates, {skipped} skipped{}",
        samples.len() - skipped,
        if group.is_finite() { "" } else { "; sampled" }
    );
    Ok(VerificationReport::le("prop-supnorm-bounds", &check, r, c * n, tol).with_scope(scope))
}
