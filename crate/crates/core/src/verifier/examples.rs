//! Closed-form worked examples on the additive and multiplicative reals.

use std::f64::consts::E;

use super::report::VerificationReport;
use crate::entropy;
use crate::error::Result;
use crate::groups::{haar, Group, GroupElement};
use crate::measure::{Density, MeasurableSet, Measure, Space};
use crate::quadrature::Integrator;

/// Agreement required between quadrature and the closed forms.
pub const EXAMPLE_TOL: f64 = 1e-8;
/// Minimum change that counts as "not invariant".
pub const NON_INVARIANCE_GAP: f64 = 1e-3;

pub const ADDITIVE_PAIRS: [(f64, f64); 4] = [(0.0, 1.0), (1.0, E), (2.0, 5.0), (0.5, 8.0)];
pub const ADDITIVE_SHIFTS: [f64; 3] = [-2.0, 0.5, 3.0];
pub const MULTIPLICATIVE_PAIRS: [(f64, f64); 5] = [(1.0, E), (1.0, E * E), (2.0, 5.0), (2.0, 8.0), (0.5, 8.0)];
pub const MULTIPLICATIVE_SCALES: [f64; 3] = [0.5, 2.0, 10.0];
pub const MIXED_PAIRS: [(f64, f64); 4] = [(1.0, E), (2.0, 5.0), (0.5, 8.0), (0.5, 2.0)];

/// Runs every worked example; computation failures become failed reports.
pub fn run_examples() -> Vec<VerificationReport> {
    let cfg = Integrator::default();
    let mut out = Vec::new();
    for (id, f) in [
        ("example-lebesgue", lebesgue as fn(&Integrator, &mut Vec<VerificationReport>) -> Result<()>),
        ("example-haar-multiplicative", multiplicative),
        ("example-mixed", mixed),
        ("example-negative-density", negative),
    ] {
        if let Err(e) = f(&cfg, &mut out) {
            out.push(VerificationReport::errored(id, "evaluation", &e));
        }
    }
    out
}

fn pair_note(a: f64, b: f64) -> String {
    format!("[a,b]=[{a},{b}]")
}

/// `S_ν(ν, [a,b]) = log(b - a)` for Lebesgue `ν`, and its shifts.
fn lebesgue(cfg: &Integrator, out: &mut Vec<VerificationReport>) -> Result<()> {
    let id = "example-lebesgue";
    let group = Group::additive(-10.0, 20.0)?;
    let nu = haar(&group, 1.0)?.measure();
    for (a, b) in ADDITIVE_PAIRS {
        let s = MeasurableSet::interval(a, b)?;
        let v = entropy::entropy_finite(&nu, &nu, &s, cfg)?.nats;
        let exact = (b - a).ln();
        out.push(VerificationReport::eq(id, "S(nu,[a,b]) = log(b-a)", v, exact, EXAMPLE_TOL).with_scope(pair_note(a, b)));
        for g in ADDITIVE_SHIFTS {
            let gs = group.translate_set(&GroupElement::Shift(g), &s)?;
            let v = entropy::entropy_finite(&nu, &nu, &gs, cfg)?.nats;
            out.push(
                VerificationReport::eq(id, &format!("S(nu,g+[a,b]) = log(b-a), g={g}"), v, exact, EXAMPLE_TOL)
                    .with_scope(pair_note(a, b)),
            );
        }
    }
    Ok(())
}

fn multiplicative_window() -> Result<Group> {
    Group::multiplicative(1e-3, 1e3)
}

/// `S_μ(μ, [a,b]) = log log(b/a)` for `dμ = dx/x`, and its dilations.
fn multiplicative(cfg: &Integrator, out: &mut Vec<VerificationReport>) -> Result<()> {
    let id = "example-haar-multiplicative";
    let group = multiplicative_window()?;
    let mu = haar(&group, 1.0)?.measure();
    for (a, b) in MULTIPLICATIVE_PAIRS {
        let s = MeasurableSet::interval(a, b)?;
        let exact = (b / a).ln().ln();
        let v = entropy::entropy_finite(&mu, &mu, &s, cfg)?.nats;
        out.push(VerificationReport::eq(id, "S(mu,[a,b]) = log log(b/a)", v, exact, EXAMPLE_TOL).with_scope(pair_note(a, b)));
        for g in MULTIPLICATIVE_SCALES {
            let gs = group.translate_set(&GroupElement::Scale(g), &s)?;
            let v = entropy::entropy_finite(&mu, &mu, &gs, cfg)?.nats;
            out.push(
                VerificationReport::eq(id, &format!("S(mu,g[a,b]) = log log(b/a), g={g}"), v, exact, EXAMPLE_TOL)
                    .with_scope(pair_note(a, b)),
            );
        }
    }
    Ok(())
}

/// Haar measure `dx/x` measured against Lebesgue. The probability form
/// gives `∫ log x / x dx = ½ log(b/a) log(ab)`; the finite form adds the
/// normalization, `log log(b/a) + ½ log(ab)`.
fn mixed(cfg: &Integrator, out: &mut Vec<VerificationReport>) -> Result<()> {
    let id = "example-mixed";
    let space = multiplicative_window()?.space();
    let nu = Measure::base(space.clone());
    let mu = Measure::new(space, Density::new(|x| 1.0 / x), "dx/x");
    let prob = |a: f64, b: f64| -> Result<f64> {
        Ok(entropy::entropy_prob(&mu, &nu, &MeasurableSet::interval(a, b)?, cfg)?.nats)
    };
    for (a, b) in MIXED_PAIRS {
        let note = pair_note(a, b);
        let v = prob(a, b)?;
        let exact = 0.5 * (b / a).ln() * (a * b).ln();
        out.push(VerificationReport::eq(id, "S_nu(mu,[a,b]) = 1/2 log(b/a) log(ab)", v, exact, EXAMPLE_TOL).with_scope(note.clone()));

        let s = MeasurableSet::interval(a, b)?;
        let v = entropy::entropy_finite(&mu, &nu, &s, cfg)?.nats;
        let exact_finite = (b / a).ln().ln() + 0.5 * (a * b).ln();
        out.push(
            VerificationReport::eq(id, "finite form = log log(b/a) + 1/2 log(ab)", v, exact_finite, EXAMPLE_TOL)
                .with_scope(note.clone()),
        );

        let base = prob(a, b)?;
        let shifted = prob(a + 2.0, b + 2.0)?;
        let scaled = prob(2.0 * a, 2.0 * b)?;
        for (how, v) in [("g+[a,b], g=2", shifted), ("g[a,b], g=2", scaled)] {
            out.push(
                VerificationReport::le(id, &format!("not invariant under {how}"), NON_INVARIANCE_GAP, (v - base).abs(), 0.0)
                    .with_scope(note.clone()),
            );
        }
    }
    Ok(())
}

/// A continuous density above 1 has negative probability-form entropy:
/// density 2 on `[0, 1/2]` gives `-log 2`.
fn negative(cfg: &Integrator, out: &mut Vec<VerificationReport>) -> Result<()> {
    let space = Space::interval(0.0, 1.0)?;
    let nu = Measure::base(space.clone());
    let mu = Measure::new(space, Density::piecewise_constant(vec![0.0, 0.5, 1.0], vec![2.0, 0.0]), "2 on [0,1/2]");
    let v = entropy::entropy_prob(&mu, &nu, &nu.space().full_set(), cfg)?.nats;
    out.push(VerificationReport::eq(
        "example-negative-density",
        "S(2 on [0,1/2]) = -log 2",
        v,
        -std::f64::consts::LN_2,
        EXAMPLE_TOL,
    ));
    Ok(())
}
