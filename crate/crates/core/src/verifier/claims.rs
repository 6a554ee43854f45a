//! Checkers for the claim catalog. Each checker draws one random instance
//! from the trial's generator and appends its reports.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gen;
use super::report::VerificationReport;
use crate::entropy::{self, Verdict};
use crate::error::Result;
use crate::groups::{haar, Group, GroupElement, HaarMeasure, Subgroup};
use crate::maxent;
use crate::measure::{self, Density, MeasurableSet, Measure, Space, WeightFunction};
use crate::quadrature::Integrator;
use crate::supnorm;

/// Tolerance for finite sums, which are exact up to roundoff.
pub const EXACT_TOL: f64 = 1e-12;
/// Floor on the entropic gap accepted as nonnegative.
pub const GAP_FLOOR: f64 = 1e-10;

pub struct Trial {
    pub id: &'static str,
    pub index: u64,
    pub tol: f64,
    pub rng: ChaCha8Rng,
    pub cfg: Integrator,
    pub out: Vec<VerificationReport>,
}

impl Trial {
    /// Tolerance for a check on `space`: the caller's, capped at
    /// [`EXACT_TOL`] when every quantity is a finite sum.
    fn tol_for(&self, space: &Space) -> f64 {
        if space.is_finite() {
            self.tol.min(EXACT_TOL)
        } else {
            self.tol
        }
    }

    fn le(&mut self, check: impl AsRef<str>, lhs: f64, rhs: f64, tol: f64) -> &mut VerificationReport {
        self.out.push(VerificationReport::le(self.id, check.as_ref(), lhs, rhs, tol));
        self.out.last_mut().expect("just pushed")
    }

    fn eq(&mut self, check: impl AsRef<str>, lhs: f64, rhs: f64, tol: f64) -> &mut VerificationReport {
        self.out.push(VerificationReport::eq(self.id, check.as_ref(), lhs, rhs, tol));
        self.out.last_mut().expect("just pushed")
    }

    /// `lhs < rhs` by more than `tol`.
    fn strict(&mut self, check: impl AsRef<str>, lhs: f64, rhs: f64, tol: f64) -> &mut VerificationReport {
        self.out
            .push(VerificationReport::le(self.id, check.as_ref(), lhs + 2.0 * tol, rhs, tol));
        self.out.last_mut().expect("just pushed")
    }

    fn skip(&mut self, check: impl AsRef<str>, reason: &str) {
        self.out.push(VerificationReport::skipped(self.id, check.as_ref(), reason));
    }

    fn finite(&self, eta: &Measure, nu: &Measure, s: &MeasurableSet) -> Result<f64> {
        Ok(entropy::entropy_finite(eta, nu, s, &self.cfg)?.nats)
    }

    fn prob(&self, eta: &Measure, nu: &Measure, s: &MeasurableSet) -> Result<f64> {
        Ok(entropy::entropy_prob(eta, nu, s, &self.cfg)?.nats)
    }

    fn mass(&self, m: &Measure, s: &MeasurableSet) -> Result<f64> {
        measure::mass(m, s, &self.cfg)
    }
}

fn set_note(space: &Space, s: &MeasurableSet) -> String {
    format!("{space}; s={s}")
}

/// A finite carrier or an interval, alternating by trial.
fn space_for(t: &mut Trial, finite: Space, interval: Space) -> Space {
    if t.index % 2 == 0 {
        finite
    } else {
        interval
    }
}

fn window_group(t: &Trial) -> Result<Group> {
    match t.index % 2 {
        0 => Group::additive(-10.0, 20.0),
        _ => Group::multiplicative(1e-2, 1e2),
    }
}

/// A set that leaves room for translates inside the group window.
fn probe_set(t: &mut Trial, g: &Group) -> Result<MeasurableSet> {
    match *g {
        Group::AdditiveReals { .. } => gen::small_set(&mut t.rng, 0.0, 5.0),
        Group::MultiplicativeReals { .. } => gen::small_set(&mut t.rng, 1.0, 5.0),
        _ => gen::set(&mut t.rng, &g.space()),
    }
}

pub fn entropy_max(t: &mut Trial) -> Result<()> {
    let space = space_for(t, Space::indexed(16)?, Space::interval(0.0, 2.0)?);
    let nu = Measure::base(space.clone());
    let s = if t.rng.gen_bool(0.5) { space.full_set() } else { gen::set(&mut t.rng, &space)? };
    let hi = t.rng.gen_range(0.1..5.0);
    let eta = gen::relative(&mut t.rng, &nu, 0.0, hi, "eta");
    let tol = t.tol_for(&space);
    let bound = t.mass(&nu, &s)?.ln();
    let note = set_note(&space, &s);
    let v = t.finite(&eta, &nu, &s)?;
    t.le("entropy <= log nu(s)", v, bound, tol).scope = note.clone();
    let u = entropy::uniform_measure(&nu, &s, &t.cfg)?;
    let v = t.finite(&u, &nu, &s)?;
    t.eq("uniform attains log nu(s)", v, bound, tol).scope = note;
    Ok(())
}

pub fn finite_form(t: &mut Trial) -> Result<()> {
    let space = space_for(t, Space::indexed(t.index as usize % 11 + 2)?, Space::interval(-1.0, 3.0)?);
    let nu = gen::relative(&mut t.rng, &Measure::base(space.clone()), 0.5, 2.0, "nu");
    let s = gen::set(&mut t.rng, &space)?;
    let eta = gen::relative(&mut t.rng, &nu, 0.0, 4.0, "eta");
    let m = t.mass(&eta, &s)?;
    if !(m > 0.0) {
        t.skip("finite form = probability form of eta/eta(s)", "eta vanishes on s");
        return Ok(());
    }
    let lhs = t.finite(&eta, &nu, &s)?;
    let rhs = t.prob(&eta.scaled(1.0 / m), &nu, &s)?;
    let tol = t.tol_for(&space);
    t.eq("finite form = probability form of eta/eta(s)", lhs, rhs, tol).scope = set_note(&space, &s);
    Ok(())
}

pub fn weight_constant(t: &mut Trial) -> Result<()> {
    let space = space_for(t, Space::indexed(t.index as usize % 9 + 1)?, Space::interval(0.0, 1.0 + t.index as f64 % 5.0)?);
    let nu = Measure::base(space.clone()).scaled(t.rng.gen_range(0.2..3.0));
    let s = gen::set(&mut t.rng, &space)?;
    let target = t.mass(&nu, &s)?.ln();
    let tol = t.tol_for(&space).min(1e-9);
    let random_a = t.rng.gen_range(0.0..20.0);
    for a in [0.0, 1.0, 7.0, random_a] {
        let v = entropy::entropy_weight(&WeightFunction::constant(a), &nu, &s, &t.cfg)?.nats;
        t.eq(format!("S(a={a}) = log nu(s)"), v, target, tol).scope = set_note(&space, &s);
    }
    Ok(())
}

fn random_weight(t: &mut Trial, space: &Space) -> WeightFunction {
    let (edges, mut values) = match *space {
        Space::Finite { ref atoms } => ((0..=atoms.len()).map(|i| i as f64).collect(), gen::table(&mut t.rng, atoms.len(), 0.0, 5.0)),
        Space::Interval { lo, hi } => gen::cells(&mut t.rng, lo, hi, 0.0, 5.0),
    };
    // occasionally exclude one cell outright, but never all of them
    if values.len() > 1 && t.rng.gen_bool(0.3) {
        let k = t.rng.gen_range(0..values.len());
        values[k] = f64::INFINITY;
    }
    let finite = space.is_finite();
    let breaks = if finite { Vec::new() } else { edges.clone() };
    WeightFunction::new(move |x| {
        let k = if finite {
            x as usize
        } else {
            edges.partition_point(|&e| e <= x).saturating_sub(1).min(values.len() - 1)
        };
        values[k]
    })
    .with_breakpoints(breaks)
}

pub fn weight_agreement(t: &mut Trial) -> Result<()> {
    let space = space_for(t, Space::indexed(t.index as usize % 13 + 2)?, Space::interval(-2.0, 2.0)?);
    let nu = gen::relative(&mut t.rng, &Measure::base(space.clone()), 0.5, 2.0, "nu");
    let phi = random_weight(t, &space);
    let s = space.full_set();
    let w = entropy::entropy_weight(&phi, &nu, &s, &t.cfg)?.nats;
    let f = t.finite(&measure::measure_of_weight(&phi, &nu), &nu, &s)?;
    let tol = t.tol_for(&space).min(1e-9);
    t.eq("weight form = finite form of exp(-phi) nu", w, f, tol).scope = space.to_string();
    Ok(())
}

pub fn supnorm_bounds(t: &mut Trial) -> Result<()> {
    let (group, a) = if t.index % 2 == 0 {
        let g = Group::Cyclic(12);
        let a = gen::set(&mut t.rng, &g.space())?;
        (g, a)
    } else {
        let g = Group::additive(0.0, 10.0)?;
        let a = gen::small_set(&mut t.rng, 0.0, 3.0)?;
        (g, a)
    };
    let nu = haar(&group, 1.0)?.measure();
    let tol = t.tol_for(&nu.space().clone());
    let hi_r = t.rng.gen_range(0.5..3.0);
    let hi_x = t.rng.gen_range(0.5..3.0);
    let rho = gen::relative(&mut t.rng, &nu, 0.0, hi_r, "rho");
    let xi = gen::relative(&mut t.rng, &nu, 0.0, hi_x, "xi");
    let c = t.rng.gen_range(0.5..2.0);
    let full = nu.space().full_set();
    let (rho, xi, _) = supnorm::sup_normalize(&rho, &xi, &nu, &full, c)?;
    let samples = supnorm::sample_translations(&group, &a, supnorm::DEFAULT_SAMPLES)?;
    for m in [&rho, &xi] {
        let r = supnorm::check_translate_bound(m, &nu, &group, &a, &samples, tol)?;
        t.out.push(r);
    }
    // part (ii): xi = c nu
    let xi = nu.scaled(c);
    let ratio = supnorm::sup_density(&rho, &xi, &full)?;
    t.le("sup drho/dxi <= 1 when xi = c nu", ratio, 1.0, tol).scope = format!("c={c}");
    let (ra, xa) = (t.mass(&rho, &a)?, t.mass(&xi, &a)?);
    t.le("rho(A) <= xi(A) when xi = c nu", ra, xa, tol).scope = format!("A={a}");
    Ok(())
}

/// Lifts `mass` of an information density to at least `target` by moving
/// each value toward 1, keeping it an information measure.
fn lift_mass(values: &mut [f64], weights: &[f64], target: f64) {
    let m: f64 = values.iter().zip(weights).map(|(v, w)| v * w).sum();
    let full: f64 = weights.iter().sum();
    if m >= target || full <= m {
        return;
    }
    let lambda = ((target - m) / (full - m)).min(1.0);
    for v in values.iter_mut() {
        *v += lambda * (1.0 - *v);
    }
}

pub fn nonnegativity(t: &mut Trial) -> Result<()> {
    let finite = t.index % 2 == 0;
    let (space, edges) = if finite {
        let n = t.rng.gen_range(2..=16);
        (Space::indexed(n)?, Vec::new())
    } else {
        let len = t.rng.gen_range(1.0..4.0);
        let (e, _) = gen::cells(&mut t.rng, 0.0, len, 0.0, 1.0);
        (Space::interval(0.0, len)?, e)
    };
    let nu = Measure::base(space.clone());
    let n_cells = if finite { space.len().expect("finite") } else { edges.len() - 1 };
    let mut values = gen::table(&mut t.rng, n_cells, 0.0, 1.0);
    let weights: Vec<f64> = if finite { vec![1.0; n_cells] } else { edges.windows(2).map(|w| w[1] - w[0]).collect() };
    let full: f64 = weights.iter().sum();
    // three quarters of the trials get mass at least one
    let wants_big = t.rng.gen_bool(0.75);
    if wants_big {
        let target = t.rng.gen_range(1.0..=full.max(1.0));
        lift_mass(&mut values, &weights, target);
    }
    let q = if finite { Density::table(values) } else { Density::piecewise_constant(edges, values) };
    let mu = Measure::with_reference(&nu, &q, "mu");
    let s = space.full_set();
    let cert = entropy::nonneg_certificate(&mu, &nu, &s, &t.cfg)?;
    let tol = t.tol_for(&space).min(GAP_FLOOR);
    let note = format!("{space}; mass={}", cert.mass);
    if cert.mass >= 1.0 - entropy::MASS_TOL {
        let flagged = (cert.verdict == Verdict::MayBeNegative) as u8 as f64;
        t.eq("certificate verdict for mass >= 1", flagged, 0.0, 0.0).scope = note.clone();
    }
    if cert.verdict == Verdict::MayBeNegative {
        t.skip("entropy >= 0", &format!("{note}; no certificate"));
        return Ok(());
    }
    let v = t.finite(&mu, &nu, &s)?;
    t.le(format!("entropy >= 0 ({:?})", cert.verdict), -v, 0.0, tol).scope = note;
    Ok(())
}

fn general_group(t: &Trial) -> Result<Group> {
    Ok(match t.index % 3 {
        0 => Group::Cyclic(12),
        1 => Group::Dihedral(4),
        _ => Group::additive(0.0, 10.0)?,
    })
}

pub fn general_inequality(t: &mut Trial) -> Result<()> {
    let group = general_group(t)?;
    let mu_g = haar(&group, 1.0)?.measure();
    let space = mu_g.space().clone();
    let s = gen::set(&mut t.rng, &space)?;
    let scale = t.rng.gen_range(0.2..5.0);
    let rho = gen::relative(&mut t.rng, &mu_g, 0.0, scale, "rho");
    let xi = gen::positive_information(&mut t.rng, &mu_g, "xi");
    if !(t.mass(&rho, &s)? > 0.0) {
        t.skip("S_xi(rho,A) <= S_muG(rho,A)", "rho vanishes on A");
        return Ok(());
    }
    let s_xi = t.finite(&rho, &xi, &s)?;
    let s_g = t.finite(&rho, &mu_g, &s)?;
    let s_max = t.finite(&mu_g, &mu_g, &s)?;
    let tol = t.tol_for(&space);
    let note = format!("{group}; A={s}");
    t.le("S_xi(rho,A) <= S_muG(rho,A)", s_xi, s_g, tol).scope = note.clone();
    t.le("S_muG(rho,A) <= S_muG(muG,A)", s_g, s_max, tol).scope = note.clone();
    let log_mass = t.mass(&mu_g, &s)?.ln();
    t.eq("S_muG(muG,A) = log muG(A)", s_max, log_mass, tol).scope = note;
    Ok(())
}

fn symmetry_group(t: &Trial) -> Group {
    if t.index % 2 == 0 {
        Group::Dihedral(6)
    } else {
        Group::Cyclic(12)
    }
}

/// Relative symmetry, in two readings.
///
/// Additive reading `-∫_A q log q dμ_G`: the proof goes through as written,
/// since the integrand is nonnegative for an information measure.
///
/// Normalized (finite-form) reading: `S(ξ,H) ≤ log μ_G(H) ≤ log ξ(A) ≤ S(ξ,A)`
/// whenever `ξ(A) ≥ μ_G(H)`; only instances with that certificate are
/// asserted. A nonnegativity certificate on `A∖H` alone is not enough.
pub fn relative_symmetry(t: &mut Trial) -> Result<()> {
    let group = symmetry_group(t);
    let subs = group.subgroups()?;
    let mu_g = haar(&group, 1.0)?.measure();
    let xi = if t.index % 3 == 0 { mu_g.clone().with_label("counting") } else { gen::positive_information(&mut t.rng, &mu_g, "xi") };
    let h = subs.choose(&mut t.rng).expect("trivial subgroup exists").clone();
    let hs = h.as_set();
    let mu_h = mu_g.restricted(&hs);

    let above: Vec<&Subgroup> = subs.iter().filter(|k| h.is_subgroup_of(k)).collect();
    let k = (*above.choose(&mut t.rng).expect("h itself")).clone();
    symmetry_pair(t, &group, &xi, &mu_g, &mu_h, &hs, &k.as_set(), "subgroup")?;

    let extra = gen::set(&mut t.rng, &group.space())?;
    let a = hs.union(&extra)?;
    symmetry_pair(t, &group, &xi, &mu_g, &mu_h, &hs, &a, "superset")?;

    // monotonicity used in the proof, against the whole group
    let g_all = group.space().full_set();
    symmetry_pair(t, &group, &xi, &mu_g, &mu_g, &hs, &g_all, "monotone H<=G")
}

#[allow(clippy::too_many_arguments)]
fn symmetry_pair(
    t: &mut Trial,
    group: &Group,
    xi: &Measure,
    mu_g: &Measure,
    mu_h: &Measure,
    h: &MeasurableSet,
    a: &MeasurableSet,
    kind: &str,
) -> Result<()> {
    let tol = t.tol.min(EXACT_TOL);
    let note = format!("{group}; {kind}; |H|={}, A={a}", t.mass(mu_g, h)?);
    // xi seen through the reference mu_H lives on H only
    let xi_h = xi.restricted(h);
    if a == h {
        let (l, r) = (t.finite(&xi_h, mu_h, h)?, t.finite(xi, mu_g, a)?);
        t.eq(format!("{kind}: equality at A=H"), l, r, tol).scope = note;
        return Ok(());
    }
    let x = a.difference(h)?;

    // additive reading
    let (l, r) = (-t.prob_quiet(&xi_h, mu_h, h)?, -t.prob_quiet(xi, mu_g, a)?);
    t.le(format!("{kind}: additive S(xi,H) <= S(xi,A)"), l, r, tol).scope = note.clone();
    let cert = entropy::nonneg_certificate(xi, mu_g, &x, &t.cfg)?;
    let gain = -t.prob_quiet(xi, mu_g, &x)?;
    if cert.verdict != Verdict::MayBeNegative && gain > 4.0 * tol {
        t.strict(format!("{kind}: additive strict for A!=H"), l, r, tol).scope = note.clone();
    } else {
        t.skip(format!("{kind}: additive strict for A!=H"), "degenerate on A\\H");
    }

    // normalized reading
    let (xa, hm) = (t.mass(xi, a)?, t.mass(mu_g, h)?);
    let check = format!("{kind}: S_muH(xi,H) <= S_muG(xi,A)");
    if xa < hm {
        t.skip(&check, &format!("no certificate: xi(A)={xa} < muG(H)={hm}"));
        return Ok(());
    }
    let (l, r) = (t.finite(&xi_h, mu_h, h)?, t.finite(xi, mu_g, a)?);
    t.le(&check, l, r, tol).scope = format!("{note}; xi(A)={xa}");
    if r - hm.ln() > 4.0 * tol {
        t.strict(format!("{kind}: strict for A!=H"), l, r, tol).scope = note;
    } else {
        t.skip(format!("{kind}: strict for A!=H"), "certified gap below tolerance");
    }
    Ok(())
}

impl Trial {
    /// `∫ q log q`, the negated additive entropy, without the unit-mass warning.
    fn prob_quiet(&self, eta: &Measure, nu: &Measure, s: &MeasurableSet) -> Result<f64> {
        let q = measure::radon_nikodym(eta, nu)?;
        let breaks = [eta.density().breakpoints(), nu.density().breakpoints()].concat();
        let d = nu.density().clone();
        self.cfg.integrate(
            move |x| {
                let v = q.eval(x);
                if v == 0.0 {
                    0.0
                } else {
                    d.eval(x) * v * v.ln()
                }
            },
            s,
            &breaks,
        )
    }
}

pub fn discrete_counting(t: &mut Trial) -> Result<()> {
    let n = [3usize, 4, 6][(t.index % 3) as usize];
    let g = Group::Dihedral(n);
    let nu = haar(&g, 1.0)?.measure();
    let full = nu.space().full_set();
    let v = t.finite(&nu, &nu, &full)?;
    t.eq(format!("S(D{n}) = log {}", 2 * n), v, ((2 * n) as f64).ln(), 0.0);

    // a random maximal chain of D6 subgroups, upward from a random start
    let d6 = Group::Dihedral(6);
    let nu6 = haar(&d6, 1.0)?.measure();
    let subs = d6.subgroups()?;
    let mut cur = subs.choose(&mut t.rng).expect("nonempty").clone();
    let mut chain = vec![cur.clone()];
    loop {
        let next: Vec<&Subgroup> = subs
            .iter()
            .filter(|k| k.order() > cur.order() && cur.is_subgroup_of(k))
            .collect();
        let Some(k) = next.choose(&mut t.rng) else { break };
        cur = (*k).clone();
        chain.push(cur.clone());
    }
    for w in chain.windows(2) {
        let (h, k) = (w[0].as_set(), w[1].as_set());
        let (sh, sk) = (t.finite(&nu6, &nu6, &h)?, t.finite(&nu6, &nu6, &k)?);
        let note = format!("D6 chain {} < {}", w[0].order(), w[1].order());
        t.strict("S(H) < S(K) along chain", sh, sk, EXACT_TOL.min(t.tol)).scope = note.clone();
        t.eq("S(H) = log |H|", sh, (w[0].order() as f64).ln(), 0.0).scope = note;
    }
    Ok(())
}

pub fn nested_subgroups(t: &mut Trial) -> Result<()> {
    let group = gen::finite_group(&mut t.rng);
    let scale = t.rng.gen_range(0.1..10.0);
    let nu = haar(&group, scale)?.measure();
    let subs = group.subgroups()?;
    let h = subs.choose(&mut t.rng).expect("nonempty").as_set();
    let nh = t.mass(&nu, &h)?;
    let mu_h = nu.restricted(&h).scaled(1.0 / nh);
    let s = t.finite(&mu_h, &nu, &h)?;
    let tol = t.tol.min(EXACT_TOL);
    let note = format!("{group}; scale={scale}; H={h}");
    t.eq("S_nu(muH,H) = log nu(H)", s, nh.ln(), tol).scope = note.clone();
    let ng = t.mass(&nu, &nu.space().full_set())?;
    t.le("log nu(H) <= log nu(G)", nh.ln(), ng.ln(), tol).scope = note;
    Ok(())
}

/// Translations to probe: every element of a finite group, otherwise a
/// seeded sample that keeps `a` inside the window.
fn translations(t: &mut Trial, group: &Group, a: &MeasurableSet) -> Result<(Vec<GroupElement>, String)> {
    if group.is_finite() {
        let all = supnorm::sample_translations(group, a, 0)?;
        let note = format!("all {} elements", all.len());
        return Ok((all, note));
    }
    let mut all = supnorm::sample_translations(group, a, 64)?;
    all.shuffle(&mut t.rng);
    all.truncate(8);
    let note = format!("{} sampled translates", all.len());
    Ok((all, note))
}

fn invariance_group(t: &Trial) -> Result<Group> {
    match t.index % 4 {
        0 => Ok(Group::Cyclic(12)),
        1 => Ok(Group::Dihedral(4)),
        _ => window_group(t),
    }
}

fn haar_and_set(t: &mut Trial) -> Result<(Group, HaarMeasure, MeasurableSet)> {
    let group = invariance_group(t)?;
    let h = haar(&group, 1.0)?;
    let a = probe_set(t, &group)?;
    Ok((group, h, a))
}

pub fn invariance(t: &mut Trial) -> Result<()> {
    let (group, h, a) = haar_and_set(t)?;
    let mu_g = h.measure();
    let tol = t.tol_for(mu_g.space());
    let rho = gen::information(&mut t.rng, &mu_g, "rho");
    let base = t.finite(&mu_g, &mu_g, &a)?;
    if t.mass(&rho, &a)? > 0.0 {
        let v = t.finite(&rho, &mu_g, &a)?;
        t.le("S_muG(rho,A) <= S_muG(muG,A)", v, base, tol).scope = format!("{group}; A={a}");
    }
    let (elements, note) = translations(t, &group, &a)?;
    let mut worst = (base, 0.0f64);
    for g in &elements {
        let ga = group.translate_set(g, &a)?;
        let v = t.finite(&mu_g, &mu_g, &ga)?;
        if (v - base).abs() >= worst.1 {
            worst = (v, (v - base).abs());
        }
    }
    t.eq("S_muG(muG,gA) = S_muG(muG,A)", worst.0, base, tol).scope = format!("{group}; A={a}; {note}");
    Ok(())
}

pub fn invariance_corollary(t: &mut Trial) -> Result<()> {
    let (group, h, a) = haar_and_set(t)?;
    let mu_g = h.measure();
    let tol = t.tol_for(mu_g.space());
    let rho = gen::information(&mut t.rng, &mu_g, "rho");
    let base = t.finite(&mu_g, &mu_g, &a)?;
    let (elements, note) = translations(t, &group, &a)?;
    let mut worst = f64::NEG_INFINITY;
    for g in &elements {
        let ga = group.translate_set(g, &a)?;
        if t.mass(&rho, &ga)? > 0.0 {
            worst = worst.max(t.finite(&rho, &mu_g, &ga)?);
        }
    }
    if worst == f64::NEG_INFINITY {
        t.skip("S_muG(rho,gA) <= S_muG(muG,A)", "rho vanishes on every translate");
        return Ok(());
    }
    t.le("S_muG(rho,gA) <= S_muG(muG,A)", worst, base, tol).scope = format!("{group}; A={a}; {note}");
    Ok(())
}

pub fn change_reference(t: &mut Trial) -> Result<()> {
    let space = space_for(t, Space::indexed(10)?, Space::interval(0.0, 1.0)?);
    let base = Measure::base(space.clone());
    let nu = gen::relative(&mut t.rng, &base, 0.1, 2.0, "nu");
    let mu = gen::relative(&mut t.rng, &base, 0.1, 2.0, "mu");
    let rho = gen::relative(&mut t.rng, &base, 0.0, 2.0, "rho");
    let s = gen::set(&mut t.rng, &space)?;
    if !(t.mass(&rho, &s)? > 0.0) {
        t.skip("direct = via second reference", "rho vanishes on s");
        return Ok(());
    }
    let direct = t.finite(&rho, &nu, &s)?;
    let via = entropy::change_reference(&rho, &mu, &nu, &s, &t.cfg)?.nats;
    let tol = t.tol_for(&space);
    t.eq("direct = via second reference", direct, via, tol).scope = set_note(&space, &s);
    Ok(())
}

pub fn entropic_gap(t: &mut Trial) -> Result<()> {
    let group = if t.index % 2 == 0 { Group::Cyclic(t.index as usize % 15 + 2) } else { Group::additive(0.0, 4.0)? };
    let h = haar(&group, 1.0)?;
    let mu_g = h.measure();
    let space = mu_g.space().clone();
    let s = gen::set(&mut t.rng, &space)?;
    let rho = gen::relative(&mut t.rng, &mu_g, 0.0, 3.0, "rho");
    let xi = gen::positive_information(&mut t.rng, &mu_g, "xi");
    if !(t.mass(&rho, &s)? > 0.0) {
        t.skip("gap = S_muG - S_xi", "rho vanishes on A");
        return Ok(());
    }
    let gap = entropy::entropic_gap(&rho, &xi, &h, &s, &t.cfg)?;
    let diff = t.finite(&rho, &mu_g, &s)? - t.finite(&rho, &xi, &s)?;
    let tol = t.tol_for(&space);
    let note = set_note(&space, &s);
    t.eq("gap = S_muG - S_xi", gap, diff, tol).scope = note.clone();
    t.le("gap >= 0", -gap, 0.0, GAP_FLOOR.min(t.tol)).scope = note;
    Ok(())
}

pub fn concavity(t: &mut Trial) -> Result<()> {
    let n = t.rng.gen_range(2..=16);
    let nu = gen::table(&mut t.rng, n, 0.1, 3.0);
    let seed = t.rng.gen();
    let mut r = maxent::concavity_probe(&nu, 5, seed)?;
    r.scope = format!("n={n}; {}", r.scope);
    t.out.push(r);
    Ok(())
}
