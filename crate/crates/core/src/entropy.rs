//! The entropy functionals and the identities relating them.
//!
//! All integrals are taken against the base measure with integrands written
//! in terms of base densities, e.g. `∫ q log q dν = ∫ μ' log(μ'/ν') d base`
//! where `μ' = dμ/d base`. Points where the measured density vanishes
//! contribute exactly zero.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::HaarMeasure;
use crate::measure::{self, Density, MeasurableSet, Measure, WeightFunction, INFO_TOL};
use crate::quadrature::{xlogx_raw, Integrator};

/// Mass slack below 1 still certified as "mass at least one".
pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EntropyForm {
    /// `-∫ q log q dν`, meant for unit-mass measures.
    Probability,
    /// `log η(s) - (1/η(s)) ∫ q log q dν`.
    Finite,
    /// `log Z + (∫ φ e^{-φ} dν) / Z`.
    Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyValue {
    pub nats: f64,
    pub form: EntropyForm,
    /// Total mass of the measured object over the set.
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    MassAtLeastOne,
    ConditionHolds,
    MayBeNegative,
}

/// Sufficient conditions for a nonnegative finite-form entropy of an
/// information measure. `lhs = -∫ q log q dν`, `rhs = -μ(s) log μ(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonnegativityCertificate {
    pub verdict: Verdict,
    pub mass: f64,
    pub lhs: f64,
    pub rhs: f64,
}

struct Pair<'a> {
    cfg: &'a Integrator,
    top: Density,
    bottom: Density,
    breaks: Vec<f64>,
}

impl<'a> Pair<'a> {
    fn new(m: &Measure, reference: &Measure, s: &MeasurableSet, cfg: &'a Integrator) -> Result<Self> {
        m.ensure_same_space(reference)?;
        m.space().ensure_contains(s)?;
        // Representation-level absolute continuity check.
        measure::radon_nikodym(m, reference)?;
        let breaks = [m.density().breakpoints(), reference.density().breakpoints()].concat();
        Ok(Pair {
            cfg,
            top: m.density().clone(),
            bottom: reference.density().clone(),
            breaks,
        })
    }

    fn integrate<F>(&self, s: &MeasurableSet, f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        self.cfg.integrate(f, s, &self.breaks)
    }

    fn mass(&self, s: &MeasurableSet) -> Result<f64> {
        let top = self.top.clone();
        self.integrate(s, move |x| top.eval(x))
    }

    /// `∫_s q log q dν`.
    fn q_log_q(&self, s: &MeasurableSet) -> Result<f64> {
        let (top, bottom) = (self.top.clone(), self.bottom.clone());
        self.integrate(s, move |x| {
            let m = top.eval(x);
            if m == 0.0 {
                0.0
            } else {
                let n = bottom.eval(x);
                n * xlogx_raw(m / n)
            }
        })
    }

    /// `∫_s (q/mass) log q dν`. Dividing before the log keeps a single atom
    /// at exactly `log q`.
    fn q_log_q_over(&self, s: &MeasurableSet, mass: f64) -> Result<f64> {
        let (top, bottom) = (self.top.clone(), self.bottom.clone());
        self.integrate(s, move |x| {
            let m = top.eval(x);
            if m == 0.0 {
                0.0
            } else {
                let n = bottom.eval(x);
                let q = m / n;
                n * (q / mass) * q.ln()
            }
        })
    }
}

/// Probability-form entropy `-∫_s q log q dν`. Non-unit mass is logged as
/// a warning, not rejected.
pub fn entropy_prob(mu: &Measure, nu: &Measure, s: &MeasurableSet, cfg: &Integrator) -> Result<EntropyValue> {
    let pair = Pair::new(mu, nu, s, cfg)?;
    let mass = pair.mass(s)?;
    if (mass - 1.0).abs() > 1e-6 {
        log::warn!(
            "probability-form entropy of '{}' with mass {mass} over {s}",
            mu.label()
        );
    }
    Ok(EntropyValue {
        nats: -pair.q_log_q(s)?,
        form: EntropyForm::Probability,
        mass,
    })
}

/// Finite-measure entropy `log η(s) - (1/η(s)) ∫_s q log q dν`.
pub fn entropy_finite(eta: &Measure, nu: &Measure, s: &MeasurableSet, cfg: &Integrator) -> Result<EntropyValue> {
    let pair = Pair::new(eta, nu, s, cfg)?;
    let mass = pair.mass(s)?;
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Degenerate(format!("'{}' has mass {mass} on {s}", eta.label())));
    }
    Ok(EntropyValue {
        nats: mass.ln() - pair.q_log_q_over(s, mass)?,
        form: EntropyForm::Finite,
        mass,
    })
}

/// Weight-form entropy `log Z + (∫_s φ e^{-φ} dν) / Z`, `Z = ∫_s e^{-φ} dν`.
pub fn entropy_weight(
    phi: &WeightFunction,
    nu: &Measure,
    s: &MeasurableSet,
    cfg: &Integrator,
) -> Result<EntropyValue> {
    nu.space().ensure_contains(s)?;
    let breaks = [phi.breakpoints(), nu.density().breakpoints()].concat();
    let (w, d) = (phi.clone(), nu.density().clone());
    let z = cfg.integrate(move |x| d.eval(x) * w.information(x), s, &breaks)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Degenerate(format!("weight function has effective mass {z} on {s}")));
    }
    let (w, d) = (phi.clone(), nu.density().clone());
    let tilt = cfg.integrate(
        move |x| {
            let p = w.eval(x);
            if p == f64::INFINITY {
                0.0
            } else {
                d.eval(x) * p * (-p).exp()
            }
        },
        s,
        &breaks,
    )?;
    Ok(EntropyValue {
        nats: z.ln() + tilt / z,
        form: EntropyForm::Weight,
        mass: z,
    })
}

/// The uniform probability measure for `nu` on `s`: density `1/ν(s)` with
/// respect to `nu`, zero off `s`.
pub fn uniform_measure(nu: &Measure, s: &MeasurableSet, cfg: &Integrator) -> Result<Measure> {
    let total = measure::mass(nu, s, cfg)?;
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::Degenerate(format!("reference '{}' has mass {total} on {s}", nu.label())));
    }
    let density = nu.density().scaled(1.0 / total).restricted(s);
    Ok(Measure::new(nu.space().clone(), density, format!("uniform({})", nu.label())))
}

/// `S_ν(ρ, s)` computed through a second reference `μ`:
/// `S_μ(ρ, s) - (1/ρ(s)) ∫_s log(dμ/dν) dρ`.
pub fn change_reference(
    rho: &Measure,
    mu: &Measure,
    nu: &Measure,
    s: &MeasurableSet,
    cfg: &Integrator,
) -> Result<EntropyValue> {
    let via_mu = entropy_finite(rho, mu, s, cfg)?;
    Pair::new(rho, nu, s, cfg)?;
    let correction = log_ratio_against(rho, mu, nu, s, cfg)?;
    Ok(EntropyValue {
        nats: via_mu.nats - correction / via_mu.mass,
        form: EntropyForm::Finite,
        mass: via_mu.mass,
    })
}

/// `∫_s log(a'/b') dρ`, with points of zero `ρ` density skipped.
fn log_ratio_against(rho: &Measure, a: &Measure, b: &Measure, s: &MeasurableSet, cfg: &Integrator) -> Result<f64> {
    let breaks = [
        rho.density().breakpoints(),
        a.density().breakpoints(),
        b.density().breakpoints(),
    ]
    .concat();
    let (r, ad, bd) = (rho.density().clone(), a.density().clone(), b.density().clone());
    cfg.integrate(
        move |x| {
            let w = r.eval(x);
            if w == 0.0 {
                0.0
            } else {
                w * (ad.eval(x) / bd.eval(x)).ln()
            }
        },
        s,
        &breaks,
    )
}

/// `-(1/ρ(s)) ∫_s log(dξ/dμ_G) dρ`, the amount by which the entropy with a
/// Haar reference exceeds the entropy with reference `xi`.
pub fn entropic_gap(
    rho: &Measure,
    xi: &Measure,
    haar: &HaarMeasure,
    s: &MeasurableSet,
    cfg: &Integrator,
) -> Result<f64> {
    let mu_g = haar.measure();
    let q = measure::radon_nikodym(xi, &mu_g)?;
    measure::ensure_information_density(xi.space(), &q, s, INFO_TOL)?;
    Pair::new(rho, xi, s, cfg)?;
    let mass = measure::mass(rho, s, cfg)?;
    if !(mass > 0.0) {
        return Err(Error::Degenerate(format!("'{}' has mass {mass} on {s}", rho.label())));
    }
    Ok(-log_ratio_against(rho, xi, &mu_g, s, cfg)? / mass)
}

/// Classifies whether the finite-form entropy of the information measure
/// `mu` is guaranteed nonnegative on `s`. Only certifies; a `MayBeNegative`
/// verdict makes no claim either way.
pub fn nonneg_certificate(
    mu: &Measure,
    nu: &Measure,
    s: &MeasurableSet,
    cfg: &Integrator,
) -> Result<NonnegativityCertificate> {
    let q = measure::radon_nikodym(mu, nu)?;
    measure::ensure_information_density(mu.space(), &q, s, INFO_TOL)?;
    let pair = Pair::new(mu, nu, s, cfg)?;
    let mass = pair.mass(s)?;
    let lhs = -pair.q_log_q(s)?;
    let rhs = -xlogx_raw(mass);
    let verdict = if mass >= 1.0 - MASS_TOL {
        Verdict::MassAtLeastOne
    } else if lhs >= rhs {
        Verdict::ConditionHolds
    } else {
        Verdict::MayBeNegative
    };
    Ok(NonnegativityCertificate { verdict, mass, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{haar, Group};
    use crate::measure::{measure_of_weight, Space};

    fn cfg() -> Integrator {
        Integrator::default()
    }

    fn interval(a: f64, b: f64) -> (Space, MeasurableSet) {
        let sp = Space::interval(a, b).unwrap();
        let s = sp.full_set();
        (sp, s)
    }

    #[test]
    fn prob_form_examples() {
        let (sp, s) = interval(0.0, 2.0);
        let nu = Measure::base(sp.clone());
        let mu = Measure::new(sp, Density::constant(0.5), "u");
        let v = entropy_prob(&mu, &nu, &s, &cfg()).unwrap();
        assert!((v.nats - 2f64.ln()).abs() < 1e-12);
        assert_eq!(v.form, EntropyForm::Probability);

        let die = Space::indexed(6).unwrap();
        let counting = Measure::base(die.clone());
        let six = Measure::new(die.clone(), Density::table(vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0]), "six");
        let v = entropy_prob(&six, &counting, &die.full_set(), &cfg()).unwrap();
        assert_eq!(v.nats, 0.0);

        let (sp, s) = interval(0.0, 1.0);
        let ramp = Measure::new(sp.clone(), Density::new(|x| 2.0 * x), "2x");
        let v = entropy_prob(&ramp, &Measure::base(sp), &s, &cfg()).unwrap();
        // -∫ 2x log 2x dx, frozen from an independent high-precision quadrature
        assert!((v.nats - (-0.193147180559945309)).abs() < 1e-10, "{}", v.nats);
    }

    #[test]
    fn finite_form_examples() {
        let (sp, s) = interval(0.0, 3.0);
        let nu = Measure::base(sp);
        let v = entropy_finite(&nu, &nu, &s, &cfg()).unwrap();
        assert!((v.nats - 3f64.ln()).abs() < 1e-12);
        assert!((v.mass - 3.0).abs() < 1e-12);

        for c in [0.1, 1.0, 10.0, 1e-3] {
            let v = entropy_finite(&nu.scaled(c), &nu, &s, &cfg()).unwrap();
            assert!((v.nats - 3f64.ln()).abs() < 1e-10, "c={c}");
        }

        let (sp, s) = interval(0.0, 1.0);
        let eta = Measure::new(sp.clone(), Density::new(|x| x), "x");
        let v = entropy_finite(&eta, &Measure::base(sp), &s, &cfg()).unwrap();
        assert!((v.nats - (-0.193147180559945309)).abs() < 1e-10);
    }

    #[test]
    fn zero_mass_is_degenerate() {
        let (sp, s) = interval(0.0, 1.0);
        let zero = Measure::new(sp.clone(), Density::constant(0.0), "0");
        assert!(matches!(
            entropy_finite(&zero, &Measure::base(sp), &s, &cfg()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn absolute_continuity_violation_is_an_error() {
        let (sp, s) = interval(0.0, 1.0);
        let nu = Measure::new(sp.clone(), Density::new(|x| if x < 0.5 { 1.0 } else { 0.0 }), "half");
        let mu = Measure::base(sp);
        assert!(matches!(
            entropy_prob(&mu, &nu, &s, &cfg()),
            Err(Error::AbsoluteContinuity { .. })
        ));
    }

    #[test]
    fn weight_form_examples() {
        let (sp, s) = interval(0.0, 2.5);
        let nu = Measure::base(sp);
        for a in [0.0, 1.0, 7.0] {
            let v = entropy_weight(&WeightFunction::constant(a), &nu, &s, &cfg()).unwrap();
            assert!((v.nats - 2.5f64.ln()).abs() < 1e-12, "a={a}");
        }

        let (sp, s) = interval(0.0, 1.0);
        let nu = Measure::base(sp);
        let phi = WeightFunction::new(|x| x);
        let v = entropy_weight(&phi, &nu, &s, &cfg()).unwrap();
        assert!((v.nats - (-0.0406518522564083154)).abs() < 1e-10, "{}", v.nats);
        let via_measure = entropy_finite(&measure_of_weight(&phi, &nu), &nu, &s, &cfg()).unwrap();
        assert!((v.nats - via_measure.nats).abs() < 1e-10);
    }

    #[test]
    fn infinite_weight_excludes_points() {
        // e^{-φ} = indicator of [0, 1] inside [0, 3]: a hard constraint of unit mass
        let (sp, s) = interval(0.0, 3.0);
        let nu = Measure::base(sp);
        let phi = WeightFunction::new(|x| if x <= 1.0 { 0.0 } else { f64::INFINITY }).with_breakpoints(vec![1.0]);
        let v = entropy_weight(&phi, &nu, &s, &cfg()).unwrap();
        assert!(v.nats.abs() < 1e-12);
        assert!((v.mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_measure_examples() {
        let (sp, s) = interval(0.0, 2.0);
        let nu = Measure::base(sp);
        let u = uniform_measure(&nu, &s, &cfg()).unwrap();
        assert!((u.density().eval(1.3) - 0.5).abs() < 1e-15);

        let six = Space::indexed(6).unwrap();
        let counting = Measure::base(six.clone());
        let u = uniform_measure(&counting, &six.full_set(), &cfg()).unwrap();
        let mut brute = 0.0;
        for i in 0..6 {
            let p = u.density().eval(i as f64);
            assert!((p - 1.0 / 6.0).abs() < 1e-16);
            brute -= p * p.ln();
        }
        let v = entropy_prob(&u, &counting, &six.full_set(), &cfg()).unwrap();
        assert!((v.nats - brute).abs() < 1e-15);
        assert!((v.nats - 6f64.ln()).abs() < 1e-15);

        let (sp, s) = interval(0.0, 1.0);
        let u = uniform_measure(&Measure::base(sp), &s, &cfg()).unwrap();
        assert_eq!(u.density().eval(0.4), 1.0);

        let (sp, _) = interval(0.0, 1.0);
        let zero = Measure::new(sp.clone(), Density::constant(0.0), "0");
        assert!(uniform_measure(&zero, &sp.full_set(), &cfg()).is_err());
    }

    #[test]
    fn change_reference_with_equal_references_is_direct_entropy() {
        let (sp, s) = interval(0.0, 1.0);
        let nu = Measure::base(sp.clone());
        let rho = Measure::new(sp, Density::new(|x| 0.2 + 0.7 * x), "rho");
        let direct = entropy_finite(&rho, &nu, &s, &cfg()).unwrap();
        let via = change_reference(&rho, &nu, &nu, &s, &cfg()).unwrap();
        assert_eq!(direct.nats, via.nats);
    }

    #[test]
    fn change_reference_reproduces_multiplicative_haar_against_lebesgue() {
        let mul = Group::multiplicative(0.1, 100.0).unwrap();
        let h = haar(&mul, 1.0).unwrap().measure();
        let leb = Measure::base(mul.space());
        for (a, b) in [(1.0, std::f64::consts::E), (2.0, 5.0), (0.5, 8.0)] {
            let s = MeasurableSet::interval(a, b).unwrap();
            let via = change_reference(&h, &h, &leb, &s, &cfg()).unwrap();
            let direct = entropy_finite(&h, &leb, &s, &cfg()).unwrap();
            let l: f64 = (b / a).ln();
            // finite-form reading: log log(b/a) + ½ log(ab)
            assert!((via.nats - (l.ln() + 0.5 * (a * b).ln())).abs() < 1e-9);
            assert!((via.nats - direct.nats).abs() < 1e-9);
            // probability-form reading: ½ log(b/a) log(ab)
            let prob = entropy_prob(&h, &leb, &s, &cfg()).unwrap();
            assert!((prob.nats - 0.5 * l * (a * b).ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn entropic_gap_examples() {
        let add = Group::additive(0.0, 1.0).unwrap();
        let hm = haar(&add, 1.0).unwrap();
        let s = add.space().full_set();
        let rho = hm.measure();
        let gap = entropic_gap(&rho, &hm.measure(), &hm, &s, &cfg()).unwrap();
        assert_eq!(gap, 0.0);

        let xi = Measure::new(add.space(), Density::new(|x: f64| (-x).exp()), "e^-x");
        let gap = entropic_gap(&rho, &xi, &hm, &s, &cfg()).unwrap();
        assert!((gap - 0.5).abs() < 1e-12);

        let big = Measure::new(add.space(), Density::constant(2.0), "2");
        assert!(matches!(
            entropic_gap(&rho, &big, &hm, &s, &cfg()),
            Err(Error::NotInformationMeasure { .. })
        ));
    }

    #[test]
    fn certificate_examples() {
        let (sp, s) = interval(0.0, 2.0);
        let nu = Measure::base(sp);
        let c = nonneg_certificate(&nu, &nu, &s, &cfg()).unwrap();
        assert_eq!(c.verdict, Verdict::MassAtLeastOne);

        let die = Space::indexed(6).unwrap();
        let counting = Measure::base(die.clone());
        let p = Measure::new(die.clone(), Density::constant(1.0 / 6.0), "uniform");
        let c = nonneg_certificate(&p, &counting, &die.full_set(), &cfg()).unwrap();
        assert_eq!(c.verdict, Verdict::MassAtLeastOne);
        let v = entropy_finite(&p, &counting, &die.full_set(), &cfg()).unwrap();
        assert!(v.nats >= 0.0);

        // e^{-x} on [0, 0.1]: both sides frozen from high-precision quadrature
        let (sp, s) = interval(0.0, 0.1);
        let nu = Measure::base(sp.clone());
        let mu = Measure::new(sp, Density::new(|x: f64| (-x).exp()), "e^-x");
        let c = nonneg_certificate(&mu, &nu, &s, &cfg()).unwrap();
        assert!((c.mass - 0.0951625819640404319).abs() < 1e-12);
        assert!((c.lhs - 0.00467884016044447002).abs() < 1e-12);
        assert!((c.rhs - 0.223838423967339130).abs() < 1e-12);
        assert_eq!(c.verdict, Verdict::MayBeNegative);
        let v = entropy_finite(&mu, &nu, &s, &cfg()).unwrap();
        assert!((v.nats - (-2.30300165552159572)).abs() < 1e-9);

        let too_big = Measure::new(nu.space().clone(), Density::constant(1.5), "1.5");
        assert!(nonneg_certificate(&too_big, &nu, &s, &cfg()).is_err());
    }
}
