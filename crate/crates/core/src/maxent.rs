//! Discrete maximum-entropy search by projected gradient ascent.
//!
//! A density with respect to `ν` is discretized to weights `p` on `n`
//! atoms of reference mass `ν_i`; the objective is
//! `S(p) = -Σ p_i log(p_i / ν_i)` over `{p >= 0, Σ p = mass}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::xlogx_raw;
use crate::verifier::VerificationReport;

/// Consecutive rejected steps tolerated before giving up.
pub const MAX_REJECTIONS: usize = 10;
const CONCAVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexPoint {
    pub weights: Vec<f64>,
    pub mass: f64,
}

impl SimplexPoint {
    /// Projects `v` onto `{p >= 0, Σ p = mass}`.
    pub fn project(v: &[f64], mass: f64) -> SimplexPoint {
        SimplexPoint {
            weights: project_simplex(v, mass),
            mass,
        }
    }

    /// A seeded draw, uniform on the scaled simplex.
    pub fn random(n: usize, mass: f64, rng: &mut impl Rng) -> SimplexPoint {
        let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = e.iter().sum();
        SimplexPoint {
            weights: e.iter().map(|x| mass * x / total).collect(),
            mass,
        }
    }

    pub fn sup_distance(&self, other: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Outcome of one ascent run.
#[derive(Debug, Clone, Serialize)]
pub struct Ascent {
    pub point: SimplexPoint,
    pub entropy: f64,
    pub iterations: usize,
    pub final_step: f64,
    /// Entropy after each accepted step, starting with the initial point,
    /// accumulated from the per-step gains.
    pub history: Vec<f64>,
}

/// `-Σ p_i log(p_i / ν_i)` with `0 log 0 = 0`.
pub fn discrete_entropy(p: &[f64], nu: &[f64]) -> f64 {
    -p.iter().zip(nu).map(|(&pi, &ni)| ni * xlogx_raw(pi / ni)).sum::<f64>()
}

/// The closed-form maximizer `mass · ν_i / Σ ν`.
pub fn maximizer(nu: &[f64], mass: f64) -> Vec<f64> {
    let total: f64 = nu.iter().sum();
    nu.iter().map(|v| mass * v / total).collect()
}

fn validate(nu: &[f64], mass: f64, iters: usize, step: f64) -> Result<()> {
    if nu.len() < 2 {
        return Err(Error::Domain("maxent needs at least 2 atoms".into()));
    }
    if let Some(v) = nu.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("reference weights must be positive, got {v}")));
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain(format!("mass must be positive, got {mass}")));
    }
    if iters < 1 {
        return Err(Error::Domain("iters must be at least 1".into()));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    Ok(())
}

/// Ascent from a seeded uniform random start.
pub fn maximize_entropy(nu: &[f64], mass: f64, iters: usize, step: f64, seed: u64) -> Result<(SimplexPoint, f64)> {
    validate(nu, mass, iters, step)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = SimplexPoint::random(nu.len(), mass, &mut rng);
    let run = ascend(nu, start, iters, step)?;
    Ok((run.point, run.entropy))
}

/// Fixed-step projected gradient ascent. A step that lowers the entropy is
/// rejected and the step halved; [`MAX_REJECTIONS`] rejections in a row
/// raise [`Error::StepSize`]. Stops early once an accepted step moves no
/// coordinate by more than roundoff.
pub fn ascend(nu: &[f64], start: SimplexPoint, iters: usize, step: f64) -> Result<Ascent> {
    validate(nu, start.mass, iters, step)?;
    if start.weights.len() != nu.len() {
        return Err(Error::Domain(format!(
            "start has {} weights for {} atoms",
            start.weights.len(),
            nu.len()
        )));
    }
    let mass = start.mass;
    // keeps the gradient finite on the boundary of the simplex
    let floor = 1e-12 * mass / nu.len() as f64;
    let mut p = project_simplex(&start.weights, mass);
    let mut s = discrete_entropy(&p, nu);
    let mut history = vec![s];
    let mut step = step;
    let mut rejected = 0;
    let mut it = 0;
    while it < iters {
        it += 1;
        let v: Vec<f64> = p
            .iter()
            .zip(nu)
            .map(|(&pi, &ni)| pi - step * ((pi.max(floor) / ni).ln() + 1.0))
            .collect();
        let next = project_simplex(&v, mass);
        let gain = entropy_gain(&p, &next, nu);
        let moved = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if gain > 0.0 {
            rejected = 0;
            p = next;
            s += gain;
            history.push(s);
            if moved <= 4.0 * f64::EPSILON * mass {
                break;
            }
            continue;
        }
        if moved <= 4.0 * f64::EPSILON * mass {
            break;
        }
        rejected += 1;
        if rejected >= MAX_REJECTIONS {
            return Err(Error::StepSize {
                consecutive: rejected,
                step,
            });
        }
        step *= 0.5;
    }
    let entropy = discrete_entropy(&p, nu);
    Ok(Ascent {
        point: SimplexPoint { weights: p, mass },
        entropy,
        iterations: it,
        final_step: step,
        history,
    })
}

/// `S(next) - S(p)` for two points of the same simplex, written so that
/// nearby points do not cancel catastrophically. Uses `Σ (next - p) = 0`
/// to centre the linear term.
fn entropy_gain(p: &[f64], next: &[f64], nu: &[f64]) -> f64 {
    let support: Vec<f64> = p
        .iter()
        .zip(nu)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, ni)| (pi / ni).ln())
        .collect();
    let c = support.iter().sum::<f64>() / support.len().max(1) as f64;
    let mut loss = 0.0;
    for ((&pi, &ni), &qi) in p.iter().zip(nu).zip(next) {
        let d = qi - pi;
        loss += if pi > 0.0 {
            d * ((pi / ni).ln() - c) + pi * tilt(d / pi)
        } else {
            ni * xlogx_raw(qi / ni) - (c + 1.0) * qi
        };
    }
    -loss
}

/// `(1 + x) log(1 + x) - x`, accurate near 0.
fn tilt(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        // Σ_{k>=2} (-x)^k / (k(k-1))
        let mut sum = 0.0;
        let mut pow = x * x;
        for k in 2..10 {
            sum += pow / (k * (k - 1)) as f64;
            pow *= -x;
        }
        sum
    } else {
        (1.0 + x) * x.ln_1p() - x
    }
}

/// Euclidean projection onto the scaled simplex by the sorting method.
fn project_simplex(v: &[f64], mass: f64) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cum += uj;
        let t = (cum - mass) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// `S(λp + (1-λ)q) - λS(p) - (1-λ)S(q)`, nonnegative by concavity.
pub fn concavity_gap(nu: &[f64], p: &[f64], q: &[f64], lambda: f64) -> f64 {
    let mix: Vec<f64> = p.iter().zip(q).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
    discrete_entropy(&mix, nu) - lambda * discrete_entropy(p, nu) - (1.0 - lambda) * discrete_entropy(q, nu)
}

/// Probes concavity of the entropy on `trials` seeded random chords of the
/// unit-mass simplex. `lhs` is the largest deficit found; indices of
/// violating trials are listed in the scope.
pub fn concavity_probe(nu: &[f64], trials: usize, seed: u64) -> Result<VerificationReport> {
    validate(nu, 1.0, 1, 1.0)?;
    if trials == 0 {
        return Ok(VerificationReport::skipped("prop-entropy-concave", "concavity-probe", "no trials"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for t in 0..trials {
        let p = SimplexPoint::random(nu.len(), 1.0, &mut rng);
        let q = SimplexPoint::random(nu.len(), 1.0, &mut rng);
        let lambda: f64 = rng.gen_range(f64::EPSILON..1.0);
        let deficit = -concavity_gap(nu, &p.weights, &q.weights, lambda);
        worst = worst.max(deficit);
        if deficit > CONCAVITY_TOL {
            violations.push(t);
        }
    }
    let mut scope = format!("{trials} chords, {} violations", violations.len());
    if !violations.is_empty() {
        let shown: Vec<String> = violations.iter().take(10).map(|t| t.to_string()).collect();
        scope.push_str(&format!(" at trials {}", shown.join(",")));
    }
    Ok(
        VerificationReport::le("prop-entropy-concave", "concavity-probe", worst, 0.0, CONCAVITY_TOL)
            .with_trial(0, seed)
            .with_scope(scope),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_lands_on_simplex() {
        let p = project_simplex(&[0.5, 2.0, -1.0, 0.3], 1.0);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p.iter().all(|&x| x >= 0.0));
        assert_eq!(project_simplex(&[0.2, 0.3, 0.5], 1.0), vec![0.2, 0.3, 0.5]);
        assert_eq!(project_simplex(&[5.0, 0.0], 2.0), vec![2.0, 0.0]);
    }

    #[test]
    fn uniform_three_atoms() {
        let (p, s) = maximize_entropy(&[1.0, 1.0, 1.0], 1.0, 2000, 0.3, 1).unwrap();
        assert!(p.sup_distance(&[1.0 / 3.0; 3]) < 1e-9);
        assert!((s - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn two_atoms_from_a_vertex() {
        let run = ascend(&[1.0, 1.0], SimplexPoint::project(&[1.0, 0.0], 1.0), 2000, 0.25).unwrap();
        assert!(run.point.sup_distance(&[0.5, 0.5]) < 1e-9);
    }

    #[test]
    fn weighted_reference_matches_closed_form_and_grid_search() {
        let nu = [1.0, 2.0, 3.0];
        let (p, s) = maximize_entropy(&nu, 1.0, 5000, 0.1, 7).unwrap();
        assert!(p.sup_distance(&[1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]) < 1e-9);
        assert!((s - 6f64.ln()).abs() < 1e-12);

        // exhaustive search on the 0.001 grid of the simplex
        let mut best = (f64::NEG_INFINITY, (0, 0));
        for i in 0..=1000 {
            for j in 0..=(1000 - i) {
                let q = [i as f64 / 1000.0, j as f64 / 1000.0, (1000 - i - j) as f64 / 1000.0];
                let v = discrete_entropy(&q, &nu);
                if v > best.0 {
                    best = (v, (i, j));
                }
            }
        }
        assert_eq!(best.1, (167, 333));
        assert!(best.0 <= s);
    }

    #[test]
    fn ascent_history_never_decreases() {
        let nu = [0.3, 1.0, 2.5, 0.7, 1.1];
        let start = SimplexPoint::project(&[2.0, 0.0, 0.0, 0.0, 0.0], 2.0);
        let run = ascend(&nu, start, 3000, 1.0).unwrap();
        assert!(run.history.windows(2).all(|w| w[1] >= w[0]));
        assert!((run.history.last().unwrap() - run.entropy).abs() < 1e-12);
        assert!(run.point.sup_distance(&maximizer(&nu, 2.0)) < 1e-8);
    }

    #[test]
    fn absurd_step_is_reported() {
        let nu = [1.0, 2.0, 3.0, 4.0];
        let start = SimplexPoint::project(&[0.1, 0.2, 0.3, 0.4], 1.0);
        let r = ascend(&nu, start, 100, 1e9);
        assert!(matches!(r, Err(Error::StepSize { consecutive: 10, .. })), "{r:?}");
    }

    #[test]
    fn same_seed_same_trajectory() {
        let nu = [1.0, 4.0, 2.0, 0.5];
        let a = maximize_entropy(&nu, 1.5, 50, 0.2, 99).unwrap();
        let b = maximize_entropy(&nu, 1.5, 50, 0.2, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gain_matches_direct_difference() {
        let nu = [0.5, 1.0, 2.0];
        let p = [0.2, 0.0, 0.8];
        let q = [0.1, 0.3, 0.6];
        let direct = discrete_entropy(&q, &nu) - discrete_entropy(&p, &nu);
        assert!((entropy_gain(&p, &q, &nu) - direct).abs() < 1e-15);
        // high-precision reference value
        assert!((tilt(1e-3) - 4.998334166166999762e-7).abs() < 1e-20);
    }

    #[test]
    fn concavity_degenerate_cases() {
        let nu = [1.0; 4];
        let p = [0.1, 0.2, 0.3, 0.4];
        let q = [0.4, 0.4, 0.1, 0.1];
        assert!(concavity_gap(&nu, &p, &p, 0.3).abs() < 1e-15);
        assert_eq!(concavity_gap(&nu, &p, &q, 0.0), 0.0);
        assert_eq!(concavity_gap(&nu, &p, &q, 1.0), 0.0);
        assert!(concavity_gap(&nu, &p, &q, 0.5) > 0.0);
    }

    #[test]
    fn concavity_probe_uniform_eight() {
        let r = concavity_probe(&[1.0; 8], 1000, 3).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.scope.starts_with("1000 chords, 0 violations"));
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(maximize_entropy(&[1.0], 1.0, 10, 0.1, 0).is_err());
        assert!(maximize_entropy(&[1.0, 0.0], 1.0, 10, 0.1, 0).is_err());
        assert!(maximize_entropy(&[1.0, 1.0], 0.0, 10, 0.1, 0).is_err());
        assert!(maximize_entropy(&[1.0, 1.0], 1.0, 0, 0.1, 0).is_err());
    }
}
