//! Deterministic adaptive Simpson quadrature over interval unions.
//!
//! Each interval is split at the supplied breakpoints into panels. A coarse
//! composite rule fixes the global tolerance, which is then shared between
//! panels in proportion to their width. Panels are refined independently
//! (possibly in parallel) and summed in left-to-right order, so the result
//! is bit-identical across execution modes.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::measure::MeasurableSet;

/// Refinement levels always taken before the error test is trusted.
const MIN_DEPTH: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    pub exec: Exec,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 50,
            exec: Exec::default(),
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
}

struct Outcome {
    value: f64,
    error: f64,
    converged: bool,
}

impl Integrator {
    pub fn new(rel_tol: f64, abs_tol: f64, max_depth: u32) -> Result<Self> {
        if !(rel_tol > 0.0 && abs_tol > 0.0) || max_depth < 1 {
            return Err(Error::Domain(format!(
                "invalid integrator settings rel={rel_tol} abs={abs_tol} depth={max_depth}"
            )));
        }
        Ok(Integrator {
            rel_tol,
            abs_tol,
            max_depth,
            exec: Exec::default(),
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    /// Integrates `f` over `s` with respect to the base measure: an exact
    /// ordered sum over atoms, or adaptive Simpson over each interval piece
    /// seeded at `breakpoints`.
    pub fn integrate<F>(&self, f: F, s: &MeasurableSet, breakpoints: &[f64]) -> Result<f64>
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        match s {
            MeasurableSet::Atoms(idx) => {
                let mut sum = 0.0;
                for &i in idx {
                    let x = i as f64;
                    sum += checked(&f, x)?;
                }
                Ok(sum)
            }
            MeasurableSet::Intervals(pieces) => self.integrate_intervals(&f, pieces, breakpoints),
        }
    }

    fn integrate_intervals<F>(&self, f: &F, pieces: &[(f64, f64)], breakpoints: &[f64]) -> Result<f64>
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        let mut breaks: Vec<f64> = breakpoints.iter().copied().filter(|p| p.is_finite()).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        let mut panels = Vec::new();
        for &(lo, hi) in pieces {
            let mut a = lo;
            for &p in breaks.iter().filter(|&&p| p > lo && p < hi) {
                panels.push(Panel { a, b: p });
                a = p;
            }
            panels.push(Panel { a, b: hi });
        }
        if panels.is_empty() {
            return Ok(0.0);
        }
        let total_width: f64 = panels.iter().map(|p| p.b - p.a).sum();

        let coarse = self.exec.map(&panels, |p| coarse_simpson(f, p.a, p.b));
        let mut scale = 0.0;
        for c in coarse {
            scale += c?;
        }
        let tol = (self.rel_tol * scale.abs()).max(self.abs_tol);

        let outcomes = self.exec.map(&panels, |p| {
            let share = tol * (p.b - p.a) / total_width;
            self.adaptive_panel(f, p.a, p.b, share)
        });

        let (mut value, mut error, mut converged) = (0.0, 0.0, true);
        for o in outcomes {
            let o = o?;
            value += o.value;
            error += o.error;
            converged &= o.converged;
        }
        if converged {
            Ok(value)
        } else {
            Err(Error::NoConvergence {
                estimate: value,
                error_bound: error,
            })
        }
    }

    fn adaptive_panel<F>(&self, f: &F, a: f64, b: f64, tol: f64) -> Result<Outcome>
    where
        F: Fn(f64) -> f64,
    {
        let m = 0.5 * (a + b);
        // one ulp inside, so a jump at a panel edge is seen from this side only
        let (fa, fm, fb) = (checked(f, a.next_up())?, checked(f, m)?, checked(f, b.next_down())?);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        self.refine(f, a, fa, m, fm, b, fb, whole, tol, 1)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine<F>(
        &self,
        f: &F,
        a: f64,
        fa: f64,
        m: f64,
        fm: f64,
        b: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<Outcome>
    where
        F: Fn(f64) -> f64,
    {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let (flm, frm) = (checked(f, lm)?, checked(f, rm)?);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;

        let noise = 64.0 * f64::EPSILON * (left.abs() + right.abs());
        if depth >= MIN_DEPTH && delta.abs() <= (15.0 * tol).max(noise) {
            return Ok(Outcome {
                value: left + right + delta / 15.0,
                error: delta.abs() / 15.0,
                converged: true,
            });
        }
        if depth >= self.max_depth {
            return Ok(Outcome {
                value: left + right + delta / 15.0,
                error: delta.abs() / 15.0,
                converged: false,
            });
        }
        let l = self.refine(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)?;
        let r = self.refine(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)?;
        Ok(Outcome {
            value: l.value + r.value,
            error: l.error + r.error,
            converged: l.converged && r.converged,
        })
    }
}

fn coarse_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64> {
    const N: usize = 16;
    let h = (b - a) / N as f64;
    let mut sum = checked(f, a.next_up())? + checked(f, b.next_down())?;
    for k in 1..N {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * checked(f, a + h * k as f64)?;
    }
    Ok(sum * h / 3.0)
}

#[inline]
fn checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { x, value: v })
    }
}

/// `t log t` with the convention `0 log 0 = 0`.
pub fn xlogx(t: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::Domain(format!("xlogx of negative value {t}")));
    }
    Ok(xlogx_raw(t))
}

/// Unchecked `t log t`; negative input yields NaN, which quadrature reports
/// as a non-finite integrand.
#[inline]
pub(crate) fn xlogx_raw(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}
