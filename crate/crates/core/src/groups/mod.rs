//! Built-in unimodular groups, their Haar measures, and translation actions.
//!
//! Finite groups act on finite spaces whose atoms are the group elements in
//! index order. Continuous groups carry a bounded window: all sets and
//! measures they act on must stay inside it, and a translation that would
//! leave the window fails with [`Error::WindowOverflow`] instead of clipping.

mod finite;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

pub use finite::{CayleyTable, Subgroup};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::measure::{Density, MeasurableSet, Measure, Space};
use crate::quadrature::Integrator;
use crate::verifier::VerificationReport;

/// Largest symmetric group supported (order 720).
pub const MAX_SYMMETRIC: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum Group {
    Cyclic(usize),
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral(usize),
    Symmetric(usize),
    AdditiveReals { lo: f64, hi: f64 },
    MultiplicativeReals { lo: f64, hi: f64 },
    /// Rotations of the circle, parametrized by angle in `[0, 2π)`.
    Circle,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    Cyclic(usize),
    Dihedral { rot: usize, flip: bool },
    Perm(Vec<u8>),
    Shift(f64),
    Scale(f64),
    Angle(f64),
}

impl Group {
    pub fn cyclic(n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::Domain("cyclic group needs order >= 1".into()));
        }
        Ok(Group::Cyclic(n))
    }

    pub fn dihedral(n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::Domain("dihedral group needs n >= 1".into()));
        }
        Ok(Group::Dihedral(n))
    }

    pub fn symmetric(n: usize) -> Result<Group> {
        if n == 0 || n > MAX_SYMMETRIC {
            return Err(Error::Domain(format!(
                "symmetric group degree must be in 1..={MAX_SYMMETRIC}"
            )));
        }
        Ok(Group::Symmetric(n))
    }

    pub fn additive(lo: f64, hi: f64) -> Result<Group> {
        Space::interval(lo, hi)?;
        Ok(Group::AdditiveReals { lo, hi })
    }

    pub fn multiplicative(lo: f64, hi: f64) -> Result<Group> {
        Space::interval(lo, hi)?;
        if lo <= 0.0 {
            return Err(Error::Domain("multiplicative window must be positive".into()));
        }
        Ok(Group::MultiplicativeReals { lo, hi })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Group::Cyclic(_) | Group::Dihedral(_) | Group::Symmetric(_))
    }

    /// Group order for finite kinds.
    pub fn order(&self) -> Option<usize> {
        match *self {
            Group::Cyclic(n) => Some(n),
            Group::Dihedral(n) => Some(2 * n),
            Group::Symmetric(n) => Some(finite::factorial(n)),
            _ => None,
        }
    }

    /// The carrier as a measure space: atoms for finite kinds, the window for
    /// the real lines, `[0, 2π]` for the circle.
    pub fn space(&self) -> Space {
        match self {
            Group::AdditiveReals { lo, hi } | Group::MultiplicativeReals { lo, hi } => {
                Space::Interval { lo: *lo, hi: *hi }
            }
            Group::Circle => Space::Interval { lo: 0.0, hi: TAU },
            _ => {
                let n = self.order().unwrap_or(0);
                Space::finite((0..n).map(|i| self.label(&self.element(i).expect("index in range"))))
                    .expect("group labels are distinct")
            }
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Cyclic(_) => GroupElement::Cyclic(0),
            Group::Dihedral(_) => GroupElement::Dihedral { rot: 0, flip: false },
            Group::Symmetric(n) => GroupElement::Perm((0..*n as u8).collect()),
            Group::AdditiveReals { .. } => GroupElement::Shift(0.0),
            Group::MultiplicativeReals { .. } => GroupElement::Scale(1.0),
            Group::Circle => GroupElement::Angle(0.0),
        }
    }

    /// Finite-group element by index.
    pub fn element(&self, i: usize) -> Result<GroupElement> {
        let n = self
            .order()
            .ok_or_else(|| Error::Unsupported("indexed elements of a continuous group".into()))?;
        if i >= n {
            return Err(Error::Domain(format!("element index {i} out of range for order {n}")));
        }
        Ok(match *self {
            Group::Cyclic(_) => GroupElement::Cyclic(i),
            Group::Dihedral(k) => GroupElement::Dihedral {
                rot: i % k,
                flip: i >= k,
            },
            Group::Symmetric(k) => GroupElement::Perm(finite::perm_unrank(k, i)),
            _ => unreachable!(),
        })
    }

    /// Index of a finite-group element.
    pub fn index_of(&self, e: &GroupElement) -> Result<usize> {
        match (self, e) {
            (Group::Cyclic(n), GroupElement::Cyclic(k)) if k < n => Ok(*k),
            (Group::Dihedral(n), GroupElement::Dihedral { rot, flip }) if rot < n => {
                Ok(rot + if *flip { *n } else { 0 })
            }
            (Group::Symmetric(n), GroupElement::Perm(p)) if is_permutation(p, *n) => Ok(finite::perm_rank(p)),
            _ => Err(self.mismatch(e)),
        }
    }

    /// Canonical element for a continuous parameter: offset, factor or angle.
    pub fn continuous_element(&self, v: f64) -> Result<GroupElement> {
        if !v.is_finite() {
            return Err(Error::Domain(format!("non-finite group parameter {v}")));
        }
        match self {
            Group::AdditiveReals { .. } => Ok(GroupElement::Shift(v)),
            Group::MultiplicativeReals { .. } if v > 0.0 => Ok(GroupElement::Scale(v)),
            Group::MultiplicativeReals { .. } => {
                Err(Error::Domain(format!("multiplicative element must be positive, got {v}")))
            }
            Group::Circle => Ok(GroupElement::Angle(wrap_angle(v))),
            _ => Err(Error::Unsupported("continuous parameter for a finite group".into())),
        }
    }

    pub fn compose(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        use GroupElement::*;
        Ok(match (self, a, b) {
            (Group::Cyclic(n), Cyclic(x), Cyclic(y)) => {
                self.index_of(a)?;
                self.index_of(b)?;
                Cyclic((x + y) % n)
            }
            (Group::Dihedral(n), Dihedral { rot: r1, flip: f1 }, Dihedral { rot: r2, flip: f2 }) => {
                self.index_of(a)?;
                self.index_of(b)?;
                let r2 = if *f1 { (n - r2) % n } else { *r2 };
                Dihedral {
                    rot: (r1 + r2) % n,
                    flip: f1 ^ f2,
                }
            }
            (Group::Symmetric(_), Perm(p), Perm(q)) => {
                self.index_of(a)?;
                self.index_of(b)?;
                Perm(q.iter().map(|&i| p[i as usize]).collect())
            }
            (Group::AdditiveReals { .. }, Shift(x), Shift(y)) => Shift(x + y),
            (Group::MultiplicativeReals { .. }, Scale(x), Scale(y)) => Scale(x * y),
            (Group::Circle, Angle(x), Angle(y)) => Angle(wrap_angle(x + y)),
            _ => return Err(self.mismatch(if self.index_of(a).is_err() { a } else { b })),
        })
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        use GroupElement::*;
        Ok(match (self, a) {
            (Group::Cyclic(n), Cyclic(x)) if x < n => Cyclic((n - x) % n),
            (Group::Dihedral(n), Dihedral { rot, flip: false }) if rot < n => Dihedral {
                rot: (n - rot) % n,
                flip: false,
            },
            (Group::Dihedral(n), Dihedral { rot, flip: true }) if rot < n => a.clone(),
            (Group::Symmetric(n), Perm(p)) if is_permutation(p, *n) => {
                let mut inv = vec![0u8; p.len()];
                for (i, &j) in p.iter().enumerate() {
                    inv[j as usize] = i as u8;
                }
                Perm(inv)
            }
            (Group::AdditiveReals { .. }, Shift(x)) => Shift(-x),
            (Group::MultiplicativeReals { .. }, Scale(x)) => Scale(1.0 / x),
            (Group::Circle, Angle(x)) => Angle(wrap_angle(-x)),
            _ => return Err(self.mismatch(a)),
        })
    }

    /// Human-readable element label, also used for finite-space atoms.
    pub fn label(&self, e: &GroupElement) -> String {
        match e {
            GroupElement::Cyclic(k) => k.to_string(),
            GroupElement::Dihedral { rot, flip: false } => format!("r{rot}"),
            GroupElement::Dihedral { rot, flip: true } => format!("s{rot}"),
            GroupElement::Perm(p) => p.iter().map(|d| d.to_string()).collect(),
            GroupElement::Shift(x) => format!("+{x}"),
            GroupElement::Scale(x) => format!("*{x}"),
            GroupElement::Angle(x) => format!("@{x}"),
        }
    }

    /// Cayley table of a finite group.
    pub fn cayley(&self) -> Result<CayleyTable> {
        let n = self
            .order()
            .ok_or_else(|| Error::Unsupported(format!("Cayley table of continuous group {self}")))?;
        let elems: Vec<GroupElement> = (0..n).map(|i| self.element(i)).collect::<Result<_>>()?;
        Ok(CayleyTable::build(n, 0, |a, b| {
            let c = self.compose(&elems[a], &elems[b]).expect("elements of this group");
            self.index_of(&c).expect("closed under composition")
        }))
    }

    /// All subgroups of a finite group, sorted by order; includes the trivial
    /// and the full subgroup.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        self.subgroups_with(Exec::default())
    }

    pub fn subgroups_with(&self, exec: Exec) -> Result<Vec<Subgroup>> {
        if !self.is_finite() {
            return Err(Error::Unsupported(format!("subgroup enumeration for {self}")));
        }
        Ok(finite::enumerate_subgroups(&self.cayley()?, exec))
    }

    /// Left action of `g` on a set.
    pub fn translate_set(&self, g: &GroupElement, s: &MeasurableSet) -> Result<MeasurableSet> {
        match (self, s) {
            (_, MeasurableSet::Atoms(idx)) if self.is_finite() => {
                let gi = self.index_of(g)?;
                let n = self.order().expect("finite");
                if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
                    return Err(Error::Domain(format!("atom {bad} is not a group element")));
                }
                let mut out = std::collections::BTreeSet::new();
                for &i in idx {
                    out.insert(self.mul_index(gi, i)?);
                }
                Ok(MeasurableSet::Atoms(out))
            }
            (Group::AdditiveReals { lo, hi }, MeasurableSet::Intervals(v)) => {
                let GroupElement::Shift(d) = g else {
                    return Err(self.mismatch(g));
                };
                let mapped: Vec<(f64, f64)> = v.iter().map(|&(a, b)| (a + d, b + d)).collect();
                check_window(&mapped, *lo, *hi)?;
                MeasurableSet::intervals(mapped)
            }
            (Group::MultiplicativeReals { lo, hi }, MeasurableSet::Intervals(v)) => {
                let GroupElement::Scale(k) = g else {
                    return Err(self.mismatch(g));
                };
                let mapped: Vec<(f64, f64)> = v.iter().map(|&(a, b)| (a * k, b * k)).collect();
                check_window(&mapped, *lo, *hi)?;
                MeasurableSet::intervals(mapped)
            }
            (Group::Circle, MeasurableSet::Intervals(v)) => {
                let GroupElement::Angle(t) = g else {
                    return Err(self.mismatch(g));
                };
                let mut out = Vec::new();
                for &(a, b) in v {
                    if a < 0.0 || b > TAU {
                        return Err(Error::Domain(format!("[{a}, {b}] is not within [0, 2π]")));
                    }
                    let (a2, b2) = (a + t, b + t);
                    if b2 <= TAU {
                        out.push((a2, b2));
                    } else if a2 >= TAU {
                        out.push((a2 - TAU, b2 - TAU));
                    } else {
                        out.push((a2, TAU));
                        out.push((0.0, b2 - TAU));
                    }
                }
                MeasurableSet::intervals(out)
            }
            _ => Err(Error::Domain(format!("set {s} does not live on group {self}"))),
        }
    }

    /// Pushforward of `m` under left translation by `g`.
    ///
    /// The new density is `old(g⁻¹x)` times the Jacobian of `x ↦ g⁻¹x`
    /// (1 for shifts and rotations, `1/g` for scalings). On the real lines the
    /// measure's own interval moves with it and must stay inside the window.
    pub fn translate_measure(&self, g: &GroupElement, m: &Measure) -> Result<Measure> {
        let label = format!("{}#{}", self.label(g), m.label());
        match self {
            _ if self.is_finite() => {
                if *m.space() != self.space() {
                    return Err(Error::Domain(format!("measure '{}' is not on group {self}", m.label())));
                }
                let ginv = self.index_of(&self.inverse(g)?)?;
                let n = self.order().expect("finite");
                let values: Vec<f64> = (0..n)
                    .map(|x| Ok(m.density().eval(self.mul_index(ginv, x)? as f64)))
                    .collect::<Result<_>>()?;
                Ok(Measure::new(m.space().clone(), Density::table(values), label))
            }
            Group::AdditiveReals { .. } => {
                let GroupElement::Shift(d) = *g else {
                    return Err(self.mismatch(g));
                };
                let (lo, hi) = interval_of(m)?;
                let target = self.translate_set(g, &MeasurableSet::interval(lo, hi)?)?;
                let old = m.density().shared();
                let density = m.density().mapped(move |x| old(x - d), |p| p + d);
                Ok(Measure::new(Space::interval(lo + d, hi + d)?, density, label).restricted_to(&target))
            }
            Group::MultiplicativeReals { .. } => {
                let GroupElement::Scale(k) = *g else {
                    return Err(self.mismatch(g));
                };
                let (lo, hi) = interval_of(m)?;
                let target = self.translate_set(g, &MeasurableSet::interval(lo, hi)?)?;
                let old = m.density().shared();
                let density = m.density().mapped(move |x| old(x / k) / k, |p| p * k);
                Ok(Measure::new(Space::interval(lo * k, hi * k)?, density, label).restricted_to(&target))
            }
            Group::Circle => {
                let GroupElement::Angle(t) = *g else {
                    return Err(self.mismatch(g));
                };
                if *m.space() != self.space() {
                    return Err(Error::Domain(format!("measure '{}' is not on the circle", m.label())));
                }
                let old = m.density().shared();
                let density = m
                    .density()
                    .mapped(move |x| old(wrap_angle(x - t)), |p| wrap_angle(p + t))
                    .with_breakpoints(vec![t]);
                Ok(Measure::new(m.space().clone(), density, label))
            }
            _ => unreachable!(),
        }
    }

    fn mul_index(&self, a: usize, b: usize) -> Result<usize> {
        self.index_of(&self.compose(&self.element(a)?, &self.element(b)?)?)
    }

    fn mismatch(&self, e: &GroupElement) -> Error {
        Error::Domain(format!("element {e:?} does not belong to group {self}"))
    }
}

fn is_permutation(p: &[u8], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n
        && p.iter().all(|&i| {
            let i = i as usize;
            i < n && !std::mem::replace(&mut seen[i], true)
        })
}

fn interval_of(m: &Measure) -> Result<(f64, f64)> {
    match m.space() {
        Space::Interval { lo, hi } => Ok((*lo, *hi)),
        Space::Finite { .. } => Err(Error::Domain(format!("measure '{}' is not on an interval", m.label()))),
    }
}

fn check_window(pieces: &[(f64, f64)], lo: f64, hi: f64) -> Result<()> {
    for &(a, b) in pieces {
        if a < lo || b > hi {
            return Err(Error::WindowOverflow {
                lo: a,
                hi: b,
                window_lo: lo,
                window_hi: hi,
            });
        }
    }
    Ok(())
}

pub(crate) fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl Measure {
    /// Same measure, with the endpoints of `s` added as quadrature hints.
    fn restricted_to(self, s: &MeasurableSet) -> Measure {
        let label = self.label().to_string();
        let density = self.density().clone().with_breakpoints(s.endpoints());
        Measure::new(self.space().clone(), density, label)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Cyclic(n) => write!(f, "Z{n}"),
            Group::Dihedral(n) => write!(f, "D{n}"),
            Group::Symmetric(n) => write!(f, "S{n}"),
            Group::AdditiveReals { lo, hi } => write!(f, "R+add:[{lo},{hi}]"),
            Group::MultiplicativeReals { lo, hi } => write!(f, "R*mul:[{lo},{hi}]"),
            Group::Circle => write!(f, "circle"),
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    /// Parses descriptors such as `Z6`, `D4`, `S4`, `R+add:[0,10]`,
    /// `R*mul:[0.1,100]` and `circle`.
    fn from_str(s: &str) -> Result<Group> {
        let s = s.trim();
        let bad = || Error::Domain(format!("unrecognized group descriptor '{s}'"));
        if s.eq_ignore_ascii_case("circle") {
            return Ok(Group::Circle);
        }
        let window = |rest: &str| -> Result<(f64, f64)> {
            let inner = rest.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok((a, b))
        };
        if let Some(rest) = s.strip_prefix("R+add:") {
            let (a, b) = window(rest)?;
            return Group::additive(a, b);
        }
        if let Some(rest) = s.strip_prefix("R*mul:") {
            let (a, b) = window(rest)?;
            return Group::multiplicative(a, b);
        }
        let (kind, num) = s.split_at(1);
        let n: usize = num.parse().map_err(|_| bad())?;
        match kind {
            "Z" => Group::cyclic(n),
            "D" => Group::dihedral(n),
            "S" => Group::symmetric(n),
            _ => Err(bad()),
        }
    }
}

/// A Haar measure: counting on finite groups, Lebesgue on the additive line
/// and the circle, `dx/x` on the multiplicative half-line; times `scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarMeasure {
    pub group: Group,
    pub scale: f64,
}

pub fn haar(group: &Group, scale: f64) -> Result<HaarMeasure> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Domain(format!("Haar scale must be positive, got {scale}")));
    }
    Ok(HaarMeasure {
        group: group.clone(),
        scale,
    })
}

impl HaarMeasure {
    pub fn measure(&self) -> Measure {
        let c = self.scale;
        let label = format!("haar({})", self.group);
        match &self.group {
            Group::MultiplicativeReals { lo, .. } => {
                let density = Density::new(move |x| c / x).with_analytic_sup(c / lo);
                Measure::new(self.group.space(), density, label)
            }
            g => Measure::new(g.space(), Density::constant(c), label),
        }
    }

    /// Multiplicative Haar measure in logarithmic coordinates: Lebesgue
    /// (times `scale`) on `[ln lo, ln hi]`. Better conditioned than `dx/x`
    /// when the window spans many decades.
    pub fn log_chart(&self) -> Result<Measure> {
        let Group::MultiplicativeReals { lo, hi } = self.group else {
            return Err(Error::Unsupported("log chart of a non-multiplicative group".into()));
        };
        Ok(Measure::new(
            Space::interval(lo.ln(), hi.ln())?,
            Density::constant(self.scale),
            format!("haar({})[log]", self.group),
        ))
    }
}

/// Checks `|m(gA) - m(A)| <= tol` over every sampled pair. Pairs whose
/// translate leaves the window or the measure's space are counted as
/// inconclusive rather than failures.
pub fn check_invariance(
    m: &Measure,
    group: &Group,
    sets: &[MeasurableSet],
    samples: &[GroupElement],
    tol: f64,
) -> Result<VerificationReport> {
    let cfg = Integrator::default();
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    let mut inconclusive = 0usize;
    for a in sets {
        let base = crate::measure::mass(m, a, &cfg)?;
        for g in samples {
            let ga = match group.translate_set(g, a) {
                Ok(s) => s,
                Err(Error::WindowOverflow { .. }) => {
                    inconclusive += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            match crate::measure::mass(m, &ga, &cfg) {
                Ok(v) => {
                    worst = worst.max((v - base).abs());
                    checked += 1;
                }
                Err(Error::Domain(_)) => inconclusive += 1,
                Err(e) => return Err(e),
            }
        }
    }
    let scope = format!(
        "{checked} translates checked, {inconclusive} inconclusive{}",
        if group.is_finite() { "" } else { "; sampled translates only" }
    );
    if checked == 0 {
        return Ok(VerificationReport::skipped("haar-invariance", m.label(), &scope));
    }
    Ok(VerificationReport::le("haar-invariance", m.label(), worst, 0.0, tol).with_scope(scope))
}
