//! Measure spaces, measurable sets, densities and measures.
//!
//! A measure is always stored as a density over the base coordinate measure
//! of its space: counting measure on finite spaces, Lebesgue measure on
//! intervals. On finite spaces a point is the atom index carried as `f64`,
//! so the same evaluator type serves both kinds of space.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::Integrator;

/// Relative-density slack used when classifying information measures.
pub const INFO_TOL: f64 = 1e-9;

/// Number of uniform grid points used by pointwise checks on intervals.
const CHECK_GRID: usize = 257;

#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    Finite { atoms: Arc<[String]> },
    Interval { lo: f64, hi: f64 },
}

impl Space {
    pub fn finite<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = labels.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::Domain("finite space needs at least one atom".into()));
        }
        let distinct: BTreeSet<&String> = atoms.iter().collect();
        if distinct.len() != atoms.len() {
            return Err(Error::Domain("finite space atoms must be distinct".into()));
        }
        Ok(Space::Finite {
            atoms: atoms.into(),
        })
    }

    /// Finite space with atoms labelled `0..n`.
    pub fn indexed(n: usize) -> Result<Self> {
        Space::finite((0..n).map(|i| i.to_string()))
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Space::Interval { lo, hi })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Space::Finite { .. })
    }

    /// Number of atoms, or `None` for intervals.
    pub fn len(&self) -> Option<usize> {
        match self {
            Space::Finite { atoms } => Some(atoms.len()),
            Space::Interval { .. } => None,
        }
    }

    pub fn atoms(&self) -> Option<&[String]> {
        match self {
            Space::Finite { atoms } => Some(atoms),
            Space::Interval { .. } => None,
        }
    }

    pub fn atom_index(&self, label: &str) -> Option<usize> {
        self.atoms()?.iter().position(|a| a == label)
    }

    pub fn full_set(&self) -> MeasurableSet {
        match self {
            Space::Finite { atoms } => MeasurableSet::Atoms((0..atoms.len()).collect()),
            Space::Interval { lo, hi } => MeasurableSet::Intervals(vec![(*lo, *hi)]),
        }
    }

    pub fn contains_set(&self, s: &MeasurableSet) -> bool {
        match (self, s) {
            (Space::Finite { atoms }, MeasurableSet::Atoms(idx)) => {
                idx.iter().all(|&i| i < atoms.len())
            }
            (Space::Interval { lo, hi }, MeasurableSet::Intervals(iv)) => {
                iv.iter().all(|&(a, b)| a >= *lo && b <= *hi)
            }
            _ => false,
        }
    }

    pub(crate) fn ensure_contains(&self, s: &MeasurableSet) -> Result<()> {
        if self.contains_set(s) {
            Ok(())
        } else {
            Err(Error::Domain(format!("set {s} is not contained in space {self}")))
        }
    }

    /// Points at which pointwise density conditions are checked: every atom
    /// of `s` on finite spaces, otherwise a uniform grid over each piece of
    /// `s` plus the given breakpoints and their immediate neighbours.
    pub fn check_points(&self, s: &MeasurableSet, breakpoints: &[f64]) -> Vec<f64> {
        match s {
            MeasurableSet::Atoms(idx) => idx.iter().map(|&i| i as f64).collect(),
            MeasurableSet::Intervals(iv) => {
                let mut pts = Vec::new();
                for &(a, b) in iv {
                    let h = (b - a) / (CHECK_GRID - 1) as f64;
                    pts.extend((0..CHECK_GRID).map(|k| a + h * k as f64));
                    pts.push(b);
                    let eps = 1e-9 * (b - a).max(1e-300);
                    for &p in breakpoints {
                        for q in [p - eps, p, p + eps] {
                            if q >= a && q <= b {
                                pts.push(q);
                            }
                        }
                    }
                }
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                pts
            }
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Finite { atoms } => write!(f, "finite({} atoms)", atoms.len()),
            Space::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// A subset of atoms, or a finite union of disjoint closed intervals.
///
/// Interval unions are kept sorted with overlapping or touching pieces
/// merged; zero-length pieces are dropped.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurableSet {
    Atoms(BTreeSet<usize>),
    Intervals(Vec<(f64, f64)>),
}

impl MeasurableSet {
    pub fn atoms<I: IntoIterator<Item = usize>>(idx: I) -> Self {
        MeasurableSet::Atoms(idx.into_iter().collect())
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::intervals(vec![(a, b)])
    }

    pub fn intervals(pieces: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &pieces {
            if !(a.is_finite() && b.is_finite()) || a > b {
                return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
            }
        }
        Ok(MeasurableSet::Intervals(normalize(pieces)))
    }

    pub fn is_empty(&self) -> bool {
        match self {
            MeasurableSet::Atoms(s) => s.is_empty(),
            MeasurableSet::Intervals(v) => v.is_empty(),
        }
    }

    /// Interval endpoints (empty for atom sets).
    pub fn endpoints(&self) -> Vec<f64> {
        match self {
            MeasurableSet::Atoms(_) => Vec::new(),
            MeasurableSet::Intervals(v) => v.iter().flat_map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (MeasurableSet::Atoms(a), MeasurableSet::Atoms(b)) => {
                Ok(MeasurableSet::Atoms(a.union(b).copied().collect()))
            }
            (MeasurableSet::Intervals(a), MeasurableSet::Intervals(b)) => {
                let mut all = a.clone();
                all.extend_from_slice(b);
                Ok(MeasurableSet::Intervals(normalize(all)))
            }
            _ => Err(mixed_kinds()),
        }
    }

    /// Set difference. For interval unions this is the closure of the
    /// difference, which differs from it only by a null set.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (MeasurableSet::Atoms(a), MeasurableSet::Atoms(b)) => {
                Ok(MeasurableSet::Atoms(a.difference(b).copied().collect()))
            }
            (MeasurableSet::Intervals(a), MeasurableSet::Intervals(b)) => {
                let mut out = Vec::new();
                for &(lo, hi) in a {
                    let mut cur = lo;
                    for &(c, d) in b {
                        if d <= cur || c >= hi {
                            continue;
                        }
                        if c > cur {
                            out.push((cur, c));
                        }
                        cur = cur.max(d);
                    }
                    if cur < hi {
                        out.push((cur, hi));
                    }
                }
                Ok(MeasurableSet::Intervals(normalize(out)))
            }
            _ => Err(mixed_kinds()),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        match (self, other) {
            (MeasurableSet::Atoms(a), MeasurableSet::Atoms(b)) => a.is_subset(b),
            (MeasurableSet::Intervals(a), MeasurableSet::Intervals(b)) => a
                .iter()
                .all(|&(lo, hi)| b.iter().any(|&(c, d)| c <= lo && hi <= d)),
            _ => false,
        }
    }

    /// Whether the point lies in the set (atom index for atom sets).
    pub fn contains_point(&self, x: f64) -> bool {
        match self {
            MeasurableSet::Atoms(s) => x >= 0.0 && x.fract() == 0.0 && s.contains(&(x as usize)),
            MeasurableSet::Intervals(v) => v.iter().any(|&(a, b)| a <= x && x <= b),
        }
    }
}

fn mixed_kinds() -> Error {
    Error::Domain("cannot combine an atom set with an interval union".into())
}

fn normalize(mut pieces: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pieces.retain(|&(a, b)| b > a);
    pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
    for (a, b) in pieces {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

impl fmt::Display for MeasurableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurableSet::Atoms(s) => {
                let items: Vec<String> = s.iter().map(|i| i.to_string()).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            MeasurableSet::Intervals(v) if v.is_empty() => write!(f, "∅"),
            MeasurableSet::Intervals(v) => {
                let items: Vec<String> = v.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
                write!(f, "{}", items.join("∪"))
            }
        }
    }
}

type EvalFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A nonnegative black-box evaluator with hints for quadrature and sup search.
#[derive(Clone)]
pub struct Density {
    f: Arc<EvalFn>,
    breakpoints: Vec<f64>,
    analytic_sup: Option<f64>,
    constant: Option<f64>,
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("breakpoints", &self.breakpoints)
            .field("analytic_sup", &self.analytic_sup)
            .field("constant", &self.constant)
            .finish_non_exhaustive()
    }
}

impl Density {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Density {
            f: Arc::new(f),
            breakpoints: Vec::new(),
            analytic_sup: None,
            constant: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        Density {
            f: Arc::new(move |_| c),
            breakpoints: Vec::new(),
            analytic_sup: Some(c),
            constant: Some(c),
        }
    }

    /// Per-atom values for a finite space; zero off the table.
    pub fn table(values: Vec<f64>) -> Self {
        let sup = values.iter().copied().fold(0.0, f64::max);
        let values: Arc<[f64]> = values.into();
        Density::new(move |x| {
            if x >= 0.0 && x.fract() == 0.0 {
                values.get(x as usize).copied().unwrap_or(0.0)
            } else {
                0.0
            }
        })
        .with_analytic_sup(sup)
    }

    /// `values[i]` on `[edges[i], edges[i+1])`, the last cell closed on the
    /// right; zero outside. Needs `edges.len() == values.len() + 1`, sorted.
    pub fn piecewise_constant(edges: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(edges.len(), values.len() + 1, "one more edge than value");
        let sup = values.iter().copied().fold(0.0, f64::max);
        let cells: Arc<[f64]> = values.into();
        let bounds: Arc<[f64]> = edges.clone().into();
        Density::new(move |x| {
            let n = cells.len();
            if n == 0 || x < bounds[0] || x > bounds[n] {
                return 0.0;
            }
            let i = bounds.partition_point(|&e| e <= x);
            cells[(i.max(1) - 1).min(n - 1)]
        })
        .with_breakpoints(edges)
        .with_analytic_sup(sup)
    }

    /// Linear interpolation between `(x, value)` knots, zero outside them.
    /// Knots must be sorted by `x`.
    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Self {
        let sup = knots.iter().map(|k| k.1).fold(0.0, f64::max);
        let xs: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let knots: Arc<[(f64, f64)]> = knots.into();
        Density::new(move |x| {
            let n = knots.len();
            if n == 0 || x < knots[0].0 || x > knots[n - 1].0 {
                return 0.0;
            }
            let i = knots.partition_point(|k| k.0 <= x);
            if i == 0 {
                return knots[0].1;
            }
            if i >= n {
                return knots[n - 1].1;
            }
            let (x0, y0) = knots[i - 1];
            let (x1, y1) = knots[i];
            let t = (x - x0) / (x1 - x0);
            y0 + t * (y1 - y0)
        })
        .with_breakpoints(xs)
        .with_analytic_sup(sup)
    }

    pub fn with_breakpoints(mut self, mut pts: Vec<f64>) -> Self {
        pts.extend_from_slice(&self.breakpoints);
        pts.retain(|p| p.is_finite());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        self.breakpoints = pts;
        self
    }

    pub fn with_analytic_sup(mut self, sup: f64) -> Self {
        self.analytic_sup = Some(sup);
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn analytic_sup(&self) -> Option<f64> {
        self.analytic_sup
    }

    /// The constant value, if this density is known to be constant.
    pub fn constant_value(&self) -> Option<f64> {
        self.constant
    }

    pub fn scaled(&self, c: f64) -> Density {
        let f = self.f.clone();
        Density {
            f: Arc::new(move |x| c * f(x)),
            breakpoints: self.breakpoints.clone(),
            analytic_sup: self.analytic_sup.map(|s| c * s),
            constant: self.constant.map(|k| c * k),
        }
    }

    pub fn product(&self, other: &Density) -> Density {
        if let Some(c) = self.constant {
            return other.scaled(c);
        }
        if let Some(c) = other.constant {
            return self.scaled(c);
        }
        let (f, g) = (self.f.clone(), other.f.clone());
        Density::new(move |x| {
            let a = f(x);
            if a == 0.0 {
                0.0
            } else {
                a * g(x)
            }
        })
        .with_breakpoints([self.breakpoints.clone(), other.breakpoints.clone()].concat())
    }

    /// Zero outside `s`; endpoints of `s` become breakpoints.
    pub fn restricted(&self, s: &MeasurableSet) -> Density {
        let f = self.f.clone();
        let set = s.clone();
        Density {
            f: Arc::new(move |x| if set.contains_point(x) { f(x) } else { 0.0 }),
            breakpoints: self.breakpoints.clone(),
            analytic_sup: self.analytic_sup,
            constant: None,
        }
        .with_breakpoints(s.endpoints())
    }

    /// Breakpoints shifted by a map applied to every hint.
    pub(crate) fn mapped<F, M>(&self, f: F, map_point: M) -> Density
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        M: Fn(f64) -> f64,
    {
        Density {
            f: Arc::new(f),
            breakpoints: Vec::new(),
            analytic_sup: None,
            constant: None,
        }
        .with_breakpoints(self.breakpoints.iter().map(|&p| map_point(p)).collect())
    }

    pub(crate) fn shared(&self) -> Arc<EvalFn> {
        self.f.clone()
    }
}

/// A measure given by its density over the base coordinate measure.
#[derive(Debug, Clone)]
pub struct Measure {
    space: Space,
    density: Density,
    label: String,
}

impl Measure {
    /// Counting measure on finite spaces, Lebesgue measure on intervals.
    pub fn base(space: Space) -> Measure {
        let label = if space.is_finite() { "counting" } else { "lebesgue" };
        Measure::new(space, Density::constant(1.0), label)
    }

    pub fn new(space: Space, density: Density, label: impl Into<String>) -> Measure {
        Measure {
            space,
            density,
            label: label.into(),
        }
    }

    /// The measure `f · reference`, flattened onto the base measure.
    pub fn with_reference(reference: &Measure, density: &Density, label: impl Into<String>) -> Measure {
        Measure::new(
            reference.space.clone(),
            reference.density.product(density),
            label,
        )
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Density with respect to the base coordinate measure.
    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Measure {
        self.label = label.into();
        self
    }

    pub fn scaled(&self, c: f64) -> Measure {
        Measure::new(
            self.space.clone(),
            self.density.scaled(c),
            format!("{}*{}", c, self.label),
        )
    }

    pub fn restricted(&self, s: &MeasurableSet) -> Measure {
        Measure::new(
            self.space.clone(),
            self.density.restricted(s),
            format!("{}|{}", self.label, s),
        )
    }

    pub fn mass(&self, s: &MeasurableSet) -> Result<f64> {
        mass(self, s, &Integrator::default())
    }

    pub(crate) fn ensure_same_space(&self, other: &Measure) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "measures '{}' and '{}' live on different spaces ({} vs {})",
                self.label, other.label, self.space, other.space
            )))
        }
    }
}

/// `∫_s (dm/d base) d base`: an exact sum on finite spaces, adaptive
/// quadrature on intervals.
pub fn mass(m: &Measure, s: &MeasurableSet, cfg: &Integrator) -> Result<f64> {
    m.space.ensure_contains(s)?;
    let d = m.density.clone();
    cfg.integrate(move |x| d.eval(x), s, m.density.breakpoints())
}

/// Pointwise quotient `(dm/d base) / (d ref/d base)`.
///
/// Absolute continuity is checked at the grid and breakpoint samples of the
/// whole space; points where both densities vanish get quotient 0.
pub fn radon_nikodym(m: &Measure, reference: &Measure) -> Result<Density> {
    m.ensure_same_space(reference)?;
    let breaks: Vec<f64> = [m.density.breakpoints(), reference.density.breakpoints()].concat();
    for x in m.space.check_points(&m.space.full_set(), &breaks) {
        let top = m.density.eval(x);
        if top > 0.0 && reference.density.eval(x) <= 0.0 {
            return Err(Error::AbsoluteContinuity { x, value: top });
        }
    }
    if let (Some(a), Some(b)) = (m.density.constant, reference.density.constant) {
        return Ok(Density::constant(a / b));
    }
    let (f, g) = (m.density.shared(), reference.density.shared());
    let mut q = Density::new(move |x| {
        let top = f(x);
        if top == 0.0 {
            0.0
        } else {
            top / g(x)
        }
    })
    .with_breakpoints(breaks);
    if let (Some(sup), Some(c)) = (m.density.analytic_sup, reference.density.constant) {
        if c > 0.0 {
            q = q.with_analytic_sup(sup / c);
        }
    }
    Ok(q)
}

/// Fails with [`Error::NotInformationMeasure`] if `q` exceeds `1 + tol` at
/// any check point of `s`.
pub(crate) fn ensure_information_density(
    space: &Space,
    q: &Density,
    s: &MeasurableSet,
    tol: f64,
) -> Result<()> {
    for x in space.check_points(s, q.breakpoints()) {
        let v = q.eval(x);
        if v > 1.0 + tol || v.is_nan() {
            return Err(Error::NotInformationMeasure { x, value: v });
        }
    }
    Ok(())
}

/// Extended nonnegative weight `φ`; `f64::INFINITY` marks points excluded
/// outright, where the information function `e^{-φ}` is exactly 0.
#[derive(Clone)]
pub struct WeightFunction {
    f: Arc<EvalFn>,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightFunction")
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

impl WeightFunction {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        WeightFunction {
            f: Arc::new(f),
            breakpoints: Vec::new(),
        }
    }

    pub fn constant(a: f64) -> Self {
        WeightFunction::new(move |_| a)
    }

    pub fn with_breakpoints(mut self, pts: Vec<f64>) -> Self {
        self.breakpoints = pts;
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// The information function `e^{-φ(x)}`.
    #[inline]
    pub fn information(&self, x: f64) -> f64 {
        (-self.eval(x)).exp()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

/// `φ = -log(dm/d ref)`, infinite where the relative density vanishes.
pub fn weight_of(m: &Measure, reference: &Measure) -> Result<WeightFunction> {
    let q = radon_nikodym(m, reference)?;
    ensure_information_density(&m.space, &q, &m.space.full_set(), INFO_TOL)?;
    let breaks = q.breakpoints().to_vec();
    Ok(WeightFunction::new(move |x| {
        let v = q.eval(x);
        if v == 0.0 {
            f64::INFINITY
        } else {
            -v.ln()
        }
    })
    .with_breakpoints(breaks))
}

/// The measure `e^{-φ} · ref`.
pub fn measure_of_weight(phi: &WeightFunction, reference: &Measure) -> Measure {
    let w = phi.clone();
    let info = Density::new(move |x| w.information(x)).with_breakpoints(phi.breakpoints.clone());
    Measure::with_reference(reference, &info, format!("exp(-phi)*{}", reference.label))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_constant_cells() {
        let d = Density::piecewise_constant(vec![0.0, 0.5, 2.0], vec![1.0, 3.0]);
        assert_eq!(d.eval(0.0), 1.0);
        assert_eq!(d.eval(0.49), 1.0);
        assert_eq!(d.eval(0.5), 3.0);
        assert_eq!(d.eval(2.0), 3.0);
        assert_eq!(d.eval(2.1), 0.0);
        assert_eq!(d.eval(-0.1), 0.0);
        assert_eq!(d.breakpoints(), &[0.0, 0.5, 2.0]);
        let m = Measure::new(Space::interval(0.0, 2.0).unwrap(), d, "pc");
        assert!((m.mass(&MeasurableSet::interval(0.0, 2.0).unwrap()).unwrap() - 5.0).abs() < 1e-14);
    }

    fn unit() -> Space {
        Space::interval(0.0, 1.0).unwrap()
    }

    #[test]
    fn lebesgue_mass_is_length() {
        let m = Measure::base(Space::interval(0.0, 2.0).unwrap());
        let s = MeasurableSet::interval(0.0, 2.0).unwrap();
        assert!((m.mass(&s).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn linear_density_has_unit_mass() {
        let m = Measure::new(unit(), Density::new(|x| 2.0 * x), "2x");
        let got = m.mass(&unit().full_set()).unwrap();
        // antiderivative x^2 on [0,1]
        assert!((got - 1.0).abs() < 1e-12, "{got}");
    }

    #[test]
    fn die_face_has_counting_mass_one() {
        let die = Space::finite(["1", "2", "3", "4", "5", "6"]).unwrap();
        let m = Measure::base(die.clone());
        let six = MeasurableSet::atoms([die.atom_index("6").unwrap()]);
        assert_eq!(m.mass(&six).unwrap(), 1.0);
    }

    #[test]
    fn mass_outside_space_is_domain_error() {
        let m = Measure::base(unit());
        let s = MeasurableSet::interval(0.5, 1.5).unwrap();
        assert!(matches!(m.mass(&s), Err(Error::Domain(_))));
    }

    #[test]
    fn set_normalization_merges_touching_pieces() {
        let s = MeasurableSet::intervals(vec![(2.0, 3.0), (0.0, 1.0), (1.0, 1.5), (2.5, 4.0)]).unwrap();
        assert_eq!(s, MeasurableSet::Intervals(vec![(0.0, 1.5), (2.0, 4.0)]));
        assert!(MeasurableSet::interval(1.0, 0.0).is_err());
    }

    #[test]
    fn interval_difference() {
        let a = MeasurableSet::interval(0.0, 10.0).unwrap();
        let b = MeasurableSet::intervals(vec![(2.0, 3.0), (5.0, 12.0)]).unwrap();
        assert_eq!(
            a.difference(&b).unwrap(),
            MeasurableSet::Intervals(vec![(0.0, 2.0), (3.0, 5.0)])
        );
    }

    #[test]
    fn radon_nikodym_identity_and_quotients() {
        let nu = Measure::base(unit());
        let q = radon_nikodym(&nu, &nu).unwrap();
        assert_eq!(q.eval(0.3), 1.0);

        let e = std::f64::consts::E;
        let sp = Space::interval(1.0, e).unwrap();
        let haar = Measure::new(sp.clone(), Density::new(|x| 1.0 / x), "haar");
        let q = radon_nikodym(&haar, &Measure::base(sp)).unwrap();
        assert!((q.eval(2.0) - 0.5).abs() < 1e-15);

        let sp = Space::interval(0.5, 1.0).unwrap();
        let m = Measure::new(sp.clone(), Density::new(|x| 2.0 * x), "2x");
        let r = Measure::new(sp, Density::new(|x| x), "x");
        let q = radon_nikodym(&m, &r).unwrap();
        for x in [0.5, 0.61, 0.77, 1.0] {
            assert!((q.eval(x) - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn radon_nikodym_detects_singular_reference() {
        let m = Measure::base(unit());
        let r = Measure::new(unit(), Density::new(|x| if x < 0.5 { 1.0 } else { 0.0 }), "half");
        assert!(matches!(radon_nikodym(&m, &r), Err(Error::AbsoluteContinuity { .. })));
    }

    #[test]
    fn weight_of_examples() {
        let nu = Measure::base(unit());
        let phi = weight_of(&nu, &nu).unwrap();
        assert_eq!(phi.eval(0.4), 0.0);

        let m = nu.scaled((-2.0f64).exp());
        let phi = weight_of(&m, &nu).unwrap();
        assert!((phi.eval(0.7) - 2.0).abs() < 1e-15);

        let m = Measure::new(unit(), Density::new(|x: f64| (-x).exp()), "e^-x");
        let phi = weight_of(&m, &nu).unwrap();
        for x in [0.0, 0.25, 0.9] {
            assert!((phi.eval(x) - x).abs() < 1e-15);
        }

        let too_big = Measure::new(unit(), Density::new(|x| 2.0 * x), "2x");
        assert!(matches!(weight_of(&too_big, &nu), Err(Error::NotInformationMeasure { .. })));
    }

    #[test]
    fn zero_density_gives_infinite_weight() {
        let nu = Measure::base(unit());
        let m = Measure::new(unit(), Density::new(|x| if x < 0.5 { 0.0 } else { 1.0 }), "step");
        let phi = weight_of(&m, &nu).unwrap();
        assert_eq!(phi.eval(0.1), f64::INFINITY);
        assert_eq!(phi.information(0.1), 0.0);
    }

    #[test]
    fn measure_of_weight_examples() {
        let nu = Measure::base(unit());
        let full = unit().full_set();
        let m = measure_of_weight(&WeightFunction::constant(0.0), &nu);
        assert_eq!(m.density().eval(0.3), 1.0);

        let m = measure_of_weight(&WeightFunction::constant(3.0), &nu);
        assert!((m.mass(&full).unwrap() - (-3.0f64).exp()).abs() < 1e-15);

        let m = measure_of_weight(&WeightFunction::new(|x| x), &nu);
        // antiderivative -e^{-x} on [0,1]
        let expect = 1.0 - (-1.0f64).exp();
        assert!((m.mass(&full).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 0.6321206).abs() < 1e-7);
    }
}
