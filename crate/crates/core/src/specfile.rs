//! JSON measure specifications.
//!
//! ```json
//! {
//!   "space":   {"kind": "interval", "bounds": [1, "e^2"]},
//!   "density": {"kind": "expr", "payload": "1/x"},
//!   "label":   "haar"
//! }
//! ```
//!
//! Spaces are `{"kind": "interval", "bounds": [a, b]}` (bounds are numbers
//! or constant DSL expressions), `{"kind": "finite", "atoms": [..]}` or
//! `{"kind": "finite", "size": n}`. Densities are `expr` (a DSL string,
//! evaluated at the atom index on finite spaces), `table` (per-atom values,
//! or equal-width cells on an interval) or `builtin`: `lebesgue`,
//! `counting`, `haar:R*` (`1/x`) or `uniform` (unit total mass).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dsl;
use crate::error::{Error, Result};
use crate::measure::{Density, Measure, Space};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Num(f64),
    Expr(String),
}

impl Bound {
    fn value(&self) -> Result<f64> {
        match self {
            Bound::Num(v) => Ok(*v),
            Bound::Expr(s) => {
                let e = dsl::parse(s)?;
                if e.contains_var() {
                    return Err(Error::Spec(format!("bound '{s}' must be constant")));
                }
                Ok(e.eval(0.0)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceSpec {
    Interval {
        bounds: [Bound; 2],
    },
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atoms: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        size: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "lowercase")]
pub enum DensitySpec {
    Expr(String),
    Table(Vec<f64>),
    Builtin(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub space: SpaceSpec,
    pub density: DensitySpec,
    #[serde(default)]
    pub label: String,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Space> {
        match self {
            SpaceSpec::Interval { bounds } => Space::interval(bounds[0].value()?, bounds[1].value()?),
            SpaceSpec::Finite { atoms: Some(a), size: None } => Space::finite(a.iter().cloned()),
            SpaceSpec::Finite { atoms: None, size: Some(n) } => Space::indexed(*n),
            SpaceSpec::Finite { .. } => Err(Error::Spec("finite space needs exactly one of 'atoms' or 'size'".into())),
        }
    }
}

impl MeasureSpec {
    pub fn from_json(text: &str) -> Result<MeasureSpec> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn build(&self) -> Result<Measure> {
        let space = self.space.build()?;
        let density = build_density(&self.density, &space)?;
        let label = if self.label.is_empty() {
            match &self.density {
                DensitySpec::Expr(s) | DensitySpec::Builtin(s) => s.clone(),
                DensitySpec::Table(_) => "table".to_string(),
            }
        } else {
            self.label.clone()
        };
        Ok(Measure::new(space, density, label))
    }
}

fn build_density(spec: &DensitySpec, space: &Space) -> Result<Density> {
    match spec {
        DensitySpec::Builtin(name) => builtin(name, space),
        DensitySpec::Table(values) => {
            if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::Spec(format!("table entries must be finite and nonnegative, got {v}")));
            }
            match *space {
                Space::Finite { ref atoms } => {
                    if values.len() != atoms.len() {
                        return Err(Error::Spec(format!(
                            "table has {} entries for {} atoms",
                            values.len(),
                            atoms.len()
                        )));
                    }
                    Ok(Density::table(values.clone()))
                }
                Space::Interval { lo, hi } => {
                    if values.is_empty() {
                        return Err(Error::Spec("empty table".into()));
                    }
                    let n = values.len();
                    let mut edges: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
                    edges.push(hi);
                    Ok(Density::piecewise_constant(edges, values.clone()))
                }
            }
        }
        DensitySpec::Expr(src) => {
            let e = dsl::parse(src)?;
            let full = space.full_set();
            if !e.contains_var() {
                let c = e.eval(0.0)?;
                if c < 0.0 {
                    return Err(Error::Spec(format!("density '{src}' is negative")));
                }
                return Ok(Density::constant(c));
            }
            let breaks = e.breakpoints(&full);
            for x in space.check_points(&full, &breaks) {
                let v = e.eval(x)?;
                if v < 0.0 {
                    return Err(Error::Spec(format!("density '{src}' is negative ({v}) at x={x}")));
                }
            }
            Ok(Density::new(move |x| e.eval(x).unwrap_or(f64::NAN)).with_breakpoints(breaks))
        }
    }
}

fn builtin(name: &str, space: &Space) -> Result<Density> {
    match (name, space) {
        ("lebesgue", Space::Interval { .. }) | ("counting", Space::Finite { .. }) => Ok(Density::constant(1.0)),
        ("haar:R*", Space::Interval { lo, .. }) if *lo > 0.0 => {
            let lo = *lo;
            Ok(Density::new(|x| 1.0 / x).with_analytic_sup(1.0 / lo))
        }
        ("uniform", Space::Interval { lo, hi }) => Ok(Density::constant(1.0 / (hi - lo))),
        ("uniform", Space::Finite { atoms }) => Ok(Density::constant(1.0 / atoms.len() as f64)),
        ("lebesgue" | "counting" | "haar:R*", _) => {
            Err(Error::Spec(format!("builtin '{name}' does not apply to space {space}")))
        }
        _ => Err(Error::Spec(format!(
            "unknown builtin '{name}' (expected lebesgue, counting, haar:R* or uniform)"
        ))),
    }
}

/// Reads and builds a measure spec file.
pub fn load(path: &Path) -> Result<Measure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Spec(format!("cannot read {}: {e}", path.display())))?;
    MeasureSpec::from_json(&text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasurableSet;

    fn build(json: &str) -> Result<Measure> {
        MeasureSpec::from_json(json)?.build()
    }

    #[test]
    fn interval_expr_spec() {
        let m = build(r#"{"space":{"kind":"interval","bounds":[1,"e"]},"density":{"kind":"expr","payload":"1/x"},"label":"h"}"#)
            .unwrap();
        assert_eq!(m.label(), "h");
        let v = m.mass(&m.space().full_set()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn builtins() {
        let m = build(r#"{"space":{"kind":"interval","bounds":[0,2]},"density":{"kind":"builtin","payload":"uniform"}}"#)
            .unwrap();
        assert_eq!(m.mass(&m.space().full_set()).unwrap(), 1.0);
        assert_eq!(m.label(), "uniform");
        let c = build(r#"{"space":{"kind":"finite","size":6},"density":{"kind":"builtin","payload":"counting"}}"#).unwrap();
        assert_eq!(c.mass(&MeasurableSet::atoms([5])).unwrap(), 1.0);
        let h = build(r#"{"space":{"kind":"interval","bounds":[2,8]},"density":{"kind":"builtin","payload":"haar:R*"}}"#)
            .unwrap();
        assert!((h.mass(&h.space().full_set()).unwrap() - 4f64.ln()).abs() < 1e-10);
        assert!(build(r#"{"space":{"kind":"interval","bounds":[-1,8]},"density":{"kind":"builtin","payload":"haar:R*"}}"#).is_err());
        assert!(build(r#"{"space":{"kind":"finite","size":3},"density":{"kind":"builtin","payload":"lebesgue"}}"#).is_err());
    }

    #[test]
    fn tables() {
        let m = build(r#"{"space":{"kind":"finite","atoms":["a","b","c"]},"density":{"kind":"table","payload":[0.5,0,2]}}"#)
            .unwrap();
        assert_eq!(m.mass(&m.space().full_set()).unwrap(), 2.5);
        let m = build(r#"{"space":{"kind":"interval","bounds":[0,1]},"density":{"kind":"table","payload":[1,3]}}"#).unwrap();
        assert!((m.mass(&m.space().full_set()).unwrap() - 2.0).abs() < 1e-14);
        assert!(build(r#"{"space":{"kind":"finite","size":2},"density":{"kind":"table","payload":[1]}}"#).is_err());
        assert!(build(r#"{"space":{"kind":"finite","size":1},"density":{"kind":"table","payload":[-1]}}"#).is_err());
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(build(r#"{"space":{"kind":"interval","bounds":[0,1]},"density":{"kind":"expr","payload":"x-0.5"}}"#).is_err());
        assert!(matches!(
            build(r#"{"space":{"kind":"interval","bounds":[0,1]},"density":{"kind":"expr","payload":"1 +"}}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            build(r#"{"space":{"kind":"interval","bounds":[0,1]},"density":{"kind":"expr","payload":"log(x)"}}"#),
            Err(Error::Eval(_))
        ));
        assert!(build(r#"{"space":{"kind":"finite"},"density":{"kind":"builtin","payload":"counting"}}"#).is_err());
        assert!(build(r#"{"space":{"kind":"disk"},"density":{"kind":"builtin","payload":"counting"}}"#).is_err());
        assert!(build("not json").is_err());
    }

    #[test]
    fn json_roundtrip() {
        let spec = MeasureSpec {
            space: SpaceSpec::Interval {
                bounds: [Bound::Num(0.0), Bound::Expr("pi".into())],
            },
            density: DensitySpec::Expr("sin".into()),
            label: "s".into(),
        };
        assert_eq!(MeasureSpec::from_json(&spec.to_json()).unwrap(), spec);
    }
}
