//! A small expression language for densities and weight functions.
//!
//! ```text
//! expr      := term (("+" | "-") term)*
//! term      := unary (("*" | "/") unary)*
//! unary     := "-" unary | power
//! power     := atom ("^" unary)?
//! atom      := number | "x" | "pi" | "e" | func "(" expr ("," expr)? ")"
//!            | "(" expr ")" | piecewise
//! func      := "exp" | "log" | "abs" | "sqrt" | "min" | "max"
//! piecewise := "piecewise" "{" branch (";" branch)* (";" "else" ":" expr)? ";"? "}"
//! branch    := guard ":" expr
//! guard     := "x" ("<" | "<=" | ">" | ">=") const
//!            | const ("<" | "<=") "x" (("<" | "<=") const)?
//! ```
//!
//! `^` is right associative and binds tighter than unary minus, so `-x^2`
//! is `-(x^2)` while `2^-1` is `0.5`. Guard bounds are constant
//! expressions folded at parse time; guards must be disjoint and listed in
//! increasing order.
//!
//! Sets use `[a,b]∪[c,d]` (also `U` or `|` as the union sign) or atom lists
//! `{1,3,5}`; see [`parse_set`].

mod parse;

use std::fmt;

use thiserror::Error;

use crate::measure::MeasurableSet;

pub use parse::{parse, parse_set};

/// Maximum nesting depth accepted by the parser.
pub const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Abs,
    Sqrt,
    Min,
    Max,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }
}

/// One side of an interval guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub inclusive: bool,
}

/// `lo (<|<=) x (<|<=) hi`, either side optional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guard {
    pub lo: Option<Bound>,
    pub hi: Option<Bound>,
}

impl Guard {
    pub fn contains(&self, x: f64) -> bool {
        let above = match self.lo {
            Some(b) if b.inclusive => x >= b.value,
            Some(b) => x > b.value,
            None => true,
        };
        let below = match self.hi {
            Some(b) if b.inclusive => x <= b.value,
            Some(b) => x < b.value,
            None => true,
        };
        above && below
    }

    fn lower(&self) -> f64 {
        self.lo.map_or(f64::NEG_INFINITY, |b| b.value)
    }

    fn upper(&self) -> f64 {
        self.hi.map_or(f64::INFINITY, |b| b.value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
    Piecewise {
        branches: Vec<(Guard, Expr)>,
        otherwise: Option<Box<Expr>>,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at byte {offset}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot evaluate {subexpr} at x={x}: {reason}")]
pub struct EvalError {
    pub subexpr: String,
    pub x: f64,
    pub reason: String,
}

impl Expr {
    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var => true,
            Expr::Neg(a) => a.contains_var(),
            Expr::Bin(_, a, b) => a.contains_var() || b.contains_var(),
            Expr::Call(_, args) => args.iter().any(Expr::contains_var),
            Expr::Piecewise { .. } => true,
        }
    }

    /// Evaluates at `x`. Logs and square roots outside their domain,
    /// division by zero and non-finite results are errors.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Bin(op, a, b) => {
                let (l, r) = (a.eval(x)?, b.eval(x)?);
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div if r == 0.0 => return Err(self.fail(x, "division by zero")),
                    BinOp::Div => l / r,
                    BinOp::Pow => l.powf(r),
                }
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(x)?;
                match f {
                    Func::Exp => a.exp(),
                    Func::Log if a <= 0.0 => return Err(self.fail(x, "log of a nonpositive value")),
                    Func::Log => a.ln(),
                    Func::Abs => a.abs(),
                    Func::Sqrt if a < 0.0 => return Err(self.fail(x, "sqrt of a negative value")),
                    Func::Sqrt => a.sqrt(),
                    Func::Min => a.min(args[1].eval(x)?),
                    Func::Max => a.max(args[1].eval(x)?),
                }
            }
            Expr::Piecewise { branches, otherwise } => {
                return match branches.iter().find(|(g, _)| g.contains(x)) {
                    Some((_, e)) => e.eval(x),
                    None => match otherwise {
                        Some(e) => e.eval(x),
                        None => Err(self.fail(x, "no branch covers this point")),
                    },
                };
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.fail(x, "result is not finite"))
        }
    }

    fn fail(&self, x: f64, reason: &str) -> EvalError {
        EvalError {
            subexpr: self.to_string(),
            x,
            reason: reason.to_string(),
        }
    }

    /// Points inside `s` where the expression may fail to be smooth: guard
    /// bounds, and sign changes or domain edges of divisors, log and sqrt
    /// arguments, abs arguments and min/max differences. Roots are located
    /// by a grid scan refined by bisection. Finite sets have none.
    pub fn breakpoints(&self, s: &MeasurableSet) -> Vec<f64> {
        let MeasurableSet::Intervals(pieces) = s else {
            return Vec::new();
        };
        let mut watch: Vec<Expr> = Vec::new();
        let mut guards: Vec<f64> = Vec::new();
        self.collect_watch(&mut watch, &mut guards);
        let mut out = Vec::new();
        for &(a, b) in pieces {
            out.extend(guards.iter().copied().filter(|&p| p > a && p < b));
            for w in &watch {
                out.extend(roots(w, a, b));
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|p, q| (*p - *q).abs() <= 1e-12 * p.abs().max(1.0));
        out
    }

    fn collect_watch(&self, watch: &mut Vec<Expr>, guards: &mut Vec<f64>) {
        match self {
            Expr::Num(_) | Expr::Var => {}
            Expr::Neg(a) => a.collect_watch(watch, guards),
            Expr::Bin(op, a, b) => {
                if *op == BinOp::Div && b.contains_var() {
                    watch.push((**b).clone());
                }
                if *op == BinOp::Pow && a.contains_var() {
                    watch.push((**a).clone());
                }
                a.collect_watch(watch, guards);
                b.collect_watch(watch, guards);
            }
            Expr::Call(f, args) => {
                match f {
                    Func::Log | Func::Sqrt | Func::Abs if args[0].contains_var() => watch.push(args[0].clone()),
                    Func::Min | Func::Max if args[0].contains_var() || args[1].contains_var() => watch.push(
                        Expr::Bin(BinOp::Sub, Box::new(args[0].clone()), Box::new(args[1].clone())),
                    ),
                    _ => {}
                }
                for a in args {
                    a.collect_watch(watch, guards);
                }
            }
            Expr::Piecewise { branches, otherwise } => {
                for (g, e) in branches {
                    guards.extend(g.lo.iter().chain(g.hi.iter()).map(|b| b.value));
                    e.collect_watch(watch, guards);
                }
                if let Some(e) = otherwise {
                    e.collect_watch(watch, guards);
                }
            }
        }
    }
}

const SCAN: usize = 512;

/// Sign changes and exact zeros of `w` on `(a, b)`, plus edges of the
/// region where `w` evaluates at all.
fn roots(w: &Expr, a: f64, b: f64) -> Vec<f64> {
    let class = |x: f64| match w.eval(x) {
        Ok(v) if v > 0.0 => 1i8,
        Ok(v) if v < 0.0 => -1,
        Ok(_) => 0,
        Err(_) => 2,
    };
    let h = (b - a) / SCAN as f64;
    let mut out = Vec::new();
    let mut prev = (a, class(a));
    for k in 1..=SCAN {
        let x = if k == SCAN { b } else { a + h * k as f64 };
        let c = class(x);
        if c == 0 && x < b {
            out.push(x);
        } else if c != prev.1 && prev.1 != 0 {
            let (mut lo, mut hi) = (prev.0, x);
            let mut hit = None;
            loop {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                match class(mid) {
                    0 => {
                        hit = Some(mid);
                        break;
                    }
                    cm if cm == prev.1 => lo = mid,
                    _ => hi = mid,
                }
            }
            let r = hit.unwrap_or(hi);
            if r > a && r < b {
                out.push(r);
            }
        }
        prev = (x, c);
    }
    out
}

/// Shorthand for `e.eval(x)`.
pub fn evaluate(e: &Expr, x: f64) -> Result<f64, EvalError> {
    e.eval(x)
}

/// Shorthand for `e.breakpoints(s)`.
pub fn breakpoints(e: &Expr, s: &MeasurableSet) -> Vec<f64> {
    e.breakpoints(s)
}

fn fmt_num(v: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // `{:?}` is the shortest string that parses back to the same value
    write!(f, "{v:?}")
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = |b: &Bound| if b.inclusive { "<=" } else { "<" };
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => {
                fmt_num(l.value, f)?;
                write!(f, " {} x {} ", op(l), op(h))?;
                fmt_num(h.value, f)
            }
            (Some(l), None) => {
                write!(f, "x {} ", if l.inclusive { ">=" } else { ">" })?;
                fmt_num(l.value, f)
            }
            (None, Some(h)) => {
                write!(f, "x {} ", op(h))?;
                fmt_num(h.value, f)
            }
            (None, None) => write!(f, "x > -inf"),
        }
    }
}

/// Fully parenthesized; parsing the output gives back an equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => fmt_num(*v, f),
            Expr::Var => write!(f, "x"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {sym} {b})")
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Expr::Piecewise { branches, otherwise } => {
                write!(f, "piecewise {{")?;
                for (i, (g, e)) in branches.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{g}: {e}")?;
                }
                if let Some(e) = otherwise {
                    write!(f, "; else: {e}")?;
                }
                write!(f, "}}")
            }
        }
    }
}
