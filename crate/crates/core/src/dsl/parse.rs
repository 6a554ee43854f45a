use std::f64::consts::{E, PI};

use super::{BinOp, Bound, Expr, Func, Guard, ParseError, MAX_DEPTH};
use crate::error::{Error, Result};
use crate::measure::{MeasurableSet, Space};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: usize,
    text: String,
}

const SYMBOLS: [&str; 17] = [
    "<=", ">=", "+", "-", "*", "/", "^", "(", ")", ",", "{", "}", ";", ":", "<", ">", "|",
];

fn lex(src: &str) -> std::result::Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().expect("in bounds");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < src.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < src.len() && bytes[i] == b'.' {
                i += 1;
                while i < src.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < src.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < src.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < src.len() && bytes[j].is_ascii_digit() {
                    while j < src.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| err(start, &["number"], text))?;
            if !v.is_finite() {
                return Err(err(start, &["finite number"], text));
            }
            out.push(Token {
                tok: Tok::Num(v),
                start,
                text: text.to_string(),
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < src.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                start,
                text: src[start..i].to_string(),
            });
            continue;
        }
        if c == '∪' || c == '[' || c == ']' {
            i += c.len_utf8();
            let sym = match c {
                '∪' => "|",
                '[' => "[",
                _ => "]",
            };
            out.push(Token {
                tok: Tok::Sym(sym),
                start,
                text: c.to_string(),
            });
            continue;
        }
        match SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            Some(s) => {
                i += s.len();
                out.push(Token {
                    tok: Tok::Sym(s),
                    start,
                    text: s.to_string(),
                });
            }
            None => return Err(err(start, &["token"], &c.to_string())),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        start: src.len(),
        text: "end of input".into(),
    });
    Ok(out)
}

fn err(offset: usize, expected: &[&str], found: &str) -> ParseError {
    ParseError {
        offset,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.to_string(),
    }
}

const ATOM_START: [&str; 5] = ["number", "\"x\"", "function", "\"(\"", "\"-\""];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek().tok, Tok::Sym(t) if t == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &'static str) -> PResult<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("\"{sym}\"")]))
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        err(t.start, expected, &t.text)
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == name)
    }

    fn descend(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.unexpected(&["shallower nesting"]));
        }
        Ok(())
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinOp::Mul
            } else if self.eat("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        self.descend()?;
        let e = if self.eat("-") {
            Expr::Neg(Box::new(self.unary()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if self.eat("^") {
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(*v))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => {
                    self.bump();
                    Ok(Expr::Var)
                }
                "pi" => {
                    self.bump();
                    Ok(Expr::Num(PI))
                }
                "e" => {
                    self.bump();
                    Ok(Expr::Num(E))
                }
                "piecewise" => {
                    self.bump();
                    self.piecewise()
                }
                other => match Func::from_name(other) {
                    Some(f) => {
                        self.bump();
                        self.expect("(")?;
                        let mut args = vec![self.expr()?];
                        for _ in 1..f.arity() {
                            self.expect(",")?;
                            args.push(self.expr()?);
                        }
                        self.expect(")")?;
                        Ok(Expr::Call(f, args))
                    }
                    None => Err(self.unexpected(&ATOM_START)),
                },
            },
            _ => Err(self.unexpected(&ATOM_START)),
        }
    }

    /// A constant expression, folded to its value.
    fn constant(&mut self) -> PResult<f64> {
        let start = self.peek().start;
        let first = self.peek().text.clone();
        let e = self.expr()?;
        if e.contains_var() {
            return Err(err(start, &["constant expression"], &first));
        }
        e.eval(0.0).map_err(|_| err(start, &["finite constant"], &first))
    }

    fn comparison(&mut self) -> Option<&'static str> {
        for s in ["<=", ">=", "<", ">"] {
            if self.eat(s) {
                return Some(s);
            }
        }
        None
    }

    fn guard(&mut self) -> PResult<Guard> {
        let is_cmp = |t: &Tok| matches!(t, Tok::Sym("<" | "<=" | ">" | ">="));
        if self.is_ident("x") && is_cmp(self.peek_at(1)) {
            self.bump();
            let op = self.comparison().expect("checked above");
            let value = self.constant()?;
            let b = Some(Bound {
                value,
                inclusive: op.ends_with('='),
            });
            return Ok(if op.starts_with('<') {
                Guard { lo: None, hi: b }
            } else {
                Guard { lo: b, hi: None }
            });
        }
        let lo = self.constant()?;
        let op = match self.comparison() {
            Some(op @ ("<" | "<=")) => op,
            _ => return Err(self.unexpected(&["\"<\"", "\"<=\""])),
        };
        if !self.is_ident("x") {
            return Err(self.unexpected(&["\"x\""]));
        }
        self.bump();
        let lo = Some(Bound {
            value: lo,
            inclusive: op == "<=",
        });
        let hi = if self.peek_at(0) == &Tok::Sym("<") || self.peek_at(0) == &Tok::Sym("<=") {
            let op = self.comparison().expect("checked above");
            Some(Bound {
                value: self.constant()?,
                inclusive: op == "<=",
            })
        } else {
            None
        };
        Ok(Guard { lo, hi })
    }

    fn piecewise(&mut self) -> PResult<Expr> {
        self.expect("{")?;
        let mut branches: Vec<(Guard, Expr)> = Vec::new();
        let mut otherwise = None;
        loop {
            if self.is_ident("else") {
                self.bump();
                self.expect(":")?;
                otherwise = Some(Box::new(self.expr()?));
                self.eat(";");
                self.expect("}")?;
                break;
            }
            let at = self.peek().start;
            let text = self.peek().text.clone();
            let g = self.guard()?;
            let empty = g.lower() > g.upper()
                || (g.lower() == g.upper() && !(g.lo.is_some_and(|b| b.inclusive) && g.hi.is_some_and(|b| b.inclusive)));
            let overlaps = branches.last().is_some_and(|(prev, _)| {
                prev.upper() > g.lower()
                    || (prev.upper() == g.lower()
                        && prev.hi.is_none_or(|b| b.inclusive)
                        && g.lo.is_none_or(|b| b.inclusive))
            });
            if empty || overlaps {
                return Err(err(at, &["nonempty guard to the right of the previous one"], &text));
            }
            self.expect(":")?;
            branches.push((g, self.expr()?));
            if self.eat(";") {
                if self.eat("}") {
                    break;
                }
            } else if self.eat("}") {
                break;
            } else {
                return Err(self.unexpected(&["\";\"", "\"}\""]));
            }
        }
        Ok(Expr::Piecewise { branches, otherwise })
    }

    fn end(&self) -> PResult<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["operator", "end of input"]))
        }
    }
}

/// Parses a density expression.
pub fn parse(src: &str) -> std::result::Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let e = p.expr()?;
    p.end()?;
    Ok(e)
}

/// Parses a set inside `space`: `[a,b]∪[c,d]` on intervals (bounds may be
/// constant expressions such as `e^2`), `{1,3,5}` on finite spaces. Atom
/// entries are matched against labels first, then read as indices. `∅`
/// and `{}` denote the empty set.
pub fn parse_set(src: &str, space: &Space) -> Result<MeasurableSet> {
    let trimmed = src.trim();
    if trimmed == "∅" {
        return Ok(match space {
            Space::Finite { .. } => MeasurableSet::atoms([]),
            Space::Interval { .. } => MeasurableSet::intervals(Vec::new())?,
        });
    }
    let lead = src.len() - src.trim_start().len();
    if trimmed.starts_with('{') {
        return parse_atoms(trimmed, lead, space);
    }
    if space.is_finite() {
        return Err(err(lead, &["\"{\""], &trimmed.chars().take(1).collect::<String>()).into());
    }
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let mut pieces = Vec::new();
    loop {
        p.expect("[")?;
        let lo = p.constant()?;
        p.expect(",")?;
        let hi = p.constant()?;
        p.expect("]")?;
        pieces.push((lo, hi));
        let union = p.eat("|") || (p.is_ident("U") && {
            p.bump();
            true
        });
        if !union {
            break;
        }
    }
    p.end()?;
    let set = MeasurableSet::intervals(pieces)?;
    space.ensure_contains(&set)?;
    Ok(set)
}

fn parse_atoms(src: &str, offset: usize, space: &Space) -> Result<MeasurableSet> {
    let Some(inner) = src.strip_prefix('{').and_then(|s| s.strip_suffix('}')) else {
        return Err(err(offset + src.len(), &["\"}\""], "end of input").into());
    };
    let n = match space.len() {
        Some(n) if space.is_finite() => n,
        _ => return Err(err(offset, &["\"[\""], "{").into()),
    };
    let mut idx = Vec::new();
    let mut at = offset + 1;
    for item in inner.split(',') {
        let name = item.trim();
        let here = at + (item.len() - item.trim_start().len());
        at += item.len() + 1;
        if name.is_empty() {
            if inner.trim().is_empty() {
                break;
            }
            return Err(err(here, &["atom"], ",").into());
        }
        let i = match space.atom_index(name) {
            Some(i) => i,
            None => match name.parse::<usize>() {
                Ok(i) if i < n => i,
                _ => {
                    return Err(Error::Domain(format!(
                        "unknown atom '{name}' at byte {here} (space has {n} atoms)"
                    )))
                }
            },
        };
        idx.push(i);
    }
    Ok(MeasurableSet::atoms(idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_on_intervals() {
        let sp = Space::interval(0.0, 10.0).unwrap();
        let s = parse_set("[0,1]∪[2,3]", &sp).unwrap();
        assert_eq!(s, MeasurableSet::intervals(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap());
        let s = parse_set(" [1, e^2] U [9, 10]", &sp).unwrap();
        assert_eq!(s.endpoints()[1], std::f64::consts::E.powf(2.0));
        assert_eq!(parse_set("[0,1]|[1,2]", &sp).unwrap(), MeasurableSet::interval(0.0, 2.0).unwrap());
        assert!(parse_set("[0,11]", &sp).is_err());
        assert!(parse_set("[0,x]", &sp).is_err());
        assert!(parse_set("[0,1", &sp).is_err());
        assert!(parse_set("{1}", &sp).is_err());
        assert!(parse_set("∅", &sp).unwrap().is_empty());
    }

    #[test]
    fn sets_on_finite_spaces() {
        let die = Space::finite(["1", "2", "3", "4", "5", "6"]).unwrap();
        assert_eq!(parse_set("{6}", &die).unwrap(), MeasurableSet::atoms([5]));
        assert_eq!(parse_set("{1, 3,5}", &die).unwrap(), MeasurableSet::atoms([0, 2, 4]));
        assert!(parse_set("{}", &die).unwrap().is_empty());
        assert!(parse_set("{7}", &die).is_err());
        assert!(parse_set("{1,,2}", &die).is_err());
        assert!(parse_set("[0,1]", &die).is_err());
        let z = Space::indexed(4).unwrap();
        assert_eq!(parse_set("{0,3}", &z).unwrap(), MeasurableSet::atoms([0, 3]));
    }
}
