#![allow(dead_code)]

use haarent::dsl::{self, Expr};
use haarent::measure::Space;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS: [&str; 50] = [
    "1",
    "x",
    "-x",
    "x + 1",
    "x - 1 - 2",
    "2 * x + 3",
    "x / 2 / 4",
    "x ^ 2",
    "-x ^ 2",
    "2 ^ -1",
    "2 ^ 3 ^ 2",
    "(x + 1) * (x - 1)",
    "1 / x",
    "exp(-x)",
    "exp(-x ^ 2 / 2)",
    "log(x)",
    "log(1 + x)",
    "abs(x - 0.5)",
    "sqrt(x)",
    "sqrt(1 - x ^ 2)",
    "min(x, 1)",
    "max(x, 1 - x)",
    "min(max(x, 0.2), 0.8)",
    "pi",
    "e",
    "2 * pi * x",
    "e ^ x",
    "x * log(x)",
    "-(x * log(x))",
    "1 / (1 + exp(-x))",
    "0.001",
    "1e-3 * x",
    "2.5e2",
    "x ^ 0.5",
    "(x - 1) ^ 2 + (x + 1) ^ 2",
    "abs(x) / (1 + abs(x))",
    "log(exp(x))",
    "exp(log(2) * x)",
    "max(0, 1 - abs(x))",
    "3 - -x",
    "x * -2",
    "---x",
    "piecewise{x < 1: x; else: 1}",
    "piecewise{x <= 0: 0; 0 < x < 1: x; 1 <= x: 1}",
    "piecewise{x < 0.5: 2; 0.5 <= x <= 1: 0}",
    "piecewise{0 <= x < 1: x / 2; 1 <= x <= 2: 1 / 2;}",
    "piecewise{x < pi: 1; else: 0}",
    "1 + piecewise{x < 1: x ^ 2; else: 2 * x - 1}",
    "min(piecewise{x < 0: -x; else: x}, 3)",
    "log(x) / log(2)",
];

/// Parses, prints and reparses every corpus entry; the two trees must match
/// and evaluate bit-identically.
pub fn corpus_roundtrip() -> Result<usize, String> {
    for src in CORPUS {
        let e = dsl::parse(src).map_err(|err| format!("{src}: {err}"))?;
        let printed = e.to_string();
        let again = dsl::parse(&printed).map_err(|err| format!("{printed}: {err}"))?;
        if e != again || printed != again.to_string() {
            return Err(format!("{src} -> {printed}"));
        }
        for x in [0.1, 0.5, 1.5] {
            match (e.eval(x), again.eval(x)) {
                (Ok(a), Ok(b)) if a.to_bits() == b.to_bits() => {}
                (Err(_), Err(_)) => {}
                other => return Err(format!("{src} at {x}: {other:?}")),
            }
        }
    }
    Ok(CORPUS.len())
}

/// Test-side expression tree, printed to source and evaluated without the
/// library.
#[derive(Debug, Clone)]
pub enum R {
    Num(f64),
    X,
    Neg(Box<R>),
    Bin(char, Box<R>, Box<R>),
    Call(&'static str, Vec<R>),
    Step(f64, Box<R>, Box<R>),
}

impl R {
    fn random(rng: &mut ChaCha8Rng, depth: u32) -> R {
        if depth == 0 || rng.gen_bool(0.25) {
            return if rng.gen_bool(0.5) { R::X } else { R::Num((rng.gen_range(0.0..10.0f64) * 1000.0).round() / 1000.0) };
        }
        let sub = |rng: &mut ChaCha8Rng| Box::new(R::random(rng, depth - 1));
        match rng.gen_range(0..6) {
            0 => R::Neg(sub(rng)),
            1 | 2 => {
                let op = ['+', '-', '*', '/', '^'][rng.gen_range(0..5)];
                R::Bin(op, sub(rng), sub(rng))
            }
            3 => {
                let f = ["exp", "log", "abs", "sqrt"][rng.gen_range(0..4)];
                R::Call(f, vec![R::random(rng, depth - 1)])
            }
            4 => {
                let f = ["min", "max"][rng.gen_range(0..2)];
                R::Call(f, vec![R::random(rng, depth - 1), R::random(rng, depth - 1)])
            }
            _ => R::Step(rng.gen_range(-2.0..2.0), sub(rng), sub(rng)),
        }
    }

    fn src(&self) -> String {
        match self {
            R::Num(v) => format!("{v:?}"),
            R::X => "x".into(),
            R::Neg(a) => format!("-({})", a.src()),
            R::Bin(op, a, b) => format!("({}) {op} ({})", a.src(), b.src()),
            R::Call(f, args) => {
                let inner: Vec<String> = args.iter().map(R::src).collect();
                format!("{f}({})", inner.join(", "))
            }
            R::Step(c, a, b) => format!("piecewise{{x < {c:?}: {}; else: {}}}", a.src(), b.src()),
        }
    }

    fn eval(&self, x: f64) -> Option<f64> {
        let v = match self {
            R::Num(v) => *v,
            R::X => x,
            R::Neg(a) => -a.eval(x)?,
            R::Bin(op, a, b) => {
                let (l, r) = (a.eval(x)?, b.eval(x)?);
                match op {
                    '+' => l + r,
                    '-' => l - r,
                    '*' => l * r,
                    '/' if r == 0.0 => return None,
                    '/' => l / r,
                    _ => l.powf(r),
                }
            }
            R::Call(f, args) => {
                let a = args[0].eval(x)?;
                match *f {
                    "exp" => a.exp(),
                    "log" if a <= 0.0 => return None,
                    "log" => a.ln(),
                    "abs" => a.abs(),
                    "sqrt" if a < 0.0 => return None,
                    "sqrt" => a.sqrt(),
                    "min" => a.min(args[1].eval(x)?),
                    _ => a.max(args[1].eval(x)?),
                }
            }
            R::Step(c, a, b) => return if x < *c { a.eval(x) } else { b.eval(x) },
        };
        v.is_finite().then_some(v)
    }
}

/// Evaluates random trees at `points` random abscissae with both the library
/// and the test-side evaluator. Returns how many values were finite.
pub fn reference_agreement(points: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut agreed = 0;
    while done < points {
        let r = R::random(&mut rng, 5);
        let src = r.src();
        let e: Expr = dsl::parse(&src).map_err(|err| format!("{src}: {err}"))?;
        for _ in 0..5 {
            let x: f64 = rng.gen_range(-3.0..3.0);
            match (e.eval(x), r.eval(x)) {
                (Ok(a), Some(b)) if a.to_bits() == b.to_bits() => agreed += 1,
                (Err(_), None) => {}
                (got, want) => return Err(format!("{src} at {x}: library {got:?}, reference {want:?}")),
            }
            done += 1;
        }
    }
    Ok(agreed)
}

const PIECES: [&str; 32] = [
    "x", "1", "0.5", "1e3", "-", "+", "*", "/", "^", "(", ")", "(", ")", ",", "exp", "log", "sqrt", "min",
    "piecewise", "{", "}", ":", ";", "<", "<=", "else", "pi", "y", "[", "]", "∪", " ",
];

/// Feeds `count` random inputs through every DSL entry point.
pub fn fuzz(count: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = Space::interval(-5.0, 5.0).unwrap();
    let atoms = Space::indexed(6).unwrap();
    for i in 0..count {
        let src: String = if i % 4 == 0 {
            // raw bytes, including invalid tokens
            let len = rng.gen_range(0..24);
            (0..len).map(|_| char::from(rng.gen_range(32u8..127))).collect()
        } else {
            let len = rng.gen_range(0..16);
            (0..len).map(|_| PIECES[rng.gen_range(0..PIECES.len())]).collect::<Vec<_>>().join("")
        };
        if let Ok(e) = dsl::parse(&src) {
            let _ = e.eval(rng.gen_range(-5.0..5.0));
            let _ = e.breakpoints(&space.full_set());
            let _ = e.to_string();
        }
        let _ = dsl::parse_set(&src, &space);
        let _ = dsl::parse_set(&src, &atoms);
    }
}
