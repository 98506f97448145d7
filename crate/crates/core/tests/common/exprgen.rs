//! Random expression generator with an independent reference evaluator.
//!
//! Each generated tree prints to source text and evaluates itself with plain
//! `f64` operations in the same order the language prescribes, so parser and
//! evaluator can be compared bit for bit.

use rand::Rng;

#[derive(Debug, Clone)]
pub enum Node {
    Num(f64),
    X1,
    X2,
    Pi,
    E,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(&'static str, Box<Node>),
}

const FUNCS: [&str; 8] = ["sin", "cos", "tan", "exp", "ln", "sqrt", "abs", "sgn"];

pub fn random_node(rng: &mut impl Rng, depth: u32) -> Node {
    let leaf = depth == 0 || rng.random_bool(0.25);
    if leaf {
        return match rng.random_range(0..5) {
            0 => Node::Num((rng.random_range(0.0..10.0f64) * 100.0).round() / 100.0),
            1 => Node::X1,
            2 => Node::X2,
            3 => Node::Pi,
            _ => Node::E,
        };
    }
    let sub = |rng: &mut _| Box::new(random_node(rng, depth - 1));
    match rng.random_range(0..8) {
        0 => Node::Neg(sub(rng)),
        1 => Node::Add(sub(rng), sub(rng)),
        2 => Node::Sub(sub(rng), sub(rng)),
        3 => Node::Mul(sub(rng), sub(rng)),
        4 => Node::Div(sub(rng), sub(rng)),
        5 => Node::Pow(sub(rng), sub(rng)),
        _ => Node::Call(FUNCS[rng.random_range(0..FUNCS.len())], sub(rng)),
    }
}

impl Node {
    /// Binary operands are parenthesized; unary minus is not, so `-(a)^(b)`
    /// exercises `^` binding tighter than negation.
    pub fn text(&self) -> String {
        match self {
            Node::Num(v) => format!("{v}"),
            Node::X1 => "x1".into(),
            Node::X2 => "x2".into(),
            Node::Pi => "pi".into(),
            Node::E => "e".into(),
            Node::Neg(a) => match **a {
                Node::Add(..) | Node::Sub(..) | Node::Mul(..) | Node::Div(..) => format!("-({})", a.text()),
                _ => format!("-{}", a.text()),
            },
            Node::Add(a, b) => format!("({}) + ({})", a.text(), b.text()),
            Node::Sub(a, b) => format!("({}) - ({})", a.text(), b.text()),
            Node::Mul(a, b) => format!("({}) * ({})", a.text(), b.text()),
            Node::Div(a, b) => format!("({}) / ({})", a.text(), b.text()),
            Node::Pow(a, b) => format!("({})^({})", a.text(), b.text()),
            Node::Call(f, a) => format!("{f}({})", a.text()),
        }
    }

    /// `None` on a domain violation or a non-finite intermediate.
    pub fn eval(&self, x1: f64, x2: f64) -> Option<f64> {
        let v = match self {
            Node::Num(v) => *v,
            Node::X1 => x1,
            Node::X2 => x2,
            Node::Pi => std::f64::consts::PI,
            Node::E => std::f64::consts::E,
            Node::Neg(a) => -a.eval(x1, x2)?,
            Node::Add(a, b) => a.eval(x1, x2)? + b.eval(x1, x2)?,
            Node::Sub(a, b) => a.eval(x1, x2)? - b.eval(x1, x2)?,
            Node::Mul(a, b) => a.eval(x1, x2)? * b.eval(x1, x2)?,
            Node::Div(a, b) => {
                let (p, q) = (a.eval(x1, x2)?, b.eval(x1, x2)?);
                if q == 0.0 {
                    return None;
                }
                p / q
            }
            Node::Pow(a, b) => a.eval(x1, x2)?.powf(b.eval(x1, x2)?),
            Node::Call(f, a) => {
                let a = a.eval(x1, x2)?;
                match *f {
                    "sin" => a.sin(),
                    "cos" => a.cos(),
                    "tan" => a.tan(),
                    "exp" => a.exp(),
                    "ln" if a > 0.0 => a.ln(),
                    "sqrt" if a >= 0.0 => a.sqrt(),
                    "abs" => a.abs(),
                    "sgn" => {
                        if a > 0.0 {
                            1.0
                        } else if a < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                    }
                    _ => return None,
                }
            }
        };
        v.is_finite().then_some(v)
    }
}

/// Outcome of one comparison.
#[derive(Debug)]
#[allow(dead_code)] // read through Debug in failure messages
pub struct Mismatch {
    pub text: String,
    pub x1: f64,
    pub x2: f64,
    pub expected: Option<f64>,
    pub got: Result<f64, String>,
}

/// Generate `count` expressions, evaluate each at a few points, and collect
/// disagreements (value bits or error-vs-value).
pub fn differential(seed: u64, count: usize) -> Vec<Mismatch> {
    use bonnetlab::exprlang::{evaluate, parse};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..count {
        let node = random_node(&mut rng, 4);
        let text = node.text();
        let expr = match parse(&text) {
            Ok(e) => e,
            Err(e) => {
                out.push(Mismatch {
                    text,
                    x1: f64::NAN,
                    x2: f64::NAN,
                    expected: None,
                    got: Err(format!("parse: {e}")),
                });
                continue;
            }
        };
        for _ in 0..3 {
            let (x1, x2) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let expected = node.eval(x1, x2);
            let got = evaluate(&expr, x1, x2).map_err(|e| e.to_string());
            let agree = match (&expected, &got) {
                (Some(a), Ok(b)) => a.to_bits() == b.to_bits(),
                (None, Err(_)) => true,
                _ => false,
            };
            if !agree {
                out.push(Mismatch { text: text.clone(), x1, x2, expected, got });
            }
        }
    }
    out
}
