//! A tiny arithmetic language for closed-form scenario fields.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' exponent)?
//! exponent:= (number | '(' expr ')') ('^' exponent)?
//! primary := number | x1 | x2 | pi | e | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | exp | ln | sqrt | abs | sgn
//! ```
//!
//! `^` binds tighter than unary minus (`-x1^2 == -(x1^2)`) and is right-associative.

mod ast;
mod eval;
mod parser;

pub use ast::{BinOp, Constant, Expr, ExprKind, Func, Var};
pub use eval::{evaluate, sample};
pub use parser::parse;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("domain error in `{op}` (byte {offset}) at x1={x1}, x2={x2}: {detail}")]
    EvalDomain { op: String, offset: usize, x1: f64, x2: f64, detail: String },
    #[error("at node ({i}, {j}): {source}")]
    AtNode {
        i: usize,
        j: usize,
        #[source]
        source: Box<ExprError>,
    },
}
