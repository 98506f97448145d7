use super::ast::{BinOp, Expr, ExprKind, Func, Var};
use super::ExprError;
use crate::exec;
use crate::fieldcore::{Grid2, ScalarField2};

fn domain(e: &Expr, op: &str, x1: f64, x2: f64, detail: impl Into<String>) -> ExprError {
    ExprError::EvalDomain { op: op.to_string(), offset: e.offset, x1, x2, detail: detail.into() }
}

/// Evaluate at `(x1, x2)`. Never returns NaN or an infinity: every
/// domain violation or overflow is an [`ExprError::EvalDomain`].
pub fn evaluate(expr: &Expr, x1: f64, x2: f64) -> Result<f64, ExprError> {
    let v = match &expr.kind {
        ExprKind::Num(v) => *v,
        ExprKind::Var(Var::X1) => x1,
        ExprKind::Var(Var::X2) => x2,
        ExprKind::Const(c) => c.value(),
        ExprKind::Neg(a) => -evaluate(a, x1, x2)?,
        ExprKind::Binary(op, l, r) => {
            let a = evaluate(l, x1, x2)?;
            let b = evaluate(r, x1, x2)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(domain(expr, "/", x1, x2, "division by zero"));
                    }
                    a / b
                }
                BinOp::Pow => a.powf(b),
            }
        }
        ExprKind::Call(func, arg) => {
            let a = evaluate(arg, x1, x2)?;
            match func {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Tan => a.tan(),
                Func::Exp => a.exp(),
                Func::Ln => {
                    if a <= 0.0 {
                        return Err(domain(expr, "ln", x1, x2, format!("argument {a} is not positive")));
                    }
                    a.ln()
                }
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(domain(expr, "sqrt", x1, x2, format!("argument {a} is negative")));
                    }
                    a.sqrt()
                }
                Func::Abs => a.abs(),
                Func::Sgn => {
                    if a > 0.0 {
                        1.0
                    } else if a < 0.0 {
                        -1.0
                    } else {
                        0.0
                    }
                }
            }
        }
    };
    if !v.is_finite() {
        let op = match &expr.kind {
            ExprKind::Binary(op, ..) => format!("{op:?}").to_lowercase(),
            ExprKind::Call(f, _) => f.name().to_string(),
            _ => "value".to_string(),
        };
        return Err(domain(expr, &op, x1, x2, format!("result {v} is not finite")));
    }
    Ok(v)
}

/// Evaluate at every grid node; the first failing node aborts with its index.
pub fn sample(expr: &Expr, grid: &Grid2) -> Result<ScalarField2, ExprError> {
    let rows = exec::map_indexed(grid.n1, |i| {
        (0..grid.n2)
            .map(|j| {
                evaluate(expr, grid.x1(i), grid.x2(j)).map_err(|e| ExprError::AtNode { i, j, source: Box::new(e) })
            })
            .collect::<Result<Vec<f64>, _>>()
    });
    let mut values = Vec::with_capacity(grid.node_count());
    for row in rows {
        values.extend(row?);
    }
    let arr = ndarray::Array2::from_shape_vec(grid.shape(), values).expect("shape");
    Ok(ScalarField2::new(*grid, arr).expect("evaluate only yields finite values"))
}
