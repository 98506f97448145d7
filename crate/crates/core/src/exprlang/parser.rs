use super::ast::{BinOp, Constant, Expr, ExprKind, Func, Var};
use super::ExprError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(u8),
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    tok: Tok,
    tok_start: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax { offset, message: message.into() }
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ExprError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, tok: Tok::End, tok_start: 0 };
        p.advance()?;
        Ok(p)
    }

    fn advance(&mut self) -> Result<(), ExprError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        self.tok = match c {
            b'0'..=b'9' | b'.' => self.number()?,
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Tok::Op(c)
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            _ => {
                let ch = std::str::from_utf8(&self.src[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or('\u{fffd}');
                return Err(syntax(self.pos, format!("unexpected character `{ch}`")));
            }
        };
        Ok(())
    }

    fn number(&mut self) -> Result<Tok, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut mantissa = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            mantissa += digits(self);
        }
        if mantissa == 0 {
            return Err(syntax(start, "malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // Not an exponent; leave `e` for the next token.
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let v: f64 = text.parse().map_err(|_| syntax(start, format!("malformed number `{text}`")))?;
        if !v.is_finite() {
            return Err(syntax(start, format!("number `{text}` is out of range")));
        }
        Ok(Tok::Num(v))
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
        if self.tok == want {
            self.advance()
        } else {
            Err(syntax(self.tok_start, format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ (b'+' | b'-')) = self.tok {
            let at = self.tok_start;
            self.advance()?;
            let rhs = self.term()?;
            let op = if c == b'+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), at);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ (b'*' | b'/')) = self.tok {
            let at = self.tok_start;
            self.advance()?;
            let rhs = self.unary()?;
            let op = if c == b'*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), at);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.tok == Tok::Op(b'-') {
            let at = self.tok_start;
            self.advance()?;
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), at));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        self.pow_tail(base)
    }

    fn pow_tail(&mut self, base: Expr) -> Result<Expr, ExprError> {
        if self.tok != Tok::Op(b'^') {
            return Ok(base);
        }
        let at = self.tok_start;
        self.advance()?;
        let exponent = match self.tok {
            Tok::Num(v) => {
                let e = Expr::new(ExprKind::Num(v), self.tok_start);
                self.advance()?;
                e
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                e
            }
            _ => return Err(syntax(self.tok_start, "exponent must be a number or a parenthesised expression")),
        };
        let exponent = self.pow_tail(exponent)?;
        Ok(Expr::new(ExprKind::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)), at))
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let at = self.tok_start;
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Expr::new(ExprKind::Num(v), at))
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.advance()?;
                let kind = match name.as_str() {
                    "x1" => ExprKind::Var(Var::X1),
                    "x2" => ExprKind::Var(Var::X2),
                    "pi" => ExprKind::Const(Constant::Pi),
                    "e" => ExprKind::Const(Constant::E),
                    _ => match Func::from_name(&name) {
                        Some(func) => {
                            self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                            let arg = self.expr()?;
                            self.expect(Tok::RParen, "`)`")?;
                            ExprKind::Call(func, Box::new(arg))
                        }
                        None => return Err(ExprError::UnknownIdentifier { name, offset: at }),
                    },
                };
                Ok(Expr::new(kind, at))
            }
            Tok::End => Err(syntax(at, "unexpected end of input")),
            other => {
                let what = match other {
                    Tok::Op(c) => format!("operator `{}`", c as char),
                    Tok::RParen => "`)`".to_string(),
                    _ => "token".to_string(),
                };
                Err(syntax(at, format!("unexpected {what}")))
            }
        }
    }
}

/// Parse an expression over `x1`, `x2`.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(syntax(p.tok_start, "trailing input"));
    }
    Ok(e)
}
