//! Prefix text form of [`Expr`].
//!
//! ```text
//! expr := x | <number> | const(<number>)
//!       | add(expr, expr) | sub(expr, expr) | mul(expr, expr) | neg(expr)
//!       | pow(expr, <integer>) | exp(expr) | sin(expr) | cos(expr)
//!       | recip(expr) | recip(expr, <lo>, <hi>) | flat(expr)
//!       | affine(expr, <shift>, <scale>)          value at x is expr((x - shift)/scale)
//!       | piecewise(knots(<k1>, …), expr, …)      one more piece than knots
//!       | cutoff(<a>, <b>) | rescale(expr, <j>) | translate(expr, <c>)
//! ```
//!
//! Numbers use Rust float syntax, including `inf` and `-inf` for interval
//! bounds. Printing emits only the canonical forms (`const`, `add`, `mul`,
//! `neg`, `pow`, `exp`, `sin`, `cos`, `recip` with bounds, `flat`, `affine`,
//! `piecewise`) and every printed expression parses back to an equal value.

use std::fmt;

use super::{cutoff, Expr};
use crate::error::{Error, Result};

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "const({c:?})"),
            Expr::Var => f.write_str("x"),
            Expr::Add(a, b) => write!(f, "add({a},{b})"),
            Expr::Mul(a, b) => write!(f, "mul({a},{b})"),
            Expr::Neg(a) => write!(f, "neg({a})"),
            Expr::Pow(a, n) => write!(f, "pow({a},{n})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Recip { arg, lo, hi } => write!(f, "recip({arg},{lo:?},{hi:?})"),
            Expr::Flat(a) => write!(f, "flat({a})"),
            Expr::Affine { arg, shift, scale } => write!(f, "affine({arg},{shift:?},{scale:?})"),
            Expr::Piecewise(pw) => {
                f.write_str("piecewise(knots(")?;
                for (i, k) in pw.knots().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{k:?}")?;
                }
                f.write_str(")")?;
                for p in pw.pieces() {
                    write!(f, ",{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(Error::parse(p.pos, "trailing input after expression"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(d) => Err(Error::parse(self.pos, format!("expected `{c}`, found `{d}`"))),
            None => Err(Error::parse(self.pos, format!("expected `{c}`, found end of input"))),
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphabetic() || c == '_' || (i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start;
        if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
            i += 1;
        }
        if self.src[i..].starts_with("inf") {
            i += 3;
        } else {
            while i < bytes.len() {
                let c = bytes[i];
                let after_exp = i > start && matches!(bytes[i - 1], b'e' | b'E');
                if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || (after_exp && (c == b'-' || c == b'+')) {
                    i += 1;
                } else {
                    break;
                }
            }
        }
        let text = &self.src[start..i];
        let v = text
            .parse::<f64>()
            .map_err(|_| Error::parse(start, format!("expected a number, found `{}`", self.snippet(start))))?;
        self.pos = i;
        Ok(v)
    }

    fn finite(&mut self) -> Result<f64> {
        let start = self.pos;
        let v = self.number()?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::parse(start, "number must be finite here"))
        }
    }

    fn integer(&mut self) -> Result<i32> {
        let start = self.pos;
        let v = self.number()?;
        if v.fract() != 0.0 || v.abs() > i32::MAX as f64 {
            return Err(Error::parse(start, format!("expected an integer exponent, found {v}")));
        }
        Ok(v as i32)
    }

    fn snippet(&self, at: usize) -> String {
        self.src[at..].chars().take(12).collect()
    }

    fn comma(&mut self) -> Result<()> {
        self.expect(',')
    }

    fn expr(&mut self) -> Result<Expr> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => return Err(Error::parse(start, "expected an expression, found end of input")),
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                return Ok(Expr::Const(self.finite()?));
            }
            _ => {}
        }
        let name = self
            .ident()
            .ok_or_else(|| Error::parse(start, format!("expected an expression, found `{}`", self.snippet(start))))?;
        if name == "x" {
            return Ok(Expr::Var);
        }
        self.expect('(')?;
        let at = |e: Error| match e {
            Error::InvalidArgument(m) => Error::parse(start, m),
            other => other,
        };
        let e = match name {
            "const" => Expr::Const(self.finite()?),
            "add" | "sub" | "mul" => {
                let a = self.expr()?;
                self.comma()?;
                let b = self.expr()?;
                match name {
                    "add" => a + b,
                    "sub" => a - b,
                    _ => a * b,
                }
            }
            "neg" => -self.expr()?,
            "exp" => self.expr()?.exp(),
            "sin" => self.expr()?.sin(),
            "cos" => self.expr()?.cos(),
            "flat" => self.expr()?.flat(),
            "pow" => {
                let a = self.expr()?;
                self.comma()?;
                a.powi(self.integer()?)
            }
            "recip" => {
                let a = self.expr()?;
                if self.peek() == Some(',') {
                    self.comma()?;
                    let lo = self.number()?;
                    self.comma()?;
                    let hi = self.number()?;
                    a.recip_on(lo, hi).map_err(at)?
                } else {
                    a.recip()
                }
            }
            "affine" | "rescale" | "translate" => {
                let a = self.expr()?;
                self.comma()?;
                let first = self.finite()?;
                match name {
                    "affine" => {
                        self.comma()?;
                        let scale = self.finite()?;
                        a.affine(first, scale).map_err(at)?
                    }
                    "rescale" => super::rescale(a, first).map_err(at)?,
                    _ => super::translate(a, first).map_err(at)?,
                }
            }
            "cutoff" => {
                let a = self.finite()?;
                self.comma()?;
                let b = self.finite()?;
                cutoff(a, b).map_err(at)?
            }
            "piecewise" => {
                let kw = self.pos;
                if self.ident() != Some("knots") {
                    return Err(Error::parse(kw, "piecewise must start with knots(...)"));
                }
                self.expect('(')?;
                let mut knots = Vec::new();
                if self.peek() != Some(')') {
                    knots.push(self.finite()?);
                    while self.peek() == Some(',') {
                        self.comma()?;
                        knots.push(self.finite()?);
                    }
                }
                self.expect(')')?;
                let mut pieces = Vec::new();
                while self.peek() == Some(',') {
                    self.comma()?;
                    pieces.push(self.expr()?);
                }
                Expr::piecewise(knots, pieces).map_err(at)?
            }
            other => return Err(Error::parse(start, format!("unknown function `{other}`"))),
        };
        self.expect(')')?;
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_example() {
        let e = parse("mul(exp(neg(pow(x,2))), const(1))").unwrap();
        assert_eq!(e, (-Expr::x().powi(2)).exp() * Expr::constant(1.0));
        assert_eq!(e.to_string(), "mul(exp(neg(pow(x,2))),const(1.0))");
    }

    #[test]
    fn sugar_and_errors() {
        assert_eq!(parse(" 2.5 ").unwrap(), Expr::Const(2.5));
        assert_eq!(parse("sub(x,1)").unwrap(), Expr::x() - Expr::constant(1.0));
        assert!(matches!(parse("recip(x, -inf, 0)").unwrap(), Expr::Recip { .. }));
        assert_eq!(parse("cutoff(1,2)").unwrap(), cutoff(1.0, 2.0).unwrap());
        for bad in ["", "foo(x)", "add(x)", "pow(x,1.5)", "cutoff(2,1)", "x y", "const(inf)", "piecewise(x)"] {
            assert!(matches!(parse(bad), Err(Error::Parse { .. })), "{bad}");
        }
        match parse("add(x, bogus(x))") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
    }

    fn arb_finite() -> impl Strategy<Value = f64> {
        prop_oneof![-1e6..1e6f64, (-300i32..300).prop_map(|e| 10f64.powi(e)), Just(0.1), Just(-0.0)]
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![Just(Expr::Var), arb_finite().prop_map(Expr::Const)];
        leaf.prop_recursive(5, 40, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
                inner.clone().prop_map(|a| -a),
                (inner.clone(), -5i32..6).prop_map(|(a, n)| a.powi(n)),
                inner.clone().prop_map(Expr::exp),
                inner.clone().prop_map(Expr::sin),
                inner.clone().prop_map(Expr::cos),
                inner.clone().prop_map(Expr::flat),
                inner.clone().prop_map(Expr::recip),
                (inner.clone(), arb_finite(), arb_finite().prop_filter("nonzero", |s| *s != 0.0))
                    .prop_map(|(a, s, b)| a.affine(s, b).unwrap()),
                (inner.clone(), inner.clone(), arb_finite())
                    .prop_map(|(a, b, k)| Expr::piecewise(vec![k], vec![a, b]).unwrap()),
            ]
        })
    }

    proptest! {
        #[test]
        fn round_trip(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse(&text).unwrap(), e);
        }
    }
}
