use std::ops;

use super::series;
use crate::error::{Error, Result};

/// Relative tolerance used when two pieces meet at a knot.
const KNOT_AGREEMENT: f64 = 1e-9;

/// A closed-form piecewise-smooth function of one real variable.
///
/// Nodes below an [`Expr::Affine`] see the substituted variable, so the
/// declared interval of a [`Expr::Recip`] and the knots of a
/// [`Expr::Piecewise`] are in the coordinates of the node itself.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    /// `1/arg`, declared nonvanishing for `lo ≤ x ≤ hi`.
    Recip { arg: Box<Expr>, lo: f64, hi: f64 },
    /// `e^{-1/arg}` where `arg > 0`, zero elsewhere.
    Flat(Box<Expr>),
    /// `x ↦ arg((x - shift)/scale)`.
    Affine { arg: Box<Expr>, shift: f64, scale: f64 },
    Piecewise(Piecewise),
}

/// Pieces `p_0, …, p_n` on the open intervals cut out by knots `k_1 < … < k_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piecewise {
    knots: Vec<f64>,
    pieces: Vec<Expr>,
}

impl Piecewise {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn pieces(&self) -> &[Expr] {
        &self.pieces
    }

    /// Index of the open segment containing `x`, or `Err(i)` when `x` is knot `i`.
    fn locate(&self, x: f64) -> std::result::Result<usize, usize> {
        let i = self.knots.partition_point(|&k| k < x);
        if i < self.knots.len() && self.knots[i] == x {
            Err(i)
        } else {
            Ok(i)
        }
    }

    /// Of two pieces meeting at a knot, the one whose value is reported:
    /// a constant piece when there is one, otherwise the left piece.
    fn preferred(&self, knot: usize) -> usize {
        if matches!(self.pieces[knot + 1], Expr::Const(_)) && !matches!(self.pieces[knot], Expr::Const(_)) {
            knot + 1
        } else {
            knot
        }
    }
}

/// Closed hull of the support; may be conservative but never too small.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support {
    Empty,
    /// `[lo, hi]`, with infinite endpoints allowed.
    Interval(f64, f64),
}

impl Support {
    pub fn is_bounded(&self) -> bool {
        match *self {
            Support::Empty => true,
            Support::Interval(lo, hi) => lo.is_finite() && hi.is_finite(),
        }
    }

    fn whole() -> Self {
        Support::Interval(f64::NEG_INFINITY, f64::INFINITY)
    }

    fn hull(self, other: Self) -> Self {
        match (self, other) {
            (Support::Empty, s) | (s, Support::Empty) => s,
            (Support::Interval(a, b), Support::Interval(c, d)) => Support::Interval(a.min(c), b.max(d)),
        }
    }

    fn intersect(self, other: Self) -> Self {
        match (self, other) {
            (Support::Empty, _) | (_, Support::Empty) => Support::Empty,
            (Support::Interval(a, b), Support::Interval(c, d)) => {
                let (lo, hi) = (a.max(c), b.min(d));
                if lo <= hi {
                    Support::Interval(lo, hi)
                } else {
                    Support::Empty
                }
            }
        }
    }
}

fn agree(left: &[f64], right: &[f64]) -> bool {
    let scale = left
        .iter()
        .chain(right)
        .fold(1.0f64, |m, v| m.max(v.abs()));
    left.iter()
        .zip(right)
        .all(|(l, r)| (l - r).abs() <= KNOT_AGREEMENT * scale)
}

impl Expr {
    pub fn x() -> Expr {
        Expr::Var
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }

    pub fn powi(self, n: i32) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    pub fn flat(self) -> Expr {
        Expr::Flat(Box::new(self))
    }

    /// Reciprocal declared nonvanishing on the whole line.
    pub fn recip(self) -> Expr {
        Expr::Recip {
            arg: Box::new(self),
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn recip_on(self, lo: f64, hi: f64) -> Result<Expr> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::invalid(format!("bad nonvanishing interval [{lo}, {hi}]")));
        }
        Ok(Expr::Recip {
            arg: Box::new(self),
            lo,
            hi,
        })
    }

    /// `x ↦ self((x - shift)/scale)`.
    pub fn affine(self, shift: f64, scale: f64) -> Result<Expr> {
        if !shift.is_finite() || !scale.is_finite() || scale == 0.0 {
            return Err(Error::invalid(format!(
                "affine substitution needs finite shift and nonzero scale, got ({shift}, {scale})"
            )));
        }
        Ok(Expr::Affine {
            arg: Box::new(self),
            shift,
            scale,
        })
    }

    pub fn piecewise(knots: Vec<f64>, pieces: Vec<Expr>) -> Result<Expr> {
        if pieces.len() != knots.len() + 1 {
            return Err(Error::invalid(format!(
                "{} knots need {} pieces, got {}",
                knots.len(),
                knots.len() + 1,
                pieces.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("knots must be finite and strictly increasing"));
        }
        Ok(Expr::Piecewise(Piecewise { knots, pieces }))
    }

    /// Value at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let fail = |message: String| Error::Evaluation { x, message };
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Pow(a, n) => {
                let v = a.eval(x)?;
                if *n < 0 && v == 0.0 {
                    return Err(fail(format!("negative power {n} of zero")));
                }
                v.powi(*n)
            }
            Expr::Exp(a) => a.eval(x)?.exp(),
            Expr::Sin(a) => a.eval(x)?.sin(),
            Expr::Cos(a) => a.eval(x)?.cos(),
            Expr::Recip { arg, lo, hi } => {
                if !(*lo <= x && x <= *hi) {
                    return Err(fail(format!("outside the declared nonvanishing interval [{lo}, {hi}]")));
                }
                let v = arg.eval(x)?;
                if v == 0.0 {
                    return Err(fail("reciprocal of zero".into()));
                }
                1.0 / v
            }
            Expr::Flat(a) => {
                let u = a.eval(x)?;
                if u > 0.0 {
                    (-1.0 / u).exp()
                } else {
                    0.0
                }
            }
            Expr::Affine { arg, shift, scale } => arg.eval((x - shift) / scale)?,
            Expr::Piecewise(pw) => match pw.locate(x) {
                Ok(i) => pw.pieces[i].eval(x)?,
                Err(i) => {
                    let (l, r) = (pw.pieces[i].eval(x)?, pw.pieces[i + 1].eval(x)?);
                    if !agree(&[l], &[r]) {
                        return Err(fail(format!("pieces disagree at the knot: {l} vs {r}")));
                    }
                    if pw.preferred(i) == i {
                        l
                    } else {
                        r
                    }
                }
            },
        })
    }

    /// Taylor coefficients `c_0..c_{n-1}` at `x`. `knot` is set when the
    /// point sits on a knot or on the boundary of a flat factor.
    pub(crate) fn series(&self, x: f64, n: usize, knot: &mut bool) -> Result<Vec<f64>> {
        let fail = |message: String| Error::Evaluation { x, message };
        let constant = |c: f64| {
            let mut v = vec![0.0; n];
            v[0] = c;
            v
        };
        Ok(match self {
            Expr::Const(c) => constant(*c),
            Expr::Var => {
                let mut v = constant(x);
                if n > 1 {
                    v[1] = 1.0;
                }
                v
            }
            Expr::Add(a, b) => {
                let (a, b) = (a.series(x, n, knot)?, b.series(x, n, knot)?);
                a.iter().zip(&b).map(|(p, q)| p + q).collect()
            }
            Expr::Mul(a, b) => series::mul(&a.series(x, n, knot)?, &b.series(x, n, knot)?),
            Expr::Neg(a) => a.series(x, n, knot)?.into_iter().map(|v| -v).collect(),
            Expr::Pow(a, e) => series::powi(&a.series(x, n, knot)?, *e)
                .ok_or_else(|| fail(format!("negative power {e} of zero")))?,
            Expr::Exp(a) => series::exp(&a.series(x, n, knot)?),
            Expr::Sin(a) => series::sin_cos(&a.series(x, n, knot)?).0,
            Expr::Cos(a) => series::sin_cos(&a.series(x, n, knot)?).1,
            Expr::Recip { arg, lo, hi } => {
                if !(*lo <= x && x <= *hi) {
                    return Err(fail(format!("outside the declared nonvanishing interval [{lo}, {hi}]")));
                }
                series::recip(&arg.series(x, n, knot)?).ok_or_else(|| fail("reciprocal of zero".into()))?
            }
            Expr::Flat(a) => {
                let u = a.series(x, n, knot)?;
                if u[0] > 0.0 {
                    let inv = series::recip(&u).expect("positive leading term");
                    series::exp(&inv.iter().map(|v| -v).collect::<Vec<_>>())
                } else {
                    // Every derivative of the flat function vanishes at and left of 0.
                    if u[0] == 0.0 {
                        *knot = true;
                    }
                    vec![0.0; n]
                }
            }
            Expr::Affine { arg, shift, scale } => {
                let inner = arg.series((x - shift) / scale, n, knot)?;
                inner
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| c / scale.powi(k as i32))
                    .collect()
            }
            Expr::Piecewise(pw) => match pw.locate(x) {
                Ok(i) => pw.pieces[i].series(x, n, knot)?,
                Err(i) => {
                    *knot = true;
                    let left = pw.pieces[i].series(x, n, knot)?;
                    let right = pw.pieces[i + 1].series(x, n, knot)?;
                    if !agree(&left, &right) {
                        return Err(fail("pieces have different jets at the knot".into()));
                    }
                    if pw.preferred(i) == i {
                        left
                    } else {
                        right
                    }
                }
            },
        })
    }

    /// All piecewise knots in the coordinates of the outermost variable, sorted.
    pub fn knots(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_knots(&mut out);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_knots(&self, out: &mut Vec<f64>) {
        match self {
            Expr::Const(_) | Expr::Var => {}
            Expr::Add(a, b) | Expr::Mul(a, b) => {
                a.collect_knots(out);
                b.collect_knots(out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Flat(a) => {
                a.collect_knots(out)
            }
            Expr::Recip { arg, .. } => arg.collect_knots(out),
            Expr::Affine { arg, shift, scale } => {
                let mut inner = Vec::new();
                arg.collect_knots(&mut inner);
                out.extend(inner.into_iter().map(|t| shift + scale * t));
            }
            Expr::Piecewise(pw) => {
                out.extend_from_slice(&pw.knots);
                for p in &pw.pieces {
                    p.collect_knots(out);
                }
            }
        }
    }

    /// A closed interval containing the support.
    pub fn support(&self) -> Support {
        match self {
            Expr::Const(c) if *c == 0.0 => Support::Empty,
            Expr::Const(_) | Expr::Var | Expr::Exp(_) | Expr::Cos(_) | Expr::Recip { .. } => Support::whole(),
            Expr::Add(a, b) => a.support().hull(b.support()),
            Expr::Mul(a, b) => a.support().intersect(b.support()),
            Expr::Pow(a, n) if *n > 0 => a.support(),
            Expr::Pow(..) => Support::whole(),
            Expr::Neg(a) | Expr::Sin(a) | Expr::Flat(a) => a.support(),
            Expr::Affine { arg, shift, scale } => match arg.support() {
                Support::Empty => Support::Empty,
                Support::Interval(lo, hi) => {
                    let map = |t: f64| if t.is_infinite() { t * scale.signum() } else { shift + scale * t };
                    let (a, b) = (map(lo), map(hi));
                    Support::Interval(a.min(b), a.max(b))
                }
            },
            Expr::Piecewise(pw) => {
                let mut acc = Support::Empty;
                for (i, piece) in pw.pieces.iter().enumerate() {
                    let lo = if i == 0 { f64::NEG_INFINITY } else { pw.knots[i - 1] };
                    let hi = pw.knots.get(i).copied().unwrap_or(f64::INFINITY);
                    acc = acc.hull(piece.support().intersect(Support::Interval(lo, hi)));
                }
                acc
            }
        }
    }

    /// True when the expression is literally the zero constant.
    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}
