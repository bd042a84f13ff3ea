use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::{integrate, DEFAULT_TOLERANCE};
use crate::calculus::{self, jet_eval, Expr, Support};
use crate::error::{Error, Result};

/// `c·δ^{(m)}_{x0}`, acting as `φ ↦ c (-1)^m φ^{(m)}(x0)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub x0: f64,
    pub order: usize,
    pub coeff: Complex64,
}

/// Where a density is integrated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Whole line; pairings integrate over the (compact) support of the test function.
    Line,
    Interval(f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    pub expr: Expr,
    pub domain: Domain,
}

/// A finite sum of densities and derivatives of point masses.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ultradistribution {
    densities: Vec<Density>,
    atoms: Vec<Atom>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pairing {
    pub value: Complex64,
    /// Sum of the quadrature error estimates of all density terms.
    pub quadrature_error: f64,
    pub panels: usize,
}

impl Ultradistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom(x0: f64, order: usize, coeff: Complex64) -> Result<Self> {
        Self::new().with_atom(x0, order, coeff)
    }

    pub fn delta(x0: f64, order: usize) -> Self {
        Self::atom(x0, order, Complex64::new(1.0, 0.0)).expect("finite location")
    }

    pub fn density(expr: Expr, domain: Domain) -> Result<Self> {
        Self::new().with_density(expr, domain)
    }

    /// The density `e^{-x²}` on the line.
    pub fn gaussian() -> Self {
        Self::density((-Expr::x().powi(2)).exp(), Domain::Line).expect("valid domain")
    }

    pub fn with_atom(mut self, x0: f64, order: usize, coeff: Complex64) -> Result<Self> {
        if !x0.is_finite() || !coeff.re.is_finite() || !coeff.im.is_finite() {
            return Err(Error::invalid("atom location and coefficient must be finite"));
        }
        if order > calculus::MAX_ORDER {
            return Err(Error::invalid(format!("atom order {order} exceeds {}", calculus::MAX_ORDER)));
        }
        self.atoms.push(Atom { x0, order, coeff });
        Ok(self)
    }

    pub fn with_density(mut self, expr: Expr, domain: Domain) -> Result<Self> {
        if let Domain::Interval(a, b) = domain {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::invalid(format!("bad density domain [{a}, {b}]")));
            }
        }
        self.densities.push(Density { expr, domain });
        Ok(self)
    }

    /// `self + other`.
    pub fn plus(mut self, other: Ultradistribution) -> Self {
        self.densities.extend(other.densities);
        self.atoms.extend(other.atoms);
        self
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn densities(&self) -> &[Density] {
        &self.densities
    }

    /// Closed hull of everything that can contribute to a pairing.
    pub fn support(&self) -> Support {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in &self.atoms {
            lo = lo.min(a.x0);
            hi = hi.max(a.x0);
        }
        for d in &self.densities {
            let own = match d.domain {
                Domain::Line => d.expr.support(),
                Domain::Interval(a, b) => match d.expr.support() {
                    Support::Empty => Support::Empty,
                    Support::Interval(c, e) if c.max(a) <= e.min(b) => Support::Interval(c.max(a), e.min(b)),
                    Support::Interval(..) => Support::Empty,
                },
            };
            if let Support::Interval(a, b) = own {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        if lo <= hi {
            Support::Interval(lo, hi)
        } else {
            Support::Empty
        }
    }

    /// `⟨T, φ⟩` with diagnostics.
    pub fn pair_detailed(&self, phi: &Expr) -> Result<Pairing> {
        let mut value = Complex64::new(0.0, 0.0);
        for atom in &self.atoms {
            let d = jet_eval(phi, atom.x0, atom.order)?.derivative(atom.order);
            let sign = if atom.order % 2 == 0 { 1.0 } else { -1.0 };
            value += atom.coeff * (sign * d);
        }
        let mut quadrature_error = 0.0;
        let mut panels = 0;
        for d in &self.densities {
            let (lo, hi) = match phi.support() {
                Support::Empty => continue,
                Support::Interval(lo, hi) if lo.is_finite() && hi.is_finite() => (lo, hi),
                Support::Interval(..) => {
                    return Err(Error::precondition("pairing a density needs a compactly supported test function"))
                }
            };
            let (lo, hi) = match d.domain {
                Domain::Line => (lo, hi),
                Domain::Interval(a, b) => (lo.max(a), hi.min(b)),
            };
            if lo >= hi {
                continue;
            }
            let mut breaks = phi.knots();
            breaks.extend(d.expr.knots());
            let q = integrate(|x| Ok(d.expr.eval(x)? * phi.eval(x)?), lo, hi, &breaks, DEFAULT_TOLERANCE)?;
            value += q.value;
            quadrature_error += q.error;
            panels += q.panels;
        }
        Ok(Pairing {
            value,
            quadrature_error,
            panels,
        })
    }

    /// `⟨T, φ⟩ = Σ c (-1)^m φ^{(m)}(x0) + ∫ density·φ`.
    pub fn pair(&self, phi: &Expr) -> Result<Complex64> {
        Ok(self.pair_detailed(phi)?.value)
    }
}

/// `⟨T, φ⟩`.
pub fn pair(t: &Ultradistribution, phi: &Expr) -> Result<Complex64> {
    t.pair(phi)
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{:?}", c.re)
    } else {
        format!("complex({:?},{:?})", c.re, c.im)
    }
}

impl fmt::Display for Ultradistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .densities
            .iter()
            .map(|d| match d.domain {
                Domain::Line => format!("density({},line)", d.expr),
                Domain::Interval(a, b) => format!("density({},interval({a:?},{b:?}))", d.expr),
            })
            .collect();
        terms.extend(
            self.atoms
                .iter()
                .map(|a| format!("atom({:?},{},{})", a.x0, a.order, fmt_coeff(a.coeff))),
        );
        if terms.is_empty() {
            f.write_str("zero")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl std::str::FromStr for Ultradistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_distribution(s)
    }
}

/// Splits at depth-zero occurrences of `sep`, returning `(offset, piece)` pairs.
fn split_top(s: &str, sep: char) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::parse(i, "unbalanced `)`"));
                }
            }
            c if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::parse(s.len(), "unbalanced `(`"));
    }
    out.push((start, &s[start..]));
    Ok(out)
}

fn number(text: &str, at: usize) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::parse(at, format!("expected a finite number, found `{}`", text.trim())))
}

/// `name(args)` → `(name, offset of args, args)`.
fn call(term: &str, at: usize) -> Result<(&str, usize, &str)> {
    let open = term
        .find('(')
        .ok_or_else(|| Error::parse(at, format!("expected `name(...)`, found `{}`", term.trim())))?;
    let close = term
        .rfind(')')
        .filter(|&c| c > open && term[c + 1..].trim().is_empty())
        .ok_or_else(|| Error::parse(at + term.len(), "expected `)` at the end of the term"))?;
    Ok((term[..open].trim(), at + open + 1, &term[open + 1..close]))
}

fn coefficient(text: &str, at: usize) -> Result<Complex64> {
    let t = text.trim();
    if t.starts_with("complex") {
        let (_, off, inner) = call(t, at)?;
        let parts = split_top(inner, ',')?;
        if parts.len() != 2 {
            return Err(Error::parse(at, "complex(re, im) takes two numbers"));
        }
        return Ok(Complex64::new(number(parts[0].1, off)?, number(parts[1].1, off + parts[1].0)?));
    }
    Ok(Complex64::new(number(t, at)?, 0.0))
}

fn index(text: &str, at: usize) -> Result<usize> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| Error::parse(at, format!("expected a derivative order, found `{}`", text.trim())))
}

/// Parses the distribution mini-language:
///
/// ```text
/// dist := term (+ term)*
/// term := atom(x0, m, c) | delta(x0) | delta(x0, m)
///       | density(<expr>, line) | density(<expr>, interval(a, b))
///       | gaussian | one | zero
/// c    := <number> | complex(<re>, <im>)
/// ```
pub fn parse_distribution(src: &str) -> Result<Ultradistribution> {
    let mut t = Ultradistribution::new();
    for (offset, term) in split_top(src, '+')? {
        let trimmed = term.trim();
        let at = offset + (term.len() - term.trim_start().len());
        match trimmed {
            "" => return Err(Error::parse(at, "empty term")),
            "gaussian" => t = t.plus(Ultradistribution::gaussian()),
            "one" => t = t.with_density(Expr::constant(1.0), Domain::Line)?,
            "zero" => {}
            _ => {
                let (name, off, inner) = call(trimmed, at)?;
                let args = split_top(inner, ',')?;
                let arg = |i: usize| {
                    let (o, text) = args[i];
                    (off + o + text.len() - text.trim_start().len(), text.trim_start())
                };
                match (name, args.len()) {
                    ("atom", 3) => {
                        let x0 = number(arg(0).1, arg(0).0)?;
                        let m = index(arg(1).1, arg(1).0)?;
                        let c = coefficient(arg(2).1, arg(2).0)?;
                        t = t.with_atom(x0, m, c)?;
                    }
                    ("delta", 1 | 2) => {
                        let x0 = number(arg(0).1, arg(0).0)?;
                        let m = if args.len() == 2 { index(arg(1).1, arg(1).0)? } else { 0 };
                        t = t.with_atom(x0, m, Complex64::new(1.0, 0.0))?;
                    }
                    ("density", 2) => {
                        let (eo, etext) = arg(0);
                        let expr = calculus::parse(etext).map_err(|e| match e {
                            Error::Parse { position, message } => Error::parse(eo + position, message),
                            other => other,
                        })?;
                        let (dpos, dtext) = arg(1);
                        let domain = match dtext.trim() {
                            "line" => Domain::Line,
                            d if d.starts_with("interval") => {
                                let (_, io, inner) = call(d, dpos)?;
                                let ends = split_top(inner, ',')?;
                                if ends.len() != 2 {
                                    return Err(Error::parse(dpos, "interval(a, b) takes two numbers"));
                                }
                                Domain::Interval(number(ends[0].1, io)?, number(ends[1].1, io + ends[1].0)?)
                            }
                            other => return Err(Error::parse(dpos, format!("unknown domain `{other}`"))),
                        };
                        t = t.with_density(expr, domain).map_err(|e| match e {
                            Error::InvalidArgument(m) => Error::parse(dpos, m),
                            other => other,
                        })?;
                    }
                    (other, n) => {
                        return Err(Error::parse(at, format!("unknown term `{other}` with {n} argument(s)")));
                    }
                }
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{cutoff, translate};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn atoms_pair_with_sign_convention() {
        let v = pair(&Ultradistribution::delta(0.0, 0), &Expr::x().exp()).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
        let v = pair(&Ultradistribution::delta(0.0, 1), &Expr::x().sin()).unwrap();
        assert_eq!(v, Complex64::new(-1.0, 0.0));
        let t = Ultradistribution::atom(0.5, 3, Complex64::new(0.0, 2.0)).unwrap();
        let phi = Expr::x().powi(4);
        // (-1)^3 · 2i · 24·0.5
        assert_eq!(pair(&t, &phi).unwrap(), Complex64::new(0.0, -24.0));
    }

    #[test]
    fn gaussian_against_wide_cutoff() {
        let v = pair(&Ultradistribution::gaussian(), &cutoff(20.0, 21.0).unwrap()).unwrap();
        assert!((v.re - PI.sqrt()).abs() < 1e-9);
        assert!((v.re - 1.772_453_9).abs() < 1e-6);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn density_domains_and_supports() {
        let bump = cutoff(1.0, 2.0).unwrap();
        let half = Ultradistribution::density(Expr::constant(1.0), Domain::Interval(0.0, 10.0)).unwrap();
        let full = Ultradistribution::density(Expr::constant(1.0), Domain::Line).unwrap();
        let vh = pair(&half, &bump).unwrap().re;
        let vf = pair(&full, &bump).unwrap().re;
        assert_relative_eq!(vf, 3.0, max_relative = 1e-12);
        assert_relative_eq!(vh, 1.5, max_relative = 1e-12);
        assert_eq!(pair(&half, &translate(bump.clone(), -20.0).unwrap()).unwrap().re, 0.0);
        assert!(matches!(pair(&full, &Expr::x().exp()), Err(Error::Precondition(_))));
        assert!(Ultradistribution::density(Expr::x(), Domain::Interval(1.0, 0.0)).is_err());
        assert_eq!(half.support(), Support::Interval(0.0, 10.0));
        assert_eq!(Ultradistribution::new().support(), Support::Empty);
    }

    #[test]
    fn linearity_in_both_slots() {
        let t1 = Ultradistribution::gaussian();
        let t2 = Ultradistribution::atom(0.3, 2, Complex64::new(1.5, -0.5)).unwrap();
        let f = cutoff(1.0, 2.0).unwrap();
        let g = translate(cutoff(0.5, 1.5).unwrap(), 0.4).unwrap() * Expr::x().cos();
        let sum_t = t1.clone().plus(t2.clone());
        let lhs = pair(&sum_t, &(f.clone() + g.clone() * Expr::constant(3.0))).unwrap();
        let rhs = pair(&t1, &f).unwrap() + pair(&t2, &f).unwrap() + (pair(&t1, &g).unwrap() + pair(&t2, &g).unwrap()) * 3.0;
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn parse_and_print() {
        let t: Ultradistribution = "gaussian + atom(0, 1, complex(1, -2)) + delta(3) + density(x, interval(0, 1))"
            .parse()
            .unwrap();
        assert_eq!(t.atoms().len(), 2);
        assert_eq!(t.densities().len(), 2);
        let again: Ultradistribution = t.to_string().parse().unwrap();
        assert_eq!(again, t);
        assert_eq!(parse_distribution("zero").unwrap(), Ultradistribution::new());
        assert_eq!(
            parse_distribution("one").unwrap(),
            Ultradistribution::density(Expr::constant(1.0), Domain::Line).unwrap()
        );
        let bad = [
            ("", 0),
            ("atom(0,1)", 0),
            ("atom(0,-1,1)", 7),
            ("density(foo(x), line)", 8),
            ("density(x, sideways)", 11),
            ("gaussian + ", 11),
            ("delta(0", 7),
        ];
        for (src, pos) in bad {
            match parse_distribution(src) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }
}
