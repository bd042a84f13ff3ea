use serde::Serialize;

use super::{series, Expr};
use crate::error::{Error, Result};

/// Largest jet order; beyond it `k!` leaves the `f64` range.
pub const MAX_ORDER: usize = 170;

/// Default truncation order for seminorm evaluation.
pub const DEFAULT_K_MAX: usize = 12;

/// Truncated Taylor expansion `Σ c_k (x - x0)^k` of an [`Expr`] at `x0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Jet {
    x0: f64,
    coeffs: Vec<f64>,
    knot: bool,
}

impl Jet {
    pub fn point(&self) -> f64 {
        self.x0
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The point is a knot of a piecewise node or a zero of a flat argument.
    pub fn at_knot(&self) -> bool {
        self.knot
    }

    /// `f^{(k)}(x0) = k!·c_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        self.coeffs[k] * factorial
    }

    pub fn derivatives(&self) -> Vec<f64> {
        let mut factorial = 1.0;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    factorial *= k as f64;
                }
                c * factorial
            })
            .collect()
    }

    /// Cauchy product; the jets must share point and order.
    pub fn product(&self, other: &Jet) -> Result<Jet> {
        if self.x0 != other.x0 || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::invalid("jets at different points or orders"));
        }
        Ok(Jet {
            x0: self.x0,
            coeffs: series::mul(&self.coeffs, &other.coeffs),
            knot: self.knot || other.knot,
        })
    }
}

/// Exact (to rounding) Taylor coefficients of `f` at `x0` up to order `k`.
pub fn jet_eval(f: &Expr, x0: f64, k: usize) -> Result<Jet> {
    if k > MAX_ORDER {
        return Err(Error::invalid(format!("jet order {k} exceeds {MAX_ORDER}")));
    }
    if !x0.is_finite() {
        return Err(Error::invalid(format!("jet point must be finite, got {x0}")));
    }
    let mut knot = false;
    let coeffs = f.series(x0, k + 1, &mut knot)?;
    if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
        return Err(Error::Evaluation {
            x: x0,
            message: format!("Taylor coefficient {i} is not finite"),
        });
    }
    Ok(Jet { x0, coeffs, knot })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    #[test]
    fn exp_at_zero() {
        let j = jet_eval(&Expr::x().exp(), 0.0, 3).unwrap();
        assert_eq!(j.derivatives(), vec![1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn sin_at_zero() {
        let j = jet_eval(&Expr::x().sin(), 0.0, 4).unwrap();
        assert_eq!(j.derivatives(), vec![0.0, 1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn flat_matches_symbolic_derivatives() {
        // f = e^{-1/t}: f' = f/t², f'' = f(1 - 2t)/t⁴.
        let f = |t: f64| (-1.0 / t).exp();
        let f1 = |t: f64| f(t) / (t * t);
        let f2 = |t: f64| f(t) * (1.0 - 2.0 * t) / t.powi(4);
        for t in [1.0, 0.3, 2.5] {
            let d = jet_eval(&Expr::x().flat(), t, 2).unwrap().derivatives();
            assert_relative_eq!(d[0], f(t), max_relative = 1e-14);
            assert_relative_eq!(d[1], f1(t), max_relative = 1e-14);
            assert_relative_eq!(d[2], f2(t), max_relative = 1e-13);
        }
        let at_one = jet_eval(&Expr::x().flat(), 1.0, 2).unwrap().derivatives();
        assert_relative_eq!(at_one[2], -1.0 / E, max_relative = 1e-14);
    }

    #[test]
    fn flat_boundary_is_zero_and_flagged() {
        let j = jet_eval(&Expr::x().flat(), 0.0, 6).unwrap();
        assert!(j.at_knot());
        assert!(j.coeffs().iter().all(|&c| c == 0.0));
        let left = jet_eval(&Expr::x().flat(), -0.5, 6).unwrap();
        assert!(!left.at_knot());
        assert!(left.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn order_limits() {
        assert!(jet_eval(&Expr::x(), 0.0, MAX_ORDER + 1).is_err());
        assert!(jet_eval(&Expr::x(), f64::NAN, 2).is_err());
        let j = jet_eval(&Expr::x().powi(3), 2.0, 5).unwrap();
        assert_eq!(j.derivatives(), vec![8.0, 12.0, 12.0, 6.0, 0.0, 0.0]);
        assert_eq!(j.derivative(3), 6.0);
    }
}
