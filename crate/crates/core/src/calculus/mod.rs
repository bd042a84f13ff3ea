//! Piecewise-smooth functions of one variable and their exact Taylor jets.
//!
//! Sups over a compact set are maxima over an explicit [`Grid`]. They are
//! grid proxies, never certified bounds.

mod expr;
mod grid;
mod jet;
mod series;
mod text;

use rayon::prelude::*;
use serde::Serialize;

pub use expr::{Expr, Piecewise, Support};
pub use grid::{Grid, GridSpec, DEFAULT_POINTS};
pub use jet::{jet_eval, Jet, DEFAULT_K_MAX, MAX_ORDER};
pub use text::parse;

use crate::error::{Error, Result};

/// Smooth `θ` with `θ = 1` on `[-a, a]`, `θ = 0` off `(-b, b)` and `0 ≤ θ ≤ 1`.
///
/// The transitions are `F(t) = G(t)/(G(t) + G(1-t))` with `G(t) = e^{-1/t}`
/// and `t = (b - |x|)/(b - a)`; knots sit at `±a` and `±b`.
pub fn cutoff(a: f64, b: f64) -> Result<Expr> {
    if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b) {
        return Err(Error::invalid(format!("cutoff needs 0 < a < b, got a = {a}, b = {b}")));
    }
    let g = |t: Expr| t.flat();
    let t = Expr::x;
    let transition = g(t()) * (g(t()) + g(Expr::constant(1.0) - t())).recip();
    let width = b - a;
    let rising = transition.clone().affine(-b, width)?;
    let falling = transition.affine(b, -width)?;
    Expr::piecewise(
        vec![-b, -a, a, b],
        vec![
            Expr::constant(0.0),
            rising,
            Expr::constant(1.0),
            falling,
            Expr::constant(0.0),
        ],
    )
}

/// `x ↦ f(x/j)`.
pub fn rescale(f: Expr, j: f64) -> Result<Expr> {
    if !(j.is_finite() && j > 0.0) {
        return Err(Error::invalid(format!("rescale factor must be positive, got {j}")));
    }
    if j == 1.0 {
        return Ok(f);
    }
    f.affine(0.0, j)
}

/// `x ↦ f(x - c)`.
pub fn translate(f: Expr, c: f64) -> Result<Expr> {
    if c == 0.0 {
        return Ok(f);
    }
    f.affine(c, 1.0)
}

/// `s_k = max_x |f^{(k)}(x)|` over a grid, with the first maximising point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupProfile {
    pub values: Vec<f64>,
    pub argmax_x: Vec<f64>,
}

impl SupProfile {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }
}

/// Derivatives `f^{(0)}..f^{(k)}` at every grid point, in grid order.
pub fn derivative_table(f: &Expr, grid: &Grid, k: usize) -> Result<Vec<Vec<f64>>> {
    let knots = f.knots();
    if let Some(x) = grid.points().iter().find(|x| knots.contains(x)) {
        return Err(Error::precondition(format!("grid point {x} is a knot of the function")));
    }
    grid.points()
        .par_iter()
        .map(|&x| jet_eval(f, x, k).map(|j| j.derivatives()))
        .collect()
}

pub fn sup_derivatives(f: &Expr, grid: &Grid, k: usize) -> Result<SupProfile> {
    let table = derivative_table(f, grid, k)?;
    Ok(profile_of(&table, grid))
}

/// Column maxima of a derivative table; ties go to the leftmost point.
pub(crate) fn profile_of(table: &[Vec<f64>], grid: &Grid) -> SupProfile {
    let order = table.first().map_or(0, |row| row.len());
    let mut values = vec![0.0; order];
    let mut argmax_x = vec![grid.points()[0]; order];
    for (row, &x) in table.iter().zip(grid.points()) {
        for (k, d) in row.iter().enumerate() {
            if d.abs() > values[k] {
                values[k] = d.abs();
                argmax_x[k] = x;
            }
        }
    }
    SupProfile { values, argmax_x }
}
