//! Weighted sup-seminorms of test functions at a finite derivative order.
//!
//! All norms are `max_{k ≤ K_max} s_k / (c_k M_k)` where `s_k` is a grid
//! sup of `|f^{(k)}|` and `c_k` is `h^k` or the product sequence `R_k`.
//! Ties in `k` go to the smallest index.

use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{derivative_table, profile_of, rescale, Expr, Grid, SupProfile, Support, DEFAULT_POINTS};
use crate::error::{Error, Result};
use crate::rseq::{product_sequence, scale, scale_unguarded, RSequence};
use crate::weights::WeightSequence;

/// Slack allowed by the product inequality check.
pub const PRODUCT_SLACK: f64 = 1e-9;

/// Points per knot-free segment added to automatically built covering grids.
pub const SEGMENT_POINTS: usize = 101;

/// The scaling that enters the denominator.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// `h^k`.
    Geometric(f64),
    /// `R_k` of the given sequence.
    Product(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSummary {
    pub a: f64,
    pub b: f64,
    pub points: usize,
}

impl From<&Grid> for GridSummary {
    fn from(g: &Grid) -> Self {
        let (a, b) = g.interval();
        GridSummary { a, b, points: g.len() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormReport {
    pub value: f64,
    pub argmax_k: usize,
    pub argmax_x: f64,
    /// The maximum sits at the truncation order, so higher orders may matter.
    pub truncation_active: bool,
    pub k_max: usize,
    /// `s_k / (c_k M_k)` for each `k`.
    pub ratios: Vec<f64>,
    pub weights: String,
    pub scaling: Scaling,
    pub grid: GridSummary,
}

fn check_order(w: &WeightSequence, k_max: usize, other: Option<usize>) -> Result<()> {
    if k_max > w.horizon() {
        return Err(Error::invalid(format!(
            "K_max = {k_max} exceeds the weight horizon {}",
            w.horizon()
        )));
    }
    if let Some(h) = other.filter(|&h| k_max > h) {
        return Err(Error::invalid(format!("K_max = {k_max} exceeds the r-sequence horizon {h}")));
    }
    Ok(())
}

/// Evaluates the weighted maximum from a precomputed sup profile.
pub fn weighted_norm(profile: &SupProfile, grid: &Grid, scaling: Scaling, w: &WeightSequence) -> Result<SeminormReport> {
    let k_max = profile.order();
    let ln_scale: Vec<f64> = match &scaling {
        Scaling::Geometric(h) => {
            if !(h.is_finite() && *h > 0.0) {
                return Err(Error::invalid(format!("h must be positive, got {h}")));
            }
            (0..=k_max).map(|k| k as f64 * h.ln()).collect()
        }
        Scaling::Product(big_r) => {
            if big_r.len() <= k_max {
                return Err(Error::invalid("product sequence shorter than K_max"));
            }
            big_r.iter().map(|v| v.ln()).collect()
        }
    };
    check_order(w, k_max, None)?;
    let ratios: Vec<f64> = (0..=k_max)
        .map(|k| {
            let s = profile.values[k];
            if s == 0.0 {
                return 0.0;
            }
            let direct = match &scaling {
                Scaling::Geometric(h) => h.powi(k as i32) * w.value(k),
                Scaling::Product(big_r) => big_r[k] * w.value(k),
            };
            if direct.is_finite() && direct > 0.0 {
                s / direct
            } else {
                (s.ln() - ln_scale[k] - w.log_value(k)).exp()
            }
        })
        .collect();
    let mut argmax_k = 0;
    for (k, &v) in ratios.iter().enumerate() {
        if v > ratios[argmax_k] {
            argmax_k = k;
        }
    }
    Ok(SeminormReport {
        value: ratios[argmax_k],
        argmax_k,
        argmax_x: profile.argmax_x[argmax_k],
        truncation_active: argmax_k == k_max && ratios[argmax_k] > 0.0,
        k_max,
        ratios,
        weights: w.name().to_string(),
        scaling,
        grid: grid.into(),
    })
}

fn profile(f: &Expr, grid: &Grid, k_max: usize) -> Result<SupProfile> {
    Ok(profile_of(&derivative_table(f, grid, k_max)?, grid))
}

/// `R_0..=R_{K_max}` as plain floats.
fn product_prefix(r: &RSequence, k_max: usize) -> Vec<f64> {
    product_sequence(r).values()[..=k_max].to_vec()
}

/// `q_{K,h}(f) = max_k ‖f^{(k)}‖_K / (h^k M_k)`.
pub fn q_norm(f: &Expr, grid: &Grid, h: f64, w: &WeightSequence, k_max: usize) -> Result<SeminormReport> {
    check_order(w, k_max, None)?;
    weighted_norm(&profile(f, grid, k_max)?, grid, Scaling::Geometric(h), w)
}

/// `‖f‖_{K,(r_p)} = max_k ‖f^{(k)}‖_K / (R_k M_k)`.
pub fn r_norm(f: &Expr, grid: &Grid, r: &RSequence, w: &WeightSequence, k_max: usize) -> Result<SeminormReport> {
    check_order(w, k_max, Some(r.horizon()))?;
    weighted_norm(&profile(f, grid, k_max)?, grid, Scaling::Product(product_prefix(r, k_max)), w)
}

/// A grid over the support hull of `f`, refined in every knot segment.
///
/// Fails when the support is not known to be bounded.
pub fn covering_grid(f: &Expr) -> Result<Grid> {
    let knots = f.knots();
    match f.support() {
        Support::Empty => {
            let x = knots.last().map_or(0.0, |k| k + 1.0);
            Grid::uniform(x, x, 1)
        }
        Support::Interval(lo, hi) if lo.is_finite() && hi.is_finite() => {
            let coarse = Grid::new(lo, hi, DEFAULT_POINTS, &knots)?;
            let fine = Grid::per_segment(lo, hi, SEGMENT_POINTS, &knots)?;
            Ok(coarse.union(&fine))
        }
        Support::Interval(..) => Err(Error::precondition(
            "the function is not compactly supported; supply a covering grid",
        )),
    }
}

/// The grid for a whole-line norm: `explicit` if given (it must contain the
/// support when that is bounded), otherwise [`covering_grid`].
pub fn global_grid(f: &Expr, explicit: Option<&Grid>) -> Result<Grid> {
    match explicit {
        None => covering_grid(f),
        Some(g) => {
            if let Support::Interval(lo, hi) = f.support() {
                let (a, b) = g.interval();
                if lo.is_finite() && hi.is_finite() && (a > lo || b < hi) {
                    return Err(Error::precondition(format!(
                        "grid [{a}, {b}] does not cover the support [{lo}, {hi}]"
                    )));
                }
            }
            Ok(g.clone())
        }
    }
}

/// `‖f‖_{(r_p)}`, the sup taken over the whole line.
pub fn r_norm_global(
    f: &Expr,
    grid: Option<&Grid>,
    r: &RSequence,
    w: &WeightSequence,
    k_max: usize,
) -> Result<SeminormReport> {
    r_norm(f, &global_grid(f, grid)?, r, w, k_max)
}

/// `‖f‖_{∞,h}`, the sup taken over the whole line.
pub fn h_norm_global(f: &Expr, grid: Option<&Grid>, h: f64, w: &WeightSequence, k_max: usize) -> Result<SeminormReport> {
    q_norm(f, &global_grid(f, grid)?, h, w, k_max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductInequalityReport {
    /// `‖f1 f2‖_{(r_p)}`.
    pub lhs: f64,
    /// `‖f1‖_{(r_p)/2} · ‖f2‖_{(r_p)/2}`.
    pub rhs: f64,
    pub holds: bool,
    pub lhs_report: SeminormReport,
    pub factor_reports: [SeminormReport; 2],
}

/// Checks `‖f1 f2‖_{(r_p)} ≤ ‖f1‖_{(r_p)/2} ‖f2‖_{(r_p)/2}` on one grid at one order.
///
/// With the same grid and order on both sides the pointwise Leibniz bound
/// holds term by term, so a failure means an evaluation bug, not truncation.
pub fn check_product_inequality(
    f1: &Expr,
    f2: &Expr,
    r: &RSequence,
    w: &WeightSequence,
    grid: &Grid,
    k_max: usize,
) -> Result<ProductInequalityReport> {
    if r.get(1) <= 2.0 {
        return Err(Error::precondition(format!(
            "the product estimate needs r_1 > 2, got r_1 = {}",
            r.get(1)
        )));
    }
    let half = scale(r, 0.5)?;
    let product = f1.clone() * f2.clone();
    let lhs_report = r_norm(&product, grid, r, w, k_max)?;
    let n1 = r_norm(f1, grid, &half, w, k_max)?;
    let n2 = r_norm(f2, grid, &half, w, k_max)?;
    let rhs = n1.value * n2.value;
    Ok(ProductInequalityReport {
        lhs: lhs_report.value,
        rhs,
        holds: lhs_report.value <= rhs * (1.0 + PRODUCT_SLACK),
        lhs_report,
        factor_reports: [n1, n2],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffRatio {
    pub corpus_index: usize,
    pub l: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffEstimate {
    /// `max` of all ratios.
    pub constant: f64,
    pub ratios: Vec<CutoffRatio>,
}

/// Empirical constant `C` in `‖(1 - θ_l)φ‖_{(r_p)} ≤ C ‖φ‖_{(r_p)/2}` over a
/// corpus of compactly supported `φ` and dilations `θ_l(x) = θ(x/l)`.
///
/// Requires `r_1 ≥ 2`; at `r_1 = 2` the halved sequence starts with
/// `r_1/2 = 1`, which is still admissible. A ratio `0/0` counts as 0.
pub fn cutoff_constant_estimate(
    theta: &Expr,
    r: &RSequence,
    corpus: &[Expr],
    l_list: &[f64],
    w: &WeightSequence,
    k_max: usize,
) -> Result<CutoffEstimate> {
    if r.get(1) < 2.0 {
        return Err(Error::precondition(format!(
            "the cutoff estimate needs r_1 ≥ 2, got r_1 = {}",
            r.get(1)
        )));
    }
    if corpus.is_empty() {
        return Err(Error::invalid("corpus is empty"));
    }
    if let Some(l) = l_list.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::invalid(format!("dilation {l} must be positive")));
    }
    check_order(w, k_max, Some(r.horizon()))?;
    if let Some(i) = corpus.iter().position(|phi| !phi.support().is_bounded()) {
        return Err(Error::precondition(format!("corpus entry {i} is not compactly supported")));
    }
    let half = scale_unguarded(r, 0.5)?;
    let jobs: Vec<(usize, f64)> = (0..corpus.len())
        .flat_map(|i| l_list.iter().map(move |&l| (i, l)))
        .collect();
    let ratios = jobs
        .par_iter()
        .map(|&(i, l)| {
            let phi = &corpus[i];
            let damped = (Expr::constant(1.0) - rescale(theta.clone(), l)?) * phi.clone();
            // The product has the support hull of φ and carries the knots of
            // both factors, so its covering grid serves both sides.
            let grid = covering_grid(&damped)?;
            let numerator = r_norm(&damped, &grid, r, w, k_max)?.value;
            let denominator = r_norm(phi, &grid, &half, w, k_max)?.value;
            let ratio = if numerator == 0.0 { 0.0 } else { numerator / denominator };
            Ok(CutoffRatio {
                corpus_index: i,
                l,
                numerator,
                denominator,
                ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let constant = ratios.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(CutoffEstimate { constant, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{cutoff, translate};
    use crate::weights::gevrey;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn factorial_weights() -> WeightSequence {
        gevrey(1.0, 40).unwrap()
    }

    #[test]
    fn constants_have_norm_one_at_k0() {
        let g = Grid::uniform(-3.0, 5.0, 17).unwrap();
        for h in [0.1, 1.0, 7.0] {
            let rep = q_norm(&Expr::constant(1.0), &g, h, &factorial_weights(), 12).unwrap();
            assert_eq!(rep.value, 1.0);
            assert_eq!(rep.argmax_k, 0);
            assert!(!rep.truncation_active);
        }
    }

    #[test]
    fn identity_ties_resolve_to_k0() {
        let g = Grid::uniform(-1.0, 1.0, 201).unwrap();
        let rep = q_norm(&Expr::x(), &g, 1.0, &factorial_weights(), 12).unwrap();
        assert_eq!(rep.value, 1.0);
        assert_eq!(rep.ratios[1], 1.0);
        assert_eq!(rep.argmax_k, 0);
    }

    #[test]
    fn sine_with_half_h() {
        // Oracle: brute force over k of 1/(0.5^k k!), maximal value 2 at k = 1, 2.
        let oracle = (0..=12)
            .map(|k| 1.0 / (0.5f64.powi(k) * (1..=k).map(f64::from).product::<f64>()))
            .fold(0.0, f64::max);
        assert_eq!(oracle, 2.0);
        let g = Grid::uniform(-PI, PI, DEFAULT_POINTS).unwrap();
        let rep = q_norm(&Expr::x().sin(), &g, 0.5, &factorial_weights(), 12).unwrap();
        assert_relative_eq!(rep.value, oracle, max_relative = 1e-4);
        assert!(rep.argmax_k == 1 || rep.argmax_k == 2);
    }

    #[test]
    fn zero_function() {
        let r = RSequence::linear(2.0, 20).unwrap();
        let rep = r_norm_global(&Expr::constant(0.0), None, &r, &factorial_weights(), 12).unwrap();
        assert_eq!(rep.value, 0.0);
    }

    #[test]
    fn cutoff_r_norm_truncation_flag() {
        let r = RSequence::from_fn(40, |p| (p + 1) as f64).unwrap();
        let th = cutoff(1.0, 2.0).unwrap();
        // p! is quasianalytic: a compactly supported bump cannot have finite
        // norm, and the growing ratios must surface as an active truncation.
        let rep = r_norm_global(&th, None, &r, &factorial_weights(), 12).unwrap();
        assert!(rep.truncation_active);
        assert_eq!(rep.argmax_k, 12);
        // The flat-exponential bump is Gevrey of order 2, where the maximum is interior.
        let rep = r_norm_global(&th, None, &r, &gevrey(2.0, 40).unwrap(), 12).unwrap();
        assert!(!rep.truncation_active);
        assert_eq!(rep.argmax_k, 0);
        assert_eq!(rep.value, 1.0);
    }

    #[test]
    fn global_needs_bounded_support() {
        let r = RSequence::linear(3.0, 20).unwrap();
        let w = factorial_weights();
        let err = r_norm_global(&Expr::x().exp(), None, &r, &w, 5).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let explicit = Grid::uniform(-1.0, 1.0, 11).unwrap();
        assert!(r_norm_global(&Expr::x().exp(), Some(&explicit), &r, &w, 5).is_ok());
        let th = cutoff(1.0, 2.0).unwrap();
        assert!(r_norm_global(&th, Some(&explicit), &r, &w, 5).is_err());
    }

    #[test]
    fn order_limits() {
        let r = RSequence::linear(3.0, 5).unwrap();
        let g = Grid::uniform(0.0, 1.0, 3).unwrap();
        assert!(r_norm(&Expr::x(), &g, &r, &factorial_weights(), 6).is_err());
        assert!(q_norm(&Expr::x(), &g, 1.0, &gevrey(1.0, 4).unwrap(), 5).is_err());
    }

    #[test]
    fn product_inequality_examples() {
        let w = factorial_weights();
        let r = RSequence::linear(3.0, 20).unwrap();
        let th = cutoff(1.0, 2.0).unwrap();
        let g = Grid::new(-2.5, 2.5, DEFAULT_POINTS, &th.knots()).unwrap();
        let rep = check_product_inequality(&th, &th, &r, &w, &g, 12).unwrap();
        assert!(rep.holds, "{} > {}", rep.lhs, rep.rhs);

        let one = Expr::constant(1.0);
        let rep = check_product_inequality(&one, &th, &r, &w, &g, 12).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.factor_reports[0].value, 1.0);

        let slow = RSequence::linear(2.0, 20).unwrap();
        assert!(matches!(
            check_product_inequality(&th, &th, &slow, &w, &g, 12),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cutoff_estimate_examples() {
        let w = factorial_weights();
        let r = RSequence::linear(3.0, 20).unwrap();
        let th = cutoff(1.0, 2.0).unwrap();
        let inside = cutoff(0.25, 0.5).unwrap();
        let est = cutoff_constant_estimate(&th, &r, &[inside], &[1.0], &w, 12).unwrap();
        assert_eq!(est.constant, 0.0);

        let phi = cutoff(3.0, 4.0).unwrap();
        let est = cutoff_constant_estimate(&th, &r, &[phi], &[1.0], &w, 12).unwrap();
        assert!(est.constant > 0.0 && est.constant.is_finite());

        let far = translate(cutoff(0.5, 1.0).unwrap(), 30.0).unwrap();
        let est = cutoff_constant_estimate(&th, &r, &[far], &[1.0, 2.0], &w, 12).unwrap();
        // Off the support of θ_l the numerator is ‖φ‖ and R̄_k ≤ R_k.
        assert!(est.constant <= 1.0);

        let slow = RSequence::linear(1.5, 20).unwrap();
        assert!(cutoff_constant_estimate(&th, &slow, std::slice::from_ref(&th), &[1.0], &w, 12).is_err());
        assert!(cutoff_constant_estimate(&th, &r, &[], &[1.0], &w, 12).is_err());
        assert!(cutoff_constant_estimate(&th, &r, &[Expr::x()], &[1.0], &w, 12).is_err());
    }
}
