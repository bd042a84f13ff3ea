//! Weight sequences `(M_p)` and the standing conditions on them.
//!
//! A [`WeightSequence`] is a finite prefix `M_0, …, M_P` with `M_0 = 1`.
//! Values are kept as natural logarithms so that sequences such as
//! `(p!)^2` stay representable far beyond the range of `f64`.
//!
//! Sequences that are known exactly (Gevrey sequences with `2s` integral,
//! and anything read from decimal text) additionally carry an exact form
//! `M_p = b_p^(k/2)` with rational `b_p`. Every multiplicative inequality
//! between members reduces to an inequality between the rational bases, so
//! the checkers decide those without rounding. Everything else is checked in
//! the log domain with a relative slack of [`FLOAT_SLACK`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfmt::{format_rational, ln_rational, parse_rational, rational_from_f64};

/// Relative slack used by floating-point inequality checks.
pub const FLOAT_SLACK: f64 = 1e-12;

/// Smallest horizon accepted by [`gevrey`].
pub const MIN_GEVREY_HORIZON: usize = 4;

const MAX_REPORTED_VIOLATIONS: usize = 64;

/// `M_p = b_p^(twice_exponent / 2)`.
#[derive(Clone, Debug, PartialEq)]
struct ExactForm {
    bases: Vec<BigRational>,
    twice_exponent: u32,
}

impl ExactForm {
    /// `Π_i M_{lhs_i} ≤ Π_j M_{rhs_j}`, exactly.
    fn product_le(&self, lhs: &[usize], rhs: &[usize]) -> bool {
        // Monotonicity of t ↦ t^(k/2) reduces the comparison to the bases.
        let mut left_num = BigInt::one();
        let mut left_den = BigInt::one();
        for &i in lhs {
            left_num *= self.bases[i].numer();
            left_den *= self.bases[i].denom();
        }
        let mut right_num = BigInt::one();
        let mut right_den = BigInt::one();
        for &j in rhs {
            right_num *= self.bases[j].numer();
            right_den *= self.bases[j].denom();
        }
        left_num * right_den <= right_num * left_den
    }

    /// `M_{p-1} / M_p` as an exact rational, available when `k` is even.
    fn ratio(&self, num: usize, den: usize) -> Option<BigRational> {
        if self.twice_exponent % 2 != 0 {
            return None;
        }
        let base = &self.bases[num] / &self.bases[den];
        Some(pow_rational(&base, self.twice_exponent / 2))
    }
}

fn pow_rational(base: &BigRational, exp: u32) -> BigRational {
    num_traits::pow::pow(base.clone(), exp as usize)
}

/// A finite prefix `M_0, …, M_P` of a weight sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    name: String,
    log_values: Vec<f64>,
    exact: Option<ExactForm>,
}

/// The Gevrey sequence `M_p = (p!)^s` for `p = 0..=horizon`.
pub fn gevrey(s: f64, horizon: usize) -> Result<WeightSequence> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::invalid(format!("Gevrey order must be positive, got {s}")));
    }
    if horizon < MIN_GEVREY_HORIZON {
        return Err(Error::invalid(format!(
            "horizon must be at least {MIN_GEVREY_HORIZON}, got {horizon}"
        )));
    }
    let mut factorials = Vec::with_capacity(horizon + 1);
    let mut f = BigUint::one();
    factorials.push(f.clone());
    for p in 1..=horizon {
        f *= p as u64;
        factorials.push(f.clone());
    }
    let log_values = factorials
        .iter()
        .map(|f| s * crate::numfmt::ln_biguint(f))
        .collect();

    let twice = 2.0 * s;
    let exact = (twice.fract() == 0.0 && twice <= 64.0).then(|| ExactForm {
        bases: factorials
            .into_iter()
            .map(|f| BigRational::from_integer(BigInt::from(f)))
            .collect(),
        twice_exponent: twice as u32,
    });

    Ok(WeightSequence {
        name: format!("gevrey:{s}"),
        log_values,
        exact,
    })
}

impl WeightSequence {
    /// Builds an exact sequence from rational values.
    pub fn from_rationals(name: impl Into<String>, values: Vec<BigRational>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid("a weight sequence needs at least M_0 and M_1"));
        }
        if !values[0].is_one() {
            return Err(Error::invalid(format!("M_0 must be 1, got {}", values[0])));
        }
        if let Some(p) = values.iter().position(|v| !v.is_positive()) {
            return Err(Error::invalid(format!("M_{p} must be positive")));
        }
        let log_values = values.iter().map(ln_rational).collect();
        Ok(WeightSequence {
            name: name.into(),
            log_values,
            exact: Some(ExactForm {
                bases: values,
                twice_exponent: 2,
            }),
        })
    }

    /// Builds a sequence from float values; each float is taken as the exact
    /// rational it denotes.
    pub fn from_values(name: impl Into<String>, values: &[f64]) -> Result<Self> {
        let rationals = values
            .iter()
            .enumerate()
            .map(|(p, &v)| {
                if v.is_finite() && v > 0.0 {
                    rational_from_f64(v).ok_or_else(|| Error::invalid(format!("M_{p} = {v}")))
                } else {
                    Err(Error::invalid(format!("M_{p} must be positive and finite, got {v}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rationals(name, rationals)
    }

    /// Builds a float-mode sequence from `ln M_p`.
    pub fn from_log_values(name: impl Into<String>, log_values: Vec<f64>) -> Result<Self> {
        if log_values.len() < 2 {
            return Err(Error::invalid("a weight sequence needs at least M_0 and M_1"));
        }
        if log_values[0] != 0.0 {
            return Err(Error::invalid("M_0 must be 1"));
        }
        if let Some(p) = log_values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("ln M_{p} is not finite")));
        }
        Ok(WeightSequence {
            name: name.into(),
            log_values,
            exact: None,
        })
    }

    /// Parses a JSON array of decimal strings (`"1"`, `"2.5"`, `"7/3"`).
    pub fn from_json(name: impl Into<String>, text: &str) -> Result<Self> {
        let items: Vec<String> = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.column(), format!("expected a JSON array of strings: {e}")))?;
        let values = items
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rationals(name, values)
    }

    /// JSON array of decimal strings. Exact sequences round-trip exactly.
    pub fn to_json(&self) -> String {
        let items: Vec<String> = (0..=self.horizon()).map(|p| self.decimal_string(p)).collect();
        serde_json::to_string(&items).expect("strings serialize")
    }

    fn decimal_string(&self, p: usize) -> String {
        if let Some(form) = &self.exact {
            if form.twice_exponent % 2 == 0 {
                return format_rational(&pow_rational(&form.bases[p], form.twice_exponent / 2));
            }
        }
        let v = self.value(p);
        if v.is_finite() {
            return format!("{v}");
        }
        // Beyond f64 range: mantissa and decimal exponent from the logarithm.
        let log10 = self.log_values[p] / std::f64::consts::LN_10;
        let exponent = log10.floor();
        let mantissa = 10f64.powf(log10 - exponent);
        format!("{mantissa:.16}e{exponent}")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The horizon `P`; values exist for `0..=P`.
    pub fn horizon(&self) -> usize {
        self.log_values.len() - 1
    }

    /// True when inequality checks run in exact rational arithmetic.
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn log_value(&self, p: usize) -> f64 {
        self.log_values[p]
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    /// `M_p` as a float; `+∞` when it exceeds the `f64` range.
    pub fn value(&self, p: usize) -> f64 {
        if let Some(form) = &self.exact {
            let k = form.twice_exponent;
            let direct = if k % 2 == 0 {
                pow_rational(&form.bases[p], k / 2).to_f64()
            } else {
                pow_rational(&form.bases[p], k).to_f64().map(f64::sqrt)
            };
            if let Some(v) = direct.filter(|v| v.is_finite() && *v > 0.0) {
                return v;
            }
        }
        self.log_values[p].exp()
    }

    pub fn values(&self) -> Vec<f64> {
        (0..=self.horizon()).map(|p| self.value(p)).collect()
    }

    /// Leading prefix `M_0..=M_horizon`.
    pub fn truncated(&self, horizon: usize) -> Result<Self> {
        if horizon == 0 || horizon > self.horizon() {
            return Err(Error::invalid(format!(
                "cannot truncate horizon {} to {horizon}",
                self.horizon()
            )));
        }
        Ok(WeightSequence {
            name: self.name.clone(),
            log_values: self.log_values[..=horizon].to_vec(),
            exact: self.exact.as_ref().map(|f| ExactForm {
                bases: f.bases[..=horizon].to_vec(),
                twice_exponent: f.twice_exponent,
            }),
        })
    }

    fn arithmetic(&self) -> Arithmetic {
        if self.exact.is_some() {
            Arithmetic::Exact
        } else {
            Arithmetic::Float
        }
    }

    /// `Π M_lhs ≤ Π M_rhs`, exact when possible, otherwise with slack.
    fn product_le(&self, lhs: &[usize], rhs: &[usize]) -> bool {
        match &self.exact {
            Some(form) => form.product_le(lhs, rhs),
            None => {
                let l: f64 = lhs.iter().map(|&i| self.log_values[i]).sum();
                let r: f64 = rhs.iter().map(|&j| self.log_values[j]).sum();
                l <= r + FLOAT_SLACK.ln_1p()
            }
        }
    }

    fn product_value(&self, idx: &[usize]) -> f64 {
        if let Some(form) = self.exact.as_ref().filter(|f| f.twice_exponent % 2 == 0) {
            let exact: BigRational = idx
                .iter()
                .map(|&i| pow_rational(&form.bases[i], form.twice_exponent / 2))
                .product();
            if let Some(v) = exact.to_f64().filter(|v| v.is_finite()) {
                return v;
            }
        }
        idx.iter().map(|&i| self.log_values[i]).sum::<f64>().exp()
    }
}

/// Which arithmetic produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Arithmetic {
    Exact,
    Float,
}

/// How far a finite-horizon verdict reaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictScope {
    /// The condition was checked for every index up to the horizon.
    ExactAtHorizon,
    /// Truncation can only make the check easier: a pass is necessary but not
    /// sufficient, a violation is conclusive.
    NecessaryOnly,
}

/// Where a condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationIndex {
    Single(usize),
    Pair(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub index: ViolationIndex,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of checking one condition on a weight sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionWitness {
    pub holds: bool,
    /// First violations found, capped at 64 entries; see `violation_count`.
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    /// `(A, H)` for (M.2).
    pub constants: Option<(f64, f64)>,
    pub scope: VerdictScope,
    pub arithmetic: Arithmetic,
}

impl ConditionWitness {
    fn new(scope: VerdictScope, arithmetic: Arithmetic) -> Self {
        ConditionWitness {
            holds: true,
            violations: Vec::new(),
            violation_count: 0,
            constants: None,
            scope,
            arithmetic,
        }
    }

    fn record(&mut self, index: ViolationIndex, lhs: f64, rhs: f64) {
        self.holds = false;
        self.violation_count += 1;
        if self.violations.len() < MAX_REPORTED_VIOLATIONS {
            self.violations.push(Violation { index, lhs, rhs });
        }
    }

    /// A pass under [`VerdictScope::NecessaryOnly`] proves nothing; every
    /// other verdict is final at the horizon.
    pub fn is_conclusive(&self) -> bool {
        !self.holds || self.scope == VerdictScope::ExactAtHorizon
    }
}

/// (M.1) logarithmic convexity: `M_p² ≤ M_{p-1} M_{p+1}` for `1 ≤ p ≤ P-1`.
pub fn check_m1(w: &WeightSequence) -> ConditionWitness {
    let mut out = ConditionWitness::new(VerdictScope::ExactAtHorizon, w.arithmetic());
    for p in 1..w.horizon() {
        if !w.product_le(&[p, p], &[p - 1, p + 1]) {
            out.record(
                ViolationIndex::Single(p),
                w.product_value(&[p, p]),
                w.product_value(&[p - 1, p + 1]),
            );
        }
    }
    out
}

/// `M_p M_q ≤ M_{p+q}` for every `p + q ≤ P`, exhaustively.
///
/// This follows from (M.1) and `M_0 = 1`; checking it directly gives an
/// independent confirmation at the horizon.
pub fn check_product_growth(w: &WeightSequence) -> ConditionWitness {
    let mut out = ConditionWitness::new(VerdictScope::ExactAtHorizon, w.arithmetic());
    let horizon = w.horizon();
    for p in 0..=horizon {
        for q in 0..=(horizon - p) {
            if !w.product_le(&[p, q], &[p + q]) {
                out.record(
                    ViolationIndex::Pair(p, q),
                    w.product_value(&[p, q]),
                    w.product_value(&[p + q]),
                );
            }
        }
    }
    out
}

/// Row maxima `max_q ln(M_p / (H^p M_q M_{p-q}))`.
fn m2_row_maxima(w: &WeightSequence, h: f64) -> Vec<f64> {
    let ln_h = h.ln();
    let l = w.log_values();
    (0..=w.horizon())
        .map(|p| {
            (0..=p)
                .map(|q| l[p] - p as f64 * ln_h - l[q] - l[p - q])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// (M.2) stability under differentiation: `M_p ≤ A H^p M_q M_{p-q}`.
///
/// Scans `h_grid` from the smallest entry. A grid value `H` is accepted when
/// the row maxima of `M_p / (H^p M_q M_{p-q})` do not grow over the second
/// half of the horizon; the reported `A` is the supremum of the ratio over all
/// `q ≤ p ≤ P`. The search runs in the log domain.
pub fn check_m2(w: &WeightSequence, h_grid: &[f64]) -> Result<ConditionWitness> {
    if h_grid.is_empty() {
        return Err(Error::invalid("H grid must be nonempty"));
    }
    if let Some(h) = h_grid.iter().find(|h| !(h.is_finite() && **h >= 1.0)) {
        return Err(Error::invalid(format!("H grid entries must be at least 1, got {h}")));
    }
    let mut grid = h_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut out = ConditionWitness::new(VerdictScope::ExactAtHorizon, Arithmetic::Float);
    let half = w.horizon() / 2;
    for &h in &grid {
        let rows = m2_row_maxima(w, h);
        let early = rows[..=half].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let late = rows[half + 1..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if late <= early + 1e-9 {
            let sup = early.max(late);
            out.constants = Some((sup.exp(), h));
            return Ok(out);
        }
    }
    // Report the growth seen for the largest grid value.
    let h = *grid.last().expect("grid is nonempty");
    let rows = m2_row_maxima(w, h);
    let (p, v) = rows
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (p, v)| if v > acc.1 { (p, v) } else { acc });
    out.record(ViolationIndex::Single(p), v.exp(), 1.0);
    Ok(out)
}

/// (M.3) strong non-quasianalyticity on truncated sums:
/// `Σ_{p=q+1}^{P} M_{p-1}/M_p ≤ A q M_q / M_{q+1}` for `1 ≤ q ≤ P/2`.
///
/// Truncation lowers the left side, so a pass is only necessary; a violation
/// is conclusive. Exact when `M_p = b_p^e` with integral `e`.
pub fn check_m3(w: &WeightSequence, a: f64) -> Result<ConditionWitness> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::invalid(format!("A must be positive, got {a}")));
    }
    let horizon = w.horizon();
    let exact_terms: Option<Vec<BigRational>> = w
        .exact
        .as_ref()
        .and_then(|form| (1..=horizon).map(|p| form.ratio(p - 1, p)).collect());

    match exact_terms {
        Some(terms) => {
            let mut out = ConditionWitness::new(VerdictScope::NecessaryOnly, Arithmetic::Exact);
            let a_exact = rational_from_f64(a).expect("finite");
            // suffix[q] = Σ_{p=q+1}^{P} M_{p-1}/M_p; terms[p-1] holds the p-th term.
            let mut suffix = vec![BigRational::zero(); horizon + 1];
            for q in (0..horizon).rev() {
                suffix[q] = &suffix[q + 1] + &terms[q];
            }
            for q in 1..=horizon / 2 {
                let rhs = &a_exact * BigRational::from_integer(BigInt::from(q)) * &terms[q];
                if suffix[q] > rhs {
                    out.record(
                        ViolationIndex::Single(q),
                        suffix[q].to_f64().unwrap_or(f64::INFINITY),
                        rhs.to_f64().unwrap_or(f64::INFINITY),
                    );
                }
            }
            Ok(out)
        }
        None => {
            let mut out = ConditionWitness::new(VerdictScope::NecessaryOnly, Arithmetic::Float);
            let l = w.log_values();
            let mut suffix = vec![0.0; horizon + 1];
            for q in (0..horizon).rev() {
                suffix[q] = suffix[q + 1] + (l[q] - l[q + 1]).exp();
            }
            for q in 1..=horizon / 2 {
                let rhs = a * q as f64 * (l[q] - l[q + 1]).exp();
                if suffix[q] > rhs * (1.0 + FLOAT_SLACK) {
                    out.record(ViolationIndex::Single(q), suffix[q], rhs);
                }
            }
            Ok(out)
        }
    }
}

/// Value of the associated function `M(ρ) = sup_p log₊(ρ^p / M_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AssociatedValue {
    pub value: f64,
    /// Smallest `p` attaining the supremum (0 when the value is 0).
    pub argmax: usize,
    /// The supremum sits at the horizon, so the true value may be larger.
    pub truncated: bool,
}

/// The associated function at `rho`.
///
/// Requires (M.1): log-convexity makes `ρ^p / M_p` unimodal, so the horizon
/// supremum is the true one whenever it is attained before `P`.
pub fn associated_function(w: &WeightSequence, rho: f64) -> Result<AssociatedValue> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::invalid(format!("rho must be positive, got {rho}")));
    }
    if !check_m1(w).holds {
        return Err(Error::precondition(format!(
            "associated function needs (M.1); `{}` violates it",
            w.name()
        )));
    }
    let ln_rho = rho.ln();
    let mut best = (0usize, 0.0f64);
    for p in 1..=w.horizon() {
        let v = p as f64 * ln_rho - w.log_value(p);
        if v > best.1 * (1.0 + FLOAT_SLACK) + FLOAT_SLACK {
            best = (p, v);
        }
    }
    Ok(AssociatedValue {
        value: best.1,
        argmax: best.0,
        truncated: best.0 == w.horizon() && best.1 > 0.0,
    })
}

/// `M_k := M_{|k|}` for a multi-index `k`.
pub fn multi_index_value(w: &WeightSequence, k: &[usize]) -> Result<f64> {
    let order: usize = k.iter().sum();
    if order > w.horizon() {
        return Err(Error::invalid(format!(
            "|k| = {order} exceeds the horizon {}",
            w.horizon()
        )));
    }
    Ok(w.value(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn seq(values: &[f64]) -> WeightSequence {
        WeightSequence::from_values("test", values).unwrap()
    }

    #[test]
    fn gevrey_values() {
        let w = gevrey(1.0, 4).unwrap();
        assert_eq!(&w.values()[..4], &[1.0, 1.0, 2.0, 6.0]);
        assert_eq!(gevrey(2.0, 4).unwrap().values(), vec![1.0, 1.0, 4.0, 36.0, 576.0]);
        let half = gevrey(0.5, 4).unwrap();
        assert_relative_eq!(half.value(2), 2f64.sqrt(), max_relative = 1e-15);
        assert!(half.is_exact());
        assert!(!gevrey(1.3, 10).unwrap().is_exact());
    }

    #[test]
    fn gevrey_rejects_bad_arguments() {
        assert!(gevrey(0.0, 10).is_err());
        assert!(gevrey(-1.0, 10).is_err());
        assert!(gevrey(1.0, 3).is_err());
        assert!(gevrey(f64::NAN, 10).is_err());
    }

    #[test]
    fn m1_examples() {
        assert!(check_m1(&gevrey(2.0, 10).unwrap()).holds);
        let bad = check_m1(&seq(&[1.0, 2.0, 3.0, 4.0]));
        assert!(!bad.holds);
        assert_eq!(bad.violations[0].index, ViolationIndex::Single(1));
        assert_eq!((bad.violations[0].lhs, bad.violations[0].rhs), (4.0, 3.0));
        let flat = check_m1(&seq(&[1.0, 1.0, 1.0, 1.0]));
        assert!(flat.holds && flat.violations.is_empty());
    }

    #[test]
    fn m1_float_mode() {
        let w = gevrey(1.3, 60).unwrap();
        let c = check_m1(&w);
        assert!(c.holds);
        assert_eq!(c.arithmetic, Arithmetic::Float);
    }

    #[test]
    fn m2_examples() {
        let c = check_m2(&gevrey(1.0, 50).unwrap(), &[2.0]).unwrap();
        let (a, h) = c.constants.unwrap();
        assert_relative_eq!(a, 1.0, max_relative = 1e-12);
        assert_eq!(h, 2.0);

        let c = check_m2(&gevrey(2.0, 50).unwrap(), &[4.0, 2.0]).unwrap();
        let (a, h) = c.constants.unwrap();
        assert_relative_eq!(a, 1.0, max_relative = 1e-12);
        assert_eq!(h, 4.0);

        let c = check_m2(&seq(&[1.0; 6]), &[1.0]).unwrap();
        assert_eq!(c.constants, Some((1.0, 1.0)));
    }

    #[test]
    fn m2_no_grid_value_works() {
        let c = check_m2(&gevrey(2.0, 50).unwrap(), &[2.0, 3.0]).unwrap();
        assert!(!c.holds);
        assert!(c.constants.is_none());
    }

    #[test]
    fn m2_rejects_bad_grid() {
        assert!(check_m2(&gevrey(1.0, 10).unwrap(), &[]).is_err());
        assert!(check_m2(&gevrey(1.0, 10).unwrap(), &[0.5]).is_err());
    }

    #[test]
    fn m3_examples() {
        let c = check_m3(&gevrey(2.0, 400).unwrap(), 4.0).unwrap();
        assert!(c.holds);
        assert_eq!(c.arithmetic, Arithmetic::Exact);
        assert!(!c.is_conclusive());

        let c = check_m3(&gevrey(1.0, 400).unwrap(), 4.0).unwrap();
        assert!(!c.holds);
        assert!(c.is_conclusive());
        assert!(c.violations.iter().all(|v| matches!(v.index, ViolationIndex::Single(q) if q >= 1)));
    }

    #[test]
    fn m3_float_path_agrees() {
        let exact = gevrey(2.0, 80).unwrap();
        let float = WeightSequence::from_log_values("f", exact.log_values().to_vec()).unwrap();
        assert_eq!(check_m3(&exact, 4.0).unwrap().holds, check_m3(&float, 4.0).unwrap().holds);
        let exact = gevrey(1.0, 80).unwrap();
        let float = WeightSequence::from_log_values("f", exact.log_values().to_vec()).unwrap();
        assert_eq!(
            check_m3(&exact, 4.0).unwrap().violation_count,
            check_m3(&float, 4.0).unwrap().violation_count
        );
    }

    #[test]
    fn associated_function_examples() {
        let w = gevrey(1.0, 40).unwrap();
        assert_eq!(associated_function(&w, 1.0).unwrap().value, 0.0);
        assert_eq!(associated_function(&w, 0.5).unwrap().value, 0.0);
        let v = associated_function(&w, 2.0).unwrap();
        assert_relative_eq!(v.value, 2f64.ln(), max_relative = 1e-12);
        assert!(v.argmax == 1 || v.argmax == 2);
        assert!(!v.truncated);
    }

    #[test]
    fn associated_function_flags_truncation() {
        let w = gevrey(1.0, 5).unwrap();
        let v = associated_function(&w, 100.0).unwrap();
        assert_eq!(v.argmax, 5);
        assert!(v.truncated);
    }

    #[test]
    fn associated_function_needs_m1() {
        assert!(associated_function(&seq(&[1.0, 2.0, 3.0, 4.0]), 2.0).is_err());
    }

    #[test]
    fn multi_index_examples() {
        let w = gevrey(1.0, 10).unwrap();
        assert_eq!(multi_index_value(&w, &[1, 2]).unwrap(), 6.0);
        assert_eq!(multi_index_value(&w, &[0, 0, 0]).unwrap(), 1.0);
        assert_eq!(multi_index_value(&gevrey(2.0, 10).unwrap(), &[2, 2]).unwrap(), 576.0);
        assert!(multi_index_value(&w, &[6, 5]).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let w = WeightSequence::from_json("j", r#"["1", "1.5", "7/3", "10"]"#).unwrap();
        assert_eq!(w.to_json(), r#"["1","1.5","7/3","10"]"#);
        let g = gevrey(2.0, 30).unwrap();
        let back = WeightSequence::from_json("g", &g.to_json()).unwrap();
        assert_eq!(back.values(), g.values());
        assert!(check_m1(&back).holds);
    }

    #[test]
    fn json_rejects_bad_sequences() {
        assert!(WeightSequence::from_json("x", r#"["2", "3"]"#).is_err());
        assert!(WeightSequence::from_json("x", r#"["1", "-3"]"#).is_err());
        assert!(WeightSequence::from_json("x", r#"[1, 2]"#).is_err());
    }
}
