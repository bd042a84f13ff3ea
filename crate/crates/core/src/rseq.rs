//! Sequences increasing to infinity and their product sequences.
//!
//! An [`RSequence`] is a finite prefix `r_0 = 1 ≤ r_1 ≤ … ≤ r_P`. Divergence
//! cannot be observed at a finite horizon; [`RSequence::trend_witness`]
//! reports the proxy `r_P ≥ 2` instead of enforcing it.

use serde::Serialize;

use crate::error::{Error, Result};

/// Threshold used by the divergence proxy `r_P ≥ 2`.
pub const TREND_THRESHOLD: f64 = 2.0;

/// A member `(r_p)` of the class of sequences increasing to infinity, up to a horizon.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RSequence {
    values: Vec<f64>,
}

impl RSequence {
    /// Validates `r_0 = 1`, positivity, finiteness and monotonicity.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid("an r-sequence needs at least r_0 and r_1"));
        }
        if values[0] != 1.0 {
            return Err(Error::invalid(format!("r_0 must be 1, got {}", values[0])));
        }
        if let Some(p) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::invalid(format!("r_{p} = {} is not positive and finite", values[p])));
        }
        if let Some(p) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::invalid(format!(
                "r-sequence must be nondecreasing: r_{} = {} > r_{} = {}",
                p,
                values[p],
                p + 1,
                values[p + 1]
            )));
        }
        Ok(RSequence { values })
    }

    /// `r_0 = 1` and `r_p = f(p)` for `1 ≤ p ≤ horizon`.
    pub fn from_fn(horizon: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        let values = std::iter::once(1.0).chain((1..=horizon).map(f)).collect();
        Self::new(values)
    }

    /// `r_p = c·p` for `p ≥ 1`.
    pub fn linear(c: f64, horizon: usize) -> Result<Self> {
        Self::from_fn(horizon, |p| c * p as f64)
    }

    /// Parses a compact description:
    /// `linear:c` (`r_p = c p`), `affine:c,d` (`r_p = c p + d`),
    /// `power:e` (`r_p = (p+1)^e`), `list:1,2,3,…` (explicit values; the
    /// horizon argument is ignored).
    pub fn from_spec(spec: &str, horizon: usize) -> Result<Self> {
        let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
        let nums = || -> Result<Vec<f64>> {
            args.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::parse(kind.len() + 1, format!("bad number `{s}` in `{spec}`")))
                })
                .collect()
        };
        let expect = |n: usize, v: Vec<f64>| -> Result<Vec<f64>> {
            if v.len() == n {
                Ok(v)
            } else {
                Err(Error::parse(0, format!("`{kind}` takes {n} argument(s) in `{spec}`")))
            }
        };
        match kind.trim() {
            "linear" => {
                let v = expect(1, nums()?)?;
                Self::linear(v[0], horizon)
            }
            "affine" => {
                let v = expect(2, nums()?)?;
                Self::from_fn(horizon, |p| v[0] * p as f64 + v[1])
            }
            "power" => {
                let v = expect(1, nums()?)?;
                Self::from_fn(horizon, |p| ((p + 1) as f64).powf(v[0]))
            }
            "list" => Self::new(nums()?),
            other => Err(Error::parse(0, format!("unknown r-sequence kind `{other}`"))),
        }
    }

    /// Parses a JSON array of numbers.
    pub fn from_json(text: &str) -> Result<Self> {
        let values: Vec<f64> = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.column(), format!("expected a JSON array of numbers: {e}")))?;
        Self::new(values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.values).expect("finite floats serialize")
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, p: usize) -> f64 {
        self.values[p]
    }

    /// Finite-horizon stand-in for `r_p → ∞`: `r_P ≥ 2`.
    pub fn trend_witness(&self) -> bool {
        self.values[self.horizon()] >= TREND_THRESHOLD
    }

    /// Leading prefix `r_0..=r_horizon`.
    pub fn truncated(&self, horizon: usize) -> Result<Self> {
        if horizon == 0 || horizon > self.horizon() {
            return Err(Error::invalid(format!(
                "cannot truncate horizon {} to {horizon}",
                self.horizon()
            )));
        }
        Ok(RSequence {
            values: self.values[..=horizon].to_vec(),
        })
    }
}

/// Cumulative products `R_p = r_0 r_1 ⋯ r_p`.
///
/// Products that leave the `f64` range are reported as `+∞` in
/// [`values`](Self::values); the logarithms stay exact to rounding.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductSequence {
    values: Vec<f64>,
    log_values: Vec<f64>,
}

impl ProductSequence {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    pub fn value(&self, p: usize) -> f64 {
        self.values[p]
    }

    pub fn log_value(&self, p: usize) -> f64 {
        self.log_values[p]
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    /// True when some `R_p` exceeds the `f64` range.
    pub fn overflowed(&self) -> bool {
        self.values.iter().any(|v| v.is_infinite())
    }
}

pub fn product_sequence(r: &RSequence) -> ProductSequence {
    let mut values = Vec::with_capacity(r.values.len());
    let mut log_values = Vec::with_capacity(r.values.len());
    let (mut acc, mut log_acc) = (1.0f64, 0.0f64);
    for (p, &v) in r.values.iter().enumerate() {
        if p > 0 {
            acc *= v;
            log_acc += v.ln();
        }
        values.push(acc);
        log_values.push(log_acc);
    }
    ProductSequence { values, log_values }
}

/// `λ(r_p)`: keeps `r_0 = 1` and multiplies every later entry by `λ`.
///
/// For `λ < 1` the result stays in the class only when `r_1 > 1/λ`.
pub fn scale(r: &RSequence, lambda: f64) -> Result<RSequence> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid(format!("scale factor must be positive, got {lambda}")));
    }
    if lambda < 1.0 && r.get(1) * lambda <= 1.0 {
        return Err(Error::precondition(format!(
            "scaling by {lambda} needs r_1 > {}, got r_1 = {}",
            1.0 / lambda,
            r.get(1)
        )));
    }
    scale_unguarded(r, lambda)
}

/// Scaling that only requires the result to be nondecreasing (`λ r_1 ≥ 1`).
pub(crate) fn scale_unguarded(r: &RSequence, lambda: f64) -> Result<RSequence> {
    let values = r
        .values
        .iter()
        .enumerate()
        .map(|(p, &v)| if p == 0 { 1.0 } else { lambda * v })
        .collect();
    RSequence::new(values)
}

/// Outcome of the exhaustive check of `R_p R_q ≤ R_{p+q}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperadditivityReport {
    pub holds: bool,
    pub pairs_checked: usize,
    /// Smallest `ln R_{p+q} - ln R_p - ln R_q` seen, and where.
    pub min_margin: f64,
    pub argmin: (usize, usize),
}

/// `R_p R_q ≤ R_{p+q}` for every `p + q ≤ P`, in the log domain with a
/// relative tolerance of `1e-12` for rounding in the running sums.
pub fn check_superadditivity(r: &RSequence) -> SuperadditivityReport {
    let l = product_sequence(r).log_values;
    let horizon = r.horizon();
    let mut report = SuperadditivityReport {
        holds: true,
        pairs_checked: 0,
        min_margin: f64::INFINITY,
        argmin: (0, 0),
    };
    for p in 0..=horizon {
        for q in 0..=(horizon - p) {
            let margin = l[p + q] - l[p] - l[q];
            report.pairs_checked += 1;
            if margin < report.min_margin {
                report.min_margin = margin;
                report.argmin = (p, q);
            }
            if margin < -1e-12 * (1.0 + l[p + q].abs()) {
                report.holds = false;
            }
        }
    }
    report
}

/// Finite-horizon version of `s ≺ r`: `s_p ≤ r_p` for all `p ≤ P` and
/// `r_P / s_P ≥ threshold`, the threshold standing in for `limsup = ∞`.
pub fn precedes(s: &RSequence, r: &RSequence, threshold: f64) -> Result<bool> {
    if s.horizon() != r.horizon() {
        return Err(Error::invalid(format!(
            "horizons differ: {} vs {}",
            s.horizon(),
            r.horizon()
        )));
    }
    let dominated = s.values.iter().zip(&r.values).all(|(a, b)| a <= b);
    let p = r.horizon();
    Ok(dominated && r.get(p) / s.get(p) >= threshold)
}

/// `r̃_0 = 1`, `r̃_p = r_{p+p0}`; the horizon drops to `P - p0`.
pub fn tail_shift(r: &RSequence, p0: usize) -> Result<RSequence> {
    if p0 >= r.horizon() {
        return Err(Error::invalid(format!(
            "shift {p0} must be below the horizon {}",
            r.horizon()
        )));
    }
    let values = std::iter::once(1.0)
        .chain(r.values[1 + p0..].iter().copied())
        .collect();
    RSequence::new(values)
}

/// Smallest shift `p0` with `r_{p+p0} > c` for every `p ≥ 1`, if the horizon has one.
pub fn min_shift_exceeding(r: &RSequence, c: f64) -> Option<usize> {
    // Monotone: the first entry after the shift is the smallest one.
    (0..r.horizon()).find(|&p0| r.get(p0 + 1) > c)
}

/// Decreasing chain `r^m_p = (p + 1)^(1/m)`: `r^{m+1} ≺ r^m` for every `m`.
pub fn chain_member(m: usize, horizon: usize) -> Result<RSequence> {
    if m == 0 {
        return Err(Error::invalid("chain index starts at 1"));
    }
    RSequence::from_fn(horizon, |p| ((p + 1) as f64).powf(1.0 / m as f64))
}

/// Smallest chain index `m` whose product sequence is dominated by that of
/// `v` at every index up to the horizon.
pub fn dominated_chain_index(chain: &[RSequence], v: &RSequence) -> Option<usize> {
    let target = product_sequence(v);
    chain.iter().position(|r| {
        let horizon = r.horizon().min(v.horizon());
        let rp = product_sequence(r);
        (0..=horizon).all(|p| rp.log_value(p) <= target.log_value(p) + 1e-12)
    })
}

/// `sup_p a_p / R_p` for one sampled sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledSup {
    pub sup: f64,
    pub argmax: usize,
    pub finite: bool,
    /// The supremum is attained before the horizon and the last ratio is
    /// below it.
    pub eventually_decreasing: bool,
}

/// Evidence for the direction "bounded by `h^p` ⇒ bounded by every `R_p`".
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KomatsuL1Report {
    /// `sup_p a_p / h^p` at the horizon.
    pub h_bound: f64,
    pub samples: Vec<SampledSup>,
}

fn log_or_neg_inf(a: f64) -> f64 {
    if a == 0.0 {
        f64::NEG_INFINITY
    } else {
        a.ln()
    }
}

fn validate_nonnegative(a: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::invalid("sequence a is empty"));
    }
    if let Some(p) = a.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::invalid(format!("a_{p} = {} must be finite and nonnegative", a[p])));
    }
    Ok(())
}

pub fn komatsu_check_l1(a: &[f64], h: f64, samples: &[RSequence]) -> Result<KomatsuL1Report> {
    validate_nonnegative(a)?;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::invalid(format!("h must be positive, got {h}")));
    }
    let horizon = a.len() - 1;
    let ln_h = h.ln();
    let h_bound = a
        .iter()
        .enumerate()
        .map(|(p, &v)| log_or_neg_inf(v) - p as f64 * ln_h)
        .fold(f64::NEG_INFINITY, f64::max)
        .exp();

    let samples = samples
        .iter()
        .map(|r| {
            if r.horizon() != horizon {
                return Err(Error::invalid(format!(
                    "sample horizon {} differs from {horizon}",
                    r.horizon()
                )));
            }
            let big_r = product_sequence(r);
            let ratios: Vec<f64> = a
                .iter()
                .enumerate()
                .map(|(p, &v)| (log_or_neg_inf(v) - big_r.log_value(p)).exp())
                .collect();
            let (argmax, sup) = ratios
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (p, v)| if v > acc.1 { (p, v) } else { acc });
            let eventually_decreasing = argmax < horizon
                && (horizon == 0 || ratios[horizon] <= ratios[horizon - 1])
                && (ratios[horizon] < sup || sup == 0.0);
            Ok(SampledSup {
                sup,
                argmax,
                finite: sup.is_finite(),
                eventually_decreasing,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KomatsuL1Report { h_bound, samples })
}

/// A constructed `(r_p)` with `a_p ≤ R_p` for `1 ≤ p ≤ P`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KomatsuWitness {
    pub sequence: RSequence,
    /// `a_P^{1/P} > 1`: the input looks inconsistent with sub-geometric growth.
    pub hypothesis_dubious: bool,
}

/// Witness for "bounded by every `h^p` ⇒ bounded by some `R_p`".
///
/// With `s_p = max_{p ≤ q ≤ P} a_q^{1/q}` and
/// `r_p = max(r_{p-1}, √p, p·s_p)` one gets `R_p ≥ p!·s_p^p ≥ a_p` for
/// `p ≥ 1`; the `√p` term makes the sequence diverge. The ratio at `p = 0`
/// is `a_0` itself.
pub fn komatsu_witness(a: &[f64]) -> Result<KomatsuWitness> {
    validate_nonnegative(a)?;
    let logs: Vec<f64> = a.iter().map(|&v| log_or_neg_inf(v)).collect();
    komatsu_witness_log(&logs)
}

/// [`komatsu_witness`] on `ln a_p` (use `-∞` for zero entries); handles inputs
/// such as `1/p!` far below the `f64` range.
pub fn komatsu_witness_log(ln_a: &[f64]) -> Result<KomatsuWitness> {
    if ln_a.len() < 2 {
        return Err(Error::invalid("need at least a_0 and a_1"));
    }
    if let Some(p) = ln_a.iter().position(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(Error::invalid(format!("ln a_{p} must be finite or -inf")));
    }
    let horizon = ln_a.len() - 1;
    // ln s_p, as a suffix maximum of ln a_q / q.
    let mut ln_s = vec![f64::NEG_INFINITY; horizon + 2];
    for p in (1..=horizon).rev() {
        ln_s[p] = ln_s[p + 1].max(ln_a[p] / p as f64);
    }
    let mut values = vec![1.0f64];
    for p in 1..=horizon {
        let candidate = (p as f64).ln() + ln_s[p];
        let r = values[p - 1].max((p as f64).sqrt()).max(candidate.exp());
        values.push(r);
    }
    Ok(KomatsuWitness {
        sequence: RSequence::new(values)?,
        hypothesis_dubious: ln_a[horizon] / horizon as f64 > 0.0,
    })
}
