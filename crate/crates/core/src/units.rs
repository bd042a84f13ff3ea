//! Approximate units `(π_n)`: compactly supported test functions converging
//! to 1 with uniformly bounded `‖π_n‖_{(r_p)}`.
//!
//! A family is *special* when every compact set is eventually inside the
//! plateau `{π_n = 1}`. Verdicts here are sampled over finitely many
//! r-sequences, compact sets and `h`, and truncated at `N_max`.
//!
//! For the scaled family `π_n(x) = θ(x/n)` the sup of `|π_n^{(k)}|` is
//! `n^{-k}` times that of `θ`, so `‖π_n‖_{(r_p)} ≤ ‖θ‖_{(r_p)}` for every
//! sequence; the sampled boundedness check is consistent with that argument.

use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{cutoff, rescale, translate, Expr, GridSpec, Support};
use crate::error::{Error, Result};
use crate::rseq::{chain_member, RSequence};
use crate::seminorms::{q_norm, r_norm_global, GridSummary};
use crate::weights::WeightSequence;

/// Default family length.
pub const DEFAULT_N_MAX: usize = 30;

/// Threshold below which `q_{K,h}(π_n - 1)` counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitKind {
    Plain,
    Special,
}

#[derive(Clone, Debug, PartialEq)]
enum Generator {
    /// `θ(x/n)`, with `θ = 1` on `plateau`.
    Scaled { theta: Expr, plateau: (f64, f64) },
    /// `cutoff(n, n + width)`.
    Shifted { width: f64 },
    /// `(1 - e^{-n}) θ(x/n)`: converges, but never equals 1.
    Damped { theta: Expr },
    Zero,
    Explicit(Vec<Expr>),
    /// `π_n + ψ_n`, with `ψ_n = 0` on `[-n, n]`.
    Perturbed { base: Box<ApproximateUnitFamily>, psi: Vec<Expr> },
}

/// A finite family `π_1, …, π_{N_max}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproximateUnitFamily {
    generator: Generator,
    kind: UnitKind,
    n_max: usize,
    provenance: String,
}

/// The interval around 0 on which a piecewise `θ` is the constant 1.
fn unit_plateau(theta: &Expr) -> Option<(f64, f64)> {
    let Expr::Piecewise(pw) = theta else {
        return None;
    };
    let knots = pw.knots();
    pw.pieces().iter().enumerate().find_map(|(i, piece)| {
        let lo = if i == 0 { f64::NEG_INFINITY } else { knots[i - 1] };
        let hi = knots.get(i).copied().unwrap_or(f64::INFINITY);
        (matches!(piece, Expr::Const(c) if *c == 1.0) && lo < 0.0 && 0.0 < hi).then_some((lo, hi))
    })
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(Error::invalid("a family needs N_max ≥ 1"));
    }
    Ok(())
}

fn bounded_support(f: &Expr, what: &str) -> Result<Support> {
    let s = f.support();
    if s.is_bounded() {
        Ok(s)
    } else {
        Err(Error::precondition(format!("{what} is not compactly supported")))
    }
}

/// `π_n = θ(x/n)`; `θ` must be a compactly supported piecewise function
/// equal to 1 on an interval around 0.
pub fn scaled_cutoff_family(theta: &Expr, n_max: usize) -> Result<ApproximateUnitFamily> {
    check_n_max(n_max)?;
    bounded_support(theta, "θ")?;
    let plateau = unit_plateau(theta)
        .ok_or_else(|| Error::precondition("θ must be piecewise with a constant-one piece around 0"))?;
    Ok(ApproximateUnitFamily {
        generator: Generator::Scaled {
            theta: theta.clone(),
            plateau,
        },
        kind: UnitKind::Special,
        n_max,
        provenance: format!("scaled: theta = {theta}"),
    })
}

/// `π_n = cutoff(n, n + width)`.
pub fn shifted_cutoff_family(width: f64, n_max: usize) -> Result<ApproximateUnitFamily> {
    check_n_max(n_max)?;
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::invalid(format!("transition width must be positive, got {width}")));
    }
    Ok(ApproximateUnitFamily {
        generator: Generator::Shifted { width },
        kind: UnitKind::Special,
        n_max,
        provenance: format!("shifted: cutoff(n, n + {width:?})"),
    })
}

/// `π_n = (1 - e^{-n}) θ(x/n)`, an approximate unit that is not special.
pub fn damped_cutoff_family(theta: &Expr, n_max: usize) -> Result<ApproximateUnitFamily> {
    check_n_max(n_max)?;
    bounded_support(theta, "θ")?;
    Ok(ApproximateUnitFamily {
        generator: Generator::Damped { theta: theta.clone() },
        kind: UnitKind::Plain,
        n_max,
        provenance: format!("damped: (1 - e^-n) theta(x/n), theta = {theta}"),
    })
}

/// `π_n ≡ 0`, which is not an approximate unit at all.
pub fn zero_family(n_max: usize) -> Result<ApproximateUnitFamily> {
    check_n_max(n_max)?;
    Ok(ApproximateUnitFamily {
        generator: Generator::Zero,
        kind: UnitKind::Plain,
        n_max,
        provenance: "zero".into(),
    })
}

/// A user-supplied family; the claimed kind is verified, not trusted.
pub fn explicit_family(members: Vec<Expr>, kind: UnitKind, provenance: impl Into<String>) -> Result<ApproximateUnitFamily> {
    check_n_max(members.len())?;
    for (i, m) in members.iter().enumerate() {
        bounded_support(m, &format!("member {}", i + 1))?;
    }
    Ok(ApproximateUnitFamily {
        n_max: members.len(),
        generator: Generator::Explicit(members),
        kind,
        provenance: provenance.into(),
    })
}

impl ApproximateUnitFamily {
    /// Parses `scaled:a,b`, `shifted:w`, `damped:a,b` or `zero`.
    pub fn from_spec(spec: &str, n_max: usize) -> Result<Self> {
        let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
        let nums: Vec<f64> = args
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(kind.len() + 1, format!("bad number in family spec `{spec}`")))?;
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::parse(0, format!("`{kind}` takes {n} argument(s) in `{spec}`")))
            }
        };
        match kind.trim() {
            "scaled" => {
                arity(2)?;
                scaled_cutoff_family(&cutoff(nums[0], nums[1])?, n_max)
            }
            "shifted" => {
                arity(1)?;
                shifted_cutoff_family(nums[0], n_max)
            }
            "damped" => {
                arity(2)?;
                damped_cutoff_family(&cutoff(nums[0], nums[1])?, n_max)
            }
            "zero" => {
                arity(0)?;
                zero_family(n_max)
            }
            other => Err(Error::parse(0, format!("unknown family kind `{other}`"))),
        }
    }

    pub fn kind(&self) -> UnitKind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// `π_n` for `1 ≤ n ≤ N_max`.
    pub fn member(&self, n: usize) -> Result<Expr> {
        if n == 0 || n > self.n_max {
            return Err(Error::invalid(format!("member index {n} outside 1..={}", self.n_max)));
        }
        match &self.generator {
            Generator::Scaled { theta, .. } => rescale(theta.clone(), n as f64),
            Generator::Shifted { width } => cutoff(n as f64, n as f64 + width),
            Generator::Damped { theta } => {
                Ok(rescale(theta.clone(), n as f64)? * Expr::constant(1.0 - (-(n as f64)).exp()))
            }
            Generator::Zero => Ok(Expr::constant(0.0)),
            Generator::Explicit(members) => Ok(members[n - 1].clone()),
            Generator::Perturbed { base, psi } => {
                let pi = base.member(n)?;
                let p = &psi[n - 1];
                Ok(if p.is_zero() { pi } else { pi + p.clone() })
            }
        }
    }

    /// Declared interval where `π_n = 1`, when the construction provides one.
    pub fn plateau(&self, n: usize) -> Option<(f64, f64)> {
        let n_f = n as f64;
        match &self.generator {
            Generator::Scaled { plateau, .. } => Some((n_f * plateau.0, n_f * plateau.1)),
            Generator::Shifted { .. } => Some((-n_f, n_f)),
            Generator::Perturbed { base, .. } => base.plateau(n).map(|(lo, hi)| (lo.max(-n_f), hi.min(n_f))),
            _ => None,
        }
    }
}

/// `ψ` with `supp ψ_n ∩ [-n, n] = ∅` added to each member: `π̃_n = π_n + ψ_n`.
pub fn perturb_family(fam: &ApproximateUnitFamily, psi: Vec<Expr>) -> Result<ApproximateUnitFamily> {
    if psi.len() < fam.n_max {
        return Err(Error::invalid(format!(
            "need {} perturbations, got {}",
            fam.n_max,
            psi.len()
        )));
    }
    for (i, p) in psi.iter().enumerate() {
        let n = (i + 1) as f64;
        if let Support::Interval(lo, hi) = bounded_support(p, &format!("ψ_{}", i + 1))? {
            if lo <= n && -n <= hi {
                return Err(Error::precondition(format!(
                    "supp ψ_{} = [{lo}, {hi}] meets [-{n}, {n}]",
                    i + 1
                )));
            }
        }
    }
    let mut psi = psi;
    psi.truncate(fam.n_max);
    Ok(ApproximateUnitFamily {
        generator: Generator::Perturbed {
            base: Box::new(fam.clone()),
            psi,
        },
        kind: fam.kind,
        n_max: fam.n_max,
        provenance: format!("perturbed: {}", fam.provenance),
    })
}

/// `φ / (m ‖φ‖_{(r_p)})`, whose norm is `1/m`.
pub fn normalize_psi(phi: &Expr, m: usize, r: &RSequence, w: &WeightSequence, k_max: usize) -> Result<Expr> {
    if m == 0 {
        return Err(Error::invalid("normalization index starts at 1"));
    }
    let norm = r_norm_global(phi, None, r, w, k_max)?.value;
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::precondition(format!("cannot normalize a function of norm {norm}")));
    }
    Ok(phi.clone() * Expr::constant(1.0 / (m as f64 * norm)))
}

/// `ψ_m = φ_m / (m ‖φ_m‖_{(r^m_p)})` for `m = 1..=n_max`, where `φ_m` is
/// `bump` translated to `2m + 3` and `r^m_p = (1+p)^{1/m}`.
///
/// With `bump` supported in `[-1, 1]` every `ψ_m` vanishes on `[-m, m]`.
pub fn proof_perturbations(bump: &Expr, n_max: usize, w: &WeightSequence, k_max: usize) -> Result<Vec<Expr>> {
    (1..=n_max)
        .into_par_iter()
        .map(|m| {
            let r = chain_member(m, k_max.max(1))?;
            normalize_psi(&translate(bump.clone(), 2.0 * m as f64 + 3.0)?, m, &r, w, k_max)
        })
        .collect()
}

/// Sum of functions with pairwise disjoint supports.
pub fn disjoint_sum(parts: &[Expr]) -> Result<Expr> {
    let mut hulls = Vec::with_capacity(parts.len());
    for (i, p) in parts.iter().enumerate() {
        if let Support::Interval(lo, hi) = bounded_support(p, &format!("part {i}"))? {
            hulls.push((i, lo, hi));
        }
    }
    for (x, &(i, a, b)) in hulls.iter().enumerate() {
        for &(j, c, d) in &hulls[x + 1..] {
            if a < d && c < b {
                return Err(Error::precondition(format!(
                    "supports of parts {i} [{a}, {b}] and {j} [{c}, {d}] overlap"
                )));
            }
        }
    }
    let mut iter = parts.iter().cloned();
    let first = iter.next().ok_or_else(|| Error::invalid("disjoint_sum of no parts"))?;
    Ok(iter.fold(first, |acc, p| acc + p))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundednessCheck {
    pub r_index: usize,
    /// `‖π_n‖_{(r_p)}` for `n = 1..=N_max`.
    pub norms: Vec<f64>,
    pub sup: f64,
    pub argmax_n: usize,
    pub truncation_active: bool,
    /// Finite, and saturating: whatever the norms gain over the second half
    /// of the family is at most half of what they gained over the first half.
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceCheck {
    pub grid: GridSummary,
    pub h: f64,
    /// `q_{K,h}(π_n - 1)` for `n = 1..=N_max`.
    pub values: Vec<f64>,
    /// First `n` from which the values are nonincreasing.
    pub monotone_from: Option<usize>,
    /// First `n` from which the values are exactly zero.
    pub zero_from: Option<usize>,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialCheck {
    pub grid: GridSummary,
    /// First `n` from which `π_n = 1` at every grid point, checked by evaluation.
    pub observed_from: Option<usize>,
    /// First `n` from which the declared plateau contains the grid interval.
    pub declared_from: Option<usize>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitReport {
    pub provenance: String,
    pub kind: UnitKind,
    pub n_max: usize,
    pub scope: &'static str,
    pub boundedness: Vec<BoundednessCheck>,
    pub convergence: Vec<ConvergenceCheck>,
    /// Present for families claiming to be special.
    pub special: Option<Vec<SpecialCheck>>,
    pub bounded: bool,
    pub converges: bool,
    pub special_verified: Option<bool>,
    pub passes: bool,
}

/// Sampled parameters for [`verify_unit`].
#[derive(Clone, Debug)]
pub struct UnitCheckConfig<'a> {
    pub r_samples: &'a [RSequence],
    pub w: &'a WeightSequence,
    pub compacts: &'a [GridSpec],
    pub h_samples: &'a [f64],
    pub k_max: usize,
}

fn first_suffix(values: &[f64], pred: impl Fn(usize) -> bool) -> Option<usize> {
    let mut from = None;
    for i in (0..values.len()).rev() {
        if pred(i) {
            from = Some(i + 1);
        } else {
            break;
        }
    }
    from
}

/// Checks boundedness, convergence to 1 and, for special families, plateau coverage.
pub fn verify_unit(fam: &ApproximateUnitFamily, cfg: &UnitCheckConfig<'_>) -> Result<UnitReport> {
    if cfg.r_samples.is_empty() || cfg.compacts.is_empty() || cfg.h_samples.is_empty() {
        return Err(Error::invalid("verification needs r, compact and h samples"));
    }
    let members: Vec<Expr> = (1..=fam.n_max).map(|n| fam.member(n)).collect::<Result<_>>()?;

    let boundedness = cfg
        .r_samples
        .par_iter()
        .enumerate()
        .map(|(r_index, r)| {
            let reports: Vec<_> = members
                .par_iter()
                .map(|pi| r_norm_global(pi, None, r, cfg.w, cfg.k_max))
                .collect::<Result<_>>()?;
            let norms: Vec<f64> = reports.iter().map(|rep| rep.value).collect();
            let mut argmax = 0;
            for (i, &v) in norms.iter().enumerate() {
                if v > norms[argmax] {
                    argmax = i;
                }
            }
            let half = norms.len().div_ceil(2);
            let first_max = norms[..half].iter().copied().fold(0.0, f64::max);
            let later_max = norms[half..].iter().copied().fold(0.0, f64::max);
            let early_gain = first_max - norms[0];
            let late_gain = later_max - first_max;
            Ok(BoundednessCheck {
                r_index,
                sup: norms[argmax],
                argmax_n: argmax + 1,
                truncation_active: reports.iter().any(|rep| rep.truncation_active),
                bounded: norms.iter().all(|v| v.is_finite())
                    && (late_gain <= 1e-9 * first_max || late_gain <= 0.5 * early_gain),
                norms,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let pairs: Vec<(GridSpec, f64)> = cfg
        .compacts
        .iter()
        .flat_map(|k| cfg.h_samples.iter().map(move |&h| (*k, h)))
        .collect();
    let convergence = pairs
        .par_iter()
        .map(|&(spec, h)| {
            let values: Vec<f64> = members
                .par_iter()
                .map(|pi| {
                    let grid = spec.build(&pi.knots())?;
                    Ok(q_norm(&(pi.clone() - Expr::constant(1.0)), &grid, h, cfg.w, cfg.k_max)?.value)
                })
                .collect::<Result<_>>()?;
            let monotone_from = first_suffix(&values, |i| i == 0 || values[i] <= values[i - 1]);
            let zero_from = first_suffix(&values, |i| values[i] == 0.0);
            let last = *values.last().expect("N_max ≥ 1");
            Ok(ConvergenceCheck {
                grid: GridSummary {
                    a: spec.a,
                    b: spec.b,
                    points: spec.points,
                },
                h,
                monotone_from,
                zero_from,
                converged: monotone_from.is_some() && last < CONVERGENCE_TOL,
                values,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let special = if fam.kind == UnitKind::Special {
        Some(
            cfg.compacts
                .iter()
                .map(|spec| {
                    let ones: Vec<bool> = members
                        .iter()
                        .map(|pi| {
                            let grid = spec.build(&pi.knots())?;
                            let mut all = true;
                            for &x in grid.points() {
                                all &= pi.eval(x)? == 1.0;
                            }
                            Ok(all)
                        })
                        .collect::<Result<_>>()?;
                    let observed_from = first_suffix(&vec![0.0; ones.len()], |i| ones[i]);
                    let covered: Vec<bool> = (1..=fam.n_max)
                        .map(|n| fam.plateau(n).is_some_and(|(lo, hi)| spec.within(lo, hi)))
                        .collect();
                    let declared_from = first_suffix(&vec![0.0; covered.len()], |i| covered[i]);
                    let verified = match (observed_from, declared_from) {
                        (Some(o), Some(d)) => o <= d,
                        (Some(_), None) => true,
                        _ => false,
                    };
                    Ok(SpecialCheck {
                        grid: GridSummary {
                            a: spec.a,
                            b: spec.b,
                            points: spec.points,
                        },
                        observed_from,
                        declared_from,
                        verified,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let bounded = boundedness.iter().all(|b| b.bounded);
    let converges = convergence.iter().all(|c| c.converged);
    let special_verified = special.as_ref().map(|s| s.iter().all(|c| c.verified));
    Ok(UnitReport {
        provenance: fam.provenance.clone(),
        kind: fam.kind,
        n_max: fam.n_max,
        scope: "sampled at horizon",
        boundedness,
        convergence,
        special,
        bounded,
        converges,
        special_verified,
        passes: bounded && converges && special_verified.unwrap_or(true),
    })
}
