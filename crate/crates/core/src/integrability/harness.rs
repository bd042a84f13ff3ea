use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::distribution::Ultradistribution;
use crate::calculus::{cutoff, translate, Expr, GridSpec, Support, DEFAULT_K_MAX};
use crate::error::{Error, Result};
use crate::rseq::RSequence;
use crate::seminorms::r_norm_global;
use crate::units::{perturb_family, proof_perturbations, verify_unit, ApproximateUnitFamily, UnitCheckConfig, UnitKind};
use crate::weights::{gevrey, WeightSequence};

/// Outcome of one condition test. Fail verdicts are results, not errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// A compactly supported test function with its precomputed `‖φ‖_{(r_p)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusEntry {
    /// Name of the ladder this entry belongs to; growth is looked for along ladders.
    pub ladder: String,
    pub level: usize,
    #[serde(serialize_with = "display")]
    pub phi: Expr,
    pub support: (f64, f64),
    pub norm: f64,
}

fn display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Test functions normed against one r-sequence and weight sequence.
#[derive(Clone, Debug)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    r: RSequence,
    w: WeightSequence,
    k_max: usize,
}

impl Corpus {
    /// Norms every `(ladder, level, φ)`; each `φ` must be compactly supported with nonzero norm.
    pub fn new(items: Vec<(String, usize, Expr)>, r: &RSequence, w: &WeightSequence, k_max: usize) -> Result<Corpus> {
        let entries = items
            .into_par_iter()
            .map(|(ladder, level, phi)| {
                let support = match phi.support() {
                    Support::Interval(lo, hi) if lo.is_finite() && hi.is_finite() => (lo, hi),
                    _ => return Err(Error::precondition(format!("corpus entry {phi} is not compactly supported"))),
                };
                let norm = r_norm_global(&phi, None, r, w, k_max)?.value;
                if !(norm > 0.0 && norm.is_finite()) {
                    return Err(Error::precondition(format!("corpus entry {phi} has norm {norm}")));
                }
                Ok(CorpusEntry {
                    ladder,
                    level,
                    phi,
                    support,
                    norm,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Corpus {
            entries,
            r: r.clone(),
            w: w.clone(),
            k_max,
        })
    }

    /// The standard ladders, `i = 0..levels`:
    ///
    /// - `wide`: `cutoff(2^i, 2^i + 1)`, widening plateaus around 0;
    /// - `far`: the same bumps translated to `3·2^i + 4`, escaping to infinity;
    /// - `near`: `cutoff(1/4, 1/2)` translated to `0.26 + 0.03 i`, so that 0
    ///   sits in its rising edge; these all live at level 0 because they
    ///   probe the distribution near the origin rather than escape anywhere;
    /// - `shifted`: `cutoff(1/4, 1/2)` translated to `1.5 + i`.
    ///
    /// `extra` seeded random bumps are appended at level 0.
    pub fn ladder(levels: usize, extra: usize, seed: u64, r: &RSequence, w: &WeightSequence, k_max: usize) -> Result<Corpus> {
        let mut items = Vec::new();
        for i in 0..levels {
            let s = 2f64.powi(i as i32);
            items.push(("wide".to_string(), i, cutoff(s, s + 1.0)?));
            items.push(("far".to_string(), i, translate(cutoff(s, s + 1.0)?, 3.0 * s + 4.0)?));
            items.push(("near".to_string(), 0, translate(cutoff(0.25, 0.5)?, 0.26 + 0.03 * i as f64)?));
            items.push(("shifted".to_string(), i, translate(cutoff(0.25, 0.5)?, 1.5 + i as f64)?));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..extra {
            let a = rng.gen_range(0.25..4.0);
            let b = a + rng.gen_range(0.25..2.0);
            let c = rng.gen_range(-20.0..20.0);
            items.push(("random".to_string(), 0, translate(cutoff(a, b)?, c)?));
        }
        Corpus::new(items, r, w, k_max)
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn r(&self) -> &RSequence {
        &self.r
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.w
    }

    /// Entries whose support misses `[-radius, radius]`.
    pub fn outside(&self, radius: f64) -> Corpus {
        Corpus {
            entries: self
                .entries
                .iter()
                .filter(|e| e.support.0 > radius || e.support.1 < -radius)
                .cloned()
                .collect(),
            r: self.r.clone(),
            w: self.w.clone(),
            k_max: self.k_max,
        }
    }
}

/// Thresholds of the ratio and trajectory heuristics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Heuristics {
    /// Ratio sups are stable when the sup over all levels is at most this
    /// factor times the sup over the first half of the levels.
    pub stability_factor: f64,
    /// A ladder grows when its ratios are nondecreasing over at least three
    /// levels and the last is at least this factor times the first.
    pub growth_factor: f64,
}

impl Default for Heuristics {
    fn default() -> Self {
        Heuristics {
            stability_factor: 1.1,
            growth_factor: 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEntry {
    pub ladder: String,
    pub level: usize,
    pub support: (f64, f64),
    pub pairing: Complex64,
    pub norm: f64,
    /// `|⟨T, φ⟩| / ‖φ‖_{(r_p)}`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEvidence {
    pub entries: Vec<RatioEntry>,
    /// Running sup of the ratio over entries of level `≤ ℓ`, for each level `ℓ`.
    pub running_sup: Vec<f64>,
    /// Estimate of the constant `C`: the sup over the whole corpus.
    pub constant: f64,
    pub stable: bool,
    pub growing_ladders: Vec<String>,
}

/// The smallest radius found for one `ε`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusRow {
    pub epsilon: f64,
    pub radius: Option<f64>,
    /// Sup of the ratios outside `[-radius, radius]`.
    pub sup_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub family: String,
    pub kind: UnitKind,
    /// `⟨T, π_n⟩` for `n = 1..=N_max`.
    pub values: Vec<Complex64>,
    /// `max |⟨T, π_n⟩ - ⟨T, π_m⟩|` over `n, m ≥ N₀`.
    pub tail_gap: f64,
    /// `|⟨T, π_n⟩|` nondecreasing for `n ≥ N₀`.
    pub monotone: bool,
    /// `|⟨T, π_{N_max}⟩| - |⟨T, π_{N₀}⟩|`.
    pub tail_increase: f64,
    pub verdict: Verdict,
}

/// One condition's verdict with the evidence behind it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub condition: char,
    pub verdict: Verdict,
    pub reason: String,
    /// True when the verdict is inconclusive because the numerics failed.
    pub numeric_failure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<RatioEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<RadiusRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<Vec<Trajectory>>,
}

impl ConditionVerdict {
    fn bare(condition: char, verdict: Verdict, reason: impl Into<String>) -> Self {
        ConditionVerdict {
            condition,
            verdict,
            reason: reason.into(),
            numeric_failure: false,
            ratios: None,
            k_radius: None,
            radii: None,
            trajectories: None,
        }
    }

    fn from_error(condition: char, e: &Error) -> Self {
        ConditionVerdict {
            numeric_failure: e.is_numeric(),
            ..Self::bare(condition, Verdict::Inconclusive, format!("error: {e}"))
        }
    }
}

fn ratio_evidence(t: &Ultradistribution, corpus: &Corpus, h: &Heuristics) -> Result<RatioEvidence> {
    let entries = corpus
        .entries
        .par_iter()
        .map(|e| {
            let pairing = t.pair(&e.phi)?;
            Ok(RatioEntry {
                ladder: e.ladder.clone(),
                level: e.level,
                support: e.support,
                pairing,
                norm: e.norm,
                ratio: pairing.norm() / e.norm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let top = entries.iter().map(|e| e.level).max().unwrap_or(0);
    let running_sup: Vec<f64> = (0..=top)
        .map(|l| entries.iter().filter(|e| e.level <= l).map(|e| e.ratio).fold(0.0, f64::max))
        .collect();
    let constant = running_sup.last().copied().unwrap_or(0.0);
    let mid = running_sup[top / 2];
    let stable = constant.is_finite() && constant <= h.stability_factor * mid;

    let mut ladders: Vec<&str> = entries.iter().map(|e| e.ladder.as_str()).collect();
    ladders.sort_unstable();
    ladders.dedup();
    let growing_ladders = ladders
        .into_iter()
        .filter(|&name| {
            let mut series: Vec<(usize, f64)> = entries
                .iter()
                .filter(|e| e.ladder == name)
                .map(|e| (e.level, e.ratio))
                .collect();
            series.sort_by_key(|&(l, _)| l);
            let ratios: Vec<f64> = series.iter().map(|&(_, r)| r).collect();
            ratios.len() >= 3
                && ratios.windows(2).all(|w| w[0] <= w[1])
                && ratios[0] > 0.0
                && *ratios.last().expect("nonempty") >= h.growth_factor * ratios[0]
        })
        .map(str::to_string)
        .collect();
    Ok(RatioEvidence {
        entries,
        running_sup,
        constant,
        stable,
        growing_ladders,
    })
}

fn ratio_verdict(condition: char, t: &Ultradistribution, corpus: &Corpus, h: &Heuristics) -> ConditionVerdict {
    if corpus.is_empty() {
        return ConditionVerdict::bare(condition, Verdict::Inconclusive, "empty corpus");
    }
    let ev = match ratio_evidence(t, corpus, h) {
        Ok(ev) => ev,
        Err(e) => return ConditionVerdict::from_error(condition, &e),
    };
    let (verdict, reason) = if !ev.growing_ladders.is_empty() {
        (Verdict::Fail, format!("ratios grow along {}", ev.growing_ladders.join(", ")))
    } else if ev.stable {
        (Verdict::Pass, format!("ratio sup {:e} stable across the ladder", ev.constant))
    } else {
        (Verdict::Inconclusive, "ratio sup still moving without a growing ladder".to_string())
    };
    ConditionVerdict {
        ratios: Some(ev),
        ..ConditionVerdict::bare(condition, verdict, reason)
    }
}

/// `|⟨T, φ⟩| ≤ C ‖φ‖_{(r_p)}` over the corpus.
pub fn test_condition_a(t: &Ultradistribution, corpus: &Corpus, h: &Heuristics) -> ConditionVerdict {
    ratio_verdict('a', t, corpus, h)
}

/// The same bound restricted to test functions supported off `[-K, K]`.
pub fn test_condition_e(t: &Ultradistribution, corpus: &Corpus, k_radius: f64, h: &Heuristics) -> ConditionVerdict {
    ConditionVerdict {
        k_radius: Some(k_radius),
        ..ratio_verdict('e', t, &corpus.outside(k_radius), h)
    }
}

/// For each `ε`, the first radius `ρ` in `radii` with
/// `|⟨T, φ⟩| ≤ ε ‖φ‖_{(r_p)}` whenever `supp φ ∩ [-ρ, ρ] = ∅`.
pub fn test_condition_b(t: &Ultradistribution, corpus: &Corpus, eps_ladder: &[f64], radii: &[f64], h: &Heuristics) -> ConditionVerdict {
    if eps_ladder.is_empty() || radii.is_empty() {
        return ConditionVerdict::bare('b', Verdict::Inconclusive, "empty ε ladder or radius scan");
    }
    let mut scans = Vec::with_capacity(radii.len());
    for &rho in radii {
        let outside = corpus.outside(rho);
        if outside.is_empty() {
            scans.push(None);
            continue;
        }
        match ratio_evidence(t, &outside, h) {
            Ok(ev) => scans.push(Some(ev)),
            Err(e) => return ConditionVerdict::from_error('b', &e),
        }
    }
    let rows: Vec<RadiusRow> = eps_ladder
        .iter()
        .map(|&epsilon| {
            let hit = radii
                .iter()
                .zip(&scans)
                .find_map(|(&rho, ev)| ev.as_ref().filter(|ev| ev.constant <= epsilon).map(|ev| (rho, ev.constant)));
            RadiusRow {
                epsilon,
                radius: hit.map(|h| h.0),
                sup_ratio: hit.map(|h| h.1),
            }
        })
        .collect();
    let last = scans.iter().rev().flatten().next();
    let growing = last.is_some_and(|ev| !ev.growing_ladders.is_empty());
    let missing: Vec<f64> = rows.iter().filter(|r| r.radius.is_none()).map(|r| r.epsilon).collect();
    let (verdict, reason) = if missing.is_empty() {
        (Verdict::Pass, "a radius was found for every ε".to_string())
    } else if growing {
        (
            Verdict::Fail,
            format!("no radius for ε in {missing:?}; ratios grow at the scan limit"),
        )
    } else {
        (Verdict::Inconclusive, format!("no radius for ε in {missing:?} within the scan"))
    };
    ConditionVerdict {
        ratios: last.cloned(),
        radii: Some(rows),
        ..ConditionVerdict::bare('b', verdict, reason)
    }
}

/// Settings of the trajectory tests.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectorySettings {
    pub n0: usize,
    pub epsilon: f64,
    /// Minimal increase of `|⟨T, π_n⟩|` over the tail that counts as divergence.
    pub divergence_threshold: f64,
}

impl Default for TrajectorySettings {
    fn default() -> Self {
        TrajectorySettings {
            n0: 20,
            epsilon: 1e-8,
            divergence_threshold: 10.0,
        }
    }
}

/// `⟨T, π_n⟩` for every member, classified against the settings.
pub fn trajectory(t: &Ultradistribution, label: &str, fam: &ApproximateUnitFamily, s: &TrajectorySettings) -> Result<Trajectory> {
    let values = (1..=fam.n_max())
        .into_par_iter()
        .map(|n| t.pair(&fam.member(n)?))
        .collect::<Result<Vec<_>>>()?;
    let tail = &values[s.n0.clamp(1, values.len()) - 1..];
    let mut tail_gap: f64 = 0.0;
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i + 1..] {
            tail_gap = tail_gap.max((a - b).norm());
        }
    }
    let monotone = tail.windows(2).all(|w| w[0].norm() <= w[1].norm());
    let tail_increase = tail.last().expect("nonempty").norm() - tail[0].norm();
    let verdict = if tail_gap < s.epsilon {
        Verdict::Pass
    } else if monotone && tail_increase > s.divergence_threshold {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Ok(Trajectory {
        family: label.to_string(),
        kind: fam.kind(),
        values,
        tail_gap,
        monotone,
        tail_increase,
        verdict,
    })
}

fn trajectory_verdict(condition: char, t: &Ultradistribution, families: &[(String, ApproximateUnitFamily)], s: &TrajectorySettings) -> ConditionVerdict {
    if families.is_empty() {
        return ConditionVerdict::bare(condition, Verdict::Inconclusive, "no families");
    }
    let trajectories = match families
        .iter()
        .map(|(label, fam)| trajectory(t, label, fam, s))
        .collect::<Result<Vec<_>>>()
    {
        Ok(ts) => ts,
        Err(e) => return ConditionVerdict::from_error(condition, &e),
    };
    let names = |v: Verdict| -> Vec<&str> {
        trajectories
            .iter()
            .filter(|t| t.verdict == v)
            .map(|t| t.family.as_str())
            .collect()
    };
    let (verdict, reason) = if !names(Verdict::Fail).is_empty() {
        (Verdict::Fail, format!("diverging: {}", names(Verdict::Fail).join(", ")))
    } else if names(Verdict::Inconclusive).is_empty() {
        (Verdict::Pass, format!("every tail gap is below {:e}", s.epsilon))
    } else {
        (
            Verdict::Inconclusive,
            format!("not settled: {}", names(Verdict::Inconclusive).join(", ")),
        )
    };
    ConditionVerdict {
        trajectories: Some(trajectories),
        ..ConditionVerdict::bare(condition, verdict, reason)
    }
}

/// `(⟨T, π_n⟩)_n` is Cauchy for every family.
pub fn test_condition_c(t: &Ultradistribution, families: &[(String, ApproximateUnitFamily)], s: &TrajectorySettings) -> ConditionVerdict {
    trajectory_verdict('c', t, families, s)
}

/// As [`test_condition_c`] over the special families only, each also
/// perturbed by `π_n + ψ_n` when `psi` is given.
pub fn test_condition_d(
    t: &Ultradistribution,
    families: &[(String, ApproximateUnitFamily)],
    psi: Option<&[Expr]>,
    s: &TrajectorySettings,
) -> ConditionVerdict {
    let mut special: Vec<(String, ApproximateUnitFamily)> = families
        .iter()
        .filter(|(_, f)| f.kind() == UnitKind::Special)
        .cloned()
        .collect();
    if let Some(psi) = psi {
        let perturbed: Result<Vec<_>> = special
            .iter()
            .map(|(label, f)| Ok((format!("perturbed({label})"), perturb_family(f, psi.to_vec())?)))
            .collect();
        match perturbed {
            Ok(p) => special.extend(p),
            Err(e) => return ConditionVerdict::from_error('d', &e),
        }
    }
    trajectory_verdict('d', t, &special, s)
}

/// Everything [`classify`] needs.
#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub r: RSequence,
    /// Extra r-sequences used only when verifying the families.
    pub r_samples: Vec<RSequence>,
    pub w: WeightSequence,
    pub k_max: usize,
    pub levels: usize,
    pub random_entries: usize,
    pub seed: u64,
    pub k_radius: f64,
    pub eps_ladder: Vec<f64>,
    pub radii: Vec<f64>,
    /// Family specs as accepted by [`ApproximateUnitFamily::from_spec`].
    pub families: Vec<String>,
    pub n_max: usize,
    pub trajectory: TrajectorySettings,
    pub heuristics: Heuristics,
    /// Bump translated and normalised into the perturbations of (d); `None` disables them.
    pub perturbation_bump: Option<Expr>,
    pub compacts: Vec<GridSpec>,
    pub h_samples: Vec<f64>,
}

impl HarnessConfig {
    pub fn standard() -> Result<Self> {
        Ok(HarnessConfig {
            r: RSequence::linear(3.0, DEFAULT_K_MAX)?,
            r_samples: vec![RSequence::from_spec("power:0.5", DEFAULT_K_MAX)?],
            w: gevrey(2.0, DEFAULT_K_MAX)?,
            k_max: DEFAULT_K_MAX,
            levels: 8,
            random_entries: 0,
            seed: 0,
            k_radius: 1.0,
            eps_ladder: vec![1e-1, 1e-2, 1e-4, 1e-6],
            radii: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
            families: vec!["scaled:1,2".into(), "shifted:1".into(), "damped:1,2".into()],
            n_max: 30,
            trajectory: TrajectorySettings::default(),
            heuristics: Heuristics::default(),
            perturbation_bump: Some(cutoff(0.5, 1.0)?),
            compacts: vec![GridSpec::new(-5.0, 5.0, 201)?],
            h_samples: vec![1.0, 0.5],
        })
    }
}

/// Result of verifying one family before it is used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySummary {
    pub family: String,
    pub kind: UnitKind,
    pub bounded: bool,
    pub converges: bool,
    pub special_verified: Option<bool>,
    pub passes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Verdicts for conditions (a)–(e) on one distribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub distribution: String,
    pub families: Vec<FamilySummary>,
    pub a: ConditionVerdict,
    pub b: ConditionVerdict,
    pub c: ConditionVerdict,
    pub d: ConditionVerdict,
    pub e: ConditionVerdict,
    /// All verdicts that are not inconclusive agree.
    pub consistency: bool,
    pub numeric_failure: bool,
}

impl ConditionReport {
    pub fn verdicts(&self) -> [&ConditionVerdict; 5] {
        [&self.a, &self.b, &self.c, &self.d, &self.e]
    }

    /// `(family, n, ⟨T, π_n⟩)` for every trajectory of (c) and then (d).
    pub fn trajectory_rows(&self) -> Vec<(String, usize, Complex64)> {
        let mut rows = Vec::new();
        for v in [&self.c, &self.d] {
            for t in v.trajectories.iter().flatten() {
                for (i, z) in t.values.iter().enumerate() {
                    rows.push((format!("{}/{}", v.condition, t.family), i + 1, *z));
                }
            }
        }
        rows
    }
}

/// Runs all five tests. Families failing verification are left out of (c)
/// and (d); sub-test errors become inconclusive verdicts.
pub fn classify(t: &Ultradistribution, cfg: &HarnessConfig) -> Result<ConditionReport> {
    let mut r_samples = vec![cfg.r.clone()];
    r_samples.extend(cfg.r_samples.iter().cloned());
    let unit_cfg = UnitCheckConfig {
        r_samples: &r_samples,
        w: &cfg.w,
        compacts: &cfg.compacts,
        h_samples: &cfg.h_samples,
        k_max: cfg.k_max,
    };
    let mut summaries = Vec::new();
    let mut verified = Vec::new();
    for spec in &cfg.families {
        let fam = ApproximateUnitFamily::from_spec(spec, cfg.n_max)?;
        let summary = match verify_unit(&fam, &unit_cfg) {
            Ok(rep) => FamilySummary {
                family: spec.clone(),
                kind: fam.kind(),
                bounded: rep.bounded,
                converges: rep.converges,
                special_verified: rep.special_verified,
                passes: rep.passes,
                error: None,
            },
            Err(e) => FamilySummary {
                family: spec.clone(),
                kind: fam.kind(),
                bounded: false,
                converges: false,
                special_verified: None,
                passes: false,
                error: Some(e.to_string()),
            },
        };
        if summary.passes {
            verified.push((spec.clone(), fam));
        }
        summaries.push(summary);
    }

    let corpus = Corpus::ladder(cfg.levels, cfg.random_entries, cfg.seed, &cfg.r, &cfg.w, cfg.k_max)?;
    let psi = match &cfg.perturbation_bump {
        Some(bump) => Some(proof_perturbations(bump, cfg.n_max, &cfg.w, cfg.k_max)?),
        None => None,
    };
    let h = &cfg.heuristics;
    let a = test_condition_a(t, &corpus, h);
    let b = test_condition_b(t, &corpus, &cfg.eps_ladder, &cfg.radii, h);
    let c = test_condition_c(t, &verified, &cfg.trajectory);
    let d = test_condition_d(t, &verified, psi.as_deref(), &cfg.trajectory);
    let e = test_condition_e(t, &corpus, cfg.k_radius, h);

    let all = [&a, &b, &c, &d, &e];
    let decided: Vec<Verdict> = all
        .iter()
        .map(|v| v.verdict)
        .filter(|&v| v != Verdict::Inconclusive)
        .collect();
    let consistency = decided.windows(2).all(|w| w[0] == w[1]);
    let numeric_failure = all.iter().any(|v| v.numeric_failure);
    Ok(ConditionReport {
        distribution: t.to_string(),
        families: summaries,
        a,
        b,
        c,
        d,
        e,
        consistency,
        numeric_failure,
    })
}
