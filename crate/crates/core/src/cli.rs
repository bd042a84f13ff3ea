//! Command line front end: experiment configs, orchestration and report files.
//!
//! Every report is written with a fixed field order and every float with 17
//! significant digits, so identical inputs give byte-identical files.
//!
//! Exit status: 0 when nothing errored (fail verdicts are results), 2 for
//! bad configuration or arguments, 3 for numeric failures such as quadrature
//! that does not converge, 1 when a report cannot be written.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::calculus::{self, Expr, GridSpec, MAX_ORDER};
use crate::error::Error;
use crate::integrability::{classify, parse_distribution, ConditionReport, HarnessConfig, Ultradistribution, Verdict};
use crate::numfmt::{sci17, to_json_sci17};
use crate::rseq::{check_superadditivity, product_sequence, RSequence, SuperadditivityReport};
use crate::seminorms::{h_norm_global, r_norm_global, SeminormReport};
use crate::units::{verify_unit, ApproximateUnitFamily, UnitCheckConfig, UnitReport};
use crate::weights::{check_m1, check_m2, check_m3, check_product_growth, gevrey, ConditionWitness, WeightSequence};

#[derive(Debug, Error)]
pub enum CliError {
    /// `line` is 1-based; 0 marks a problem with the file as a whole.
    #[error("{origin}{}: {message}", line_suffix(*.line))]
    Config {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn line_suffix(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(":{line}")
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Input(_) => 2,
            CliError::Library(e) if e.is_numeric() => 3,
            CliError::Library(_) => 2,
            CliError::Output { .. } => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "roumieu", version, about = "Weight sequences, seminorms, approximate units and integrability checks")]
pub struct Cli {
    /// Seed for randomized corpus entries; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for report files; reports go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check (M.1), (M.2), (M.3) and M_p M_q ≤ M_{p+q} for a weight sequence.
    Seq(SeqArgs),
    /// Product sequence and superadditivity of an r-sequence.
    Rseq(RseqArgs),
    /// Weighted seminorms of a test function.
    #[command(subcommand)]
    Norm(NormCommand),
    /// Approximate unit families.
    #[command(subcommand)]
    Units(UnitsCommand),
    /// The five-condition integrability harness.
    #[command(subcommand)]
    Integrability(IntegrabilityCommand),
    /// Run an experiment config.
    Run(RunArgs),
    /// Run the built-in suite: sequence checks, a unit family and three distributions.
    All,
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    /// `gevrey:s` or `file:path.json`.
    #[arg(long, default_value = "gevrey:2")]
    pub weights: String,
    #[arg(long, default_value_t = 400)]
    pub horizon: usize,
    /// Candidate H values for (M.2).
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
    pub m2_h: Vec<f64>,
    /// The constant A of (M.3).
    #[arg(long, default_value_t = 4.0)]
    pub m3_a: f64,
}

#[derive(Debug, Args)]
pub struct RseqArgs {
    /// `linear:c`, `affine:c,d`, `power:e` or `list:1,…`.
    #[arg(long, default_value = "linear:3")]
    pub spec: String,
    #[arg(long, default_value_t = 100)]
    pub horizon: usize,
}

#[derive(Debug, Subcommand)]
pub enum NormCommand {
    /// `‖f‖_{(r_p)}` or, with `--h`, `sup_k sup |f^{(k)}| / (h^k M_k)`.
    Eval(NormArgs),
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub expr: String,
    #[arg(long, default_value = "linear:3", conflicts_with = "h")]
    pub rseq: String,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, default_value = "gevrey:2")]
    pub weights: String,
    #[arg(long, default_value_t = calculus::DEFAULT_K_MAX)]
    pub kmax: usize,
    /// `a,b,n`; defaults to a grid covering the support.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum UnitsCommand {
    /// Sampled boundedness, convergence and plateau checks.
    Verify(UnitsArgs),
}

#[derive(Debug, Args)]
pub struct UnitsArgs {
    /// `scaled:a,b`, `shifted:w`, `damped:a,b` or `zero`.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = crate::units::DEFAULT_N_MAX)]
    pub nmax: usize,
    /// Repeatable.
    #[arg(long, default_values_t = ["linear:3".to_string(), "power:0.5".to_string()])]
    pub rseq: Vec<String>,
    #[arg(long, default_value = "gevrey:2")]
    pub weights: String,
    #[arg(long, default_value_t = calculus::DEFAULT_K_MAX)]
    pub kmax: usize,
    /// Compact `a,b,n`; repeatable.
    #[arg(long, default_values_t = ["-5,5,201".to_string()])]
    pub compact: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1,0.5")]
    pub h: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum IntegrabilityCommand {
    /// Classify one distribution.
    Run(IntegrabilityArgs),
}

#[derive(Debug, Args)]
pub struct IntegrabilityArgs {
    /// For example `gaussian`, `one`, `delta(0,1)` or `density(exp(neg(pow(x,2))), line)`.
    #[arg(long)]
    pub dist: String,
    /// Harness settings; the distribution in the file is ignored.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
}

/// A parsed experiment file.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub name: String,
    pub distribution: Option<Ultradistribution>,
    pub harness: HarnessConfig,
    /// Output directory, resolved against the config's directory.
    pub output: Option<PathBuf>,
}

struct Entry {
    section: String,
    key: String,
    value: String,
    line: usize,
}

/// Line-oriented `key = value` text with `[section]` headers and `#` comments.
struct Ini<'a> {
    origin: &'a str,
    entries: Vec<Entry>,
    used: HashSet<usize>,
}

const KNOWN: &[(&str, &[&str])] = &[
    ("experiment", &["name", "distribution", "seed", "output"]),
    ("weights", &["sequence", "horizon"]),
    ("rseq", &["primary", "sample"]),
    ("seminorm", &["k_max"]),
    ("corpus", &["levels", "random", "k_radius", "eps", "radii", "stability", "growth"]),
    ("units", &["family", "n_max", "perturbation", "compact", "h"]),
    ("trajectory", &["n0", "epsilon", "divergence"]),
];

const REPEATABLE: &[(&str, &str)] = &[("rseq", "sample"), ("units", "family"), ("units", "compact")];

impl<'a> Ini<'a> {
    fn parse(text: &str, origin: &'a str) -> CliResult<Self> {
        let mut entries: Vec<Entry> = Vec::new();
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| CliError::Config {
                origin: origin.to_string(),
                line,
                message,
            };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err(format!("malformed section header `{content}`")))?
                    .trim();
                if !KNOWN.iter().any(|(s, _)| *s == name) {
                    return Err(err(format!("unknown section `[{name}]`")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let sec = section
                .clone()
                .ok_or_else(|| err(format!("`{key}` appears before any section header")))?;
            let keys = KNOWN.iter().find(|(s, _)| *s == sec).expect("known section").1;
            if !keys.contains(&key) {
                return Err(err(format!("unknown key `{key}` in [{sec}]")));
            }
            if value.is_empty() {
                return Err(err(format!("`{key}` has no value")));
            }
            let repeatable = REPEATABLE.contains(&(sec.as_str(), key));
            if !repeatable {
                if let Some(prev) = entries.iter().find(|e| e.section == sec && e.key == key) {
                    return Err(err(format!("`{key}` already set on line {}", prev.line)));
                }
            }
            entries.push(Entry {
                section: sec,
                key: key.to_string(),
                value: value.to_string(),
                line,
            });
        }
        Ok(Ini {
            origin,
            entries,
            used: HashSet::new(),
        })
    }

    fn error(&self, line: usize, message: impl Into<String>) -> CliError {
        CliError::Config {
            origin: self.origin.to_string(),
            line,
            message: message.into(),
        }
    }

    fn all(&mut self, section: &str, key: &str) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if e.section == section && e.key == key {
                self.used.insert(i);
                out.push((e.line, e.value.clone()));
            }
        }
        out
    }

    fn get(&mut self, section: &str, key: &str) -> Option<(usize, String)> {
        self.all(section, key).into_iter().next()
    }

    /// Parses a value, turning failures into line-numbered errors.
    fn value<T>(&mut self, section: &str, key: &str, parse: impl FnOnce(&str) -> Result<T, String>) -> CliResult<Option<T>> {
        match self.get(section, key) {
            None => Ok(None),
            Some((line, text)) => parse(&text)
                .map(Some)
                .map_err(|m| self.error(line, format!("{section}.{key}: {m}"))),
        }
    }
}

fn number<T: std::str::FromStr>(text: &str) -> Result<T, String> {
    text.parse::<T>().map_err(|_| format!("`{text}` is not a valid number"))
}

fn positive(text: &str) -> Result<f64, String> {
    match number::<f64>(text)? {
        v if v.is_finite() && v > 0.0 => Ok(v),
        v => Err(format!("must be positive and finite, got {v}")),
    }
}

fn positive_list(text: &str) -> Result<Vec<f64>, String> {
    let list: Vec<f64> = text.split(',').map(|s| positive(s.trim())).collect::<Result<_, _>>()?;
    if list.is_empty() {
        return Err("list is empty".into());
    }
    Ok(list)
}

/// `gevrey:s` or `file:path` (JSON array of values, relative to `base`).
pub fn parse_weights(spec: &str, horizon: usize, base: &Path) -> Result<WeightSequence, String> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| format!("expected `gevrey:s` or `file:path`, got `{spec}`"))?;
    match kind.trim() {
        "gevrey" => gevrey(positive(arg.trim())?, horizon).map_err(|e| e.to_string()),
        "file" => {
            let path = base.join(arg.trim());
            let text = fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let w = WeightSequence::from_json(arg.trim(), &text).map_err(|e| e.to_string())?;
            if w.horizon() < horizon {
                return Err(format!("{} has horizon {}, need {horizon}", path.display(), w.horizon()));
            }
            w.truncated(horizon).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown weight kind `{other}`")),
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config {
            origin: path.display().to_string(),
            line: 0,
            message: format!("cannot read config: {e}"),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("experiment");
        Self::parse(&text, &path.display().to_string(), base, stem)
    }

    /// `origin` names the text in error messages; relative paths resolve against `base`.
    pub fn parse(text: &str, origin: &str, base: &Path, default_name: &str) -> CliResult<Self> {
        let mut ini = Ini::parse(text, origin)?;
        let mut h = HarnessConfig::standard()?;

        let name = ini
            .get("experiment", "name")
            .map_or(default_name.to_string(), |(_, v)| v);
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(ini.error(0, format!("bad experiment name `{name}`")));
        }
        let distribution = ini.value("experiment", "distribution", |t| {
            parse_distribution(t).map_err(|e| e.to_string())
        })?;
        if let Some(seed) = ini.value("experiment", "seed", number::<u64>)? {
            h.seed = seed;
        }
        let output = ini.value("experiment", "output", |t| Ok(base.join(t)))?;

        if let Some(k) = ini.value("seminorm", "k_max", |t| {
            let k = number::<usize>(t)?;
            if (1..=MAX_ORDER).contains(&k) {
                Ok(k)
            } else {
                Err(format!("must lie in 1..={MAX_ORDER}"))
            }
        })? {
            h.k_max = k;
        }
        let k_max = h.k_max;

        let horizon = ini
            .value("weights", "horizon", |t| {
                let p = number::<usize>(t)?;
                if p >= k_max.max(4) {
                    Ok(p)
                } else {
                    Err(format!("must be at least max(k_max, 4) = {}", k_max.max(4)))
                }
            })?
            .unwrap_or(k_max.max(4));
        h.w = match ini.value("weights", "sequence", |t| parse_weights(t, horizon, base))? {
            Some(w) => w,
            None => gevrey(2.0, horizon)?,
        };

        let rseq = |t: &str| RSequence::from_spec(t, k_max).map_err(|e| e.to_string());
        if let Some(r) = ini.value("rseq", "primary", rseq)? {
            h.r = r;
        } else {
            h.r = RSequence::linear(3.0, k_max)?;
        }
        let samples = ini.all("rseq", "sample");
        h.r_samples = if samples.is_empty() {
            vec![RSequence::from_spec("power:0.5", k_max)?]
        } else {
            samples
                .into_iter()
                .map(|(line, t)| rseq(&t).map_err(|m| ini.error(line, format!("rseq.sample: {m}"))))
                .collect::<CliResult<_>>()?
        };

        if let Some(v) = ini.value("corpus", "levels", |t| match number::<usize>(t)? {
            0 => Err("need at least one level".to_string()),
            v => Ok(v),
        })? {
            h.levels = v;
        }
        if let Some(v) = ini.value("corpus", "random", number::<usize>)? {
            h.random_entries = v;
        }
        if let Some(v) = ini.value("corpus", "k_radius", positive)? {
            h.k_radius = v;
        }
        if let Some(v) = ini.value("corpus", "eps", positive_list)? {
            h.eps_ladder = v;
        }
        if let Some(v) = ini.value("corpus", "radii", |t| {
            let v = positive_list(t)?;
            if v.windows(2).all(|w| w[0] < w[1]) {
                Ok(v)
            } else {
                Err("radii must increase".to_string())
            }
        })? {
            h.radii = v;
        }
        if let Some(v) = ini.value("corpus", "stability", positive)? {
            h.heuristics.stability_factor = v;
        }
        if let Some(v) = ini.value("corpus", "growth", positive)? {
            h.heuristics.growth_factor = v;
        }

        if let Some(v) = ini.value("units", "n_max", |t| match number::<usize>(t)? {
            0 => Err("need N_max ≥ 1".to_string()),
            v => Ok(v),
        })? {
            h.n_max = v;
        }
        let families = ini.all("units", "family");
        if !families.is_empty() {
            h.families = Vec::new();
            for (line, spec) in families {
                ApproximateUnitFamily::from_spec(&spec, h.n_max)
                    .map_err(|e| ini.error(line, format!("units.family: {e}")))?;
                h.families.push(spec);
            }
        }
        if let Some(p) = ini.value("units", "perturbation", |t| {
            if t == "none" {
                Ok(None)
            } else {
                calculus::parse(t).map(Some).map_err(|e| e.to_string())
            }
        })? {
            h.perturbation_bump = p;
        }
        let compacts = ini.all("units", "compact");
        if !compacts.is_empty() {
            h.compacts = compacts
                .into_iter()
                .map(|(line, t)| GridSpec::parse(&t).map_err(|e| ini.error(line, format!("units.compact: {e}"))))
                .collect::<CliResult<_>>()?;
        }
        if let Some(v) = ini.value("units", "h", positive_list)? {
            h.h_samples = v;
        }

        if let Some(v) = ini.value("trajectory", "n0", number::<usize>)? {
            h.trajectory.n0 = v;
        }
        if let Some(v) = ini.value("trajectory", "epsilon", positive)? {
            h.trajectory.epsilon = v;
        }
        if let Some(v) = ini.value("trajectory", "divergence", positive)? {
            h.trajectory.divergence_threshold = v;
        }
        if !(1..=h.n_max).contains(&h.trajectory.n0) {
            let line = ini.get("trajectory", "n0").map_or(0, |e| e.0);
            return Err(ini.error(line, format!("trajectory.n0 must lie in 1..={}", h.n_max)));
        }
        if let Some(i) = (0..ini.entries.len()).find(|i| !ini.used.contains(i)) {
            let e = &ini.entries[i];
            return Err(ini.error(e.line, format!("`{}` in [{}] was not used", e.key, e.section)));
        }
        Ok(ExperimentConfig {
            name,
            distribution,
            harness: h,
            output,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct SeqReport {
    pub weights: String,
    pub horizon: usize,
    pub exact: bool,
    pub m1: ConditionWitness,
    pub product_growth: ConditionWitness,
    pub m2_h_grid: Vec<f64>,
    pub m2: ConditionWitness,
    pub m3_a: f64,
    pub m3: ConditionWitness,
}

pub fn seq_report(w: &WeightSequence, m2_h: &[f64], m3_a: f64) -> crate::Result<SeqReport> {
    Ok(SeqReport {
        weights: w.name().to_string(),
        horizon: w.horizon(),
        exact: w.is_exact(),
        m1: check_m1(w),
        product_growth: check_product_growth(w),
        m2_h_grid: m2_h.to_vec(),
        m2: check_m2(w, m2_h)?,
        m3_a,
        m3: check_m3(w, m3_a)?,
    })
}

#[derive(Debug, Serialize)]
pub struct RseqReport {
    pub spec: String,
    pub horizon: usize,
    pub values: Vec<f64>,
    /// `ln R_p`.
    pub log_products: Vec<f64>,
    pub trend_witness: bool,
    pub superadditivity: SuperadditivityReport,
}

pub fn rseq_report(spec: &str, horizon: usize) -> crate::Result<RseqReport> {
    let r = RSequence::from_spec(spec, horizon)?;
    Ok(RseqReport {
        spec: spec.to_string(),
        horizon: r.horizon(),
        values: r.values().to_vec(),
        log_products: product_sequence(&r).log_values().to_vec(),
        trend_witness: r.trend_witness(),
        superadditivity: check_superadditivity(&r),
    })
}

/// One-line summary of a classification.
pub fn summary_line(name: &str, report: &ConditionReport) -> String {
    let tag = |v: Verdict| match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    };
    let parts: Vec<String> = report
        .verdicts()
        .iter()
        .map(|v| format!("({})={}", v.condition, tag(v.verdict)))
        .collect();
    format!(
        "{name}: {} consistent={}",
        parts.join(" "),
        report.consistency
    )
}

/// Trajectories as CSV with columns `family,n,value_re,value_im`.
pub fn trajectories_csv(report: &ConditionReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "n", "value_re", "value_im"])
        .expect("writing to memory");
    for (family, n, z) in report.trajectory_rows() {
        w.write_record([family, n.to_string(), sci17(z.re), sci17(z.im)])
            .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv emits UTF-8")
}

/// Renders a value the way report files store it.
pub fn to_report_json<T: Serialize>(value: &T) -> String {
    to_json_sci17(value)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Output {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Output { path, source })
}

/// Writes to `<out>/<name>` or, without an output directory, to stdout.
fn emit(out: Option<&Path>, name: &str, contents: &str) -> CliResult<()> {
    match out {
        Some(dir) => write_file(dir, name, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn input<T>(r: Result<T, String>) -> CliResult<T> {
    r.map_err(CliError::Input)
}

/// Classifies and writes `<name>.json` plus `<name>.csv`; returns true on a numeric failure.
fn classify_and_write(name: &str, t: &Ultradistribution, harness: &HarnessConfig, out: Option<&Path>) -> CliResult<bool> {
    let report = classify(t, harness)?;
    match out {
        Some(dir) => {
            write_file(dir, &format!("{name}.json"), &to_json_sci17(&report))?;
            write_file(dir, &format!("{name}.csv"), &trajectories_csv(&report))?;
            println!("{}", summary_line(name, &report));
        }
        None => print!("{}", to_json_sci17(&report)),
    }
    Ok(report.numeric_failure)
}

/// Runs an experiment file into `out`, or the directory named in the file, or `reports/`.
pub fn run_config(path: &Path, seed: Option<u64>, out: Option<&Path>) -> CliResult<bool> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        cfg.harness.seed = s;
    }
    let t = cfg.distribution.as_ref().ok_or_else(|| CliError::Config {
        origin: path.display().to_string(),
        line: 0,
        message: "[experiment] distribution is required".into(),
    })?;
    let dir = out
        .map(Path::to_path_buf)
        .or(cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("reports"));
    classify_and_write(&cfg.name, t, &cfg.harness, Some(&dir))
}

fn run_all(seed: Option<u64>, out: &Path) -> CliResult<bool> {
    let w = gevrey(2.0, 400)?;
    write_file(out, "seq.json", &to_json_sci17(&seq_report(&w, &[1.0, 2.0, 4.0, 8.0, 16.0], 4.0)?))?;
    write_file(out, "rseq.json", &to_json_sci17(&rseq_report("linear:3", 100)?))?;
    let mut harness = HarnessConfig::standard()?;
    if let Some(s) = seed {
        harness.seed = s;
    }
    let fam = ApproximateUnitFamily::from_spec("scaled:1,2", harness.n_max)?;
    write_file(out, "units.json", &to_json_sci17(&verify_family(&fam, &harness)?))?;
    harness.trajectory.divergence_threshold = 10.0;
    let mut numeric = false;
    for (name, spec) in [
        ("gaussian", "gaussian"),
        ("constant_one", "one"),
        ("delta_prime", "delta(0,1)"),
    ] {
        numeric |= classify_and_write(name, &parse_distribution(spec)?, &harness, Some(out))?;
    }
    Ok(numeric)
}

fn verify_family(fam: &ApproximateUnitFamily, h: &HarnessConfig) -> crate::Result<UnitReport> {
    let mut r_samples = vec![h.r.clone()];
    r_samples.extend(h.r_samples.iter().cloned());
    verify_unit(
        fam,
        &UnitCheckConfig {
            r_samples: &r_samples,
            w: &h.w,
            compacts: &h.compacts,
            h_samples: &h.h_samples,
            k_max: h.k_max,
        },
    )
}

fn norm_report(a: &NormArgs) -> CliResult<SeminormReport> {
    let f: Expr = calculus::parse(&a.expr)?;
    let w = input(parse_weights(&a.weights, a.kmax.max(4), Path::new(".")))?;
    let grid = match &a.grid {
        Some(g) => Some(GridSpec::parse(g)?.build(&f.knots())?),
        None => None,
    };
    Ok(match a.h {
        Some(h) => h_norm_global(&f, grid.as_ref(), h, &w, a.kmax)?,
        None => r_norm_global(&f, grid.as_ref(), &RSequence::from_spec(&a.rseq, a.kmax)?, &w, a.kmax)?,
    })
}

fn units_report(a: &UnitsArgs) -> CliResult<UnitReport> {
    let fam = ApproximateUnitFamily::from_spec(&a.family, a.nmax)?;
    let w = input(parse_weights(&a.weights, a.kmax.max(4), Path::new(".")))?;
    let r: Vec<RSequence> = a
        .rseq
        .iter()
        .map(|s| RSequence::from_spec(s, a.kmax))
        .collect::<crate::Result<_>>()?;
    let compacts: Vec<GridSpec> = a.compact.iter().map(|s| GridSpec::parse(s)).collect::<crate::Result<_>>()?;
    Ok(verify_unit(
        &fam,
        &UnitCheckConfig {
            r_samples: &r,
            w: &w,
            compacts: &compacts,
            h_samples: &a.h,
            k_max: a.kmax,
        },
    )?)
}

/// Executes a parsed command line; `Ok(true)` means a numeric failure was recorded.
pub fn execute(cli: &Cli) -> CliResult<bool> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Seq(a) => {
            let w = input(parse_weights(&a.weights, a.horizon, Path::new(".")))?;
            emit(out, "seq.json", &to_json_sci17(&seq_report(&w, &a.m2_h, a.m3_a)?))?;
            Ok(false)
        }
        Command::Rseq(a) => {
            emit(out, "rseq.json", &to_json_sci17(&rseq_report(&a.spec, a.horizon)?))?;
            Ok(false)
        }
        Command::Norm(NormCommand::Eval(a)) => {
            emit(out, "norm.json", &to_json_sci17(&norm_report(a)?))?;
            Ok(false)
        }
        Command::Units(UnitsCommand::Verify(a)) => {
            emit(out, "units.json", &to_json_sci17(&units_report(a)?))?;
            Ok(false)
        }
        Command::Integrability(IntegrabilityCommand::Run(a)) => {
            let t = parse_distribution(&a.dist)?;
            let mut harness = match &a.config {
                Some(path) => ExperimentConfig::load(path)?.harness,
                None => HarnessConfig::standard()?,
            };
            if let Some(s) = cli.seed {
                harness.seed = s;
            }
            classify_and_write("integrability", &t, &harness, out)
        }
        Command::Run(a) => run_config(&a.config, cli.seed, out),
        Command::All => run_all(cli.seed, out.unwrap_or(Path::new("reports"))),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(false) => 0,
        Ok(true) => {
            eprintln!("roumieu: numeric failure recorded in the report");
            3
        }
        Err(e) => {
            eprintln!("roumieu: {e}");
            e.exit_code()
        }
    }
}
