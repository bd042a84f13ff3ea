//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roumieu::calculus::{cutoff, jet_eval, rescale, translate, Expr, Grid, GridSpec};
use roumieu::integrability::{classify, parse_distribution, HarnessConfig, Ultradistribution, Verdict};
use roumieu::rseq::{
    check_superadditivity, komatsu_witness_log, product_sequence, scale, tail_shift, RSequence,
};
use roumieu::seminorms::{check_product_inequality, cutoff_constant_estimate};
use roumieu::units::{scaled_cutoff_family, verify_unit, UnitCheckConfig};
use roumieu::weights::{check_m1, check_m2, check_m3, check_product_growth, gevrey};
use roumieu::Error;

type Outcome = Result<String, String>;

/// Number, name, check and optional time limit.
type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: roumieu::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

// ---------------------------------------------------------------- 1

fn weight_suite() -> Outcome {
    let g2 = lib(gevrey(2.0, 400))?;
    ensure(check_m1(&g2).holds, || "gevrey(2) fails (M.1)".into())?;
    let m2 = lib(check_m2(&g2, &[1.0, 2.0, 4.0, 8.0, 16.0]))?;
    let (a, h) = m2.constants.ok_or("gevrey(2) (M.2) reports no constants")?;
    // (p!)² ≤ 4^p (q!)² ((p-q)!)² because C(p,q) ≤ 2^p, with equality at p = 0.
    ensure(m2.holds && (a - 1.0).abs() < 1e-9 && h == 4.0, || {
        format!("gevrey(2) (M.2) constants ({a}, {h}), expected (1, 4)")
    })?;
    ensure(lib(check_m3(&g2, 4.0))?.holds, || "gevrey(2) fails truncated (M.3) with A = 4".into())?;
    let growth = check_product_growth(&g2);
    ensure(growth.holds, || format!("gevrey(2) product growth fails {} times", growth.violation_count))?;

    let g1 = lib(gevrey(1.0, 400))?;
    ensure(check_m1(&g1).holds, || "gevrey(1) fails (M.1)".into())?;
    ensure(lib(check_m2(&g1, &[1.0, 2.0, 4.0, 8.0, 16.0]))?.holds, || "gevrey(1) fails (M.2)".into())?;
    let m3 = lib(check_m3(&g1, 4.0))?;
    ensure(!m3.holds && m3.is_conclusive(), || "gevrey(1) not flagged as violating (M.3)".into())?;
    let growth1 = check_product_growth(&g1);
    ensure(growth1.holds, || "gevrey(1) product growth fails".into())?;
    Ok(format!(
        "gevrey(2): (M.2) A = {a}, H = {h}; gevrey(1): (M.3) violated at {} indices; product growth exhaustive ({:?} arithmetic)",
        m3.violation_count, growth.arithmetic
    ))
}

// ---------------------------------------------------------------- 2

fn random_rseq(rng: &mut ChaCha8Rng, horizon: usize) -> RSequence {
    let mut values = vec![1.0];
    let mut current: f64 = rng.gen_range(1.0..3.0);
    for _ in 1..=horizon {
        values.push(current);
        // Mix flat stretches, small steps and occasional jumps.
        current += match rng.gen_range(0..4) {
            0 => 0.0,
            1 => rng.gen_range(0.0..0.1),
            2 => rng.gen_range(0.0..1.0),
            _ => rng.gen_range(0.0..5.0),
        };
    }
    RSequence::new(values).expect("valid by construction")
}

fn is_admissible(r: &RSequence) -> bool {
    let v = r.values();
    v[0] == 1.0 && v.iter().all(|x| x.is_finite() && *x > 0.0) && v.windows(2).all(|w| w[0] <= w[1])
}

/// Independent log-products, summed directly for each index.
fn log_products(r: &RSequence) -> Vec<f64> {
    (0..=r.horizon())
        .map(|p| (1..=p).map(|i| r.get(i).ln()).sum())
        .collect()
}

fn rseq_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut pairs = 0;
    for i in 0..1000 {
        let r = random_rseq(&mut rng, 100);
        let report = check_superadditivity(&r);
        ensure(report.holds, || format!("sequence {i}: R_pR_q > R_(p+q) at {:?}", report.argmin))?;
        let l = log_products(&r);
        for p in 0..=100 {
            for q in 0..=(100 - p) {
                ensure(l[p] + l[q] <= l[p + q] + 1e-9 * (1.0 + l[p + q]), || {
                    format!("oracle: sequence {i} breaks superadditivity at ({p}, {q})")
                })?;
            }
        }
        pairs += report.pairs_checked;

        let lambda = rng.gen_range(0.5..3.0);
        if lambda * r.get(1) > 1.0 {
            let s = lib(scale(&r, lambda))?;
            ensure(is_admissible(&s) && check_superadditivity(&s).holds, || {
                format!("scale({lambda}) broke the invariants of sequence {i}")
            })?;
        }
        let p0 = rng.gen_range(0..20);
        let t = lib(tail_shift(&r, p0))?;
        ensure(is_admissible(&t) && check_superadditivity(&t).holds, || {
            format!("tail_shift({p0}) broke the invariants of sequence {i}")
        })?;
        ensure((1..=t.horizon()).all(|p| t.get(p) == r.get(p + p0)), || {
            format!("tail_shift({p0}) is not the shifted tail")
        })?;
    }

    let horizon = 150;
    let mut ln_fact = vec![0.0f64];
    for p in 1..=horizon {
        ln_fact.push(ln_fact[p - 1] + (p as f64).ln());
    }
    let inputs: [(&str, Vec<f64>); 2] = [
        ("1/p!", ln_fact.iter().map(|v| -v).collect()),
        ("0.5^p", (0..=horizon).map(|p| p as f64 * 0.5f64.ln()).collect()),
    ];
    let mut sups = Vec::new();
    for (name, ln_a) in &inputs {
        let witness = lib(komatsu_witness_log(ln_a))?;
        ensure(is_admissible(&witness.sequence), || format!("{name}: witness is not admissible"))?;
        let ln_r = log_products(&witness.sequence);
        let sup = ln_a
            .iter()
            .zip(&ln_r)
            .map(|(a, r)| a - r)
            .fold(f64::NEG_INFINITY, f64::max);
        ensure(sup <= 1e-12, || format!("{name}: sup a_p/R_p = {} > 1", sup.exp()))?;
        ensure(product_sequence(&witness.sequence).horizon() == horizon, || format!("{name}: horizon lost"))?;
        sups.push(format!("{name}: {:.3e}", sup.exp()));
    }
    Ok(format!(
        "{pairs} pairs over 1000 sequences; sup a_p/R_p {}",
        sups.join(", ")
    ))
}

// ---------------------------------------------------------------- 3

/// Random composite expression, mirrored for an independent complex evaluator.
#[derive(Clone, Debug)]
enum Tree {
    Line(f64, f64),
    Const(f64),
    Add(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    Sin(Box<Tree>),
    Cos(Box<Tree>),
    /// `exp(g/2)`.
    Exp(Box<Tree>),
    Pow(Box<Tree>, i32),
    Neg(Box<Tree>),
}

impl Tree {
    fn random(rng: &mut ChaCha8Rng, depth: u32) -> Tree {
        if depth == 0 || rng.gen_bool(0.25) {
            return if rng.gen_bool(0.7) {
                Tree::Line(rng.gen_range(-1.5..1.5), rng.gen_range(-1.0..1.0))
            } else {
                Tree::Const(rng.gen_range(-2.0..2.0))
            };
        }
        let sub = |rng: &mut ChaCha8Rng| Box::new(Tree::random(rng, depth - 1));
        match rng.gen_range(0..7) {
            0 => Tree::Add(sub(rng), sub(rng)),
            1 => Tree::Mul(sub(rng), sub(rng)),
            2 => Tree::Sin(sub(rng)),
            3 => Tree::Cos(sub(rng)),
            4 => Tree::Exp(sub(rng)),
            5 => {
                let base = sub(rng);
                Tree::Pow(base, rng.gen_range(2..4))
            }
            _ => Tree::Neg(sub(rng)),
        }
    }

    fn expr(&self) -> Expr {
        match self {
            Tree::Line(a, b) => Expr::x() * Expr::constant(*a) + Expr::constant(*b),
            Tree::Const(c) => Expr::constant(*c),
            Tree::Add(a, b) => a.expr() + b.expr(),
            Tree::Mul(a, b) => a.expr() * b.expr(),
            Tree::Sin(a) => a.expr().sin(),
            Tree::Cos(a) => a.expr().cos(),
            Tree::Exp(a) => (a.expr() * Expr::constant(0.5)).exp(),
            Tree::Pow(a, n) => a.expr().powi(*n),
            Tree::Neg(a) => -a.expr(),
        }
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Tree::Line(a, b) => z * a + b,
            Tree::Const(c) => Complex64::new(*c, 0.0),
            Tree::Add(a, b) => a.eval(z) + b.eval(z),
            Tree::Mul(a, b) => a.eval(z) * b.eval(z),
            Tree::Sin(a) => a.eval(z).sin(),
            Tree::Cos(a) => a.eval(z).cos(),
            Tree::Exp(a) => (a.eval(z) * 0.5).exp(),
            Tree::Pow(a, n) => a.eval(z).powi(*n),
            Tree::Neg(a) => -a.eval(z),
        }
    }
}

/// Derivatives `f^{(m)}(x0)`, `m ≤ k`, from the symmetric difference stencil
/// on the `n` points `x0 + ρ e^{2πij/n}` (the trapezoid rule for Cauchy's
/// formula).
fn complex_stencil(t: &Tree, x0: f64, k: usize, rho: f64, n: usize) -> Vec<f64> {
    let mut sums = vec![Complex64::new(0.0, 0.0); k + 1];
    for j in 0..n {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        let f = t.eval(x0 + w * rho);
        for (m, s) in sums.iter_mut().enumerate() {
            *s += f * w.powi(-(m as i32));
        }
    }
    let mut factorial = 1.0;
    sums.iter()
        .enumerate()
        .map(|(m, s)| {
            if m > 0 {
                factorial *= m as f64;
            }
            s.re / n as f64 / rho.powi(m as i32) * factorial
        })
        .collect()
}

/// Per order, the radius whose estimated error is smallest. The estimate is
/// the disagreement between 64 and 128 nodes plus a roundoff bound.
fn stencil_derivatives(t: &Tree, x0: f64, k: usize) -> Vec<f64> {
    let mut best = vec![f64::INFINITY; k + 1];
    let mut value = vec![0.0; k + 1];
    for rho in [0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.45, 0.6, 0.8] {
        let coarse = complex_stencil(t, x0, k, rho, 64);
        let fine = complex_stencil(t, x0, k, rho, 128);
        let fmax = (0..128)
            .map(|j| t.eval(x0 + Complex64::from_polar(rho, 2.0 * PI * j as f64 / 128.0)).norm())
            .fold(0.0, f64::max);
        let mut factorial = 1.0;
        for m in 0..=k {
            if m > 0 {
                factorial *= m as f64;
            }
            let est = (coarse[m] - fine[m]).abs() + 64.0 * f64::EPSILON * fmax * factorial / rho.powi(m as i32);
            if est < best[m] {
                best[m] = est;
                value[m] = fine[m];
            }
        }
    }
    value
}

/// Draws expressions whose modulus stays below `1e6` on the disc of radius
/// 0.8 around `x0`, so that an absolute tolerance of `1e-6` is meaningful.
fn moderate_sample(rng: &mut ChaCha8Rng, rejected: &mut usize) -> (Tree, f64) {
    loop {
        let t = Tree::random(rng, 4);
        let x0 = rng.gen_range(-1.0..1.0);
        let peak = (0..64)
            .map(|j| t.eval(x0 + Complex64::from_polar(0.8, 2.0 * PI * j as f64 / 64.0)).norm())
            .fold(0.0, f64::max);
        if peak.is_finite() && peak < 1e6 {
            return (t, x0);
        }
        *rejected += 1;
    }
}

/// Richardson-extrapolated real central differences, reported for context.
fn real_central(f: &Expr, x: f64, k: usize) -> f64 {
    let base = 0.04 * (k + 1) as f64;
    let steps = [base, 0.8 * base, 0.6 * base, 0.4 * base];
    let diff = |h: f64| {
        let mut s = 0.0;
        let mut binom = 1.0;
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * binom * f.eval(x + (k as f64 / 2.0 - j as f64) * h).expect("smooth");
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        s / h.powi(k as i32)
    };
    let xs: Vec<f64> = steps.iter().map(|h| h * h).collect();
    let mut p: Vec<f64> = steps.iter().map(|&h| diff(h)).collect();
    for m in 1..p.len() {
        for i in 0..p.len() - m {
            p[i] = (xs[i] * p[i + 1] - xs[i + m] * p[i]) / (xs[i] - xs[i + m]);
        }
    }
    p[0]
}

fn jet_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut rejected = 0;
    let mut worst: f64 = 0.0;
    // Real-axis differences, split by order: low orders resolve, high orders
    // drown in cancellation.
    let mut worst_real = [0.0f64; 2];
    for i in 0..100 {
        let (t, x0) = moderate_sample(&mut rng, &mut rejected);
        let f = t.expr();
        let jet = lib(jet_eval(&f, x0, 8))?.derivatives();
        let oracle = stencil_derivatives(&t, x0, 8);
        for k in 0..=8 {
            let tol = 1e-6f64.max(1e-8 * jet[k].abs());
            let err = (jet[k] - oracle[k]).abs();
            worst = worst.max(err / tol);
            ensure(err <= tol, || {
                format!("expr {i} = {f} at {x0}: f^({k}) jet {} vs stencil {}", jet[k], oracle[k])
            })?;
            if k >= 1 {
                let real = real_central(&f, x0, k);
                let slot = usize::from(k > 4);
                worst_real[slot] = worst_real[slot].max((real - jet[k]).abs() / (1.0 + jet[k].abs()));
            }
        }
    }

    // Leibniz: the Cauchy product of jets equals the jet of the product.
    for i in 0..100 {
        let (a, x0) = moderate_sample(&mut rng, &mut rejected);
        let b = Tree::random(&mut rng, 3);
        let (fa, fb) = (a.expr(), b.expr());
        let ja = lib(jet_eval(&fa, x0, 8))?;
        let jb = lib(jet_eval(&fb, x0, 8))?;
        let product = lib(ja.product(&jb))?;
        let direct = lib(jet_eval(&(fa * fb), x0, 8))?;
        for k in 0..=8 {
            let scale: f64 = (0..=k).map(|j| (ja.coeffs()[j] * jb.coeffs()[k - j]).abs()).sum();
            let err = (product.coeffs()[k] - direct.coeffs()[k]).abs();
            ensure(err <= 1e-12 * scale.max(f64::MIN_POSITIVE), || {
                format!("pair {i}: coefficient {k} differs by {err:e} at scale {scale:e}")
            })?;
        }
    }

    // Rescale: the jet of f(x/j) at x0 is c_k(f, x0/j) / j^k, bit for bit.
    for i in 0..100 {
        let t = Tree::random(&mut rng, 3);
        let f = t.expr();
        let j = if i % 2 == 0 { 2f64.powi(rng.gen_range(-2..4)) } else { rng.gen_range(0.3..5.0) };
        let x0 = rng.gen_range(-2.0..2.0);
        let scaled = lib(jet_eval(&lib(rescale(f.clone(), j))?, x0, 8))?;
        let base = lib(jet_eval(&f, x0 / j, 8))?;
        for k in 0..=8 {
            let expected = base.coeffs()[k] / j.powi(k as i32);
            ensure(scaled.coeffs()[k] == expected, || {
                format!("rescale {i}: coefficient {k} is {} not {expected}", scaled.coeffs()[k])
            })?;
        }
    }
    Ok(format!(
        "worst error/tolerance {worst:.2e} against the complex stencil ({rejected} steep draws redrawn); \
         real-axis Richardson differences deviate by {:.1e} (k ≤ 4) and {:.1e} (k ≤ 8) relative",
        worst_real[0], worst_real[1]
    ))
}

// ---------------------------------------------------------------- 4

fn random_bump(rng: &mut ChaCha8Rng, spread: f64) -> Expr {
    let a = rng.gen_range(0.2..1.0);
    let b = a + rng.gen_range(0.3..1.5);
    let bump = cutoff(a, b).expect("valid cutoff");
    let shifted = translate(bump, rng.gen_range(-spread..spread)).expect("finite shift");
    match rng.gen_range(0..3) {
        0 => shifted,
        1 => shifted * Expr::constant(rng.gen_range(-3.0..3.0)),
        _ => shifted * (Expr::x() * Expr::constant(rng.gen_range(0.5..2.0))).sin(),
    }
}

fn support_hull(fs: &[&Expr]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for f in fs {
        if let roumieu::calculus::Support::Interval(a, b) = f.support() {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    (lo, hi)
}

fn product_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let w = lib(gevrey(2.0, 12))?;
    let mut tightest: f64 = 0.0;
    for i in 0..50 {
        let f1 = random_bump(&mut rng, 1.0);
        let f2 = random_bump(&mut rng, 1.0);
        let c = rng.gen_range(2.1..5.0);
        let r = lib(RSequence::linear(c, 12))?;
        let (lo, hi) = support_hull(&[&f1, &f2]);
        let mut knots = f1.knots();
        knots.extend(f2.knots());
        let grid = lib(Grid::new(lo, hi, 401, &knots))?;
        let rep = lib(check_product_inequality(&f1, &f2, &r, &w, &grid, 12))?;
        ensure(rep.holds, || format!("pair {i}, r_p = {c}p: {} > {}", rep.lhs, rep.rhs))?;
        if rep.rhs > 0.0 {
            tightest = tightest.max(rep.lhs / rep.rhs);
        }
    }
    let f = random_bump(&mut rng, 1.0);
    let grid = lib(Grid::new(-3.0, 3.0, 401, &f.knots()))?;
    for c in [1.0, 1.5, 2.0] {
        let r = lib(RSequence::linear(c, 12))?;
        match check_product_inequality(&f, &f, &r, &w, &grid, 12) {
            Err(Error::Precondition(_)) => {}
            other => return Err(format!("r_1 = {c} not rejected: {other:?}")),
        }
    }
    Ok(format!("50 pairs hold, largest lhs/rhs {tightest:.3}; r_1 ≤ 2 rejected"))
}

// ---------------------------------------------------------------- 5

fn cutoff_suite() -> Outcome {
    let theta = lib(cutoff(1.0, 2.0))?;
    let r = lib(RSequence::linear(3.0, 12))?;
    let w = lib(gevrey(2.0, 12))?;
    let ls = [1.0, 2.0, 4.0, 8.0];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let corpus: Vec<Expr> = (0..32).map(|_| random_bump(&mut rng, 10.0)).collect();
    let mut constants = Vec::new();
    for n in [16, 32] {
        let est = lib(cutoff_constant_estimate(&theta, &r, &corpus[..n], &ls, &w, 12))?;
        ensure(est.constant.is_finite() && est.constant > 0.0, || {
            format!("estimate over {n} entries is {}", est.constant)
        })?;
        constants.push(est.constant);
    }
    let variation = (constants[1] - constants[0]).abs() / constants[0];
    ensure(variation < 0.1, || {
        format!("C = {} at N = 16 but {} at N = 32 ({:.1}%)", constants[0], constants[1], 100.0 * variation)
    })?;
    Ok(format!(
        "C = {:.6} (N = 16), {:.6} (N = 32), variation {:.2}%",
        constants[0],
        constants[1],
        100.0 * variation
    ))
}

// ---------------------------------------------------------------- 6

fn units_suite() -> Outcome {
    let theta = lib(cutoff(1.0, 2.0))?;
    let fam = lib(scaled_cutoff_family(&theta, 12))?;
    let r_samples = [
        lib(RSequence::linear(3.0, 12))?,
        lib(RSequence::from_spec("power:0.5", 12))?,
        lib(RSequence::linear(1.0, 12))?,
    ];
    let w = lib(gevrey(2.0, 12))?;
    let compacts = [lib(GridSpec::new(-5.0, 5.0, 201))?];
    let cfg = UnitCheckConfig {
        r_samples: &r_samples,
        w: &w,
        compacts: &compacts,
        h_samples: &[1.0, 0.5],
        k_max: 12,
    };
    let rep = lib(verify_unit(&fam, &cfg))?;
    ensure(rep.passes, || "scaled cutoff family fails verification".into())?;
    for b in &rep.boundedness {
        ensure(b.argmax_n == 1, || format!("r sample {}: sup attained at n = {}", b.r_index, b.argmax_n))?;
    }
    // θ(x/n) = 1 on [-n, n], which covers [-5, 5] from n = 5 on.
    for c in &rep.convergence {
        ensure(c.zero_from == Some(5), || format!("h = {}: zero from {:?}", c.h, c.zero_from))?;
        ensure(c.values[4..].iter().all(|&v| v == 0.0), || format!("h = {}: nonzero tail", c.h))?;
        ensure(c.values[3] > 0.0, || format!("h = {}: zero before the plateau covers K", c.h))?;
    }
    Ok("passes; sup at n = 1 for 3 r samples; q(π_n - 1) = 0 exactly from n = 5 on [-5, 5]".into())
}

// ---------------------------------------------------------------- 7

fn harness_suite() -> Outcome {
    let cfg = lib(HarnessConfig::standard())?;
    let cases: [(&str, Ultradistribution, Verdict); 3] = [
        ("gaussian", Ultradistribution::gaussian(), Verdict::Pass),
        ("one", lib(parse_distribution("one"))?, Verdict::Fail),
        ("delta'", Ultradistribution::delta(0.0, 1), Verdict::Pass),
    ];
    let n0 = cfg.trajectory.n0;
    let mut lines = Vec::new();
    for (name, t, expected) in &cases {
        let rep = lib(classify(t, &cfg))?;
        for v in rep.verdicts() {
            ensure(v.verdict == *expected, || {
                format!("{name}: ({}) is {:?}, expected {expected:?}: {}", v.condition, v.verdict, v.reason)
            })?;
        }
        ensure(rep.consistency, || format!("{name}: inconsistent"))?;
        match *name {
            "gaussian" => {
                let sqrt_pi = PI.sqrt();
                let mut worst: f64 = 0.0;
                for (family, n, z) in rep.trajectory_rows() {
                    if n >= n0 {
                        let err = (z - sqrt_pi).norm();
                        worst = worst.max(err);
                        ensure(err <= 1e-6, || format!("gaussian {family} n = {n}: {z}"))?;
                    }
                }
                lines.push(format!("gaussian within {worst:.1e} of √π"));
            }
            "delta'" => {
                let mut special = 0;
                for v in [&rep.c, &rep.d] {
                    for tr in v.trajectories.iter().flatten() {
                        if tr.kind == roumieu::units::UnitKind::Special {
                            special += 1;
                            ensure(tr.values[n0 - 1..].iter().all(|z| *z == Complex64::new(0.0, 0.0)), || {
                                format!("delta' {}: nonzero pairing past n0", tr.family)
                            })?;
                        }
                    }
                }
                ensure(special > 0, || "delta': no special trajectories".into())?;
                lines.push(format!("delta' exactly 0 on {special} special trajectories"));
            }
            _ => {}
        }
    }
    Ok(format!("verdicts as expected and consistent; {}", lines.join("; ")))
}

// ---------------------------------------------------------------- 8

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .expect("output directory")
        .map(|e| {
            let path = e.expect("entry").path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read(&path).expect("readable output"))
        })
        .collect();
    files.sort();
    files
}

fn determinism_suite() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut configs: Vec<_> = std::fs::read_dir(&root)
        .map_err(|e| format!("{}: {e}", root.display()))?
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    configs.sort();
    ensure(!configs.is_empty(), || "no shipped configs".into())?;
    let scratch = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut total = 0;
    for cfg in &configs {
        let mut runs = Vec::new();
        for run in 0..2 {
            let out = scratch.path().join(format!("{}-{run}", cfg.file_stem().unwrap().to_string_lossy()));
            let status = Command::new(env!("CARGO_BIN_EXE_roumieu"))
                .arg("run")
                .arg("--config")
                .arg(cfg)
                .arg("--out")
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(status.status.success(), || {
                format!("{}: exit {:?}: {}", cfg.display(), status.status.code(), String::from_utf8_lossy(&status.stderr))
            })?;
            runs.push(read_tree(&out));
        }
        ensure(!runs[0].is_empty(), || format!("{}: no output files", cfg.display()))?;
        ensure(runs[0] == runs[1], || format!("{}: outputs differ between runs", cfg.display()))?;
        total += runs[0].len();
    }
    Ok(format!("{} configs, {total} files byte-identical across two runs", configs.len()))
}

// ----------------------------------------------------------------

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "weight sequences", weight_suite, Some(Duration::from_secs(5))),
        (2, "r-sequences", rseq_suite, Some(Duration::from_secs(10))),
        (3, "jets", jet_suite, Some(Duration::from_secs(30))),
        (4, "product inequality", product_suite, Some(Duration::from_secs(60))),
        (5, "cutoff constant", cutoff_suite, None),
        (6, "approximate units", units_suite, None),
        (7, "integrability harness", harness_suite, Some(Duration::from_secs(300))),
        (8, "determinism", determinism_suite, None),
    ];
    let mut failed = 0;
    for (n, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {n} ({name}): PASS in {elapsed:.2?}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL in {elapsed:.2?}: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
