//! Globally adaptive Gauss–Kronrod 7/15 quadrature.

use crate::error::{Error, Result};

/// Absolute tolerance used for pairings.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Upper bound on the number of panels before giving up.
pub const MAX_PANELS: usize = 4000;

/// Relative accuracy below which further bisection only chases rounding noise.
pub const ROUNDOFF_FLOOR: f64 = 50.0 * f64::EPSILON;

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// `∫_a^b f` to absolute tolerance `tol`, starting from the panels cut at
/// `breaks` (points outside `(a, b)` are ignored).
///
/// The tolerance is relaxed to [`ROUNDOFF_FLOOR`] times `Σ |panel values|`
/// when that is larger, since no panel refinement can beat it.
pub fn integrate(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::invalid(format!("bad integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| a < x && x < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut panels = cuts
        .windows(2)
        .map(|w| gk15(&mut f, w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    loop {
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let magnitude: f64 = panels.iter().map(|p| p.value.abs()).sum();
        if !(error.is_finite() && magnitude.is_finite()) {
            return Err(Error::Quadrature {
                a,
                b,
                error,
                intervals: panels.len(),
            });
        }
        if error <= tol.max(ROUNDOFF_FLOOR * magnitude) {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if panels.len() >= MAX_PANELS || !(p.a < mid && mid < p.b) {
            return Err(Error::Quadrature {
                a,
                b,
                error,
                intervals: panels.len(),
            });
        }
        panels[worst] = gk15(&mut f, p.a, mid)?;
        panels.push(gk15(&mut f, mid, p.b)?);
    }
    // Sum in interval order so the result does not depend on refinement history.
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(Quadrature {
        value: panels.iter().map(|p| p.value).sum(),
        error: panels.iter().map(|p| p.error).sum(),
        panels: panels.len(),
    })
}
