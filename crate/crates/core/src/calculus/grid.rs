use serde::Serialize;

use crate::error::{Error, Result};

/// Default number of points in a uniform grid.
pub const DEFAULT_POINTS: usize = 401;

/// Sorted sample points in `[a, b]`, none of which is a listed knot.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    a: f64,
    b: f64,
    points: Vec<f64>,
    avoids: Vec<f64>,
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::invalid(format!("bad grid interval [{a}, {b}]")));
    }
    Ok(())
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if n == 1 {
            0.5 * (a + b)
        } else if i == n - 1 {
            b
        } else {
            a + (b - a) * (i as f64 / (n - 1) as f64)
        }
    })
}

impl Grid {
    /// `n` uniform points on `[a, b]`, minus any that coincide with a knot.
    pub fn new(a: f64, b: f64, n: usize, avoid: &[f64]) -> Result<Grid> {
        check_interval(a, b)?;
        if n == 0 {
            return Err(Error::invalid("a grid needs at least one point"));
        }
        let mut points: Vec<f64> = linspace(a, b, n).collect();
        points.dedup();
        Self::finish(a, b, points, avoid)
    }

    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Grid> {
        Self::new(a, b, n, &[])
    }

    /// `n` points in each piece of `[a, b]` cut at the knots inside it, so
    /// that narrow pieces are resolved as finely as wide ones.
    pub fn per_segment(a: f64, b: f64, n: usize, knots: &[f64]) -> Result<Grid> {
        check_interval(a, b)?;
        if n == 0 {
            return Err(Error::invalid("a grid needs at least one point per segment"));
        }
        let mut cuts = vec![a];
        cuts.extend(knots.iter().copied().filter(|&k| a < k && k < b));
        cuts.push(b);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut points = Vec::new();
        for w in cuts.windows(2) {
            points.extend(linspace(w[0], w[1], n.max(2)));
        }
        if cuts.len() == 1 {
            points.push(a);
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        Self::finish(a, b, points, knots)
    }

    /// Explicit points; they must lie in `[a, b]`, be strictly increasing and miss every knot.
    pub fn from_points(a: f64, b: f64, points: Vec<f64>, avoid: &[f64]) -> Result<Grid> {
        check_interval(a, b)?;
        if points.is_empty() {
            return Err(Error::invalid("a grid needs at least one point"));
        }
        if points.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::invalid("grid points must be strictly increasing"));
        }
        if points.iter().any(|&x| !(a <= x && x <= b)) {
            return Err(Error::invalid(format!("grid points must lie in [{a}, {b}]")));
        }
        if let Some(x) = points.iter().find(|x| avoid.contains(x)) {
            return Err(Error::invalid(format!("grid point {x} is a knot")));
        }
        Ok(Grid {
            a,
            b,
            points,
            avoids: avoid.to_vec(),
        })
    }

    fn finish(a: f64, b: f64, mut points: Vec<f64>, avoid: &[f64]) -> Result<Grid> {
        points.retain(|x| !avoid.contains(x));
        if points.is_empty() {
            return Err(Error::invalid("every grid point is a knot"));
        }
        let mut avoids = avoid.to_vec();
        avoids.sort_by(f64::total_cmp);
        avoids.dedup();
        Ok(Grid { a, b, points, avoids })
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn avoids(&self) -> &[f64] {
        &self.avoids
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest gap between neighbouring points.
    pub fn max_step(&self) -> f64 {
        self.points.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Union of the points of two grids over the hull of their intervals.
    pub fn union(&self, other: &Grid) -> Grid {
        let mut points: Vec<f64> = self.points.iter().chain(&other.points).copied().collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let mut avoids: Vec<f64> = self.avoids.iter().chain(&other.avoids).copied().collect();
        avoids.sort_by(f64::total_cmp);
        avoids.dedup();
        points.retain(|x| !avoids.contains(x));
        Grid {
            a: self.a.min(other.a),
            b: self.b.max(other.b),
            points,
            avoids,
        }
    }
}

/// Interval and point count of a uniform grid, resolved against knots later.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(a: f64, b: f64, points: usize) -> Result<GridSpec> {
        check_interval(a, b)?;
        if points == 0 {
            return Err(Error::invalid("a grid needs at least one point"));
        }
        Ok(GridSpec { a, b, points })
    }

    /// Parses `a,b,n`.
    pub fn parse(text: &str) -> Result<GridSpec> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = || Error::parse(0, format!("expected `a,b,n`, got `{text}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let a = parts[0].parse().map_err(|_| bad())?;
        let b = parts[1].parse().map_err(|_| bad())?;
        let n = parts[2].parse().map_err(|_| bad())?;
        GridSpec::new(a, b, n)
    }

    pub fn build(&self, avoid: &[f64]) -> Result<Grid> {
        Grid::new(self.a, self.b, self.points, avoid)
    }

    /// True when `[a, b]` lies inside `[lo, hi]`.
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        lo <= self.a && self.b <= hi
    }
}
