//! Axis-aligned ellipsoid, point classification and the confocal
//! coordinate ζ.
//!
//! For a point outside the particle, ζ is the unique positive root of
//!
//! ```text
//! f(ζ) = x²/(a²+ζ) + y²/(b²+ζ) + z²/(c²+ζ) − 1
//! ```
//!
//! `f` is strictly decreasing and convex on ζ ≥ 0, and
//! `|r|²/(s_max²+ζ) − 1 ≤ f(ζ) ≤ |r|²/(s_min²+ζ) − 1`, so the root lies in
//! `[|r|² − s_max², |r|² − s_min²] ⊂ [0, |r|²]`. Newton started at the left
//! end of that bracket approaches the root monotonically from below.

use std::fmt;

use crate::error::{Error, Result};

/// Largest allowed ratio between the longest and shortest semiaxis.
pub const MAX_ASPECT: f64 = 1e6;

/// Tolerance on `|x²/a²+y²/b²+z²/c² − 1|` for a point to count as on the
/// surface.
pub const SURFACE_TOLERANCE: f64 = 1e-12;

const ROOT_REL_TOL: f64 = 1e-13;
const MAX_ROOT_ITER: usize = 200;

/// Ellipsoid centred at the origin with semiaxes `a`, `b`, `c` along the
/// Cartesian `x`, `y`, `z` axes (nm). No ordering among the semiaxes is
/// assumed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    semiaxes: [f64; 3],
}

impl Ellipsoid {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let s = [a, b, c];
        if s.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::Domain(format!("semiaxes must be finite and positive, got {s:?}")));
        }
        let max = a.max(b).max(c);
        let min = a.min(b).min(c);
        if max / min > MAX_ASPECT {
            return Err(Error::Domain(format!(
                "aspect ratio {:e} exceeds the supported maximum {MAX_ASPECT:e}",
                max / min
            )));
        }
        Ok(Self { semiaxes: s })
    }

    /// Ellipsoid with `c = 1` and the given aspect ratios `a/c`, `b/c`.
    pub fn from_aspects(a_over_c: f64, b_over_c: f64) -> Result<Self> {
        Self::new(a_over_c, b_over_c, 1.0)
    }

    pub fn a(&self) -> f64 {
        self.semiaxes[0]
    }

    pub fn b(&self) -> f64 {
        self.semiaxes[1]
    }

    pub fn c(&self) -> f64 {
        self.semiaxes[2]
    }

    pub fn semiaxes(&self) -> [f64; 3] {
        self.semiaxes
    }

    pub fn max_semiaxis(&self) -> f64 {
        self.semiaxes.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn volume(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.a() * self.b() * self.c()
    }

    /// `x²/a² + y²/b² + z²/c²`.
    pub fn implicit(&self, point: [f64; 3]) -> f64 {
        point.iter().zip(self.semiaxes).map(|(x, s)| (x / s) * (x / s)).sum()
    }

    /// Same ellipsoid with every semiaxis multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let [a, b, c] = self.semiaxes;
        Self::new(a * factor, b * factor, c * factor)
    }

    pub fn contains(&self, point: [f64; 3]) -> bool {
        self.implicit(point) < 1.0
    }

    /// Residual of the confocal cubic, `Σ xᵢ²/(sᵢ²+ζ) − 1`.
    pub fn confocal_residual(&self, point: [f64; 3], zeta: f64) -> f64 {
        point.iter().zip(self.semiaxes).map(|(x, s)| x * x / (s * s + zeta)).sum::<f64>() - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Inside,
    Surface,
    Outside,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Inside => "inside",
            Region::Surface => "surface",
            Region::Outside => "outside",
        }
    }

    /// Whether the ζ = 0 branch applies.
    pub fn is_interior(self) -> bool {
        !matches!(self, Region::Outside)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Region of a point together with its confocal coordinate
/// (0 for inside and surface points).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointClass {
    pub region: Region,
    pub zeta: f64,
}

/// Classifies `point` relative to the ellipsoid and solves for ζ when it is
/// outside.
pub fn classify_point(ellipsoid: &Ellipsoid, point: [f64; 3]) -> Result<PointClass> {
    if point.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("point must be finite, got {point:?}")));
    }
    let s = ellipsoid.implicit(point);
    if (s - 1.0).abs() <= SURFACE_TOLERANCE {
        return Ok(PointClass { region: Region::Surface, zeta: 0.0 });
    }
    if s < 1.0 {
        return Ok(PointClass { region: Region::Inside, zeta: 0.0 });
    }
    Ok(PointClass { region: Region::Outside, zeta: confocal_root(ellipsoid, point) })
}

/// Positive root of the confocal cubic for a point with `f(0) > 0`.
fn confocal_root(ellipsoid: &Ellipsoid, point: [f64; 3]) -> f64 {
    let r2: f64 = point.iter().map(|x| x * x).sum();
    let sq = ellipsoid.semiaxes().map(|s| s * s);
    let smax2 = sq.iter().copied().fold(f64::MIN, f64::max);
    let smin2 = sq.iter().copied().fold(f64::MAX, f64::min);

    let mut lo = (r2 - smax2).max(0.0);
    let mut hi = (r2 - smin2).max(lo);
    debug_assert!(ellipsoid.confocal_residual(point, r2) <= 0.0);

    let eval = |zeta: f64| {
        let mut f = -1.0;
        let mut df = 0.0;
        for (x, s2) in point.iter().zip(sq) {
            let w = x * x / (s2 + zeta);
            f += w;
            df -= w / (s2 + zeta);
        }
        (f, df)
    };

    let mut zeta = lo;
    for _ in 0..MAX_ROOT_ITER {
        let (f, df) = eval(zeta);
        if f == 0.0 {
            return zeta;
        }
        if f > 0.0 {
            lo = zeta;
        } else {
            hi = zeta;
        }
        let mut next = if df < 0.0 { zeta - f / df } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - zeta).abs();
        zeta = next;
        if step <= ROOT_REL_TOL * zeta.abs() || hi - lo <= ROOT_REL_TOL * hi {
            break;
        }
    }
    zeta
}
