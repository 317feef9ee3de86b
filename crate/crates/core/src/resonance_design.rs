//! Plasmon resonance wavelengths of an ellipsoid and the inverse problem:
//! aspect ratios that put two principal resonances at prescribed
//! wavelengths.
//!
//! An axis resonates where `Re ε(λ) = ε_ii = 1 − 1/L_i`. Losses only
//! broaden the line and are ignored for locating it. Since the factors
//! depend on shape alone, the design works on `c = 1` ellipsoids and
//! returns `a/c`, `b/c`.

use crate::error::{Axis, Error, Result};
use crate::geometry::Ellipsoid;
use crate::material::MaterialTable;
use crate::polarizability::{depolarization_factors, principal_permittivities};

/// Roots of `Re ε(λ) − ε_ii` are bisected until the bracket is narrower
/// than this (nm).
const ROOT_WIDTH_NM: f64 = 1e-9;

const GRID_POINTS: usize = 20;
const GRID_MIN_ASPECT: f64 = 0.01;
const GRID_MAX_ASPECT: f64 = 1.0;
const MAX_NEWTON_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-14;
const FD_STEP: f64 = 1e-6;
/// Largest accepted relative wavelength mismatch of a design.
pub const DESIGN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct AxisResonances {
    pub axis: Axis,
    /// Principal permittivity ε_ii.
    pub eps_ii: f64,
    /// Every wavelength (nm, ascending) where `Re ε(λ) = ε_ii`.
    pub wavelengths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceReport {
    pub axes: [AxisResonances; 3],
}

impl ResonanceReport {
    pub fn axis(&self, axis: Axis) -> &AxisResonances {
        &self.axes[axis.index()]
    }
}

/// Result of [`design_ellipsoid`].
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSolution {
    pub aspect_a: f64,
    pub aspect_b: f64,
    /// Axes carrying the first and second target.
    pub axes: (Axis, Axis),
    /// Resonance wavelengths of the designed shape on those axes (nm).
    pub wavelengths: (f64, f64),
    /// Max relative wavelength error.
    pub residual: f64,
    pub iterations: usize,
}

impl DesignSolution {
    pub fn ellipsoid(&self) -> Ellipsoid {
        Ellipsoid::from_aspects(self.aspect_a, self.aspect_b).expect("designed aspects are valid")
    }
}

/// Scans every table segment for crossings of `Re ε(λ) = ε_ii` on each
/// axis.
pub fn resonance_wavelengths(ellipsoid: &Ellipsoid, table: &MaterialTable) -> ResonanceReport {
    let eps = principal_permittivities(ellipsoid);
    let axes = Axis::ALL.map(|axis| AxisResonances {
        axis,
        eps_ii: eps[axis.index()],
        wavelengths: crossings(table, eps[axis.index()]),
    });
    ResonanceReport { axes }
}

fn crossings(table: &MaterialTable, target: f64) -> Vec<f64> {
    let mut roots: Vec<f64> = Vec::new();
    let push = |v: f64, roots: &mut Vec<f64>| {
        if roots.last() != Some(&v) {
            roots.push(v);
        }
    };
    for i in 0..table.len() - 1 {
        let ((w0, e0), (w1, e1)) = table.segment(i);
        let g0 = e0.re - target;
        let g1 = e1.re - target;
        if g0 == 0.0 {
            push(w0, &mut roots);
        }
        if g0 * g1 < 0.0 {
            let g = |w: f64| e0.re + (w - w0) / (w1 - w0) * (e1.re - e0.re) - target;
            let (mut lo, mut hi) = (w0, w1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if hi - lo <= ROOT_WIDTH_NM || mid == lo || mid == hi {
                    break;
                }
                if (g(mid) > 0.0) == (g0 > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let root = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
            push(root, &mut roots);
        }
        if i + 2 == table.len() && g1 == 0.0 {
            push(w1, &mut roots);
        }
    }
    roots
}

/// Depolarization factor that resonates at `lambda`, `1/(1 − Re ε(λ))`.
pub fn target_factor(table: &MaterialTable, lambda: f64) -> Result<f64> {
    let eps = table.permittivity_at(lambda)?;
    if !(eps.re < 0.0) {
        return Err(Error::Domain(format!(
            "Re eps({lambda} nm) = {} is not negative; no plasmon resonance possible",
            eps.re
        )));
    }
    Ok(1.0 / (1.0 - eps.re))
}

fn factors_at(log_aspects: [f64; 2], axes: (Axis, Axis)) -> Option<[f64; 2]> {
    let e = Ellipsoid::from_aspects(log_aspects[0].exp(), log_aspects[1].exp()).ok()?;
    let f = depolarization_factors(&e);
    Some([f.get(axes.0), f.get(axes.1)])
}

fn residual_at(log_aspects: [f64; 2], axes: (Axis, Axis), targets: [f64; 2]) -> Option<[f64; 2]> {
    factors_at(log_aspects, axes).map(|f| [f[0] - targets[0], f[1] - targets[1]])
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].abs().max(v[1].abs())
}

/// Finds `a/c`, `b/c` such that the principal resonances on `axes.0` and
/// `axes.1` fall at `lambda_1` and `lambda_2`.
pub fn design_ellipsoid(
    lambda_1: f64,
    lambda_2: f64,
    table: &MaterialTable,
    axes: (Axis, Axis),
) -> Result<DesignSolution> {
    if axes.0 == axes.1 {
        return Err(Error::Domain(format!("the two targets need distinct axes, got {} twice", axes.0)));
    }
    let l1 = target_factor(table, lambda_1)?;
    let l2 = target_factor(table, lambda_2)?;
    if l1 + l2 >= 1.0 {
        return Err(Error::Infeasible { l1, l2, sum: l1 + l2 });
    }
    let targets = [l1, l2];

    // coarse start
    let mut best = ([0.0; 2], f64::INFINITY);
    let step = (GRID_MAX_ASPECT / GRID_MIN_ASPECT).ln() / (GRID_POINTS - 1) as f64;
    for i in 0..GRID_POINTS {
        for j in 0..GRID_POINTS {
            let p = [GRID_MIN_ASPECT.ln() + i as f64 * step, GRID_MIN_ASPECT.ln() + j as f64 * step];
            if let Some(r) = residual_at(p, axes, targets) {
                if norm(r) < best.1 {
                    best = (p, norm(r));
                }
            }
        }
    }

    let (mut p, mut r_norm) = best;
    let mut r = residual_at(p, axes, targets).expect("grid point is valid");
    let mut iterations = 0;
    while r_norm > NEWTON_TOL {
        if iterations == MAX_NEWTON_ITER {
            return Err(Error::NoConvergence { iterations, residual: r_norm });
        }
        iterations += 1;

        let mut jac = [[0.0; 2]; 2];
        for k in 0..2 {
            let mut plus = p;
            let mut minus = p;
            plus[k] += FD_STEP;
            minus[k] -= FD_STEP;
            let (fp, fm) = match (factors_at(plus, axes), factors_at(minus, axes)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::NoConvergence { iterations, residual: r_norm }),
            };
            for row in 0..2 {
                jac[row][k] = (fp[row] - fm[row]) / (2.0 * FD_STEP);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoConvergence { iterations, residual: r_norm });
        }
        let delta = [-(jac[1][1] * r[0] - jac[0][1] * r[1]) / det, -(-jac[1][0] * r[0] + jac[0][0] * r[1]) / det];

        // backtracking on the max-norm of the residual
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial = [p[0] + t * delta[0], p[1] + t * delta[1]];
            if let Some(tr) = residual_at(trial, axes, targets) {
                if norm(tr) < r_norm {
                    accepted = Some((trial, tr));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((trial, tr)) => {
                p = trial;
                r = tr;
                r_norm = norm(tr);
            }
            // no descent left: converged to rounding level or stuck
            None if r_norm <= 1e-12 => break,
            None => return Err(Error::NoConvergence { iterations, residual: r_norm }),
        }
    }

    let ellipsoid = Ellipsoid::from_aspects(p[0].exp(), p[1].exp())?;
    let report = resonance_wavelengths(&ellipsoid, table);
    let closest = |axis: Axis, lambda: f64| {
        report.axis(axis).wavelengths.iter().copied().min_by(|x, y| (x - lambda).abs().total_cmp(&(y - lambda).abs()))
    };
    let (w1, w2) = match (closest(axes.0, lambda_1), closest(axes.1, lambda_2)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NoConvergence { iterations, residual: r_norm }),
    };
    let residual = ((w1 - lambda_1) / lambda_1).abs().max(((w2 - lambda_2) / lambda_2).abs());
    if residual > DESIGN_TOLERANCE {
        return Err(Error::NoConvergence { iterations, residual });
    }
    Ok(DesignSolution {
        aspect_a: ellipsoid.a(),
        aspect_b: ellipsoid.b(),
        axes,
        wavelengths: (w1, w2),
        residual,
        iterations,
    })
}
