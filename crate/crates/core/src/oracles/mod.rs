//! Brute-force reference implementations used to validate the analytic
//! paths: Monte Carlo volume averages, direct quadrature of the screening
//! integrals, finite-difference Hessians and the classical sphere rates.
//!
//! Nothing here is used by the production code paths.

pub mod quadrature;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Axis, Error, Result};
use crate::geometry::{classify_point, Ellipsoid, Region};
use crate::source_field::{j_value, DipoleSource, FieldHessian};

/// Smallest sample count accepted by the Monte Carlo estimators.
pub const MIN_SAMPLES: usize = 10_000;

/// Sample mean of a complex 3-vector with per-component standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub mean: [Complex64; 3],
    /// `√(Σ|vᵢ − mean|² / (n−1)) / √n` per component.
    pub std_error: [f64; 3],
    pub samples: usize,
}

/// Uniform points inside the ellipsoid by rejection from the bounding box.
struct EllipsoidSampler {
    ellipsoid: Ellipsoid,
    rng: ChaCha8Rng,
}

impl EllipsoidSampler {
    fn new(ellipsoid: Ellipsoid, seed: u64) -> Self {
        Self { ellipsoid, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn next_point(&mut self) -> [f64; 3] {
        let s = self.ellipsoid.semiaxes();
        loop {
            let u = [0, 1, 2].map(|i| s[i] * self.rng.gen_range(-1.0..1.0));
            if self.ellipsoid.contains(u) {
                return u;
            }
        }
    }
}

/// Field at `r` of a point dipole `d` at `r0`: `(3(d·n)n − d)/|r − r0|³`.
fn dipole_field(r: [f64; 3], r0: [f64; 3], d: [Complex64; 3]) -> [Complex64; 3] {
    let rel = [r[0] - r0[0], r[1] - r0[1], r[2] - r0[2]];
    let dist2 = rel[0] * rel[0] + rel[1] * rel[1] + rel[2] * rel[2];
    let dist = dist2.sqrt();
    let inv3 = 1.0 / (dist2 * dist);
    let n = rel.map(|v| v / dist);
    let dn = d[0] * n[0] + d[1] * n[1] + d[2] * n[2];
    [0, 1, 2].map(|i| (3.0 * dn * n[i] - d[i]) * inv3)
}

/// Monte Carlo estimate of the dipole field averaged over the ellipsoid
/// volume. Deterministic for a fixed seed.
///
/// Only exterior sources are accepted: for a source inside, the field has a
/// non-integrable `1/ρ³` singularity in the sampled volume (the analytic
/// average carries its contact term) and the estimator has no finite
/// variance.
pub fn mc_average_dipole_field(
    ellipsoid: &Ellipsoid,
    source: &DipoleSource,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    match classify_point(ellipsoid, source.position)?.region {
        Region::Outside => {}
        Region::Surface => {
            return Err(Error::Domain("source on the surface: the averaged integrand is singular".into()))
        }
        Region::Inside => {
            return Err(Error::Domain(
                "source inside the ellipsoid: the Monte Carlo integrand has infinite variance".into(),
            ))
        }
    }

    let mut sampler = EllipsoidSampler::new(*ellipsoid, seed);
    let mut mean = [Complex64::new(0.0, 0.0); 3];
    let mut m2 = [0.0; 3];
    for k in 1..=samples {
        let r = sampler.next_point();
        let e = dipole_field(r, source.position, source.moment);
        for i in 0..3 {
            let delta = e[i] - mean[i];
            mean[i] += delta / k as f64;
            m2[i] += (delta.conj() * (e[i] - mean[i])).re;
        }
    }
    let n = samples as f64;
    Ok(McEstimate { mean, std_error: m2.map(|v| (v / (n - 1.0)).sqrt() / n.sqrt()), samples })
}

/// Monte Carlo volume average of `1/|r − point|`, checked against
/// [`crate::source_field::j_value`]. Returns `(mean, std_error)`.
pub fn mc_average_inverse_distance(
    ellipsoid: &Ellipsoid,
    point: [f64; 3],
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    if classify_point(ellipsoid, point)?.region != Region::Outside {
        return Err(Error::Domain("point must be outside the ellipsoid".into()));
    }
    let mut sampler = EllipsoidSampler::new(*ellipsoid, seed);
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 1..=samples {
        let r = sampler.next_point();
        let d = ((r[0] - point[0]).powi(2) + (r[1] - point[1]).powi(2) + (r[2] - point[2]).powi(2)).sqrt();
        let v = 1.0 / d;
        let delta = v - mean;
        mean += delta / k as f64;
        m2 += delta * (v - mean);
    }
    let n = samples as f64;
    Ok((mean, (m2 / (n - 1.0)).sqrt() / n.sqrt()))
}

/// Direct quadrature of a screening integral: `I(ζ)` for `axis = None`,
/// otherwise `I_a`, `I_b` or `I_c`.
pub fn quadrature_screening_integral(ellipsoid: &Ellipsoid, zeta: f64, axis: Option<Axis>) -> Result<f64> {
    if !(zeta >= 0.0) || !zeta.is_finite() {
        return Err(Error::Domain(format!("zeta must be finite and >= 0, got {zeta}")));
    }
    let sq = ellipsoid.semiaxes().map(|s| s * s + zeta);
    let extra = axis.map(|a| sq[a.index()]);
    let integrand = move |t: f64| {
        let r = ((sq[0] + t) * (sq[1] + t) * (sq[2] + t)).sqrt();
        match extra {
            Some(p) => 1.0 / ((p + t) * r),
            None => 1.0 / r,
        }
    };
    // variable scale: the integrand changes on the scale of the smallest
    // shifted semiaxis², so rescale t to keep the mapped integrand smooth
    let scale = sq.iter().copied().fold(f64::MAX, f64::min);
    Ok(scale * quadrature::integrate_half_line(|t| integrand(scale * t), 1e-12))
}

/// Central second differences of [`j_value`] at steps `h` and `2h`,
/// combined by Richardson extrapolation and symmetrised.
///
/// The stencil must stay inside one region: points closer than about
/// `10·step` to the surface (where J is not twice differentiable) are
/// rejected.
pub fn fd_hessian(ellipsoid: &Ellipsoid, point: [f64; 3], step: f64) -> Result<FieldHessian> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let centre = classify_point(ellipsoid, point)?.region;
    if centre == Region::Surface {
        return Err(Error::Precision("point lies on the surface".into()));
    }
    let guard = 10.0 * step;
    for dx in [-guard, 0.0, guard] {
        for dy in [-guard, 0.0, guard] {
            for dz in [-guard, 0.0, guard] {
                let q = [point[0] + dx, point[1] + dy, point[2] + dz];
                if classify_point(ellipsoid, q)?.region != centre {
                    return Err(Error::Precision(format!("point {point:?} is within {guard} nm of the surface")));
                }
            }
        }
    }

    let j = |p: [f64; 3]| j_value(ellipsoid, p);
    let shifted = |di: [f64; 3]| [point[0] + di[0], point[1] + di[1], point[2] + di[2]];
    let unit = |i: usize, h: f64| {
        let mut v = [0.0; 3];
        v[i] = h;
        v
    };
    let j0 = j(point)?;

    let second = |h: f64| -> Result<[[f64; 3]; 3]> {
        let mut d = [[0.0; 3]; 3];
        for i in 0..3 {
            let plus = j(shifted(unit(i, h)))?;
            let minus = j(shifted(unit(i, -h)))?;
            d[i][i] = (plus - 2.0 * j0 + minus) / (h * h);
            for k in (i + 1)..3 {
                let pp = j(shifted(add(unit(i, h), unit(k, h))))?;
                let pm = j(shifted(add(unit(i, h), unit(k, -h))))?;
                let mp = j(shifted(add(unit(i, -h), unit(k, h))))?;
                let mm = j(shifted(add(unit(i, -h), unit(k, -h))))?;
                d[i][k] = (pp - pm - mp + mm) / (4.0 * h * h);
                d[k][i] = d[i][k];
            }
        }
        Ok(d)
    };

    let fine = second(step)?;
    let coarse = second(2.0 * step)?;
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            h[i][k] = (4.0 * fine[i][k] - coarse[i][k]) / 3.0;
        }
    }
    Ok(FieldHessian { h })
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Dipole orientation relative to a sphere's radius vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Radial,
    Tangential,
}

/// Classical quasistatic rate of a dipole outside a sphere:
/// radial `|1 + 2f(r/d)³|²`, tangential `|1 − f(r/d)³|²` with
/// `f = (ε−1)/(ε+2)`.
pub fn sphere_reference_rate(radius: f64, eps: Complex64, distance: f64, orientation: Orientation) -> Result<f64> {
    if !(distance > radius) || !(radius > 0.0) {
        return Err(Error::Domain(format!("need distance > radius > 0, got {distance} and {radius}")));
    }
    let f = (eps - 1.0) / (eps + 2.0) * (radius / distance).powi(3);
    Ok(match orientation {
        Orientation::Radial => (1.0 + 2.0 * f).norm_sqr(),
        Orientation::Tangential => (1.0 - f).norm_sqr(),
    })
}
