//! Carlson symmetric elliptic integrals and the ellipsoidal screening
//! integrals built on them.
//!
//! The screening integrals
//!
//! ```text
//! I(ζ)   = ∫_ζ^∞ du / R(u)
//! I_a(ζ) = ∫_ζ^∞ du / ((a² + u) R(u)),   R(u) = √((a²+u)(b²+u)(c²+u))
//! ```
//!
//! reduce, after the shift `u = ζ + t`, to
//!
//! ```text
//! I(ζ)   = 2 R_F(a²+ζ, b²+ζ, c²+ζ)
//! I_a(ζ) = (2/3) R_D(b²+ζ, c²+ζ, a²+ζ)
//! ```
//!
//! with `I_b`, `I_c` following by cyclic permutation. The duplication
//! algorithms below need no special cases for spheres, spheroids or very
//! flat shapes.
//!
//! # References
//! - B. C. Carlson, "Numerical computation of real or complex elliptic
//!   integrals", Numer. Algorithms 10 (1995) 13–26.
//! - DLMF 19.36.

use crate::error::{Error, Result};
use crate::geometry::Ellipsoid;

/// Relative truncation target of the duplication loops.
const TRUNCATION: f64 = f64::EPSILON;

/// Hard cap on duplication steps; convergence is geometric (factor 4 per
/// step) so this is never reached for finite inputs.
const MAX_DUPLICATIONS: usize = 64;

fn check_args(name: &str, args: &[f64]) -> Result<()> {
    if args.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("{name}: arguments must be finite, got {args:?}")));
    }
    if args.iter().any(|&v| v < 0.0) {
        return Err(Error::Domain(format!("{name}: arguments must be non-negative, got {args:?}")));
    }
    if args.iter().filter(|&&v| v == 0.0).count() > 1 {
        return Err(Error::Domain(format!("{name}: at most one argument may be zero, got {args:?}")));
    }
    Ok(())
}

/// Carlson's integral of the first kind,
/// `R_F(x,y,z) = ½ ∫₀^∞ dt / √((t+x)(t+y)(t+z))`.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    check_args("carlson_rf", &[x, y, z])?;

    let a0 = (x + y + z) / 3.0;
    let mut q = (3.0 * TRUNCATION).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let (mut xn, mut yn, mut zn, mut an) = (x, y, z, a0);
    let mut scale = 1.0;

    for _ in 0..MAX_DUPLICATIONS {
        if q < an.abs() {
            break;
        }
        let (sx, sy, sz) = (xn.sqrt(), yn.sqrt(), zn.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        xn = 0.25 * (xn + lambda);
        yn = 0.25 * (yn + lambda);
        zn = 0.25 * (zn + lambda);
        an = 0.25 * (an + lambda);
        q *= 0.25;
        scale *= 0.25;
    }

    let dx = (a0 - x) * scale / an;
    let dy = (a0 - y) * scale / an;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;

    Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / an.sqrt())
}

/// Carlson's integral of the second kind,
/// `R_D(x,y,z) = (3/2) ∫₀^∞ dt / ((t+z) √((t+x)(t+y)(t+z)))`.
///
/// Symmetric in `x` and `y` only; `z` must be strictly positive.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    check_args("carlson_rd", &[x, y, z])?;
    if z == 0.0 {
        return Err(Error::Domain(format!("carlson_rd: z must be positive, got {z}")));
    }

    let a0 = (x + y + 3.0 * z) / 5.0;
    let mut q = (0.25 * TRUNCATION).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let (mut xn, mut yn, mut zn, mut an) = (x, y, z, a0);
    let mut scale = 1.0;
    let mut tail = 0.0;

    for _ in 0..MAX_DUPLICATIONS {
        if q < an.abs() {
            break;
        }
        let (sx, sy, sz) = (xn.sqrt(), yn.sqrt(), zn.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        tail += scale / (sz * (zn + lambda));
        xn = 0.25 * (xn + lambda);
        yn = 0.25 * (yn + lambda);
        zn = 0.25 * (zn + lambda);
        an = 0.25 * (an + lambda);
        q *= 0.25;
        scale *= 0.25;
    }

    let dx = (a0 - x) * scale / an;
    let dy = (a0 - y) * scale / an;
    let dz = -(dx + dy) / 3.0;
    let xy = dx * dy;
    let z2 = dz * dz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * dz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * dz;

    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;

    Ok(scale * series / (an * an.sqrt()) + 3.0 * tail)
}

/// The four screening integrals of an ellipsoid at confocal parameter ζ.
///
/// Units follow the semiaxes: `big_i` is length⁻¹, the axial integrals are
/// length⁻³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreeningIntegrals {
    pub big_i: f64,
    pub i_a: f64,
    pub i_b: f64,
    pub i_c: f64,
}

impl ScreeningIntegrals {
    /// Axial integrals as `[I_a, I_b, I_c]`.
    pub fn axial(&self) -> [f64; 3] {
        [self.i_a, self.i_b, self.i_c]
    }
}

/// Evaluates `I(ζ)`, `I_a(ζ)`, `I_b(ζ)`, `I_c(ζ)` for `ζ ≥ 0`.
pub fn screening_integrals(ellipsoid: &Ellipsoid, zeta: f64) -> Result<ScreeningIntegrals> {
    if !(zeta >= 0.0) || !zeta.is_finite() {
        return Err(Error::Domain(format!("screening_integrals: zeta must be finite and >= 0, got {zeta}")));
    }
    let [a, b, c] = ellipsoid.semiaxes();
    let pa = a * a + zeta;
    let pb = b * b + zeta;
    let pc = c * c + zeta;

    Ok(ScreeningIntegrals {
        big_i: 2.0 * carlson_rf(pa, pb, pc)?,
        i_a: 2.0 / 3.0 * carlson_rd(pb, pc, pa)?,
        i_b: 2.0 / 3.0 * carlson_rd(pc, pa, pb)?,
        i_c: 2.0 / 3.0 * carlson_rd(pa, pb, pc)?,
    })
}
