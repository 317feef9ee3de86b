//! Volume-averaged Coulomb kernel J, its analytic Hessian, and the
//! volume-averaged dipole field.
//!
//! `J(r') = (1/V)∫_V dr / |r − r'|` has the closed form
//!
//! ```text
//! J = (3/4)·{ I(ζ) − x²·I_a(ζ) − y²·I_b(ζ) − z²·I_c(ζ) }
//! ```
//!
//! with ζ the confocal coordinate of `r'` (ζ = 0 inside). Writing
//! `∂J/∂ζ = (3/4)/R(ζ)·(Σ xᵢ²/(sᵢ²+ζ) − 1)`, the bracket is exactly the
//! confocal cubic, so the ζ-dependence drops out of the gradient:
//!
//! ```text
//! ∂J/∂xᵢ = −(3/2)·xᵢ·Iᵢ(ζ)
//! ```
//!
//! Differentiating once more, with `dIᵢ/dζ = −1/((sᵢ²+ζ)R(ζ))` and
//! `∂ζ/∂xⱼ = 2xⱼ / ((sⱼ²+ζ)·h)`, `h = Σ x_k²/(s_k²+ζ)²`:
//!
//! ```text
//! H_ij = −(3/2)·[ δ_ij·Iᵢ(ζ) − 2·xᵢxⱼ / ((sᵢ²+ζ)(sⱼ²+ζ)·R(ζ)·h) ]
//! ```
//!
//! Inside the particle the second term is absent. Because the field of a
//! point dipole at `r'` is `∇(d·∇)(1/|r−r'|)` and two derivatives with
//! respect to `r` equal two with respect to `r'`, the volume-averaged field
//! is `⟨E₀⟩ = H·d`.
//!
//! Across the surface `H` jumps by `(3/(abc))·n̂n̂ᵀ` (the `4πρ` of a uniform
//! charge `ρ = 1/V`), so `⟨E₀⟩` is continuous only for the tangential part of
//! the moment.

use num_complex::Complex64;

use crate::elliptic::{screening_integrals, ScreeningIntegrals};
use crate::error::{Error, Result};
use crate::geometry::{classify_point, Ellipsoid, PointClass, Region};

/// Point emitter: position in nm and a complex transition moment in
/// arbitrary units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSource {
    pub position: [f64; 3],
    pub moment: [Complex64; 3],
}

impl DipoleSource {
    pub fn new(position: [f64; 3], moment: [Complex64; 3]) -> Result<Self> {
        if position.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("source position must be finite, got {position:?}")));
        }
        if moment.iter().any(|m| !m.re.is_finite() || !m.im.is_finite()) {
            return Err(Error::Domain("dipole moment must be finite".into()));
        }
        if moment.iter().all(|m| m.norm_sqr() == 0.0) {
            return Err(Error::Domain("dipole moment must not be zero".into()));
        }
        Ok(Self { position, moment })
    }

    /// Source with a real moment.
    pub fn real(position: [f64; 3], moment: [f64; 3]) -> Result<Self> {
        Self::new(position, moment.map(|m| Complex64::new(m, 0.0)))
    }

    pub fn moment_norm_sqr(&self) -> f64 {
        self.moment.iter().map(|m| m.norm_sqr()).sum()
    }
}

/// Hessian of J at the source position (nm⁻³).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldHessian {
    pub h: [[f64; 3]; 3],
}

impl FieldHessian {
    pub fn trace(&self) -> f64 {
        self.h[0][0] + self.h[1][1] + self.h[2][2]
    }

    /// `H·d` for a complex vector.
    pub fn apply(&self, v: [Complex64; 3]) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (row, o) in self.h.iter().zip(out.iter_mut()) {
            *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.h.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.h.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the difference.
    pub fn distance(&self, other: &FieldHessian) -> f64 {
        self.h.iter().flatten().zip(other.h.iter().flatten()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

/// J with an explicitly supplied ζ. Equals [`j_value`] when ζ is the
/// point's confocal coordinate; other values are useful to probe `∂J/∂ζ`.
pub fn j_at_zeta(ellipsoid: &Ellipsoid, point: [f64; 3], zeta: f64) -> Result<f64> {
    let s = screening_integrals(ellipsoid, zeta)?;
    Ok(j_from(&s, point))
}

fn j_from(s: &ScreeningIntegrals, point: [f64; 3]) -> f64 {
    let [x, y, z] = point;
    0.75 * (s.big_i - x * x * s.i_a - y * y * s.i_b - z * z * s.i_c)
}

/// Volume average of `1/|r − point|` over the ellipsoid (nm⁻¹).
pub fn j_value(ellipsoid: &Ellipsoid, point: [f64; 3]) -> Result<f64> {
    let class = classify_point(ellipsoid, point)?;
    j_at_zeta(ellipsoid, point, class.zeta)
}

/// `∇J = −(3/2)·(x·I_a, y·I_b, z·I_c)` at the point's ζ.
pub fn j_gradient(ellipsoid: &Ellipsoid, point: [f64; 3]) -> Result<[f64; 3]> {
    let class = classify_point(ellipsoid, point)?;
    let axial = screening_integrals(ellipsoid, class.zeta)?.axial();
    Ok([0, 1, 2].map(|i| -1.5 * point[i] * axial[i]))
}

pub fn j_hessian(ellipsoid: &Ellipsoid, point: [f64; 3]) -> Result<FieldHessian> {
    let class = classify_point(ellipsoid, point)?;
    hessian_for(ellipsoid, point, class)
}

pub(crate) fn hessian_for(ellipsoid: &Ellipsoid, point: [f64; 3], class: PointClass) -> Result<FieldHessian> {
    match class.region {
        Region::Inside | Region::Surface => interior_hessian(ellipsoid),
        Region::Outside => exterior_hessian(ellipsoid, point, class.zeta),
    }
}

/// Constant Hessian of the quadratic interior J.
pub fn interior_hessian(ellipsoid: &Ellipsoid) -> Result<FieldHessian> {
    let axial = screening_integrals(ellipsoid, 0.0)?.axial();
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        h[i][i] = -1.5 * axial[i];
    }
    Ok(FieldHessian { h })
}

/// Exterior branch of the Hessian at an arbitrary ζ ≥ 0 on the confocal
/// surface through `point`. At ζ = 0 and a surface point this is the
/// outside limit.
pub fn exterior_hessian(ellipsoid: &Ellipsoid, point: [f64; 3], zeta: f64) -> Result<FieldHessian> {
    let s = screening_integrals(ellipsoid, zeta)?;
    let axial = s.axial();
    let shifted = ellipsoid.semiaxes().map(|v| v * v + zeta);
    let r_zeta = (shifted[0] * shifted[1] * shifted[2]).sqrt();
    // normal direction of the confocal surface, nᵢ ∝ xᵢ/(sᵢ²+ζ)
    let n = [0, 1, 2].map(|i| point[i] / shifted[i]);
    let h_norm: f64 = n.iter().map(|v| v * v).sum();

    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let mut v = -2.0 * n[i] * n[j] / (r_zeta * h_norm);
            if i == j {
                v += axial[i];
            }
            h[i][j] = -1.5 * v;
            h[j][i] = h[i][j];
        }
    }
    Ok(FieldHessian { h })
}

/// `⟨E₀⟩ = H(J)·d₀` at the source position.
pub fn averaged_field(ellipsoid: &Ellipsoid, source: &DipoleSource) -> Result<[Complex64; 3]> {
    Ok(j_hessian(ellipsoid, source.position)?.apply(source.moment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::fd_hessian;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_ellipsoid(rng: &mut impl Rng) -> Ellipsoid {
        Ellipsoid::new(rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)).unwrap()
    }

    fn random_outside_point(rng: &mut impl Rng, e: &Ellipsoid, min_implicit: f64) -> [f64; 3] {
        loop {
            let m = 3.0 * e.max_semiaxis();
            let p = [rng.gen_range(-m..m), rng.gen_range(-m..m), rng.gen_range(-m..m)];
            if e.implicit(p) > min_implicit {
                return p;
            }
        }
    }

    // point on the ellipsoid scaled by t along a random direction
    fn random_shell_point(rng: &mut impl Rng, e: &Ellipsoid, lo: f64, hi: f64) -> [f64; 3] {
        let s = e.semiaxes();
        loop {
            let u: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
            if n > 0.1 && n <= 1.0 {
                let t = rng.gen_range(lo..hi) / n;
                return [t * s[0] * u[0], t * s[1] * u[1], t * s[2] * u[2]];
            }
        }
    }

    #[test]
    fn sphere_j() {
        let s = Ellipsoid::new(1.0, 1.0, 1.0).unwrap();
        assert!((j_value(&s, [0.0; 3]).unwrap() - 1.5).abs() < 1e-15);
        assert!((j_value(&s, [0.0, 0.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
        // inside a uniform ball: 3/2 − r²/2
        assert!((j_value(&s, [0.3, 0.2, -0.1]).unwrap() - (1.5 - 0.14 / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn sphere_exterior_hessian_is_coulomb() {
        let s = Ellipsoid::new(1.0, 1.0, 1.0).unwrap();
        let h = j_hessian(&s, [0.0, 0.0, 2.0]).unwrap();
        assert!((h.h[2][2] - 0.25).abs() < 1e-15);
        assert!((h.h[0][0] + 0.125).abs() < 1e-15);
        assert!(h.h[0][1].abs() < 1e-16 && h.h[0][2].abs() < 1e-16);

        let p: [f64; 3] = [0.7, -1.1, 1.9];
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let h = j_hessian(&s, p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d = if i == j { 1.0 } else { 0.0 };
                let coulomb = (3.0 * p[i] * p[j] - d * r * r) / r.powi(5);
                assert!((h.h[i][j] - coulomb).abs() < 1e-14, "{i}{j}");
            }
        }
    }

    #[test]
    fn interior_hessian_is_constant_diagonal() {
        let e = Ellipsoid::new(1.0, 0.6, 0.105).unwrap();
        let s = screening_integrals(&e, 0.0).unwrap();
        let h1 = j_hessian(&e, [0.1, 0.2, 0.01]).unwrap();
        let h2 = j_hessian(&e, [-0.5, 0.0, -0.05]).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.h[0][1], 0.0);
        assert!((h1.trace() + 1.5 * (s.i_a + s.i_b + s.i_c)).abs() < 1e-12 * h1.trace().abs());
    }

    #[test]
    fn on_axis_xx_component() {
        let e = Ellipsoid::new(1.0, 0.6, 0.105).unwrap();
        let z = 0.4;
        let h = j_hessian(&e, [0.0, 0.0, z]).unwrap();
        let s = screening_integrals(&e, z * z - 0.105 * 0.105).unwrap();
        assert!((h.h[0][0] + 1.5 * s.i_a).abs() <= 1e-13 * s.i_a);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let e = random_ellipsoid(&mut rng);
            let p = random_shell_point(&mut rng, &e, 1.1, 2.0);
            let step = 1e-4 * e.max_semiaxis();
            let fd = fd_hessian(&e, p, step).unwrap();
            let an = j_hessian(&e, p).unwrap();
            assert!(an.distance(&fd) <= 1e-6 * an.norm(), "{e:?} {p:?}");
        }
    }

    #[test]
    fn exterior_trace_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..500 {
            let e = random_ellipsoid(&mut rng);
            let p = random_outside_point(&mut rng, &e, 1.0);
            let h = j_hessian(&e, p).unwrap();
            assert!(h.trace().abs() <= 1e-10 * h.norm());
        }
    }

    #[test]
    fn zeta_stationarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let e = random_ellipsoid(&mut rng);
            let p = random_outside_point(&mut rng, &e, 1.1);
            let zeta = classify_point(&e, p).unwrap().zeta;
            let dz = 1e-3 * zeta;
            let j = |k: f64| j_at_zeta(&e, p, zeta + k * dz).unwrap();
            let d = (8.0 * (j(1.0) - j(-1.0)) - (j(2.0) - j(-2.0))) / (12.0 * dz);
            // scale: |∂I/∂ζ| = 1/R(ζ)
            let shifted = e.semiaxes().map(|v| v * v + zeta);
            let scale = 1.0 / (shifted[0] * shifted[1] * shifted[2]).sqrt();
            assert!(d.abs() <= 1e-10 * scale.max(1.0), "{d:e} scale {scale:e}");
        }
    }

    #[test]
    fn surface_jump_is_normal_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..200 {
            let e = random_ellipsoid(&mut rng);
            let dir = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let t = 1.0 / e.implicit(dir).sqrt();
            let p = dir.map(|v| v * t);
            let outside = exterior_hessian(&e, p, 0.0).unwrap();
            let inside = interior_hessian(&e).unwrap();
            let s = e.semiaxes();
            let n = [0, 1, 2].map(|i| p[i] / (s[i] * s[i]));
            let nn: f64 = n.iter().map(|v| v * v).sum();
            let rho4pi = 3.0 / (s[0] * s[1] * s[2]);
            for i in 0..3 {
                for j in 0..3 {
                    let jump = outside.h[i][j] - inside.h[i][j];
                    let expected = rho4pi * n[i] * n[j] / nn;
                    assert!((jump - expected).abs() <= 1e-10 * rho4pi);
                }
            }
            // tangential moments see a continuous field
            let tangent = [n[1], -n[0], 0.0];
            let fo = outside.apply(tangent.map(c));
            let fi = inside.apply(tangent.map(c));
            let scale = inside.max_abs() * tangent.iter().map(|v| v.abs()).sum::<f64>();
            for k in 0..3 {
                assert!((fo[k] - fi[k]).norm() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn outside_limit_approaches_surface_value() {
        let e = Ellipsoid::new(1.0, 0.6, 0.105).unwrap();
        let p: [f64; 3] = [0.3, 0.2, 0.0];
        let t = 1.0 / e.implicit(p).sqrt();
        let surface = p.map(|v| v * t);
        let limit = exterior_hessian(&e, surface, 0.0).unwrap();
        let near = j_hessian(&e, surface.map(|v| v * (1.0 + 1e-9))).unwrap();
        assert!(near.distance(&limit) <= 1e-6 * limit.norm());
    }

    #[test]
    fn averaged_field_inside_and_sphere() {
        let e = Ellipsoid::new(1.0, 0.6, 0.105).unwrap();
        let s = screening_integrals(&e, 0.0).unwrap();
        let src = DipoleSource::real([0.1, 0.0, 0.0], [2.0, 0.0, 0.0]).unwrap();
        let f = averaged_field(&e, &src).unwrap();
        assert!((f[0].re + 1.5 * s.i_a * 2.0).abs() < 1e-13 * s.i_a);
        assert_eq!(f[1], c(0.0));
        assert_eq!(f[2], c(0.0));

        let sphere = Ellipsoid::new(1.0, 1.0, 1.0).unwrap();
        let src = DipoleSource::real([0.0, 0.0, 2.0], [0.0, 0.0, 1.0]).unwrap();
        let f = averaged_field(&sphere, &src).unwrap();
        assert!((f[2].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn far_field_vanishes() {
        let e = Ellipsoid::new(1.0, 0.6, 0.105).unwrap();
        let src = DipoleSource::real([0.0, 3e6, 4e6], [1.0, 1.0, 1.0]).unwrap();
        let f = averaged_field(&e, &src).unwrap();
        assert!(f.iter().all(|v| v.norm() < 1e-18));
    }

    #[test]
    fn averaged_field_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let e = Ellipsoid::new(0.5, 1.3, 0.9).unwrap();
        for _ in 0..100 {
            let p = random_outside_point(&mut rng, &e, 1.05);
            let m1 = [0; 3].map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let m2 = [0; 3].map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let k = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let sum = [0, 1, 2].map(|i| m1[i] + k * m2[i]);
            let f1 = averaged_field(&e, &DipoleSource::new(p, m1).unwrap()).unwrap();
            let f2 = averaged_field(&e, &DipoleSource::new(p, m2).unwrap()).unwrap();
            let fs = averaged_field(&e, &DipoleSource::new(p, sum).unwrap()).unwrap();
            for i in 0..3 {
                let expected = f1[i] + k * f2[i];
                assert!((fs[i] - expected).norm() <= 1e-12 * (f1[i].norm() + f2[i].norm() + 1e-300));
            }
        }
    }

    #[test]
    fn invalid_sources() {
        assert!(DipoleSource::real([0.0; 3], [0.0; 3]).is_err());
        assert!(DipoleSource::real([f64::NAN, 0.0, 0.0], [1.0, 0.0, 0.0]).is_err());
    }
}
