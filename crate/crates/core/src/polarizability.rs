//! Depolarization factors, principal (resonance) permittivities and the
//! quasistatic polarizability tensor of an ellipsoid in vacuum.
//!
//! With `L_i = (abc/2)·I_i(0)` and `ε_ii = 1 − 1/L_i`,
//!
//! ```text
//! α_ii = (V/4π)·(1 − ε_ii)·(ε − 1)/(ε − ε_ii) = (abc/3)·(ε − 1)/(1 + L_i(ε − 1))
//! ```
//!
//! in volume units, so that a sphere of radius r gives r³(ε−1)/(ε+2).

use num_complex::Complex64;

use crate::elliptic::screening_integrals;
use crate::error::{Axis, Error, Result};
use crate::geometry::Ellipsoid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarizationFactors {
    pub l_x: f64,
    pub l_y: f64,
    pub l_z: f64,
}

impl DepolarizationFactors {
    pub fn as_array(&self) -> [f64; 3] {
        [self.l_x, self.l_y, self.l_z]
    }

    pub fn get(&self, axis: Axis) -> f64 {
        self.as_array()[axis.index()]
    }

    pub fn sum(&self) -> f64 {
        self.l_x + self.l_y + self.l_z
    }
}

/// Diagonal polarizability tensor in the principal-axes frame (nm³).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizabilityTensor {
    pub alpha_xx: Complex64,
    pub alpha_yy: Complex64,
    pub alpha_zz: Complex64,
}

impl PolarizabilityTensor {
    pub fn diagonal(&self) -> [Complex64; 3] {
        [self.alpha_xx, self.alpha_yy, self.alpha_zz]
    }

    pub fn apply(&self, field: [Complex64; 3]) -> [Complex64; 3] {
        let d = self.diagonal();
        [d[0] * field[0], d[1] * field[1], d[2] * field[2]]
    }
}

pub fn depolarization_factors(ellipsoid: &Ellipsoid) -> DepolarizationFactors {
    let s = screening_integrals(ellipsoid, 0.0).expect("zeta = 0 is always in range");
    let half_abc = 0.5 * ellipsoid.a() * ellipsoid.b() * ellipsoid.c();
    DepolarizationFactors { l_x: half_abc * s.i_a, l_y: half_abc * s.i_b, l_z: half_abc * s.i_c }
}

/// `ε_ii = 1 − 1/L_i` for each axis; all negative.
pub fn principal_permittivities(ellipsoid: &Ellipsoid) -> [f64; 3] {
    depolarization_factors(ellipsoid).as_array().map(|l| 1.0 - 1.0 / l)
}

pub fn polarizability_tensor(ellipsoid: &Ellipsoid, eps: Complex64) -> Result<PolarizabilityTensor> {
    let factors = depolarization_factors(ellipsoid);
    let abc_3 = ellipsoid.a() * ellipsoid.b() * ellipsoid.c() / 3.0;
    let contrast = eps - 1.0;

    let mut alpha = [Complex64::new(0.0, 0.0); 3];
    for axis in Axis::ALL {
        let l = factors.get(axis);
        let denom = 1.0 + contrast * l;
        if eps.im == 0.0 && (eps.re == 1.0 - 1.0 / l || denom.re == 0.0) {
            return Err(Error::ResonanceSingularity { axis, eps: eps.re });
        }
        alpha[axis.index()] = abc_3 * contrast / denom;
    }
    Ok(PolarizabilityTensor { alpha_xx: alpha[0], alpha_yy: alpha[1], alpha_zz: alpha[2] })
}
