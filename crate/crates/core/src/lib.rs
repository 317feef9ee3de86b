//! Quasistatic radiative decay engineering with triaxial nanoellipsoids.
//!
//! A point dipole `d₀` near (or inside) an ellipsoid with permittivity `ε`
//! in vacuum induces a moment `δd = α̂·⟨E₀⟩`, where `α̂` is the diagonal
//! polarizability tensor and `⟨E₀⟩` the dipole's field averaged over the
//! particle volume. The radiative rate relative to free space is
//! `|d₀ + δd|²/|d₀|²`.
//!
//! ```
//! use nanoellipsoid::{radiative_rate, DipoleSource, Ellipsoid};
//! use num_complex::Complex64;
//!
//! let silver = Complex64::new(-15.37, 0.231);
//! let particle = Ellipsoid::from_aspects(0.105, 0.6)?;
//! let source = DipoleSource::real([0.0, 0.0, 1.2], [1.0, 0.0, 0.0])?;
//! let rate = radiative_rate(&particle, silver, &source)?;
//! assert!(rate.ratio > 0.0);
//! # Ok::<(), nanoellipsoid::Error>(())
//! ```
//!
//! Modules, bottom up: [`elliptic`] (Carlson integrals), [`geometry`]
//! (ellipsoid and confocal coordinate), [`material`] (tabulated ε(λ)),
//! [`polarizability`], [`source_field`] (averaged kernel and its Hessian),
//! [`decay`], [`resonance_design`] and [`map`]. [`oracles`] holds the
//! brute-force references used by the test suites.

pub mod decay;
pub mod elliptic;
mod error;
pub mod geometry;
pub mod map;
pub mod material;
pub mod oracles;
pub mod polarizability;
pub mod resonance_design;
pub mod source_field;

pub use decay::{induced_dipole, on_axis_rate_x, on_axis_rate_z, radiative_rate, DecayResult};
pub use elliptic::{carlson_rd, carlson_rf, screening_integrals, ScreeningIntegrals};
pub use error::{Axis, Error, Result};
pub use geometry::{classify_point, Ellipsoid, PointClass, Region};
pub use map::{compute_map, write_csv, write_pgm, MapSpec, RateMap};
pub use material::{parse_material_csv, MaterialTable};
pub use polarizability::{
    depolarization_factors, polarizability_tensor, principal_permittivities, DepolarizationFactors,
    PolarizabilityTensor,
};
pub use resonance_design::{design_ellipsoid, resonance_wavelengths, DesignSolution, ResonanceReport};
pub use source_field::{averaged_field, j_hessian, j_value, DipoleSource, FieldHessian};
