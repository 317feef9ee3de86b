//! The guide in `book/src`, compiled so its snippets run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/screening-integrals.md")]
pub mod screening_integrals {}

#[doc = include_str!("../../../book/src/confocal-coordinate.md")]
pub mod confocal_coordinate {}

#[doc = include_str!("../../../book/src/polarizability.md")]
pub mod polarizability {}

#[doc = include_str!("../../../book/src/averaged-field.md")]
pub mod averaged_field {}

#[doc = include_str!("../../../book/src/decay-rates.md")]
pub mod decay_rates {}

#[doc = include_str!("../../../book/src/resonance-design.md")]
pub mod resonance_design {}

#[doc = include_str!("../../../book/src/maps-and-cli.md")]
pub mod maps_and_cli {}

#[doc = include_str!("../../../book/src/validation.md")]
pub mod validation {}
