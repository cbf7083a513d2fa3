//! Complex Bloch dispersion diagrams, band gaps and subwavelength
//! resonances for photonic crystals with Drude–Lorentz particles.
//!
//! The 1D stack (`permittivity`, `dispersion1d`, `field1d`, `bandgap`) is
//! generic over [`Real`]; the 2D/3D operator stack works in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` also rejects NaN

pub mod bandgap;
pub mod dispersion1d;
pub mod error;
pub mod field1d;
pub mod greens;
pub mod lattice;
pub mod permittivity;
pub mod resonance_md;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::{Complex, Complex64};

/// Double-precision material parameters.
pub type Material = permittivity::MaterialParams<f64>;
/// Single-precision material parameters.
pub type MaterialF32 = permittivity::MaterialParams<f32>;
/// Double-precision Bloch point.
pub type Bloch = dispersion1d::BlochPoint<f64>;
/// Single-precision Bloch point.
pub type BlochF32 = dispersion1d::BlochPoint<f32>;
/// Double-precision contrast.
pub type Contrast = permittivity::ContrastValue<f64>;
/// Double-precision band gap.
pub type Gap = bandgap::BandGap<f64>;
/// Double-precision mode coefficients.
pub type Mode = field1d::ModeCoefficients<f64>;
