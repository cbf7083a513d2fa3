//! Subwavelength resonances of periodic arrays of small Drude–Lorentz
//! particles: discretized quasiperiodic operators, the 𝒦 matrix and a
//! complex-frequency root search.

pub mod operators;
pub mod quadrature;
pub mod roots;

pub use operators::{
    assemble_blocks, cleared_determinant, leading_eigenpair, lippmann_schwinger_residual, pairing, resonance_matrix,
    resonant_mode, OperatorBlocks, OperatorModel, ParticleGeometry, Projection, ResonanceMatrix, ResonanceProblem,
};
pub use quadrature::{ParticleNodes, Quadrature};
pub use roots::{find_resonances, newton, Resonance, ResonanceScan, SearchRect};

use crate::error::{Error, Result};
use crate::permittivity::{eval_permittivity_complex, MaterialParams};
use num_complex::Complex64;

/// Cutoff on the pole-pencil denominator.
pub const PENCIL_CUTOFF: f64 = 1e-14;

/// The remainder r ∈ {1, …, N} with M = τN + r.
pub fn mod_floor(m: u64, n: u64) -> u64 {
    assert!(m >= 1 && n >= 1, "mod_floor needs positive arguments");
    (m - 1) % n + 1
}

/// ξ(ω) = μ₀(ε(ω) - ε₀) at a complex frequency.
pub fn xi_contrast(p: &MaterialParams<f64>, omega: Complex64) -> Result<Complex64> {
    Ok((eval_permittivity_complex(p, omega)? - p.eps0) * p.mu0)
}

/// 𝒜 = δ²ω²ξ / (1 - δ²ω²ξν).
pub fn script_a(p: &MaterialParams<f64>, omega: Complex64, delta: f64, nu: Complex64) -> Result<Complex64> {
    let c = omega * omega * delta * delta * xi_contrast(p, omega)?;
    let den = 1.0 - c * nu;
    if den.norm() < PENCIL_CUTOFF {
        return Err(Error::PolePencilSingular { magnitude: den.norm() });
    }
    Ok(c / den)
}

/// k₀ = ω√(μ₀ε₀).
pub fn background_wavenumber(p: &MaterialParams<f64>, omega: Complex64) -> Complex64 {
    omega * (p.mu0 * p.eps0).sqrt()
}
