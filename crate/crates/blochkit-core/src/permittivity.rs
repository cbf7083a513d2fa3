//! Drude–Lorentz permittivity, its poles and the contrast ρ(ω).

use crate::error::{Error, Result};
use crate::scalar::{principal_sqrt, Real};
use num_complex::{Complex, Complex64};

/// Default cutoff on `|1 - βω² - iγω|` below which evaluation is refused.
pub const POLE_CUTOFF: f64 = 1e-14;

/// Parameters of ε(ω) = ε₀ + α / (1 - βω² - iγω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams<T: Real> {
    pub eps0: T,
    pub mu0: T,
    pub alpha: Complex<T>,
    pub beta: T,
    pub gamma: T,
}

impl<T: Real> MaterialParams<T> {
    /// Checked constructor.
    pub fn new(eps0: T, mu0: T, alpha: Complex<T>, beta: T, gamma: T) -> Result<Self> {
        let p = Self { eps0, mu0, alpha, beta, gamma };
        p.validate()?;
        Ok(p)
    }

    /// Unit background with real α.
    pub fn unit(alpha: T, beta: T, gamma: T) -> Self {
        Self {
            eps0: T::one(),
            mu0: T::one(),
            alpha: Complex::new(alpha, T::zero()),
            beta,
            gamma,
        }
    }

    /// Unit background with complex α.
    pub fn unit_complex(alpha: Complex<T>, beta: T, gamma: T) -> Self {
        Self { eps0: T::one(), mu0: T::one(), alpha, beta, gamma }
    }

    /// α = β = 1, γ = 0.5 on a unit background.
    pub fn halide() -> Self {
        Self::unit(T::one(), T::one(), T::lit(0.5))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str| Err(Error::InvalidInput(format!("{name} out of range")));
        if !(self.eps0 > T::zero()) {
            return bad("eps0");
        }
        if !(self.mu0 > T::zero()) {
            return bad("mu0");
        }
        if !(self.beta >= T::zero()) {
            return bad("beta");
        }
        if !(self.gamma >= T::zero()) {
            return bad("gamma");
        }
        if !(self.alpha.re.is_finite() && self.alpha.im.is_finite()) {
            return bad("alpha");
        }
        Ok(())
    }

    pub fn alpha_is_real(&self) -> bool {
        self.alpha.im == T::zero()
    }

    /// True when ε is real for every real ω (real α, no damping).
    pub fn is_lossless(&self) -> bool {
        self.alpha_is_real() && self.gamma == T::zero()
    }

    /// `1 - βω² - iγω` at a complex frequency.
    pub fn denominator(&self, omega: Complex<T>) -> Complex<T> {
        let i = Complex::new(T::zero(), T::one());
        Complex::new(T::one(), T::zero()) - omega * omega * self.beta - i * omega * self.gamma
    }
}

/// Both roots of `1 - βω² - iγω = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPair<T: Real> {
    pub omega_plus: Complex<T>,
    pub omega_minus: Complex<T>,
}

/// ρ(ω) = √(ε(ω)/ε₀) together with its real/imaginary split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastValue<T: Real> {
    pub rho: Complex<T>,
    pub rho1: T,
    pub rho2: T,
    /// `Some` only when α is real.
    pub a: Option<T>,
    pub b: Option<T>,
}

fn to_c64<T: Real>(z: Complex<T>) -> Complex64 {
    Complex64::new(z.re.as_f64(), z.im.as_f64())
}

/// ε at a complex frequency with an explicit pole cutoff.
pub fn eval_permittivity_complex_with_cutoff<T: Real>(
    p: &MaterialParams<T>,
    omega: Complex<T>,
    cutoff: T,
) -> Result<Complex<T>> {
    let den = p.denominator(omega);
    if p.alpha == Complex::new(T::zero(), T::zero()) {
        return Ok(Complex::new(p.eps0, T::zero()));
    }
    if den.norm() < cutoff {
        return Err(Error::SingularFrequency {
            omega: to_c64(omega),
            denominator: den.norm().as_f64(),
        });
    }
    Ok(Complex::new(p.eps0, T::zero()) + p.alpha / den)
}

/// ε at a complex frequency (default cutoff).
pub fn eval_permittivity_complex<T: Real>(p: &MaterialParams<T>, omega: Complex<T>) -> Result<Complex<T>> {
    eval_permittivity_complex_with_cutoff(p, omega, T::lit(POLE_CUTOFF))
}

/// ε(ω) for real ω.
pub fn eval_permittivity<T: Real>(p: &MaterialParams<T>, omega: T) -> Result<Complex<T>> {
    eval_permittivity_complex(p, Complex::new(omega, T::zero()))
}

/// ω*± = (1/2β)(-iγ ± √(4β - γ²)).
pub fn singular_frequencies<T: Real>(p: &MaterialParams<T>) -> Result<SingularPair<T>> {
    if p.beta == T::zero() {
        return Err(Error::NoFiniteSingularity);
    }
    let two = T::lit(2.0);
    let disc = Complex::new(T::lit(4.0) * p.beta - p.gamma * p.gamma, T::zero());
    let root = principal_sqrt(disc);
    let shift = Complex::new(T::zero(), -p.gamma);
    let scale = two * p.beta;
    Ok(SingularPair {
        omega_plus: (shift + root) / scale,
        omega_minus: (shift - root) / scale,
    })
}

/// ρ(ω), principal branch.
pub fn contrast<T: Real>(p: &MaterialParams<T>, omega: T) -> Result<ContrastValue<T>> {
    let eps = eval_permittivity(p, omega)?;
    let rho = principal_sqrt(eps / p.eps0);
    let (a, b) = if p.alpha_is_real() {
        let s = T::one() - p.beta * omega * omega;
        let g = p.gamma * omega;
        let norm = s * s + g * g;
        let k = p.alpha.re / p.eps0;
        (Some(T::one() + k * s / norm), Some(k * g / norm))
    } else {
        (None, None)
    };
    Ok(ContrastValue { rho, rho1: rho.re, rho2: rho.im, a, b })
}

/// ρ at a complex frequency (used by the resonance solver).
pub fn contrast_complex<T: Real>(p: &MaterialParams<T>, omega: Complex<T>) -> Result<Complex<T>> {
    Ok(principal_sqrt(eval_permittivity_complex(p, omega)? / p.eps0))
}

/// (σ₀, σ_c) = (ω√(ε₀μ₀), ρσ₀).
pub fn wavenumbers<T: Real>(p: &MaterialParams<T>, omega: T) -> Result<(T, Complex<T>)> {
    if omega < T::zero() {
        return Err(Error::Domain("omega must be non-negative".into()));
    }
    let c = contrast(p, omega)?;
    let sigma0 = omega * (p.eps0 * p.mu0).sqrt();
    Ok((sigma0, c.rho * sigma0))
}
