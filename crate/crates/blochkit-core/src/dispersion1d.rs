//! 1D dispersion relation cos(2κ) = f(ω) for the period-2 cell
//! `[-1, 0)` background + `[0, 1]` particle.

use crate::error::{Error, Result};
use crate::permittivity::{contrast, MaterialParams};
use crate::scalar::{fold_symmetric, principal_sqrt, Real};
use num_complex::Complex;

/// One frequency with its pair of Bloch parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint<T: Real> {
    pub omega: T,
    pub kappa_plus: Complex<T>,
    pub kappa_minus: Complex<T>,
    pub f_value: Complex<T>,
    pub l1: T,
    pub l2: T,
    pub residual: T,
}

/// Fold a real Bloch parameter into `[-π/2, π/2)`.
pub fn fold_kappa<T: Real>(k: T) -> T {
    fold_symmetric(k, T::PI())
}

fn fold_complex<T: Real>(k: Complex<T>) -> Complex<T> {
    Complex::new(fold_kappa(k.re), k.im)
}

/// f(ω) = cos σ₀ cos ρσ₀ - ((1+ρ²)/2ρ) sin σ₀ sin ρσ₀.
pub fn rhs_f<T: Real>(p: &MaterialParams<T>, omega: T) -> Result<Complex<T>> {
    let c = contrast(p, omega)?;
    let rho = c.rho;
    if rho.norm() < T::lit(1e-14) {
        return Err(Error::DegenerateContrast { magnitude: rho.norm().as_f64() });
    }
    let s0 = omega * (p.eps0 * p.mu0).sqrt();
    let sc = rho * s0;
    let one = Complex::new(T::one(), T::zero());
    let two = T::lit(2.0);
    Ok(sc.cos() * s0.cos() - (one + rho * rho) / (rho * two) * sc.sin() * s0.sin())
}

/// (𝓛₁, 𝓛₂) from the real and imaginary parts of ρ.
pub fn l1_l2<T: Real>(p: &MaterialParams<T>, omega: T) -> Result<(T, T)> {
    let c = contrast(p, omega)?;
    let (r1, r2) = (c.rho1, c.rho2);
    let m2 = r1 * r1 + r2 * r2;
    if m2 < T::lit(1e-28) {
        return Err(Error::DegenerateContrast { magnitude: m2.sqrt().as_f64() });
    }
    let s = omega * (p.eps0 * p.mu0).sqrt();
    let one = T::one();
    let two = T::lit(2.0);
    let (c0, s0) = (s.cos(), s.sin());
    let (c1, s1) = ((s * r1).cos(), (s * r1).sin());
    let (ch, sh) = ((s * r2).cosh(), (s * r2).sinh());
    let p1 = r1 * (one + r1 * r1 + r2 * r2);
    let p2 = r2 * (r2 * r2 - one + r1 * r1);
    let l1 = c0 * c1 * ch - s0 / (two * m2) * (p1 * s1 * ch - p2 * c1 * sh);
    let l2 = c0 * s1 * sh + s0 / (two * m2) * (p2 * s1 * ch + p1 * c1 * sh);
    Ok((l1, l2))
}

/// Roots of z² - 2fz + 1 = 0, larger modulus first; their product is 1.
pub fn quadratic_roots<T: Real>(f: Complex<T>) -> (Complex<T>, Complex<T>) {
    let one = Complex::new(T::one(), T::zero());
    let s = principal_sqrt((f - one) * (f + one));
    let (a, b) = (f + s, f - s);
    let big = if a.norm() >= b.norm() { a } else { b };
    (big, one / big)
}

/// Solve cos(2κ) = f(ω) by the complex logarithm.
pub fn solve_kappa<T: Real>(p: &MaterialParams<T>, omega: T) -> Result<BlochPoint<T>> {
    let f = rhs_f(p, omega)?;
    let (l1, l2) = l1_l2(p, omega)?;
    let (z_big, z_small) = quadratic_roots(f);
    let minus_half_i = Complex::new(T::zero(), -T::lit(0.5));
    // |z| <= 1 gives Im κ >= 0
    let k_small = fold_complex(minus_half_i * z_small.ln());
    let k_big = fold_complex(minus_half_i * z_big.ln());
    let (kappa_plus, kappa_minus) = order_pair(k_small, k_big);
    let res = |k: Complex<T>| ((k * T::lit(2.0)).cos() - f).norm();
    let residual = res(kappa_plus).max(res(kappa_minus));
    Ok(BlochPoint { omega, kappa_plus, kappa_minus, f_value: f, l1, l2, residual })
}

// Prefer Im κ >= 0; on a propagating band prefer Re κ >= 0.
fn order_pair<T: Real>(a: Complex<T>, b: Complex<T>) -> (Complex<T>, Complex<T>) {
    let tie = T::lit(1e-14);
    if (a.im - b.im).abs() > tie {
        if a.im > b.im {
            (a, b)
        } else {
            (b, a)
        }
    } else if a.re >= b.re {
        (a, b)
    } else {
        (b, a)
    }
}

/// Closed-form (κ₁, κ₂) from 𝓛₁ and 𝓛₂; `sign` picks the branch with
/// `sign · κ₂ ≥ 0`.
pub fn kappa_re_im<T: Real>(p: &MaterialParams<T>, omega: T, sign: i32) -> Result<(T, T)> {
    let (l1, l2) = l1_l2(p, omega)?;
    Ok(kappa_from_l(l1, l2, sign))
}

/// Same as [`kappa_re_im`] starting from precomputed 𝓛 values.
pub fn kappa_from_l<T: Real>(l1: T, l2: T, sign: i32) -> (T, T) {
    let one = T::one();
    let half = T::lit(0.5);
    let sg = if sign >= 0 { one } else { -one };
    let q = l1 * l1 + l2 * l2 - one;
    let root = (q * q + T::lit(4.0) * l2 * l2).sqrt();
    // ½[q + root], rearranged when q < 0 to avoid cancellation
    let x = if q >= T::zero() {
        half * (q + root)
    } else if root - q > T::zero() {
        T::lit(2.0) * l2 * l2 / (root - q)
    } else {
        T::zero()
    };
    let k2 = sg * half * x.sqrt().asinh();
    let tol = T::lit(1e-12);
    let mut c = l1 / (T::lit(2.0) * k2).cosh();
    if c > one && c <= one + tol {
        c = one;
    } else if c < -one && c >= -one - tol {
        c = -one;
    }
    let c = c.max(-one).min(one);
    let mut k1 = half * c.acos();
    // sin(2κ₁) sinh(2κ₂) must reproduce 𝓛₂
    let s1 = if l2 < T::zero() { -sg } else { sg };
    k1 = k1 * s1;
    (fold_kappa(k1), k2)
}

/// |Im κ| along a grid, skipping points that fail with a report entry.
#[derive(Debug, Clone, PartialEq)]
pub struct TailReport<T: Real> {
    pub points: Vec<(T, T)>,
    pub skipped: Vec<(T, Error)>,
}

pub fn tail_im_report<T: Real>(p: &MaterialParams<T>, omega_grid: &[T]) -> Result<TailReport<T>> {
    if omega_grid.is_empty() {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    let mut points = Vec::with_capacity(omega_grid.len());
    let mut skipped = Vec::new();
    for &w in omega_grid {
        match solve_kappa(p, w) {
            Ok(b) => points.push((w, b.kappa_plus.im.abs())),
            Err(e) => skipped.push((w, e)),
        }
    }
    Ok(TailReport { points, skipped })
}
