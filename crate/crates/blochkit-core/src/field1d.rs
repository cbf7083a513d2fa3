//! Piecewise Bloch mode on `[-1, 1]` and the 2×2 quasiperiodicity system.

use crate::error::{Error, Result};
use crate::permittivity::{contrast, MaterialParams};
use crate::scalar::Real;
use num_complex::Complex;

/// Normalised coefficients (A, B) with the least singular value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients<T: Real> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub system_residual: T,
}

struct Setup<T: Real> {
    rho: Complex<T>,
    s0: T,
    sc: Complex<T>,
}

fn setup<T: Real>(p: &MaterialParams<T>, omega: T) -> Result<Setup<T>> {
    let rho = contrast(p, omega)?.rho;
    let s0 = omega * (p.eps0 * p.mu0).sqrt();
    Ok(Setup { rho, s0, sc: rho * s0 })
}

/// Rows enforce u(1) = e^{2iκ}u(-1) and u'(1) = e^{2iκ}u'(-1).
pub fn system_matrix<T: Real>(p: &MaterialParams<T>, omega: T, kappa: Complex<T>) -> Result<[[Complex<T>; 2]; 2]> {
    let st = setup(p, omega)?;
    let i = Complex::new(T::zero(), T::one());
    let e = (i * kappa * T::lit(2.0)).exp();
    let (rho, s0, sc) = (st.rho, st.s0, st.sc);
    let (sin0, cos0) = (s0.sin(), s0.cos());
    let (sinc, cosc) = (sc.sin(), sc.cos());
    Ok([
        [sinc + e * rho * sin0, cosc - e * cos0],
        [sc * cosc - e * rho * s0 * cos0, -(sc * sinc + e * sin0 * s0)],
    ])
}

/// Least singular value and its right-singular vector of a 2×2 matrix.
pub fn least_singular<T: Real>(m: &[[Complex<T>; 2]; 2]) -> (T, Complex<T>, Complex<T>) {
    let zero = T::zero();
    // H = MᴴM
    let h11 = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let h22 = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let h12 = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let half = T::lit(0.5);
    let mean = half * (h11 + h22);
    let gap = (half * (h11 - h22)).hypot(h12.norm());
    let lmax = mean + gap;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let smax = lmax.sqrt();
    let smin = if smax > zero { det.norm() / smax } else { zero };
    let lmin = smin * smin;
    // (H - λI)v = 0 with the better conditioned row
    let r1 = (h12, Complex::new(lmin - h11, zero));
    let r2 = (Complex::new(lmin - h22, zero), h12.conj());
    let n1 = r1.0.norm_sqr() + r1.1.norm_sqr();
    let n2 = r2.0.norm_sqr() + r2.1.norm_sqr();
    let (va, vb) = if n1 >= n2 { r1 } else { r2 };
    let n = (va.norm_sqr() + vb.norm_sqr()).sqrt();
    if n > zero {
        (smin, va / n, vb / n)
    } else {
        (smin, Complex::new(T::one(), zero), Complex::new(zero, zero))
    }
}

/// Assemble the system at (ω, κ) and extract (A, B).
pub fn mode_coefficients<T: Real>(p: &MaterialParams<T>, omega: T, kappa: Complex<T>) -> Result<ModeCoefficients<T>> {
    let m = system_matrix(p, omega, kappa)?;
    let (s, a, b) = least_singular(&m);
    Ok(ModeCoefficients { a, b, system_residual: s })
}

/// u(x) on `[-1, 1]`.
pub fn evaluate_field<T: Real>(
    p: &MaterialParams<T>,
    omega: T,
    _kappa: Complex<T>,
    coeffs: &ModeCoefficients<T>,
    x: T,
) -> Result<Complex<T>> {
    let st = setup(p, omega)?;
    if !(x >= -T::one() && x <= T::one()) {
        return Err(Error::Domain(format!("x = {x} outside [-1, 1]")));
    }
    if x < T::zero() {
        let t = st.s0 * x;
        Ok(coeffs.a * st.rho * t.sin() + coeffs.b * t.cos())
    } else {
        let t = st.sc * x;
        Ok(coeffs.a * t.sin() + coeffs.b * t.cos())
    }
}

/// u'(x) on `[-1, 1]`, one-sided at 0 (from the right).
pub fn evaluate_derivative<T: Real>(
    p: &MaterialParams<T>,
    omega: T,
    coeffs: &ModeCoefficients<T>,
    x: T,
) -> Result<Complex<T>> {
    let st = setup(p, omega)?;
    if !(x >= -T::one() && x <= T::one()) {
        return Err(Error::Domain(format!("x = {x} outside [-1, 1]")));
    }
    if x < T::zero() {
        let t = st.s0 * x;
        Ok((coeffs.a * st.rho * t.cos() - coeffs.b * t.sin()) * st.s0)
    } else {
        let t = st.sc * x;
        Ok((coeffs.a * t.cos() - coeffs.b * t.sin()) * st.sc)
    }
}

/// Distance of (ω, κ) from the dispersion variety.
pub fn dispersion_residual<T: Real>(p: &MaterialParams<T>, omega: T, kappa: Complex<T>) -> Result<T> {
    Ok(mode_coefficients(p, omega, kappa)?.system_residual)
}
