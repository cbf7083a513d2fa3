//! Helmholtz Green's functions in 2D and 3D, free and quasiperiodic.

use crate::error::{Error, Result};
use crate::lattice::{dot, lattice_points_within, norm, LatticeSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Series/large-argument switchover for [`hankel0`].
pub const HANKEL_SWITCH: f64 = 4.0;
const SERIES_TOL: f64 = 1e-15;
const SERIES_CAP: usize = 60;

/// ln γ̂ with γ̂ = ½ exp(γ - iπ/2).
pub fn log_gamma_hat() -> Complex64 {
    Complex64::new(0.5f64.ln() + EULER_GAMMA, -PI / 2.0)
}

/// γ̂ = ½ exp(γ - iπ/2).
pub fn gamma_hat() -> Complex64 {
    log_gamma_hat().exp()
}

/// H₀⁽¹⁾(s) by the logarithmic series.
pub fn hankel0_series(s: Complex64) -> Complex64 {
    let lg = s.ln() + log_gamma_hat();
    let q = -(s * s) / 4.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut harmonic = 0.0;
    let mut sum = lg;
    for m in 1..SERIES_CAP {
        let mf = m as f64;
        term = term * q / (mf * mf);
        harmonic += 1.0 / mf;
        let inc = term * (lg - harmonic);
        sum += inc;
        if inc.norm() < SERIES_TOL * sum.norm().max(1.0) {
            break;
        }
    }
    Complex64::new(0.0, 2.0 / PI) * sum
}

/// H₀⁽¹⁾(s) for large |s| from the Laplace-type integral whose expansion is
/// the large-argument asymptotic series.
pub fn hankel0_large(s: Complex64) -> Complex64 {
    let h = 0.2;
    let n = 33;
    let i = Complex64::new(0.0, 1.0);
    let c = i / (2.0 * s);
    let f = |t: f64| (-t * t).exp() * (1.0 + c * (t * t)).sqrt().inv();
    let mut acc = f(0.0);
    for k in 1..=n {
        acc += 2.0 * f(k as f64 * h);
    }
    let integral = acc * h / PI.sqrt();
    (2.0 / (PI * s)).sqrt() * (i * (s - PI / 4.0)).exp() * integral
}

/// Hankel function of the first kind, order zero.
pub fn hankel0(s: Complex64) -> Result<Complex64> {
    if s.norm() == 0.0 {
        return Err(Error::Domain("hankel0 is singular at 0".into()));
    }
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    Ok(if s.norm() <= HANKEL_SWITCH { hankel0_series(s) } else { hankel0_large(s) })
}

/// Outgoing free-space Green's function in dimension 2 or 3.
pub fn green_free(d: usize, k: Complex64, x: &[f64]) -> Result<Complex64> {
    let r = norm(x);
    if r == 0.0 {
        return Err(Error::Domain("Green's function is singular at the source".into()));
    }
    green_radial(d, k, r)
}

/// Free-space Green's function as a function of |x|.
pub fn green_radial(d: usize, k: Complex64, r: f64) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    match d {
        2 => Ok(-i / 4.0 * hankel0(k * r)?),
        3 => Ok(-(i * k * r).exp() / (4.0 * PI * r)),
        _ => Err(Error::Domain(format!("dimension {d} not supported"))),
    }
}

/// Truncation control for lattice sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumControl {
    pub radius: f64,
    pub tol: f64,
}

impl Default for SumControl {
    fn default() -> Self {
        Self { radius: 3.0, tol: 1e-10 }
    }
}

/// Value of a truncated lattice sum and the size of its last shell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiSum {
    pub value: Complex64,
    pub achieved_estimate: f64,
}

/// Lattice points |m| ≤ R with their Bloch phases e^{iκ·m}.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasedPoints {
    pub points: Vec<Vec<f64>>,
    pub phases: Vec<Complex64>,
    /// Shell index of each point (0 for the origin).
    pub shells: Vec<usize>,
}

impl PhasedPoints {
    pub fn new(spec: &LatticeSpec, kappa: &[f64], radius: f64) -> Result<Self> {
        if kappa.len() != spec.d {
            return Err(Error::InvalidInput("kappa dimension mismatch".into()));
        }
        let pts = lattice_points_within(spec, radius);
        let width = spec.generators.iter().map(|g| norm(g)).fold(f64::INFINITY, f64::min);
        let mut points = Vec::with_capacity(pts.len());
        let mut phases = Vec::with_capacity(pts.len());
        let mut shells = Vec::with_capacity(pts.len());
        for p in pts {
            phases.push(Complex64::new(0.0, dot(kappa, &p.vector)).exp());
            shells.push((p.norm() / width - 1e-9).ceil().max(0.0) as usize);
            points.push(p.vector);
        }
        Ok(Self { points, phases, shells })
    }

    /// Σ e^{iκ·m} over the truncated lattice.
    pub fn phase_sum(&self) -> Complex64 {
        self.phases.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Σ_{|m| ≤ R} G^k(x - m) e^{iκ·m}, summed shell by shell.
pub fn green_quasiperiodic(
    spec: &LatticeSpec,
    kappa: &[f64],
    k: Complex64,
    x: &[f64],
    ctl: &SumControl,
) -> Result<QuasiSum> {
    if !(ctl.radius > 0.0) {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    if x.len() != spec.d {
        return Err(Error::InvalidInput("x dimension mismatch".into()));
    }
    let pp = PhasedPoints::new(spec, kappa, ctl.radius)?;
    let last = pp.shells.iter().copied().max().unwrap_or(0);
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = Complex64::new(0.0, 0.0);
    let mut y = vec![0.0; x.len()];
    for ((m, ph), &sh) in pp.points.iter().zip(&pp.phases).zip(&pp.shells) {
        for ((yk, xk), mk) in y.iter_mut().zip(x).zip(m) {
            *yk = xk - mk;
        }
        let r = norm(&y);
        if r < 1e-14 {
            return Err(Error::Domain("evaluation point lies on the lattice".into()));
        }
        let term = green_radial(spec.d, k, r)? * ph;
        value += term;
        if sh == last {
            tail += term;
        }
    }
    let achieved_estimate = if last == 0 { 0.0 } else { tail.norm() };
    if achieved_estimate > ctl.tol {
        return Err(Error::SlowConvergence { value, estimate: achieved_estimate, tol: ctl.tol });
    }
    Ok(QuasiSum { value, achieved_estimate })
}

/// Like [`green_quasiperiodic`] but always returns the value with its estimate.
pub fn green_quasiperiodic_lenient(
    spec: &LatticeSpec,
    kappa: &[f64],
    k: Complex64,
    x: &[f64],
    radius: f64,
) -> Result<QuasiSum> {
    let ctl = SumControl { radius, tol: f64::INFINITY };
    green_quasiperiodic(spec, kappa, k, x, &ctl)
}
