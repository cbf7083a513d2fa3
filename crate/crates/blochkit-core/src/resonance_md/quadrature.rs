//! Tensor quadrature on disks and balls, plus the weakly singular
//! self-potentials needed by the Nyström blocks.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Radial × angular node counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadrature {
    pub radial: usize,
    pub angular: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { radial: 8, angular: 16 }
    }
}

impl Quadrature {
    pub fn refined(self, by: usize) -> Self {
        Self { radial: self.radial + by, angular: self.angular + by }
    }
}

/// Nodes and weights on one particle.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleNodes {
    pub center: Vec<f64>,
    pub radius: f64,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl ParticleNodes {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ, the discrete measure of the particle.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Polar tensor rule on a disk: radial Gauss × uniform angle.
pub fn disk_nodes(center: &[f64], radius: f64, q: Quadrature) -> ParticleNodes {
    let (x, w) = gauss_legendre(q.radial);
    let dt = 2.0 * PI / q.angular as f64;
    let mut nodes = Vec::with_capacity(q.radial * q.angular);
    let mut weights = Vec::with_capacity(q.radial * q.angular);
    for (xi, wi) in x.iter().zip(&w) {
        let r = 0.5 * radius * (1.0 + xi);
        let wr = 0.5 * radius * wi * r * dt;
        for k in 0..q.angular {
            let t = dt * (k as f64 + 0.5);
            nodes.push(vec![center[0] + r * t.cos(), center[1] + r * t.sin()]);
            weights.push(wr);
        }
    }
    ParticleNodes { center: center.to_vec(), radius, nodes, weights }
}

/// Spherical tensor rule on a ball: radial Gauss × polar Gauss × uniform azimuth.
pub fn ball_nodes(center: &[f64], radius: f64, q: Quadrature) -> ParticleNodes {
    let (x, w) = gauss_legendre(q.radial);
    let (mu, wmu) = gauss_legendre((q.angular / 2).max(1));
    let dp = 2.0 * PI / q.angular as f64;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (xi, wi) in x.iter().zip(&w) {
        let r = 0.5 * radius * (1.0 + xi);
        let wr = 0.5 * radius * wi * r * r;
        for (m, wm) in mu.iter().zip(&wmu) {
            let s = (1.0 - m * m).sqrt();
            for k in 0..q.angular {
                let ph = dp * (k as f64 + 0.5);
                nodes.push(vec![
                    center[0] + r * s * ph.cos(),
                    center[1] + r * s * ph.sin(),
                    center[2] + r * m,
                ]);
                weights.push(wr * wm * dp);
            }
        }
    }
    ParticleNodes { center: center.to_vec(), radius, nodes, weights }
}

/// Nodes for a disk (d = 2) or ball (d = 3).
pub fn particle_nodes(d: usize, center: &[f64], radius: f64, q: Quadrature) -> Result<ParticleNodes> {
    if q.radial == 0 || q.angular < 2 {
        return Err(Error::InvalidInput("quadrature order too small".into()));
    }
    match d {
        2 => Ok(disk_nodes(center, radius, q)),
        3 => Ok(ball_nodes(center, radius, q)),
        _ => Err(Error::Domain(format!("dimension {d} not supported"))),
    }
}

const LOCAL_ANGULAR: usize = 256;
const LOCAL_POLAR: usize = 96;

// distance from the interior point u (relative to the center) to the sphere
// of radius R along the unit direction at cosine mu with u
fn chord(un: f64, mu: f64, radius: f64) -> f64 {
    let b = un * mu;
    -b + (b * b + radius * radius - un * un).max(0.0).sqrt()
}

/// ∫_D log|x - y| dy for a disk, in local polar coordinates about x with the
/// radial integral done exactly.
pub fn log_potential_disk(x: &[f64], center: &[f64], radius: f64) -> f64 {
    let u = [x[0] - center[0], x[1] - center[1]];
    let un = (u[0] * u[0] + u[1] * u[1]).sqrt();
    let phi_u = u[1].atan2(u[0]);
    let dt = 2.0 * PI / LOCAL_ANGULAR as f64;
    let mut acc = 0.0;
    for k in 0..LOCAL_ANGULAR {
        let t = dt * k as f64;
        let p = chord(un, (t - phi_u).cos(), radius);
        if p > 0.0 {
            acc += 0.5 * p * p * (p.ln() - 0.5);
        }
    }
    acc * dt
}

/// ∫_B |x - y|⁻¹ dy for a ball, in local spherical coordinates about x.
pub fn newton_potential_ball(x: &[f64], center: &[f64], radius: f64) -> f64 {
    let un = (0..3).map(|k| (x[k] - center[k]).powi(2)).sum::<f64>().sqrt();
    let (mu, w) = gauss_legendre(LOCAL_POLAR);
    let mut acc = 0.0;
    for (m, wm) in mu.iter().zip(&w) {
        let p = chord(un, *m, radius);
        acc += wm * 0.5 * p * p;
    }
    2.0 * PI * acc
}
