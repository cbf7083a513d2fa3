//! Lattices Λ ⊂ ℝ^d of dimension d_l ≤ d, their duals and Brillouin folding.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub d: usize,
    pub d_l: usize,
    pub generators: Vec<Vec<f64>>,
    pub duals: Vec<Vec<f64>>,
    pub cell_volume: f64,
}

/// A lattice vector with its integer coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint {
    pub coeffs: Vec<i64>,
    pub vector: Vec<f64>,
}

impl LatticePoint {
    pub fn norm(&self) -> f64 {
        norm(&self.vector)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn gram(gens: &[Vec<f64>]) -> DMatrix<f64> {
    let n = gens.len();
    DMatrix::from_fn(n, n, |i, j| dot(&gens[i], &gens[j]))
}

/// Duals αᵢ in span{lⱼ} with αᵢ·lⱼ = 2πδᵢⱼ.
pub fn dual_lattice(generators: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = generators.len();
    if n == 0 {
        return Err(Error::DegenerateLattice);
    }
    let d = generators[0].len();
    if n > d || generators.iter().any(|g| g.len() != d) {
        return Err(Error::DegenerateLattice);
    }
    let g = gram(generators);
    let scale = g.diagonal().iter().cloned().fold(0.0, f64::max);
    if scale == 0.0 || g.determinant().abs() < 1e-12 * scale.powi(n as i32) {
        return Err(Error::DegenerateLattice);
    }
    let inv = g.try_inverse().ok_or(Error::DegenerateLattice)?;
    Ok((0..n)
        .map(|i| {
            (0..d)
                .map(|c| 2.0 * PI * (0..n).map(|j| inv[(i, j)] * generators[j][c]).sum::<f64>())
                .collect()
        })
        .collect())
}

impl LatticeSpec {
    /// Lattice spanned by `generators` inside ℝ^d.
    pub fn new(generators: Vec<Vec<f64>>) -> Result<Self> {
        let duals = dual_lattice(&generators)?;
        let d = generators[0].len();
        let d_l = generators.len();
        let cell_volume = gram(&generators).determinant().abs().sqrt();
        Ok(Self { d, d_l, generators, duals, cell_volume })
    }

    /// Period-`a` chain along the first axis of ℝ^d.
    pub fn chain(d: usize, a: f64) -> Result<Self> {
        let mut g = vec![0.0; d];
        g[0] = a;
        Self::new(vec![g])
    }

    /// Unit square lattice in ℝ².
    pub fn square() -> Self {
        Self::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).expect("independent generators")
    }

    /// Largest deviation of αᵢ·lⱼ from 2πδᵢⱼ.
    pub fn duality_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for (i, a) in self.duals.iter().enumerate() {
            for (j, l) in self.generators.iter().enumerate() {
                let target = if i == j { 2.0 * PI } else { 0.0 };
                r = r.max((dot(a, l) - target).abs());
            }
        }
        r
    }

    /// Σ nᵢlᵢ.
    pub fn point(&self, coeffs: &[i64]) -> Vec<f64> {
        let mut v = vec![0.0; self.d];
        for (c, g) in coeffs.iter().zip(&self.generators) {
            for (vk, gk) in v.iter_mut().zip(g) {
                *vk += *c as f64 * gk;
            }
        }
        v
    }
}

/// Reduce κ modulo Λ*; the component orthogonal to the lattice is kept.
pub fn fold_to_brillouin(kappa: &[f64], spec: &LatticeSpec) -> Vec<f64> {
    let mut out = kappa.to_vec();
    for (a, l) in spec.duals.iter().zip(&spec.generators) {
        let c = dot(kappa, l) / (2.0 * PI);
        let shift = (c + 0.5).floor();
        if shift != 0.0 {
            for (o, ak) in out.iter_mut().zip(a) {
                *o -= shift * ak;
            }
        }
    }
    out
}

/// {m ∈ Λ : |m| ≤ radius}, ordered by (|m|, lexicographic).
pub fn lattice_points_within(spec: &LatticeSpec, radius: f64) -> Vec<LatticePoint> {
    if !(radius >= 0.0) {
        return Vec::new();
    }
    let bounds: Vec<i64> = spec
        .duals
        .iter()
        .map(|a| (radius * norm(a) / (2.0 * PI)).floor() as i64 + 1)
        .collect();
    let tol = 1e-12 * radius.max(1.0);
    let mut out = Vec::new();
    let mut c: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let v = spec.point(&c);
        if norm(&v) <= radius + tol {
            out.push(LatticePoint { coeffs: c.clone(), vector: v });
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == c.len() {
                out.sort_by(|a, b| {
                    let ka = (a.norm() * 1e9).round() as i64;
                    let kb = (b.norm() * 1e9).round() as i64;
                    ka.cmp(&kb).then_with(|| {
                        a.vector.partial_cmp(&b.vector).unwrap_or(std::cmp::Ordering::Equal)
                    })
                });
                return out;
            }
            c[k] += 1;
            if c[k] > bounds[k] {
                c[k] = -bounds[k];
                k += 1;
            } else {
                break;
            }
        }
    }
}
