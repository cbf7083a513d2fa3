//! Zeros of det 𝒦 (in cleared form) inside a rectangle of the complex ω plane.

use super::operators::{cleared_determinant, ResonanceProblem};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use rayon::prelude::*;
use std::f64::consts::PI;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_STEP: f64 = 1e-7;
const ACCEPT: f64 = 1e-8;
const MAX_ARG_JUMP: f64 = PI / 4.0;
const MAX_DEPTH: usize = 12;

/// Axis-aligned rectangle [re.0, re.1] × [im.0, im.1] split into cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRect {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub n_re: usize,
    pub n_im: usize,
}

impl SearchRect {
    pub fn new(re: (f64, f64), im: (f64, f64), n_re: usize, n_im: usize) -> Result<Self> {
        if !(re.0 < re.1 && im.0 < im.1) || n_re == 0 || n_im == 0 {
            return Err(Error::InvalidInput("empty search rectangle".into()));
        }
        Ok(Self { re, im, n_re, n_im })
    }

    pub fn contains(&self, z: C) -> bool {
        z.re >= self.re.0 && z.re <= self.re.1 && z.im >= self.im.0 && z.im <= self.im.1
    }

    fn vertex(&self, a: usize, b: usize) -> C {
        C::new(
            self.re.0 + (self.re.1 - self.re.0) * a as f64 / self.n_re as f64,
            self.im.0 + (self.im.1 - self.im.0) * b as f64 / self.n_im as f64,
        )
    }
}

/// A converged zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub omega: C,
    /// |det| at the root relative to the matrix scale.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Default)]
pub struct ResonanceScan {
    pub roots: Vec<Resonance>,
    /// Newton results that left the rectangle.
    pub dropped: Vec<C>,
    /// Cells whose Newton start failed (winding-positive or unresolved cells).
    pub flagged: Vec<(usize, usize)>,
}

fn eval(problem: &ResonanceProblem, z: C) -> Option<C> {
    cleared_determinant(problem, z).ok().map(|(d, s)| d / s).filter(|v| v.re.is_finite() && v.im.is_finite())
}

fn arg_step(a: C, b: C) -> f64 {
    (b / a).arg()
}

// change of arg F along the segment [a, b], subdividing where it jumps
fn edge_increment(problem: &ResonanceProblem, a: C, fa: C, b: C, fb: C, depth: usize) -> Option<f64> {
    let d = arg_step(fa, fb);
    if d.abs() <= MAX_ARG_JUMP {
        return Some(d);
    }
    if depth >= MAX_DEPTH {
        return None;
    }
    let m = (a + b) * 0.5;
    let fm = eval(problem, m)?;
    if fm.norm() == 0.0 {
        return None;
    }
    Some(edge_increment(problem, a, fa, m, fm, depth + 1)? + edge_increment(problem, m, fm, b, fb, depth + 1)?)
}

/// Newton iteration with a central-difference derivative.
pub fn newton(problem: &ResonanceProblem, start: C) -> Result<Resonance> {
    let mut z = start;
    for it in 1..=NEWTON_MAX_ITER {
        let (f, scale) = cleared_determinant(problem, z)?;
        let h = NEWTON_STEP * z.norm().max(1.0);
        let fp = (cleared_determinant(problem, z + h)?.0 - cleared_determinant(problem, z - h)?.0) / (2.0 * h);
        if fp.norm() == 0.0 {
            return Err(Error::NoConvergence { start });
        }
        let step = f / fp;
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NoConvergence { start });
        }
        if step.norm() <= 1e-13 * z.norm().max(1.0) {
            let (f, scale2) = cleared_determinant(problem, z)?;
            let residual = f.norm() / scale2.max(scale);
            if residual <= ACCEPT {
                return Ok(Resonance { omega: z, residual, iterations: it });
            }
        }
    }
    Err(Error::NoConvergence { start })
}

/// Locate all zeros of the cleared det 𝒦 in `rect` by cell winding numbers
/// followed by Newton refinement.
pub fn find_resonances(problem: &ResonanceProblem, rect: &SearchRect) -> Result<ResonanceScan> {
    let (nr, ni) = (rect.n_re, rect.n_im);
    let idx = |a: usize, b: usize| b * (nr + 1) + a;
    let values: Vec<Option<C>> = (0..(nr + 1) * (ni + 1))
        .into_par_iter()
        .map(|k| eval(problem, rect.vertex(k % (nr + 1), k / (nr + 1))))
        .collect();
    let edge = |a0: usize, b0: usize, a1: usize, b1: usize| -> Option<f64> {
        let fa = values[idx(a0, b0)]?;
        let fb = values[idx(a1, b1)]?;
        if fa.norm() == 0.0 || fb.norm() == 0.0 {
            return None;
        }
        edge_increment(problem, rect.vertex(a0, b0), fa, rect.vertex(a1, b1), fb, 0)
    };
    // horizontal edges (a,b)→(a+1,b) and vertical edges (a,b)→(a,b+1), each once
    let horiz: Vec<Option<f64>> = (0..nr * (ni + 1)).into_par_iter().map(|k| edge(k % nr, k / nr, k % nr + 1, k / nr)).collect();
    let vert: Vec<Option<f64>> = (0..(nr + 1) * ni).into_par_iter().map(|k| edge(k % (nr + 1), k / (nr + 1), k % (nr + 1), k / (nr + 1) + 1)).collect();
    let mut scan = ResonanceScan::default();
    let mut starts = Vec::new();
    for b in 0..ni {
        for a in 0..nr {
            let parts = [horiz[b * nr + a], vert[b * (nr + 1) + a + 1], horiz[(b + 1) * nr + a], vert[b * (nr + 1) + a]];
            match parts {
                [Some(bottom), Some(right), Some(top), Some(left)] => {
                    let w = ((bottom + right - top - left) / (2.0 * PI)).round() as i64;
                    if w > 0 {
                        starts.push(((a, b), (rect.vertex(a, b) + rect.vertex(a + 1, b + 1)) * 0.5));
                    }
                }
                // winding unresolved (typically a root on a cell edge): try Newton anyway
                _ => starts.push(((a, b), (rect.vertex(a, b) + rect.vertex(a + 1, b + 1)) * 0.5)),
            }
        }
    }
    let refined: Vec<((usize, usize), Result<Resonance>)> =
        starts.into_par_iter().map(|(cell, z0)| (cell, newton(problem, z0))).collect();
    for (cell, r) in refined {
        match r {
            Ok(res) if rect.contains(res.omega) => {
                let tol = 1e-8 * res.omega.norm().max(1.0);
                if !scan.roots.iter().any(|q| (q.omega - res.omega).norm() < tol) {
                    scan.roots.push(res);
                }
            }
            Ok(res) => scan.dropped.push(res.omega),
            Err(_) => scan.flagged.push(cell),
        }
    }
    scan.roots.sort_by(|a, b| a.omega.re.total_cmp(&b.omega.re).then(a.omega.im.total_cmp(&b.omega.im)));
    Ok(scan)
}
