//! Nyström discretization of the quasiperiodic volume operators K_{Dᵢ} and
//! R_{DᵢDⱼ} on disks (2D) and balls (3D), and the resulting 𝒦 matrix.

use super::quadrature::{log_potential_disk, newton_potential_ball, particle_nodes, ParticleNodes, Quadrature};
use super::{background_wavenumber, mod_floor, script_a, xi_contrast};
use crate::error::{Error, Result};
use crate::greens::{hankel0, log_gamma_hat, PhasedPoints, SumControl};
use crate::lattice::{lattice_points_within, norm, LatticeSpec};
use crate::permittivity::MaterialParams;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use rayon::prelude::*;
use std::f64::consts::PI;

const EIG_MAX_ITER: usize = 10_000;
const EIG_TOL: f64 = 1e-13;
/// Largest tolerated change of the block inner products under refinement.
pub const QUAD_SELF_CONVERGENCE: f64 = 1e-3;

/// Disks or balls in the rescaled cell D, repeated over the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleGeometry {
    pub dim: usize,
    pub centers: Vec<Vec<f64>>,
    pub radii: Vec<f64>,
    pub delta: f64,
}

impl ParticleGeometry {
    pub fn new(dim: usize, centers: Vec<Vec<f64>>, radii: Vec<f64>, delta: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Domain(format!("dimension {dim} not supported")));
        }
        if centers.is_empty() || centers.len() != radii.len() {
            return Err(Error::InvalidInput("centers and radii must match and be nonempty".into()));
        }
        if centers.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidInput("center dimension mismatch".into()));
        }
        if radii.iter().any(|r| !(*r > 0.0)) || !(delta > 0.0) {
            return Err(Error::InvalidInput("radii and delta must be positive".into()));
        }
        for i in 0..centers.len() {
            for j in 0..i {
                let d: Vec<f64> = centers[i].iter().zip(&centers[j]).map(|(a, b)| a - b).collect();
                if norm(&d) <= radii[i] + radii[j] {
                    return Err(Error::InvalidInput(format!("particles {j} and {i} overlap")));
                }
            }
        }
        Ok(Self { dim, centers, radii, delta })
    }

    pub fn single(dim: usize, center: Vec<f64>, radius: f64, delta: f64) -> Result<Self> {
        Self::new(dim, vec![center], vec![radius], delta)
    }

    pub fn n(&self) -> usize {
        self.centers.len()
    }

    /// |Dᵢ|.
    pub fn volume(&self, i: usize) -> f64 {
        let r = self.radii[i];
        if self.dim == 2 {
            PI * r * r
        } else {
            4.0 / 3.0 * PI * r * r * r
        }
    }

    /// Largest diameter over the smallest center separation, lattice images included.
    pub fn diluteness(&self, spec: &LatticeSpec) -> f64 {
        let reach = spec.generators.iter().map(|g| norm(g)).fold(0.0, f64::max) * 2.0;
        let pts = lattice_points_within(spec, reach);
        let mut sep = f64::INFINITY;
        for i in 0..self.n() {
            for j in 0..self.n() {
                for m in &pts {
                    if i == j && m.norm() == 0.0 {
                        continue;
                    }
                    let d: Vec<f64> = (0..self.dim).map(|k| self.centers[i][k] - self.centers[j][k] - m.vector[k]).collect();
                    sep = sep.min(norm(&d));
                }
            }
        }
        let diam = 2.0 * self.radii.iter().cloned().fold(0.0, f64::max);
        diam / sep
    }

    /// Err when diluteness ≥ 1, warning text when above 0.5.
    pub fn check_dilute(&self, spec: &LatticeSpec) -> Result<Option<String>> {
        let q = self.diluteness(spec);
        if q >= 1.0 {
            return Err(Error::InvalidInput(format!("particles not dilute (ratio {q:.3})")));
        }
        Ok((q > 0.5).then(|| format!("weakly dilute geometry (ratio {q:.3})")))
    }
}

/// Which kernel the blocks discretize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorModel {
    /// 2D small-δ split M = K^{(-1)} + K^{(0)}, N = R^{(-1)} + R^{(0)}.
    Expansion,
    /// Full quasiperiodic Helmholtz kernel.
    Full,
}

/// Vectors φ⁽ⁱ⁾ used in the 𝒦 entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// Normalised constants 1̂_{Dᵢ}.
    Constant,
    /// Discrete leading eigenvectors of the self blocks.
    Eigenvector,
}

/// `grid[i][j]` is the block from particle i to particle j.
pub type BlockGrid = Vec<Vec<DMatrix<C>>>;

/// Discretized blocks at one frequency; `blocks[i][j]` maps L²(Dᵢ) → L²(Dⱼ).
#[derive(Debug, Clone)]
pub struct OperatorBlocks {
    pub blocks: Vec<Vec<DMatrix<C>>>,
    pub weights: Vec<Vec<f64>>,
    pub quadrature: Quadrature,
    pub trunc: SumControl,
}

impl OperatorBlocks {
    pub fn k_block(&self, i: usize) -> &DMatrix<C> {
        &self.blocks[i][i]
    }

    pub fn r_block(&self, i: usize, j: usize) -> &DMatrix<C> {
        &self.blocks[i][j]
    }
}

/// 𝒦^κ(ω) with its ingredients.
#[derive(Debug, Clone)]
pub struct ResonanceMatrix {
    pub entries: DMatrix<C>,
    pub script_a: Vec<C>,
    pub nu: Vec<C>,
    /// Rows multiplied by the pencil denominators (and the pole of ξ).
    pub cleared: DMatrix<C>,
    /// Magnitude scale of `det(cleared)` used in root acceptance.
    pub scale: f64,
}

#[derive(Clone, Copy)]
enum Kernel {
    /// -(1/2π) log ρ.
    Log,
    /// (i/4) H₀⁽¹⁾(kρ).
    Hankel2(C),
    /// e^{ikρ}/(4πρ).
    Helmholtz3(C),
}

impl Kernel {
    fn value(self, r: f64) -> Result<C> {
        Ok(match self {
            Kernel::Log => C::new(-r.ln() / (2.0 * PI), 0.0),
            Kernel::Hankel2(k) => C::new(0.0, 0.25) * hankel0(k * r)?,
            Kernel::Helmholtz3(k) => (C::new(0.0, 1.0) * k * r).exp() / (4.0 * PI * r),
        })
    }

    // coefficient c and singular profile s with kernel = c s(ρ) + smooth
    fn singular(self, r: f64) -> f64 {
        match self {
            Kernel::Log | Kernel::Hankel2(_) => r.ln(),
            Kernel::Helmholtz3(_) => 1.0 / r,
        }
    }

    fn coefficient(self) -> f64 {
        match self {
            Kernel::Log | Kernel::Hankel2(_) => -1.0 / (2.0 * PI),
            Kernel::Helmholtz3(_) => 1.0 / (4.0 * PI),
        }
    }

    // limit of kernel - c s(ρ) as ρ → 0
    fn smooth_at_zero(self) -> C {
        match self {
            Kernel::Log => C::new(0.0, 0.0),
            Kernel::Hankel2(k) => -(k.ln() + log_gamma_hat()) / (2.0 * PI),
            Kernel::Helmholtz3(k) => C::new(0.0, 1.0) * k / (4.0 * PI),
        }
    }
}

/// A resonance problem at fixed geometry, lattice, κ and material.
#[derive(Debug, Clone)]
pub struct ResonanceProblem {
    pub geom: ParticleGeometry,
    pub spec: LatticeSpec,
    pub kappa: Vec<f64>,
    pub params: MaterialParams<f64>,
    pub ctl: SumControl,
    pub quad: Quadrature,
    pub model: OperatorModel,
    pub projection: Projection,
    nodes: Vec<ParticleNodes>,
    lattice: PhasedPoints,
    // ω-independent parts of the expansion model: (K^{(-1)} without the log, K^{(0)})
    split: Option<(BlockGrid, BlockGrid)>,
}

impl ResonanceProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        geom: ParticleGeometry,
        spec: LatticeSpec,
        kappa: Vec<f64>,
        params: MaterialParams<f64>,
        ctl: SumControl,
        quad: Quadrature,
        model: OperatorModel,
        projection: Projection,
    ) -> Result<Self> {
        if spec.d != geom.dim || kappa.len() != geom.dim {
            return Err(Error::InvalidInput("lattice, kappa and geometry dimensions differ".into()));
        }
        if model == OperatorModel::Expansion && geom.dim != 2 {
            return Err(Error::Domain("the expansion model is two-dimensional".into()));
        }
        params.validate()?;
        geom.check_dilute(&spec)?;
        let nodes = build_nodes(&geom, quad)?;
        let lattice = PhasedPoints::new(&spec, &kappa, ctl.radius)?;
        let mut prob = Self { geom, spec, kappa, params, ctl, quad, model, projection, nodes, lattice, split: None };
        prob.check_quadrature()?;
        if model == OperatorModel::Expansion {
            let s = prob.lattice.phase_sum();
            let n = prob.geom.n();
            let mut m1 = Vec::with_capacity(n);
            let mut m0 = Vec::with_capacity(n);
            for i in 0..n {
                let mut r1 = Vec::with_capacity(n);
                let mut r0 = Vec::with_capacity(n);
                for j in 0..n {
                    r1.push(constant_block(&prob.nodes[i], &prob.nodes[j], -s / (2.0 * PI)));
                    r0.push(assemble_pair(&prob.nodes[i], &prob.nodes[j], i == j, &prob.lattice, Kernel::Log, prob.geom.dim)?);
                }
                m1.push(r1);
                m0.push(r0);
            }
            prob.split = Some((m1, m0));
        }
        Ok(prob)
    }

    /// Single 2D disk in the unit square lattice with the expansion model.
    pub fn dilute_disk(params: MaterialParams<f64>, radius: f64, delta: f64, kappa: [f64; 2]) -> Result<Self> {
        let geom = ParticleGeometry::single(2, vec![0.5, 0.5], radius, delta)?;
        Self::new(
            geom,
            LatticeSpec::square(),
            kappa.to_vec(),
            params,
            SumControl::default(),
            Quadrature::default(),
            OperatorModel::Expansion,
            Projection::Constant,
        )
    }

    pub fn nodes(&self) -> &[ParticleNodes] {
        &self.nodes
    }

    pub fn lattice_points(&self) -> &PhasedPoints {
        &self.lattice
    }

    /// ν₋₁ = -(|Dᵢ|/2π) Σ_trunc e^{im·κ} (2D).
    pub fn nu_minus_one_analytic(&self, i: usize) -> C {
        -self.geom.volume(i) / (2.0 * PI) * self.lattice.phase_sum()
    }

    /// log(γ̂ δ k₀).
    pub fn log_factor(&self, omega: C) -> C {
        (background_wavenumber(&self.params, omega) * self.geom.delta).ln() + log_gamma_hat()
    }

    /// Discrete K^{(-1)} (without the log factor) and K^{(0)} blocks, 2D.
    pub fn split_blocks(&self) -> Option<(&BlockGrid, &BlockGrid)> {
        self.split.as_ref().map(|(a, b)| (a, b))
    }

    fn check_quadrature(&self) -> Result<()> {
        let fine = build_nodes(&self.geom, self.quad.refined(2))?;
        let coarse = &self.nodes;
        let mut change: f64 = 0.0;
        for i in 0..self.geom.n() {
            for j in 0..self.geom.n() {
                let a = constant_pairing(&coarse[i], &coarse[j], i == j, &self.lattice, self.geom.dim)?;
                let b = constant_pairing(&fine[i], &fine[j], i == j, &self.lattice, self.geom.dim)?;
                change = change.max((a - b).norm() / b.norm().max(f64::MIN_POSITIVE));
            }
        }
        if change > QUAD_SELF_CONVERGENCE {
            return Err(Error::QuadratureTooCoarse { change, limit: QUAD_SELF_CONVERGENCE });
        }
        Ok(())
    }

    /// Blocks at a complex frequency.
    pub fn blocks_at(&self, omega: C) -> Result<OperatorBlocks> {
        let n = self.geom.n();
        let blocks = match (&self.split, self.model) {
            (Some((m1, m0)), OperatorModel::Expansion) => {
                let l = self.log_factor(omega);
                (0..n)
                    .map(|i| (0..n).map(|j| m1[i][j].map(|x| x * l) + &m0[i][j]).collect())
                    .collect()
            }
            _ => {
                let k = background_wavenumber(&self.params, omega) * self.geom.delta;
                let kernel = if self.geom.dim == 2 { Kernel::Hankel2(k) } else { Kernel::Helmholtz3(k) };
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let mut row = Vec::with_capacity(n);
                    for j in 0..n {
                        row.push(assemble_pair(&self.nodes[i], &self.nodes[j], i == j, &self.lattice, kernel, self.geom.dim)?);
                    }
                    out.push(row);
                }
                out
            }
        };
        Ok(OperatorBlocks {
            blocks,
            weights: self.nodes.iter().map(|p| p.weights.clone()).collect(),
            quadrature: self.quad,
            trunc: self.ctl,
        })
    }
}

fn build_nodes(geom: &ParticleGeometry, q: Quadrature) -> Result<Vec<ParticleNodes>> {
    geom.centers
        .iter()
        .zip(&geom.radii)
        .map(|(c, r)| particle_nodes(geom.dim, c, *r, q))
        .collect()
}

fn constant_block(src: &ParticleNodes, tgt: &ParticleNodes, c: C) -> DMatrix<C> {
    DMatrix::from_fn(tgt.len(), src.len(), |_, q| c * src.weights[q])
}

fn singular_potential(dim: usize, x: &[f64], part: &ParticleNodes) -> f64 {
    if dim == 2 {
        log_potential_disk(x, &part.center, part.radius)
    } else {
        newton_potential_ball(x, &part.center, part.radius)
    }
}

fn static_kernel(dim: usize) -> Kernel {
    if dim == 2 {
        Kernel::Log
    } else {
        Kernel::Helmholtz3(C::new(0.0, 0.0))
    }
}

// Nyström matrix of Σ_m kernel(|x - y - m|) e^{im·κ}; rows are target nodes.
// The m = 0 self term uses singularity subtraction.
fn assemble_pair(
    src: &ParticleNodes,
    tgt: &ParticleNodes,
    same: bool,
    lat: &PhasedPoints,
    kernel: Kernel,
    dim: usize,
) -> Result<DMatrix<C>> {
    let ns = src.len();
    let rows: Vec<Result<Vec<C>>> = (0..tgt.len())
        .into_par_iter()
        .map(|p| {
            let x = &tgt.nodes[p];
            let mut row = vec![C::new(0.0, 0.0); ns];
            let mut z = vec![0.0; dim];
            let mut subtract = 0.0;
            for (m, ph) in lat.points.iter().zip(&lat.phases) {
                let origin = m.iter().all(|v| *v == 0.0);
                for (q, y) in src.nodes.iter().enumerate() {
                    if same && origin && q == p {
                        continue;
                    }
                    for k in 0..dim {
                        z[k] = x[k] - y[k] - m[k];
                    }
                    let r = norm(&z);
                    if r == 0.0 {
                        return Err(Error::Domain("node coincides with a lattice image".into()));
                    }
                    row[q] += kernel.value(r)? * ph * src.weights[q];
                    if same && origin {
                        subtract += src.weights[q] * kernel.singular(r);
                    }
                }
            }
            if same {
                let pot = singular_potential(dim, x, src);
                row[p] += kernel.coefficient() * (pot - subtract) + kernel.smooth_at_zero() * src.weights[p];
            }
            Ok(row)
        })
        .collect();
    let rows: Vec<Vec<C>> = rows.into_iter().collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(tgt.len(), ns, |p, q| rows[p][q]))
}

// ⟨A 1̂_src, 1̂_tgt⟩ for the static kernel without forming the matrix
fn constant_pairing(src: &ParticleNodes, tgt: &ParticleNodes, same: bool, lat: &PhasedPoints, dim: usize) -> Result<C> {
    let a = assemble_pair(src, tgt, same, lat, static_kernel(dim), dim)?;
    let us = DVector::from_element(src.len(), C::new(1.0 / src.measure().sqrt(), 0.0));
    let y = a * us;
    Ok(y.iter().zip(&tgt.weights).map(|(v, w)| v * *w).sum::<C>() / tgt.measure().sqrt())
}

/// Σ wᵢ aᵢ bᵢ (bilinear, no conjugation).
pub fn pairing(a: &[C], b: &[C], w: &[f64]) -> C {
    a.iter().zip(b).zip(w).map(|((x, y), wi)| x * y * *wi).sum()
}

fn weighted_norm(a: &[C], w: &[f64]) -> f64 {
    a.iter().zip(w).map(|(x, wi)| x.norm_sqr() * wi).sum::<f64>().sqrt()
}

fn apply(m: &DMatrix<C>, v: &[C]) -> Vec<C> {
    (m * DVector::from_column_slice(v)).as_slice().to_vec()
}

// scale so that Σ w v² = 1 with Re Σ w v ≥ 0
fn normalise(v: &mut [C], w: &[f64]) {
    let s = pairing(v, v, w).sqrt();
    let s = if s.norm() > 0.0 { s } else { C::new(weighted_norm(v, w), 0.0) };
    for x in v.iter_mut() {
        *x /= s;
    }
    let ones: Vec<C> = vec![C::new(1.0, 0.0); v.len()];
    if pairing(v, &ones, w).re < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Dominant eigenpair of the self block of particle `i` by power iteration.
pub fn leading_eigenpair(blocks: &OperatorBlocks, i: usize) -> Result<(C, Vec<C>)> {
    let a = blocks.k_block(i);
    let w = &blocks.weights[i];
    let mut v = vec![C::new(1.0, 0.0); w.len()];
    normalise(&mut v, w);
    let mut lambda = C::new(0.0, 0.0);
    for _ in 0..EIG_MAX_ITER {
        let y = apply(a, &v);
        let new_lambda = pairing(&v, &y, w) / pairing(&v, &v, w);
        let resid: Vec<C> = y.iter().zip(&v).map(|(yi, vi)| yi - new_lambda * vi).collect();
        let r = weighted_norm(&resid, w);
        let settled = (new_lambda - lambda).norm() <= 1e-15 * new_lambda.norm();
        lambda = new_lambda;
        if r <= EIG_TOL * lambda.norm().max(f64::MIN_POSITIVE) || (settled && r <= 1e-9 * lambda.norm()) {
            return Ok((lambda, v));
        }
        v = y;
        normalise(&mut v, w);
    }
    Err(Error::EigenFailure { iterations: EIG_MAX_ITER })
}

/// Assemble the blocks of `problem` at ω.
pub fn assemble_blocks(problem: &ResonanceProblem, omega: C) -> Result<OperatorBlocks> {
    problem.blocks_at(omega)
}

fn projections(problem: &ResonanceProblem, blocks: &OperatorBlocks) -> Result<(Vec<C>, Vec<Vec<C>>)> {
    let n = problem.geom.n();
    let mut nus = Vec::with_capacity(n);
    let mut phis = Vec::with_capacity(n);
    for i in 0..n {
        let (nu, psi) = leading_eigenpair(blocks, i)?;
        nus.push(nu);
        phis.push(match problem.projection {
            Projection::Eigenvector => psi,
            Projection::Constant => {
                let c = 1.0 / problem.nodes[i].measure().sqrt();
                vec![C::new(c, 0.0); problem.nodes[i].len()]
            }
        });
    }
    Ok((nus, phis))
}

/// 𝒦^κ(ω) together with its cleared (pole-free) form.
pub fn resonance_matrix(problem: &ResonanceProblem, blocks: &OperatorBlocks, omega: C) -> Result<ResonanceMatrix> {
    let n = problem.geom.n();
    let p = &problem.params;
    let delta = problem.geom.delta;
    let (nus, phis) = projections(problem, blocks)?;
    let next = |i: usize| (mod_floor(i as u64 + 2, n as u64) - 1) as usize;
    let diag: Vec<C> = (0..n)
        .map(|i| {
            let j = next(i);
            pairing(&apply(blocks.r_block(i, j), &phis[i]), &phis[j], &blocks.weights[j])
        })
        .collect();
    let mut couple = DMatrix::from_element(n, n, C::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                couple[(i, j)] = pairing(&apply(blocks.r_block(j, i), &phis[j]), &phis[i], &blocks.weights[i]);
            }
        }
    }
    // ξ = μ₀α/den; clearing den removes the pole of ξ
    let has_pole = p.alpha.norm() != 0.0;
    let den = if has_pole { p.denominator(omega) } else { C::new(1.0, 0.0) };
    let x = if has_pole { omega * omega * delta * delta * p.mu0 * p.alpha } else { C::new(0.0, 0.0) };
    let mut cleared = DMatrix::from_element(n, n, C::new(0.0, 0.0));
    let mut scale = 1.0;
    for i in 0..n {
        let mut row_scale = diag[i].norm() * (den.norm() + (x * nus[i]).norm());
        for j in 0..n {
            cleared[(i, j)] = if i == j { diag[i] * (den - x * nus[i]) } else { -x * couple[(i, j)] * diag[i] };
            if i != j {
                row_scale += cleared[(i, j)].norm();
            }
        }
        scale *= row_scale.max(f64::MIN_POSITIVE);
    }
    let mut entries = DMatrix::from_element(n, n, C::new(0.0, 0.0));
    let mut sa = Vec::with_capacity(n);
    for i in 0..n {
        let a = script_a(p, omega, delta, nus[i])?;
        sa.push(a);
        for j in 0..n {
            entries[(i, j)] = if i == j { diag[i] } else { -a * couple[(i, j)] * diag[i] };
        }
    }
    Ok(ResonanceMatrix { entries, script_a: sa, nu: nus, cleared, scale })
}

/// det of the cleared 𝒦 matrix, analytic in ω away from log branch cuts.
pub fn cleared_determinant(problem: &ResonanceProblem, omega: C) -> Result<(C, f64)> {
    let blocks = problem.blocks_at(omega)?;
    let n = problem.geom.n();
    let p = &problem.params;
    let delta = problem.geom.delta;
    let (nus, phis) = projections(problem, &blocks)?;
    let next = |i: usize| (mod_floor(i as u64 + 2, n as u64) - 1) as usize;
    let has_pole = p.alpha.norm() != 0.0;
    let den = if has_pole { p.denominator(omega) } else { C::new(1.0, 0.0) };
    let x = if has_pole { omega * omega * delta * delta * p.mu0 * p.alpha } else { C::new(0.0, 0.0) };
    let mut m = DMatrix::from_element(n, n, C::new(0.0, 0.0));
    let mut scale = 1.0;
    for i in 0..n {
        let j = next(i);
        let d = pairing(&apply(blocks.r_block(i, j), &phis[i]), &phis[j], &blocks.weights[j]);
        let mut row_scale = d.norm() * (den.norm() + (x * nus[i]).norm());
        for k in 0..n {
            if k == i {
                m[(i, k)] = d * (den - x * nus[i]);
            } else {
                let c = pairing(&apply(blocks.r_block(k, i), &phis[k]), &phis[i], &blocks.weights[i]);
                m[(i, k)] = -x * c * d;
                row_scale += m[(i, k)].norm();
            }
        }
        scale *= row_scale.max(f64::MIN_POSITIVE);
    }
    Ok((m.determinant(), scale))
}

/// ‖u - δ²ω²ξ K u‖ over all particles (weighted discrete L² norm).
pub fn lippmann_schwinger_residual(problem: &ResonanceProblem, blocks: &OperatorBlocks, omega: C, field: &[Vec<C>]) -> Result<f64> {
    let n = problem.geom.n();
    if field.len() != n || field.iter().zip(&blocks.weights).any(|(u, w)| u.len() != w.len()) {
        return Err(Error::InvalidInput("field does not match the quadrature nodes".into()));
    }
    let c = omega * omega * problem.geom.delta * problem.geom.delta * xi_contrast(&problem.params, omega)?;
    let mut total = 0.0;
    for i in 0..n {
        let mut r = field[i].clone();
        for (j, u) in field.iter().enumerate() {
            let ku = apply(blocks.r_block(j, i), u);
            for (ri, kv) in r.iter_mut().zip(&ku) {
                *ri -= c * kv;
            }
        }
        total += weighted_norm(&r, &blocks.weights[i]).powi(2);
    }
    Ok(total.sqrt())
}

/// Approximate null vector of the discrete system I - δ²ω²ξB near a resonance,
/// by inverse iteration.
pub fn resonant_mode(problem: &ResonanceProblem, blocks: &OperatorBlocks, omega: C) -> Result<Vec<Vec<C>>> {
    let n = problem.geom.n();
    let sizes: Vec<usize> = blocks.weights.iter().map(|w| w.len()).collect();
    let offs: Vec<usize> = sizes.iter().scan(0, |acc, s| { let o = *acc; *acc += s; Some(o) }).collect();
    let total: usize = sizes.iter().sum();
    let c = omega * omega * problem.geom.delta * problem.geom.delta * xi_contrast(&problem.params, omega)?;
    let mut s = DMatrix::<C>::identity(total, total);
    for i in 0..n {
        for j in 0..n {
            let b = blocks.r_block(j, i);
            for p in 0..sizes[i] {
                for q in 0..sizes[j] {
                    s[(offs[i] + p, offs[j] + q)] -= c * b[(p, q)];
                }
            }
        }
    }
    let lu = s.lu();
    let mut v = DVector::from_element(total, C::new(1.0, 0.0));
    for _ in 0..8 {
        v = lu.solve(&v).ok_or(Error::EigenFailure { iterations: 0 })?;
        let nv = v.norm();
        v /= C::new(nv, 0.0);
    }
    Ok((0..n).map(|i| v.as_slice()[offs[i]..offs[i] + sizes[i]].to_vec()).collect())
}
