//! Mode drivers: evaluate in a worker pool, then serialize in index order.

use crate::config::{format_complex, Branch, Criterion, Mode, RunConfig};
use crate::output::{fmt_num, Cell, Manifest, Table};
use crate::svg::{render_svg, SvgError, SvgStyle};
use blochkit_core::bandgap::{cascade_near_pole, envelope_near_pole, find_gaps_complex, find_gaps_real, GapKind};
use blochkit_core::dispersion1d::solve_kappa;
use blochkit_core::field1d::{evaluate_field, mode_coefficients};
use blochkit_core::greens::green_quasiperiodic;
use blochkit_core::permittivity::singular_frequencies;
use blochkit_core::resonance_md::{
    assemble_blocks, find_resonances, lippmann_schwinger_residual, resonant_mode, ParticleGeometry,
    ResonanceProblem, SearchRect,
};
use blochkit_core::{Complex64, Error};
use rayon::prelude::*;
use std::path::PathBuf;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error("{0}")]
    Numerical(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("svg: {0}")]
    Svg(#[from] SvgError),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Files written by a run.
#[derive(Debug, Clone, Default)]
pub struct RunOutputs {
    pub tables: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub svgs: Vec<PathBuf>,
}

struct Products {
    main: Table,
    extra: Vec<(String, Table)>,
    derived: Manifest,
    markers: Vec<f64>,
}

impl Products {
    fn new(main: Table) -> Self {
        Self { main, extra: Vec::new(), derived: Manifest::default(), markers: Vec::new() }
    }
}

/// Run the configured mode and write CSV, manifest and (optionally) SVG files.
pub fn run(cfg: &RunConfig) -> Result<RunOutputs, RunError> {
    cfg.check_writable()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    let products = pool.install(|| match cfg.mode {
        Mode::Sweep1d => sweep1d(cfg),
        Mode::Gaps => gaps(cfg),
        Mode::Cascade => cascade(cfg),
        Mode::Poles => poles(cfg),
        Mode::Field => field(cfg),
        Mode::Latsum => latsum(cfg),
        Mode::Resonances => resonances(cfg),
    })?;

    let dir = &cfg.output.dir;
    let stem = cfg.stem();
    let mut out = RunOutputs::default();
    let main = dir.join(format!("{stem}.csv"));
    products.main.write(&main)?;
    out.tables.push(main.clone());
    for (suffix, t) in &products.extra {
        let p = dir.join(format!("{stem}_{suffix}.csv"));
        t.write(&p)?;
        out.tables.push(p);
    }

    let mut manifest = Manifest::default();
    manifest.push("version", env!("CARGO_PKG_VERSION"));
    for (k, v) in cfg.entries() {
        manifest.push(k, v);
    }
    manifest.entries.extend(products.derived.entries);
    out.manifest = dir.join(format!("{stem}_manifest.txt"));
    manifest.write(&out.manifest)?;

    if cfg.output.svg && matches!(cfg.mode, Mode::Sweep1d | Mode::Gaps | Mode::Cascade) {
        let style = SvgStyle { markers: products.markers, ..SvgStyle::default() };
        out.svgs = render_svg(&main, &style)?;
    }
    Ok(out)
}

fn is_singular(e: &Error) -> bool {
    matches!(e, Error::SingularFrequency { .. } | Error::DegenerateContrast { .. })
}

// real parts of the poles that fall in the sweep window
fn pole_markers(cfg: &RunConfig) -> Vec<f64> {
    match singular_frequencies(&cfg.material) {
        Ok(sp) => {
            let w = sp.omega_plus.re;
            if w >= cfg.omega.min && w <= cfg.omega.max {
                vec![w]
            } else {
                Vec::new()
            }
        }
        Err(_) => Vec::new(),
    }
}

fn sweep1d(cfg: &RunConfig) -> Result<Products, RunError> {
    cfg.material.validate()?;
    let grid = cfg.omega.grid();
    let points: Vec<Result<Option<_>, Error>> = grid
        .par_iter()
        .map(|&w| match solve_kappa(&cfg.material, w) {
            Ok(b) => Ok(Some(b)),
            Err(e) if is_singular(&e) => Ok(None),
            Err(e) => Err(e),
        })
        .collect();
    let mut t = Table::new(&["omega", "re_kappa_plus", "im_kappa_plus", "abs_re", "abs_im", "f_re", "f_im", "residual"]);
    let mut skipped = 0usize;
    for p in points {
        match p? {
            Some(b) => t.push(vec![
                b.omega.into(),
                b.kappa_plus.re.into(),
                b.kappa_plus.im.into(),
                b.kappa_plus.re.abs().into(),
                b.kappa_plus.im.abs().into(),
                b.f_value.re.into(),
                b.f_value.im.into(),
                b.residual.into(),
            ]),
            None => skipped += 1,
        }
    }
    let mut pr = Products::new(t);
    pr.derived.push("skipped_singular", skipped.to_string());
    pr.markers = pole_markers(cfg);
    Ok(pr)
}

fn gap_kind(k: GapKind) -> &'static str {
    match k {
        GapKind::RealCriterion => "real",
        GapKind::ComplexCriterion => "complex",
    }
}

fn gaps(cfg: &RunConfig) -> Result<Products, RunError> {
    let m = &cfg.material;
    let real = match cfg.criterion {
        Criterion::Real => true,
        Criterion::Complex => false,
        Criterion::Auto => m.alpha_is_real() && m.gamma == 0.0,
    };
    let (lo, hi, n) = (cfg.omega.min, cfg.omega.max, cfg.omega.samples);
    let found = if real { find_gaps_real(m, lo, hi, n)? } else { find_gaps_complex(m, lo, hi, n)? };
    let mut t = Table::new(&["kind", "lo", "hi", "peak_omega", "peak_im_kappa"]);
    for g in &found {
        t.push(vec![gap_kind(g.kind).into(), g.lo.into(), g.hi.into(), g.peak_omega.into(), g.peak_im_kappa.into()]);
    }
    let mut pr = Products::new(t);
    pr.derived.push("criterion_used", if real { "real" } else { "complex" });
    pr.derived.push("gap_count", found.len().to_string());
    pr.markers = pole_markers(cfg);
    Ok(pr)
}

fn cascade(cfg: &RunConfig) -> Result<Products, RunError> {
    let c = &cfg.cascade;
    let cas = cascade_near_pole(&cfg.material, c.delta, c.side, c.max_gaps)?;
    let mut t = Table::new(&[
        "index",
        "lo",
        "hi",
        "peak_omega",
        "peak_im_kappa",
        "sentinel_omega",
        "sentinel_sin",
        "sentinel_f",
    ]);
    // a sentinel without a gap is not reported; pair gaps with their sentinel by peak position
    for (i, g) in cas.gaps.iter().enumerate() {
        let k = cas.sentinel_points.iter().position(|w| *w == g.peak_omega).unwrap_or(i);
        t.push(vec![
            i.into(),
            g.lo.into(),
            g.hi.into(),
            g.peak_omega.into(),
            g.peak_im_kappa.into(),
            cas.sentinel_points[k].into(),
            cas.sentinel_sin[k].into(),
            cas.sentinel_f[k].into(),
        ]);
    }
    let mut pr = Products::new(t);
    pr.derived.push("pole", fmt_num(cas.pole));
    pr.derived.push("gap_count", cas.gaps.len().to_string());
    pr.derived.push("sentinel_count", cas.sentinel_points.len().to_string());
    if !c.envelope.is_empty() {
        let env = envelope_near_pole(&cfg.material, &c.envelope)?;
        let mut e = Table::new(&["delta", "max_im_kappa"]);
        for (d, v) in env {
            e.push(vec![d.into(), v.into()]);
        }
        pr.extra.push(("envelope".into(), e));
    }
    pr.markers = vec![cas.pole];
    Ok(pr)
}

fn poles(cfg: &RunConfig) -> Result<Products, RunError> {
    let sp = singular_frequencies(&cfg.material)?;
    let mut t = Table::new(&["branch", "re_omega", "im_omega"]);
    t.push(vec!["plus".into(), sp.omega_plus.re.into(), sp.omega_plus.im.into()]);
    t.push(vec!["minus".into(), sp.omega_minus.re.into(), sp.omega_minus.im.into()]);
    Ok(Products::new(t))
}

fn field(cfg: &RunConfig) -> Result<Products, RunError> {
    let f = &cfg.field;
    let b = solve_kappa(&cfg.material, f.omega)?;
    let kappa = match f.branch {
        Branch::Plus => b.kappa_plus,
        Branch::Minus => b.kappa_minus,
    };
    let coeffs = mode_coefficients(&cfg.material, f.omega, kappa)?;
    let n = f.samples;
    let xs: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
    let us: Vec<Result<Complex64, Error>> =
        xs.par_iter().map(|&x| evaluate_field(&cfg.material, f.omega, kappa, &coeffs, x)).collect();
    let mut t = Table::new(&["x", "re_u", "im_u", "abs_u"]);
    for (x, u) in xs.iter().zip(us) {
        let u = u?;
        t.push(vec![(*x).into(), u.re.into(), u.im.into(), u.norm().into()]);
    }
    let mut pr = Products::new(t);
    pr.derived.push("kappa_used", format_complex(kappa));
    pr.derived.push("coeff_a", format_complex(coeffs.a));
    pr.derived.push("coeff_b", format_complex(coeffs.b));
    pr.derived.push("system_residual", fmt_num(coeffs.system_residual));
    Ok(pr)
}

fn latsum(cfg: &RunConfig) -> Result<Products, RunError> {
    let l = &cfg.latsum;
    let d = cfg.lattice.d;
    let ctl = cfg.numerics.sum_control();
    let n = l.samples;
    let xs: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            l.from.iter().zip(&l.to).map(|(a, b)| a + t * (b - a)).collect()
        })
        .collect();
    let vals: Vec<Result<(Complex64, f64, bool), Error>> = xs
        .par_iter()
        .map(|x| match green_quasiperiodic(&cfg.lattice, &cfg.kappa.start, l.k, x, &ctl) {
            Ok(s) => Ok((s.value, s.achieved_estimate, true)),
            Err(Error::SlowConvergence { value, estimate, .. }) => Ok((value, estimate, false)),
            Err(e) => Err(e),
        })
        .collect();
    let mut header: Vec<String> = (0..d).map(|k| format!("x_{k}")).collect();
    header.extend(["re_g", "im_g", "estimate", "converged"].map(String::from));
    let mut t = Table::new(&header);
    let mut unconverged = 0usize;
    for (x, v) in xs.iter().zip(vals) {
        let (g, est, ok) = v?;
        if !ok {
            unconverged += 1;
        }
        let mut row: Vec<Cell> = x.iter().map(|c| Cell::Num(*c)).collect();
        row.extend([g.re.into(), g.im.into(), est.into(), Cell::Text(ok.to_string())]);
        t.push(row);
    }
    let mut pr = Products::new(t);
    pr.derived.push("unconverged", unconverged.to_string());
    Ok(pr)
}

fn resonances(cfg: &RunConfig) -> Result<Products, RunError> {
    let g = &cfg.geometry;
    let d = cfg.lattice.d;
    if g.dim != d {
        return Err(crate::config::ConfigError::Validation {
            key: "dim".into(),
            message: format!("geometry is {}D but the lattice is {d}D", g.dim),
        }
        .into());
    }
    let s = &cfg.search;
    let rect = SearchRect::new(s.re, s.im, s.cells.0, s.cells.1)?;
    let geom = ParticleGeometry::new(g.dim, g.centers.clone(), g.radii.clone(), g.delta)?;
    let mut header: Vec<String> = vec!["kappa_index".into()];
    header.extend((0..d).map(|k| format!("kappa_{k}")));
    header.extend(["re_omega", "im_omega", "det_residual", "ls_residual"].map(String::from));
    let mut t = Table::new(&header);
    let mut pr_derived = Manifest::default();
    if let Some(w) = geom.check_dilute(&cfg.lattice)? {
        pr_derived.push("warning", w);
    }
    let (mut flagged, mut dropped) = (0usize, 0usize);
    for (ki, kappa) in cfg.kappa.points().into_iter().enumerate() {
        let problem = ResonanceProblem::new(
            geom.clone(),
            cfg.lattice.clone(),
            kappa.clone(),
            cfg.material,
            cfg.numerics.sum_control(),
            cfg.numerics.quad,
            cfg.numerics.model,
            cfg.numerics.projection,
        )?;
        let scan = find_resonances(&problem, &rect)?;
        flagged += scan.flagged.len();
        dropped += scan.dropped.len();
        for r in &scan.roots {
            let blocks = assemble_blocks(&problem, r.omega)?;
            let mode = resonant_mode(&problem, &blocks, r.omega)?;
            let ls = lippmann_schwinger_residual(&problem, &blocks, r.omega, &mode)?;
            let mut row: Vec<Cell> = vec![ki.into()];
            row.extend(kappa.iter().map(|c| Cell::Num(*c)));
            row.extend([r.omega.re.into(), r.omega.im.into(), r.residual.into(), ls.into()]);
            t.push(row);
        }
    }
    let mut pr = Products::new(t);
    pr.derived = pr_derived;
    pr.derived.push("flagged_cells", flagged.to_string());
    pr.derived.push("dropped_roots", dropped.to_string());
    Ok(pr)
}
