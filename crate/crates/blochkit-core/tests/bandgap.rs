use blochkit_core::bandgap::*;
use blochkit_core::dispersion1d::{rhs_f, solve_kappa};
use blochkit_core::{Error, Material};

#[test]
fn homogeneous_has_no_gaps() {
    let p = Material::unit(0.0, 1.0, 0.0);
    assert!(find_gaps_real(&p, 0.1, 10.0, 2000).unwrap().is_empty());
    assert!(find_gaps_complex(&p, 0.1, 10.0, 2000).unwrap().is_empty());
}

#[test]
fn constant_permittivity_gap_edges() {
    let p = Material::unit(1.0, 0.0, 0.0);
    let gaps = find_gaps_real(&p, 1e-3, 10.0, 5000).unwrap();
    assert!(!gaps.is_empty());
    for g in &gaps {
        assert_eq!(g.kind, GapKind::RealCriterion);
        assert!(g.lo < g.hi);
        for e in [g.lo, g.hi] {
            assert!((rhs_f(&p, e).unwrap().norm() - 1.0).abs() < 1e-9);
        }
        let mid = 0.5 * (g.lo + g.hi);
        assert!(rhs_f(&p, mid).unwrap().norm() > 1.0);
        assert!(solve_kappa(&p, mid).unwrap().kappa_plus.im > 0.0);
    }
    // outside the gaps κ is real
    for i in 1..1000 {
        let w = i as f64 * 0.01;
        if gaps.iter().all(|g| w < g.lo - 1e-6 || w > g.hi + 1e-6) {
            assert!(solve_kappa(&p, w).unwrap().kappa_plus.im.abs() < 1e-8);
        }
    }
}

#[test]
fn complex_peaks_sit_inside_real_gaps() {
    let p = Material::unit(1.0, 0.0, 0.0);
    let real = find_gaps_real(&p, 0.01, 10.0, 4000).unwrap();
    let peaks = find_gaps_complex(&p, 0.01, 10.0, 4000).unwrap();
    assert_eq!(real.len(), peaks.len());
    for (r, c) in real.iter().zip(&peaks) {
        assert_eq!(c.kind, GapKind::ComplexCriterion);
        assert!(c.peak_omega > r.lo && c.peak_omega < r.hi);
        assert!(c.lo <= c.peak_omega && c.peak_omega <= c.hi);
    }
}

#[test]
fn damped_model_needs_complex_criterion() {
    assert!(matches!(find_gaps_real(&Material::halide(), 0.1, 5.0, 100), Err(Error::ComplexPermittivity { .. })));
}

#[test]
fn halide_complex_peaks() {
    // the first peak of |Im κ| sits just above Re ω* = 0.968
    let gaps = find_gaps_complex(&Material::halide(), 1e-3, 5.0, 5000).unwrap();
    let peaks: Vec<f64> = gaps.iter().map(|g| g.peak_omega).collect();
    assert_eq!(peaks.len(), 3);
    assert!((peaks[0] - 1.0319).abs() < 1e-3);
    assert!((peaks[1] - 1.7638).abs() < 1e-3);
    assert!((peaks[2] - 4.7678).abs() < 1e-3);
}

#[test]
fn gaps_accumulate_below_pole() {
    let p = Material::unit(1.0, 1.0, 0.0);
    assert!(find_gaps_real(&p, 0.9, 0.999, 4000).unwrap().len() >= 3);
}

#[test]
fn cascade_below_pole() {
    let p = Material::unit(1.0, 1.0, 0.0);
    for n in [5, 10, 20] {
        let c = cascade_near_pole(&p, 0.1, Side::Below, n).unwrap();
        assert_eq!(c.gaps.len(), n);
        assert_eq!(c.pole, 1.0);
        for w in c.gaps.windows(2) {
            assert!(w[0].hi < w[1].lo);
        }
        assert!(c.gaps.iter().all(|g| g.lo >= 0.9 && g.hi < 1.0));
        for ((s, f), g) in c.sentinel_sin.iter().zip(&c.sentinel_f).zip(&c.gaps) {
            assert!(if *s > 0.0 { *f < -1.0 } else { *f > 1.0 });
            let x = c.sentinel_points[c.sentinel_sin.iter().position(|v| v == s).unwrap()];
            assert!(x > 0.0);
            assert!(g.lo < g.hi);
        }
        for w in c.sentinel_sin.windows(2) {
            assert!(w[0] * w[1] < 0.0);
        }
        for (x, g) in c.sentinel_points.iter().zip(&c.gaps) {
            assert!(g.lo <= *x && *x <= g.hi);
        }
    }
}

#[test]
fn cascade_above_pole() {
    let p = Material::unit(1.0, 1.0, 0.0);
    assert!(matches!(cascade_near_pole(&p, 0.1, Side::Above, 5), Err(Error::Domain(_))));
    let p = Material::unit(-0.5, 1.0, 0.0);
    let c = cascade_near_pole(&p, 0.1, Side::Above, 5).unwrap();
    assert_eq!(c.gaps.len(), 5);
    for w in c.gaps.windows(2) {
        assert!(w[0].lo > w[1].hi);
    }
    assert!(c.gaps.iter().all(|g| g.lo > 1.0 && g.hi <= 1.1));
}

#[test]
fn cascade_hypotheses() {
    assert!(matches!(cascade_near_pole(&Material::halide(), 0.1, Side::Below, 3), Err(Error::DampedModel { .. })));
    assert!(matches!(cascade_near_pole(&Material::unit(1.0, 0.0, 0.0), 0.1, Side::Below, 3), Err(Error::NoPole)));
    assert!(cascade_near_pole(&Material::unit(0.0, 1.0, 0.0), 0.1, Side::Below, 3).is_err());
}

#[test]
fn envelope_grows_toward_pole() {
    let p = Material::unit(1.0, 1.0, 0.0);
    let env = envelope_near_pole(&p, &[0.1, 0.01, 0.001]).unwrap();
    assert!(env[0].1 < env[1].1 && env[1].1 < env[2].1);
    let near = envelope_near_pole(&p, &[0.01]).unwrap();
    assert!(near[0].1 > 2.0);
    let flat = envelope_near_pole(&Material::unit(0.0, 1.0, 0.0), &[0.1, 0.01]).unwrap();
    assert!(flat.iter().all(|(_, v)| *v == 0.0));
    assert!(matches!(envelope_near_pole(&Material::halide(), &[0.1]), Err(Error::DampedModel { .. })));
}

#[test]
fn root_helpers() {
    let r = bracket_root(|x: f64| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
    assert!((r - 2f64.sqrt()).abs() < 1e-13);
    let r = bisect(|x: f64| Ok(x.cos()), 1.0, 2.0, 1e-14).unwrap();
    assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    let (x, v) = golden_max(|x: f64| 1.0 - (x - 0.3).powi(2), 0.0, 1.0, 1e-10);
    assert!((x - 0.3).abs() < 1e-8 && (v - 1.0).abs() < 1e-15);
}
