use blochkit_core::dispersion1d::*;
use blochkit_core::field1d::{dispersion_residual, evaluate_field, mode_coefficients};
use blochkit_core::lattice::*;
use blochkit_core::permittivity::*;
use blochkit_core::resonance_md::mod_floor;
use blochkit_core::{Complex64, Material};
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn absorbing_sign(alpha in 0.0..5.0f64, beta in 0.0..3.0f64, gamma in 0.0..2.0f64, w in 0.0..30.0f64) {
        let p = Material::unit(alpha, beta, gamma);
        if let Ok(e) = eval_permittivity(&p, w) {
            prop_assert!(e.im >= 0.0);
            let expect = gamma * w * alpha;
            prop_assert_eq!(e.im > 0.0, expect > 0.0);
        }
    }

    #[test]
    fn singular_residual(beta in 0.01..5.0f64, gamma in 0.0..5.0f64) {
        let p = Material::unit(1.0, beta, gamma);
        let s = singular_frequencies(&p).unwrap();
        prop_assert!(p.denominator(s.omega_plus).norm() < 1e-12);
        prop_assert!(p.denominator(s.omega_minus).norm() < 1e-12);
    }

    #[test]
    fn both_branches_solve(w in 1e-6..20.0f64) {
        let p = Material::halide();
        let b = solve_kappa(&p, w).unwrap();
        for k in [b.kappa_plus, b.kappa_minus] {
            prop_assert!(((k * 2.0).cos() - b.f_value).norm() < 1e-9);
        }
        prop_assert!(b.kappa_plus.im >= 0.0);
        prop_assert!(b.kappa_plus.re >= -PI / 2.0 && b.kappa_plus.re < PI / 2.0);
        prop_assert!(fold_kappa(b.kappa_plus.re + b.kappa_minus.re).abs() < 1e-9);
    }

    #[test]
    fn quadratic_product(w in 1e-3..20.0f64) {
        let f = rhs_f(&Material::halide(), w).unwrap();
        let (a, b) = quadratic_roots(f);
        prop_assert!((a * b - 1.0).norm() < 1e-9);
    }

    #[test]
    fn routes_agree(w in 1e-3..20.0f64) {
        let p = Material::halide();
        let b = solve_kappa(&p, w).unwrap();
        let f = b.f_value;
        let (l1, l2) = l1_l2(&p, w).unwrap();
        prop_assert!((l1 - f.re).abs() < 1e-10 && (l2 + f.im).abs() < 1e-10);
        let mut best = f64::INFINITY;
        for s in [1, -1] {
            let (k1, k2) = kappa_re_im(&p, w, s).unwrap();
            for k in [b.kappa_plus, b.kappa_minus] {
                let d = circular(k1, k.re).max((k2 - k.im).abs());
                best = best.min(d);
            }
        }
        prop_assert!(best < 1e-8);
    }

    #[test]
    fn real_permittivity_dichotomy(alpha in 0.1..4.0f64, w in 1e-3..20.0f64) {
        let p = Material::unit(alpha, 0.0, 0.0);
        let k = solve_kappa(&p, w).unwrap().kappa_plus;
        let evanescent = k.im.abs() >= 1e-8;
        let edge = (2.0 * k.re).sin().abs() < 1e-8;
        prop_assert!(!evanescent ^ edge);
    }

    #[test]
    fn field_closure(w in 1e-3..20.0f64) {
        let p = Material::halide();
        let b = solve_kappa(&p, w).unwrap();
        prop_assert!(dispersion_residual(&p, w, b.kappa_plus).unwrap() < 1e-8);
        prop_assert!(dispersion_residual(&p, w, b.kappa_minus).unwrap() < 1e-8);
    }

    #[test]
    fn gauge_phase(w in 0.1..10.0f64, t in 0.0..std::f64::consts::TAU) {
        let p = Material::halide();
        let k = solve_kappa(&p, w).unwrap().kappa_plus;
        let m = mode_coefficients(&p, w, k).unwrap();
        let mut n = m;
        let g = Complex64::from_polar(1.0, t);
        n.a *= g;
        n.b *= g;
        for x in [-1.0, -0.3, 0.0, 0.6, 1.0] {
            let a = evaluate_field(&p, w, k, &m, x).unwrap();
            let b = evaluate_field(&p, w, k, &n, x).unwrap();
            prop_assert!((a.norm() - b.norm()).abs() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn duality_and_fold(a in 0.5..2.0f64, b in 0.5..2.0f64, t in 0.3..2.8f64, k0 in -20.0..20.0f64, k1 in -20.0..20.0f64) {
        let s = LatticeSpec::new(vec![vec![a, 0.0], vec![b * t.cos(), b * t.sin()]]).unwrap();
        prop_assert!(s.duality_residual() < 1e-12);
        let f = fold_to_brillouin(&[k0, k1], &s);
        let g = fold_to_brillouin(&f, &s);
        prop_assert!((f[0] - g[0]).abs() < 1e-9 && (f[1] - g[1]).abs() < 1e-9);
        for l in &s.generators {
            let c = dot(&f, l) / (2.0 * PI);
            prop_assert!((-0.5 - 1e-9..0.5 + 1e-9).contains(&c));
        }
    }

    #[test]
    fn enumeration_is_symmetric(r in 0.0..5.0f64) {
        let s = LatticeSpec::new(vec![vec![1.0, 0.0], vec![0.3, 0.8]]).unwrap();
        let pts = lattice_points_within(&s, r);
        prop_assert!(pts.iter().all(|p| p.norm() <= r + 1e-9));
        for p in &pts {
            let neg: Vec<i64> = p.coeffs.iter().map(|c| -c).collect();
            prop_assert!(pts.iter().any(|q| q.coeffs == neg));
        }
    }
}

fn circular(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

#[test]
fn modified_modulo_range() {
    for m in 1..=100u64 {
        for n in 1..=10u64 {
            let r = mod_floor(m, n);
            assert!(r >= 1 && r <= n);
            assert_eq!((m - r) % n, 0);
        }
    }
}
