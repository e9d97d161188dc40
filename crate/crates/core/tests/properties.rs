use proptest::prelude::*;
use revolve_core::constructors::{make_m0, make_m_alpha, make_sphere_profile};
use revolve_core::cutlocus::{distance, CutOptions};
use revolve_core::geodesic::{shoot, shoot_with, ShootOptions};
use revolve_core::{Branch, ProfileFunction, SurfaceOfRevolution};
use std::f64::consts::PI;

fn family(k: usize) -> ProfileFunction {
    match k {
        0 => make_m0(),
        1 => make_m_alpha(0.25).unwrap(),
        2 => ProfileFunction::round_sphere(),
        3 => make_sphere_profile(0.5, 0.02).unwrap().1,
        _ => make_sphere_profile(0.5, -0.017).unwrap().1,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn jets_match_central_differences(k in 0usize..5, frac in 0.05f64..0.95) {
        let p = family(k);
        let x = frac * p.upper_end().min(8.0);
        let h = 1e-5;
        let j = p.jet(x);
        for order in 0..3 {
            let fd = (p.jet(x + h).d(order) - p.jet(x - h).d(order)) / (2.0 * h);
            let scale = 1.0 + j.d(order + 1).abs();
            prop_assert!((fd - j.d(order + 1)).abs() < 1e-5 * scale, "order {} at {}: {} vs {}", order + 1, x, fd, j.d(order + 1));
        }
    }

    #[test]
    fn increasing_branch_round_trip(k in 0usize..5, frac in 0.0f64..1.0) {
        let p = family(k);
        let peak = p.peak_radius().unwrap();
        let x = 0.01 + frac * (peak - 0.06);
        let back = p.branch_inverse(Branch::Increasing, p.value(x)).unwrap();
        prop_assert!((back - x).abs() <= 1e-10);
    }

    #[test]
    fn decreasing_branch_round_trip(k in 0usize..5, frac in 0.0f64..1.0) {
        let p = family(k);
        let peak = p.peak_radius().unwrap();
        let end = p.second_critical().unwrap_or(p.upper_end().min(50.0));
        let x = peak + 0.05 + frac * (end - peak - 0.06);
        let back = p.branch_inverse(Branch::Decreasing, p.value(x)).unwrap();
        prop_assert!((back - x).abs() <= 1e-10);
    }

    #[test]
    fn normalize_is_idempotent(lambda in 0.2f64..5.0, x in 0.0f64..20.0) {
        let scaled = ProfileFunction::scaled(&make_m0(), lambda).unwrap();
        let once = scaled.normalize().unwrap();
        let twice = once.normalize().unwrap();
        prop_assert!((once.peak_radius().unwrap() - 1.0).abs() < 1e-12);
        prop_assert_eq!(once.value(x), twice.value(x));
    }

    #[test]
    fn shoots_keep_clairaut_and_speed(k in 0usize..5, frac in 0.05f64..0.95, sigma in -PI..PI) {
        let p = family(k);
        let r0 = frac * p.upper_end().min(4.0);
        let path = shoot(&SurfaceOfRevolution::from_profile(p.clone()), (r0, 0.0), sigma, 8.0, 1e-9).unwrap();
        prop_assert!(path.max_clairaut_drift(&p) <= 1e-6);
        prop_assert!(path.max_speed_defect(&p) <= 1e-6);
    }

    #[test]
    fn mirrored_angle_negates_theta(k in 0usize..5, frac in 0.05f64..0.95, sigma in 0.01f64..3.1) {
        let p = family(k);
        let surf = SurfaceOfRevolution::from_profile(p.clone());
        let r0 = frac * p.upper_end().min(4.0);
        let opts = ShootOptions { keep_dense: true, ..ShootOptions::default() };
        let a = shoot_with(&surf, (r0, 0.0), sigma, 6.0, &opts).unwrap();
        let b = shoot_with(&surf, (r0, 0.0), -sigma, 6.0, &opts).unwrap();
        let len = a.length().min(b.length());
        for i in 0..=20 {
            let t = len * i as f64 / 20.0;
            let (sa, sb) = (a.state_at(&p, t).unwrap(), b.state_at(&p, t).unwrap());
            prop_assert!((sa.r - sb.r).abs() < 1e-12);
            prop_assert!((sa.theta + sb.theta).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, ..ProptestConfig::default() })]

    #[test]
    fn distance_is_reflection_invariant(ra in 0.3f64..3.0, rb in 0.3f64..3.0, th in 0.2f64..3.0) {
        let surf = SurfaceOfRevolution::from_profile(make_m0());
        let opts = CutOptions { fan_size: 128, ..CutOptions::default() };
        let d = distance(&surf, (ra, 0.0), (rb, th), &opts).unwrap();
        let m = distance(&surf, (ra, 0.0), (rb, -th), &opts).unwrap();
        let back = distance(&surf, (rb, th), (ra, 0.0), &opts).unwrap();
        prop_assert!((d - m).abs() <= 1e-8);
        prop_assert!((d - back).abs() <= 2.0 * opts.tol);
    }
}
