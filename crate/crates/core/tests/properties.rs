use std::f64::consts::PI;

use condpoly::quadrature::{
    corrected_midpoint, default_grid_size, gauss_legendre, scaled_log_integrand,
    SCALED_INTEGRAND_BOUND,
};
use condpoly::sphere::{nearest_brute_force, Rotation};
use condpoly::{
    fp, kappa, layout, log_energy, mu_norm_spherical, partition_custom, partition_erres, residual,
    roots, sphere_grid, stereo_to_plane, stereo_to_sphere, Construction, SpherePoint,
    SpherePointSet,
};
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

fn unit_vector() -> impl Strategy<Value = SpherePoint> {
    (-1.0f64..1.0, 0.0..2.0 * PI).prop_map(|(t, phi)| SpherePoint::on_parallel(t, phi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stereographic_round_trip(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let w = Complex64::new(re, im);
        let back = stereo_to_plane(&stereo_to_sphere(w)).finite().unwrap();
        prop_assert!((back - w).norm() <= 1e-14 * w.norm().max(1.0));
    }

    #[test]
    fn custom_partitions_keep_their_invariants(half in prop::collection::vec(1i64..40, 2..8)) {
        let m = half.len();
        let n = half[m - 1] + 2 * half[..m - 1].iter().sum::<i64>();
        let c2 = Ratio::from_integer(40);
        if let Ok(p) = partition_custom(n, &half, Ratio::from_integer(1), c2) {
            let l = layout(&p);
            prop_assert_eq!(l.total_points() as i64, n);
            let pars = l.parallels();
            prop_assert!(pars.windows(2).all(|w| w[0].height > w[1].height));
            for (a, b) in pars.iter().zip(pars.iter().rev()) {
                prop_assert_eq!(a.height, -b.height);
                prop_assert_eq!(a.count, b.count);
            }
        }
    }

    #[test]
    fn corrected_midpoint_exact_on_cubics(
        c in prop::array::uniform4(-20i64..20),
        a in -10i64..10,
        w in 1i64..10,
    ) {
        let q = Ratio::<i64>::from_integer;
        let (a, b) = (q(a), q(a + w));
        let f = |x: Ratio<i64>| q(c[0]) + q(c[1]) * x + q(c[2]) * x * x + q(c[3]) * x * x * x;
        let df = |x: Ratio<i64>| q(c[1]) + q(2 * c[2]) * x + q(3 * c[3]) * x * x;
        let anti = |x: Ratio<i64>| {
            q(c[0]) * x + q(c[1]) * x * x / 2 + q(c[2]) * x * x * x / 3 + q(c[3]) * x * x * x * x / 4
        };
        prop_assert_eq!(corrected_midpoint(f, (df(a), df(b)), a, b), anti(b) - anti(a));
    }

    #[test]
    fn mean_of_fp_is_minus_kappa(c in -0.999f64..0.999) {
        // split at the kink t = c
        let gl = gauss_legendre(200);
        let part = |lo: f64, hi: f64| -> f64 {
            let (m, r) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
            gl.iter().map(|&(x, w)| w * r * fp(m + r * x, c)).sum()
        };
        let v = 0.5 * (part(-1.0, c) + part(c, 1.0));
        prop_assert!((v + kappa()).abs() < 1e-8);
    }

    #[test]
    fn fp_is_symmetric(h in -1.0f64..1.0, c in -1.0f64..1.0) {
        prop_assert_eq!(fp(h, c), fp(c, h));
    }

    #[test]
    fn nearest_matches_brute_force(
        pts in prop::collection::vec(unit_vector(), 2..120),
        probes in prop::collection::vec(unit_vector(), 1..40),
    ) {
        let set = SpherePointSet::from_points(pts.clone());
        for q in &probes {
            prop_assert_eq!(set.nearest(q), nearest_brute_force(&pts, q));
        }
    }

    #[test]
    fn residual_is_mirror_symmetric(n in 16i64..400, q in unit_vector()) {
        let c = Construction::erres(n).unwrap();
        let (a, b) = (residual(&c.points, &q), residual(&c.points, &q.mirrored()));
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn member_residual_identity(n in 16i64..300) {
        let c = Construction::erres(n).unwrap();
        let pts = c.points.points();
        let nf = n as f64;
        for (i, p) in pts.iter().enumerate().step_by(7) {
            let log_prod: f64 = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| p.dist(q).ln()).sum();
            let closed = 0.5 * (2.0 * log_prod + 2.0 * kappa() * nf - nf.ln());
            prop_assert!((residual(&c.points, p) - closed).abs() < 1e-12 * nf.max(1.0));
        }
    }

    #[test]
    fn scaled_integrand_bounded(n in 16i64..1024, q in unit_vector()) {
        let c = Construction::erres(n).unwrap();
        let v = scaled_log_integrand(&c.points, &q).exp();
        prop_assert!((0.0..=SCALED_INTEGRAND_BOUND).contains(&v));
    }

    #[test]
    fn roots_closed_under_inversion(n in 16i64..400) {
        let c = Construction::erres(n).unwrap();
        let r = roots(&c.polynomial).roots;
        for w in r.iter().step_by(5) {
            let inv = 1.0 / w.conj();
            let best = r.iter().map(|z| (z - inv).norm() / inv.norm().max(1.0)).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn energy_is_rotation_invariant(
        n in 16i64..256,
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in 0.0..2.0 * PI,
    ) {
        prop_assume!(axis.iter().map(|a| a * a).sum::<f64>() > 1e-3);
        let c = Construction::erres(n).unwrap();
        let e = log_energy(&c.points).unwrap().energy;
        let r = log_energy(&c.points.rotated(&Rotation::from_axis_angle(axis, angle))).unwrap().energy;
        prop_assert!((e - r).abs() <= 1e-9 * e.abs());
    }

    #[test]
    fn spherical_mu_is_rotation_invariant(
        n in 16i64..64,
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in 0.0..2.0 * PI,
    ) {
        prop_assume!(axis.iter().map(|a| a * a).sum::<f64>() > 1e-3);
        let c = Construction::erres(n).unwrap();
        let (l, k) = default_grid_size(n as usize);
        let g = sphere_grid(l, k).unwrap();
        let a = mu_norm_spherical(&c.points, &g).unwrap().mu_max;
        let b = mu_norm_spherical(&c.points.rotated(&Rotation::from_axis_angle(axis, angle)), &g).unwrap().mu_max;
        prop_assert!((a - b).abs() <= 1e-6 * a);
    }
}

#[test]
fn erres_partitions_exist_from_sixteen() {
    assert!(partition_erres(15).is_err());
    for n in [16, 17, 35, 36, 2048] {
        assert_eq!(partition_erres(n).unwrap().degree(), n);
    }
}
