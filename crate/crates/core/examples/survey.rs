//! Prints the empirical constants the checks in `verify` and the acceptance
//! suite are pinned to.
//!
//! cargo run --release -p condpoly --example survey

use std::time::Instant;

use condpoly::quadrature::{scaled_log_integrand, sphere_grid};
use condpoly::sphere::spiral_probes;
use condpoly::sweep::{local_maxima, m_increments, run_sweep, SweepConfig};
use condpoly::{log_energy, residual_survey, Construction, Method, ProbeSampler, SpherePoint};

fn main() {
    let t = Instant::now();
    let (mut sep, mut cov) = ((f64::MAX, 0.0f64), (f64::MAX, 0.0f64));
    for n in 16..=1024 {
        let c = Construction::erres(n).unwrap();
        let probes = ProbeSampler::SpiralWithMidpoints(10_000).sample(&c.points);
        let s = c.points.separation().unwrap() * (n as f64).sqrt();
        let v = c.points.covering(&probes) * (n as f64).sqrt();
        sep = (sep.0.min(s), sep.1.max(s));
        cov = (cov.0.min(v), cov.1.max(v));
    }
    println!("separation*sqrtN in [{:.4}, {:.4}]", sep.0, sep.1);
    println!("covering*sqrtN   in [{:.4}, {:.4}]", cov.0, cov.1);
    println!("  ({:.1}s)", t.elapsed().as_secs_f64());

    for n in [16, 64, 256, 1024] {
        let c = Construction::erres(n).unwrap();
        let r = residual_survey(&c.points, ProbeSampler::SpiralWithMidpoints(10_000)).unwrap();
        let members = r.at_point_values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        println!(
            "residual N={n}: probes [{:.4}, {:.4}] members {:.4} max|.| {:.4}",
            r.residual_min,
            r.residual_max,
            members,
            r.max_abs()
        );
    }

    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for n in 64..=1024 {
        let e = log_energy(&Construction::erres(n).unwrap().points).unwrap();
        lo = lo.min(e.deficit);
        hi = hi.max(e.deficit);
    }
    println!("energy deficit over 64..1024 in [{lo:.4}, {hi:.4}]");

    let rows = run_sweep(&SweepConfig::new(16, 256, 4, Method::Coefficient)).unwrap();
    let early = rows
        .iter()
        .filter(|r| r.n <= 64)
        .map(|r| r.mu_over_sqrt_n)
        .fold(0.0, f64::max);
    let all = rows.iter().map(|r| r.mu_over_sqrt_n).fold(0.0, f64::max);
    let min = rows
        .iter()
        .map(|r| r.mu_over_sqrt_n)
        .fold(f64::MAX, f64::min);
    println!("mu/sqrtN: max16..64 {early:.4} max16..256 {all:.4} min {min:.4}");
    println!("  M increments {:?}", m_increments(&rows));
    println!("  local maxima {:?}", local_maxima(&rows));
    for r in &rows {
        println!("  {} {} {:.6}", r.n, r.m, r.mu_over_sqrt_n);
    }

    for n in [16, 32, 64, 128, 256] {
        let c = Construction::erres(n).unwrap();
        let a = c.mu_coefficient().unwrap().mu_max;
        let b = c.mu_spherical().unwrap().mu_max;
        println!(
            "N={n}: coeff {a:.12} spherical {b:.12} rel {:.3e}",
            (a - b).abs() / a
        );
    }

    let probes = spiral_probes(20_000);
    for n in [16, 64, 256, 1024] {
        let c = Construction::erres(n).unwrap();
        let g = sphere_grid(256, 256).unwrap();
        let mut best = f64::MIN;
        for l in 0..g.latitude_count() {
            for (q, _) in g.row(l) {
                best = best.max(scaled_log_integrand(&c.points, &q));
            }
        }
        for q in &probes {
            best = best.max(scaled_log_integrand(&c.points, q));
        }
        println!("N={n}: max e^G {:.4}", best.exp());
    }

    let target = std::f64::consts::LN_2 - 0.5;
    for p in [
        SpherePoint::NORTH,
        SpherePoint::normalized(0.3, -0.4, 0.5),
        SpherePoint::normalized(1.0, 0.0, 0.0),
    ] {
        let v = sphere_grid(256, 256)
            .unwrap()
            .integrate(|q| q.dist(&p).ln());
        println!("int log|q-p| at {:?}: err {:.3e}", p.to_array(), v - target);
    }
}
