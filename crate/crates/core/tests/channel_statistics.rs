use std::f64::consts::PI;

use irs_relay::channel::{link_scale, sample_channels, Geometry, Link, LinkBudget};

#[test]
fn second_moment_matches_link_scale() {
    let g = Geometry::default();
    let b = LinkBudget::default();
    let n = 100_000;
    let mut acc = [0.0f64; 6];
    for seed in 0..n {
        let ch = sample_channels(&g, &b, 1, 1, seed).unwrap();
        let draws = [ch.h_sr[0], ch.h_ir[(0, 0)], ch.h_si[0], ch.h_rd[0], ch.h_id[0], ch.h_ri[(0, 0)]];
        for (a, d) in acc.iter_mut().zip(draws) {
            *a += d.norm_sqr();
        }
    }
    for (link, a) in Link::ALL.into_iter().zip(acc) {
        let expected = link_scale(&g, &b, link).unwrap().powi(2);
        let measured = a / n as f64;
        let rel = (measured / expected - 1.0).abs();
        assert!(rel < 0.02, "{}: E|h|^2 = {measured:e}, expected {expected:e}", link.name());
    }
}

#[test]
fn phases_are_uniform() {
    let n = 10_000;
    let mut phases: Vec<f64> = (0..n as u64)
        .map(|seed| {
            let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 1, 1, seed).unwrap();
            (ch.h_si[0].arg() + PI) / (2.0 * PI)
        })
        .collect();
    phases.sort_by(f64::total_cmp);
    let d = phases
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / n as f64 - x).max(x - i as f64 / n as f64))
        .fold(0.0, f64::max);
    let critical = 1.628 / (n as f64).sqrt();
    assert!(d < critical, "KS statistic {d} exceeds {critical}");
}

#[test]
fn entries_decorrelated_across_links() {
    let n = 20_000;
    let mut cross = irs_relay::linalg::C64::new(0.0, 0.0);
    let mut p1 = 0.0;
    let mut p2 = 0.0;
    for seed in 0..n {
        let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 1, 1, seed).unwrap();
        cross += ch.h_sr[0] * ch.h_rd[0].conj();
        p1 += ch.h_sr[0].norm_sqr();
        p2 += ch.h_rd[0].norm_sqr();
    }
    let rho = cross.norm() / (p1 * p2).sqrt();
    assert!(rho < 4.0 / (n as f64).sqrt(), "correlation {rho}");
}
