//! Invariant suite run by `torus-triangles verify`.
//!
//! Each check cross-validates one closed form or construction against an
//! independent route. Stochastic checks use fixed seeds and a two-seed
//! policy: a check that misses its band on the first seed passes only if a
//! second, fixed seed lands inside the band.

use std::f64::consts::PI;

use serde::Serialize;

use crate::geom2d::halfplane_intersection;
use crate::overlap::{f_hht, f_hhh, f_htt, f_numeric, f_qqq, f_tqq, Estimate, OverlapMethod};
use crate::probability::{extremes_scan, moduli_average, p_closed_form, p_from_hex, p_monte_carlo, ModuliAverageConfig};
use crate::rng::substream;
use crate::shapes::{corner_triangle, hexagon, unit_square};
use crate::torus::{
    classify_triangle, dirichlet_domain, dirichlet_planes, hex_params, is_trivial_by_containment, normalizing_map,
    sample_torus_point, TauParam,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    Quick,
    Full,
}

impl Budget {
    fn overlap_samples(self) -> u64 {
        match self {
            Budget::Quick => 200_000,
            Budget::Full => 1_000_000,
        }
    }

    fn triangle_samples(self) -> u64 {
        match self {
            Budget::Quick => 200_000,
            Budget::Full => 1_000_000,
        }
    }

    fn random_taus(self) -> usize {
        match self {
            Budget::Quick => 5,
            Budget::Full => 20,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(check: &'static str, pass: bool, detail: String) -> Self {
        Self { check, pass, detail }
    }
}

const SEEDS: [u64; 2] = [20_240_901, 77_777];

/// Runs `estimate` with the first seed and, if it misses `target` by more
/// than `k` standard errors, once more with the second.
pub fn two_seed<F: Fn(u64) -> Estimate>(target: f64, k: f64, estimate: F) -> (bool, Estimate) {
    let first = estimate(SEEDS[0]);
    if first.agrees_with(target, k) {
        return (true, first);
    }
    let second = estimate(SEEDS[1]);
    (second.agrees_with(target, k), second)
}

pub fn run_suite(budget: Budget) -> Vec<CheckOutcome> {
    vec![
        spot_values(),
        hex_route(),
        sep_identity(),
        dirichlet_geometry(),
        overlap_oracle(budget),
        triangle_monte_carlo(budget),
        classifier_agreement(budget),
        moduli_average_check(),
        extremes_check(),
    ]
}

fn spot_values() -> CheckOutcome {
    let sq = p_closed_form(&TauParam::square());
    let hex = p_closed_form(&TauParam::hexagonal());
    let pass = (sq - 0.5625).abs() <= 1e-12 && (hex - 7.0 / 12.0).abs() <= 1e-12;
    CheckOutcome::new("closed-form-spot-values", pass, format!("P(i) = {sq}, P(hex) = {hex}"))
}

fn hex_route() -> CheckOutcome {
    let mut rng = substream(SEEDS[0], 1);
    let worst = (0..1000)
        .map(|_| {
            let tau = TauParam::sample(&mut rng, 3.0);
            (p_from_hex(&hex_params(&tau)) - p_closed_form(&tau)).abs()
        })
        .fold(0.0, f64::max);
    CheckOutcome::new("hex-route-matches-closed-form", worst <= 1e-12, format!("max residual {worst:e}"))
}

fn sep_identity() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        for j in 0..20 {
            let (s, t) = (0.5 * i as f64 / 19.0, 0.5 * j as f64 / 19.0);
            let combo = f_qqq() - 4.0 * f_hht(s, t).unwrap() - 2.0 * f_htt(s, t).unwrap() - 2.0 * f_tqq(s, t).unwrap();
            worst = worst.max((f_hhh(s, t).unwrap() - combo).abs());
        }
    }
    CheckOutcome::new("decomposition-identity", worst <= 1e-14, format!("max residual {worst:e}"))
}

fn dirichlet_geometry() -> CheckOutcome {
    let mut rng = substream(SEEDS[0], 2);
    let mut failures = 0;
    for _ in 0..100 {
        let tau = TauParam::sample(&mut rng, 3.0);
        let d = dirichlet_domain(&tau);
        let planes = halfplane_intersection(&dirichlet_planes(&tau));
        let by_planes = planes.map(|p| p.approx_eq(d.hexagon(), 1e-10)).unwrap_or(false);
        let area_ok = (d.hexagon().area() - tau.b()).abs() <= 1e-10;
        let h = hex_params(&tau);
        let normalized = normalizing_map(&tau)
            .apply(d.hexagon())
            .approx_eq(&hexagon(h.s(), h.t()), 1e-10);
        if !(by_planes && area_ok && normalized) {
            failures += 1;
        }
    }
    CheckOutcome::new("dirichlet-geometry", failures == 0, format!("{failures} of 100 shapes failed"))
}

fn overlap_oracle(budget: Budget) -> CheckOutcome {
    let method = OverlapMethod::monte_carlo(budget.overlap_samples()).expect("budget >= 10");
    let q = unit_square();
    let mut misses = Vec::new();
    let (ok, e) = two_seed(f_qqq(), 3.0, |seed| f_numeric(&q, &q, &q, method, seed));
    if !ok {
        misses.push(format!("QQQ {e:?}"));
    }
    for &(s, t) in &[(0.5, 0.5), (0.3, 0.2), (0.45, 0.1)] {
        let (tri, h) = (corner_triangle(s, t), hexagon(s, t));
        let cases = [
            ("TQQ", f_tqq(s, t).unwrap(), (&tri, &q, &q)),
            ("HTT", f_htt(s, t).unwrap(), (&h, &tri, &tri)),
            ("HHT", f_hht(s, t).unwrap(), (&h, &h, &tri)),
            ("HHH", f_hhh(s, t).unwrap(), (&h, &h, &h)),
        ];
        for (name, exact, (a, b, c)) in cases {
            let (ok, e) = two_seed(exact, 3.0, |seed| f_numeric(a, b, c, method, seed));
            if !ok {
                misses.push(format!("{name}({s},{t}) {e:?} vs {exact}"));
            }
        }
    }
    let detail = if misses.is_empty() {
        "13 comparisons within 3σ".to_string()
    } else {
        misses.join("; ")
    };
    CheckOutcome::new("overlap-closed-forms-vs-oracle", misses.is_empty(), detail)
}

fn triangle_monte_carlo(budget: Budget) -> CheckOutcome {
    let n = budget.triangle_samples();
    let mut rng = substream(SEEDS[0], 3);
    let mut taus = vec![TauParam::square(), TauParam::hexagonal()];
    taus.extend((0..budget.random_taus()).map(|_| TauParam::sample(&mut rng, 3.0)));
    let misses: Vec<String> = taus
        .iter()
        .filter_map(|tau| {
            let exact = p_closed_form(tau);
            let (ok, e) = two_seed(exact, 4.0, |seed| p_monte_carlo(tau, n, seed).expect("n >= 100"));
            (!ok).then(|| format!("tau = {tau}: {e:?} vs {exact}"))
        })
        .collect();
    CheckOutcome::new(
        "triangle-simulation-vs-closed-form",
        misses.is_empty(),
        format!("{} shapes, n = {n}, {} outside 4σ {}", taus.len(), misses.len(), misses.join("; ")),
    )
}

fn classifier_agreement(budget: Budget) -> CheckOutcome {
    let (shapes, triples) = match budget {
        Budget::Quick => (3, 10_000),
        Budget::Full => (10, 100_000),
    };
    let mut rng = substream(SEEDS[0], 4);
    let mut disagreements = 0;
    for _ in 0..shapes {
        let tau = TauParam::sample(&mut rng, 3.0);
        let d = dirichlet_domain(&tau);
        for _ in 0..triples {
            let (x1, x2, x3) = (
                sample_torus_point(&mut rng),
                sample_torus_point(&mut rng),
                sample_torus_point(&mut rng),
            );
            let by_sum = classify_triangle(&x1, &x2, &x3, &tau).is_trivial();
            if by_sum != is_trivial_by_containment(&x1, &x2, &x3, &d) {
                disagreements += 1;
            }
        }
    }
    CheckOutcome::new(
        "classifier-sum-vs-containment",
        disagreements == 0,
        format!("{disagreements} disagreements over {} triples", shapes * triples),
    )
}

fn moduli_average_check() -> CheckOutcome {
    let expected = (13.0 - 3.0 * 3f64.sqrt() / PI) / 20.0;
    let cfg = ModuliAverageConfig::new(100.0, 1e-6, true).expect("valid config");
    match moduli_average(&cfg) {
        Ok(avg) => {
            let pass = (avg.value - expected).abs() <= 5e-4 && (avg.volume - PI / 3.0).abs() <= 1e-4;
            CheckOutcome::new(
                "moduli-average",
                pass,
                format!("value {} (expected {expected}), volume {}", avg.value, avg.volume),
            )
        }
        Err(e) => CheckOutcome::new("moduli-average", false, e.to_string()),
    }
}

fn extremes_check() -> CheckOutcome {
    match extremes_scan(256) {
        Ok(ext) => {
            let (min_tau, min) = ext.min;
            let (max_tau, max) = ext.max;
            let pass = (min - 0.5625).abs() <= 1e-12
                && min_tau.a() == 0.0
                && (max - 7.0 / 12.0).abs() <= 1e-4
                && (max_tau.a() - 0.5).abs() <= 1e-2
                && (max_tau.b() - 3f64.sqrt() / 2.0).abs() <= 1e-2;
            CheckOutcome::new(
                "extremes",
                pass,
                format!("min {min} at {min_tau}, max {max} at {max_tau}"),
            )
        }
        Err(e) => CheckOutcome::new("extremes", false, e.to_string()),
    }
}
