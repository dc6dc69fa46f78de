//! Probability that three uniform points on a flat torus span a
//! contractible geodesic triangle: closed form, hexagon-parameter form,
//! the overlap-invariant route, Monte Carlo, extreme values and the average
//! over the modular domain with its hyperbolic measure `da db / b²`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cubature::{self, Rect};
use crate::overlap::{f_hhh, f_numeric, Estimate, OverlapMethod};
use crate::rng::{batches, substream};
use crate::torus::{classify_triangle, dirichlet_domain, sample_torus_point, HexParams, TauParam};

/// Hyperbolic area of the modular domain.
pub const MODULAR_VOLUME: f64 = PI / 3.0;

/// `P(τ) = Σ coef · |a|^j / b^k`, as `(coef, j, k)`.
pub const P_MONOMIALS: [(f64, i32, i32); 6] = [
    (9.0 / 16.0, 0, 0),
    (3.0 / 8.0, 2, 2),
    (-0.5, 3, 2),
    (-0.5, 3, 4),
    (17.0 / 16.0, 4, 4),
    (-0.5, 5, 4),
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbabilityError {
    #[error("need at least 100 samples, got {0}")]
    TooFewSamples(u64),
    #[error("invalid moduli-average configuration: {0}")]
    BadConfig(String),
    #[error("quadrature did not reach tol = {tol} within {cells} cells (partial value {partial})")]
    NotConverged { partial: f64, cells: usize, tol: f64 },
    #[error("scan grid must have at least 16 points per axis, got {0}")]
    GridTooSmall(usize),
}

pub fn p_closed_form(tau: &TauParam) -> f64 {
    p_formula(tau.a(), tau.b())
}

/// The closed form as a function of `(a, b)`; depends on `|a|` only.
fn p_formula(a: f64, b: f64) -> f64 {
    let a = a.abs();
    let (b2, b4) = (b * b, b.powi(4));
    let (a2, a3) = (a * a, a * a * a);
    let (a4, a5) = (a2 * a2, a2 * a3);
    9.0 / 16.0 + 3.0 * a2 / (8.0 * b2) - a3 / (2.0 * b2) - a3 / (2.0 * b4) + 17.0 * a4 / (16.0 * b4)
        - a5 / (2.0 * b4)
}

/// `F(H, H, H) / area(H)²` with `area(H(s,t)) = 1 − st`.
pub fn p_from_hex(h: &HexParams) -> f64 {
    let (s, t) = (h.s(), h.t());
    let f = f_hhh(s, t).expect("HexParams lie in [0, 1/2]²");
    f / (1.0 - s * t).powi(2)
}

/// `F(D, D, D) / area(D)²` evaluated numerically on the raw Dirichlet domain.
pub fn p_from_dirichlet(tau: &TauParam, method: OverlapMethod, seed: u64) -> Estimate {
    let d = dirichlet_domain(tau);
    let hex = d.hexagon();
    let e = f_numeric(hex, hex, hex, method, seed);
    let norm = hex.area().powi(2);
    Estimate {
        mean: e.mean / norm,
        std_error: e.std_error / norm,
        ..e
    }
}

/// Fraction of `n` uniform triples whose geodesic triangle is contractible.
///
/// Work is split into fixed batches with one generator substream each, so
/// the estimate depends on `(seed, n)` only.
pub fn p_monte_carlo(tau: &TauParam, n: u64, seed: u64) -> Result<Estimate, ProbabilityError> {
    if n < 100 {
        return Err(ProbabilityError::TooFewSamples(n));
    }
    let hits: u64 = batches(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(stream, len)| {
            let mut rng = substream(seed, stream);
            (0..len)
                .filter(|_| {
                    let x1 = sample_torus_point(&mut rng);
                    let x2 = sample_torus_point(&mut rng);
                    let x3 = sample_torus_point(&mut rng);
                    classify_triangle(&x1, &x2, &x3, tau).is_trivial()
                })
                .count() as u64
        })
        .sum();
    let p = hits as f64 / n as f64;
    Ok(Estimate {
        mean: p,
        std_error: (p * (1.0 - p) / n as f64).sqrt(),
        n,
        seed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModuliAverageConfig {
    b_max: f64,
    tol: f64,
    include_tail: bool,
    max_cells: usize,
}

impl ModuliAverageConfig {
    pub fn new(b_max: f64, tol: f64, include_tail: bool) -> Result<Self, ProbabilityError> {
        if !b_max.is_finite() || b_max < 10.0 {
            return Err(ProbabilityError::BadConfig(format!("b_max must be >= 10, got {b_max}")));
        }
        if !(tol > 0.0 && tol <= 1e-2) {
            return Err(ProbabilityError::BadConfig(format!("tol must lie in (0, 1e-2], got {tol}")));
        }
        Ok(Self {
            b_max,
            tol,
            include_tail,
            max_cells: 200_000,
        })
    }

    pub fn with_max_cells(self, max_cells: usize) -> Self {
        Self { max_cells, ..self }
    }

    pub fn b_max(&self) -> f64 {
        self.b_max
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn include_tail(&self) -> bool {
        self.include_tail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModuliAverage {
    /// Average of `P` with respect to the normalized hyperbolic measure.
    pub value: f64,
    /// `∫ P da db / b²` over the truncated domain, plus the tail if enabled.
    pub integral: f64,
    /// The same quadrature applied to the constant 1; should be `π/3`.
    pub volume: f64,
    pub cells: usize,
}

/// `∫∫_{b ≥ b_max} P(a,b) / b² db da` over `a ∈ [−1/2, 1/2]`, term by term.
pub fn p_tail(b_max: f64) -> f64 {
    P_MONOMIALS
        .iter()
        .map(|&(coef, j, k)| {
            let a_part = 2.0 * 0.5f64.powi(j + 1) / (j + 1) as f64;
            let b_part = b_max.powi(-(k + 1)) / (k + 1) as f64;
            coef * a_part * b_part
        })
        .sum()
}

/// Integrates `f(a, b) / b²` over the modular domain cut at `b_max`, using
/// the symmetry `a ↦ −a`. The curved lower edge is straightened by
/// `b = lo(a) + r (b_max − lo(a))` with `lo(a) = √(1 − a²)`.
fn integrate_domain<F: Fn(f64, f64) -> f64 + Sync>(
    f: F,
    b_max: f64,
    tol: f64,
    max_cells: usize,
) -> cubature::CubatureResult {
    let rect = Rect {
        x0: 0.0,
        x1: 0.5,
        y0: 0.0,
        y1: 1.0,
    };
    let res = cubature::integrate(
        |a, r| {
            let lo = (1.0 - a * a).sqrt();
            let span = b_max - lo;
            let b = lo + r * span;
            f(a, b) / (b * b) * span
        },
        rect,
        0.5 * tol,
        max_cells,
    );
    cubature::CubatureResult {
        value: 2.0 * res.value,
        error: 2.0 * res.error,
        ..res
    }
}

/// Average of `P` over the modular domain for the hyperbolic measure,
/// normalized by `π/3`.
pub fn moduli_average(cfg: &ModuliAverageConfig) -> Result<ModuliAverage, ProbabilityError> {
    let body = integrate_domain(
        p_formula,
        cfg.b_max,
        cfg.tol,
        cfg.max_cells,
    );
    let vol = integrate_domain(|_, _| 1.0, cfg.b_max, cfg.tol, cfg.max_cells);
    let (tail, vol_tail) = if cfg.include_tail {
        (p_tail(cfg.b_max), 1.0 / cfg.b_max)
    } else {
        (0.0, 0.0)
    };
    let cells = body.cells + vol.cells;
    let integral = body.value + tail;
    if !body.converged || !vol.converged {
        return Err(ProbabilityError::NotConverged {
            partial: integral / MODULAR_VOLUME,
            cells,
            tol: cfg.tol,
        });
    }
    Ok(ModuliAverage {
        value: integral / MODULAR_VOLUME,
        integral,
        volume: vol.value + vol_tail,
        cells,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extremes {
    pub min: (TauParam, f64),
    pub max: (TauParam, f64),
}

/// Evaluates the closed form on a `grid_n × grid_n` grid over the domain:
/// `a` steps through `(−1/2, 1/2]` and `b` from the lower boundary (arc
/// included where it belongs to the domain) up to 3.
pub fn extremes_scan(grid_n: usize) -> Result<Extremes, ProbabilityError> {
    if grid_n < 16 {
        return Err(ProbabilityError::GridTooSmall(grid_n));
    }
    let mut best: Option<Extremes> = None;
    for i in 0..grid_n {
        let a = -0.5 + (i + 1) as f64 / grid_n as f64;
        let lo = (1.0 - a * a).sqrt();
        for j in 0..grid_n {
            let b = lo + (3.0 - lo) * j as f64 / (grid_n - 1) as f64;
            let Ok(tau) = TauParam::new(a, b) else { continue };
            let p = p_closed_form(&tau);
            best = Some(match best {
                None => Extremes {
                    min: (tau, p),
                    max: (tau, p),
                },
                Some(e) => Extremes {
                    min: if p < e.min.1 { (tau, p) } else { e.min },
                    max: if p > e.max.1 { (tau, p) } else { e.max },
                },
            });
        }
    }
    Ok(best.expect("grid has points inside the domain"))
}
