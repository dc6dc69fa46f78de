//! The triple-overlap invariant
//!
//! ```text
//! F(A, B, C) = ∫_{a ∈ A} area(B ∩ (C + a)) da
//! ```
//!
//! Closed forms are given for the square / corner-triangle / hexagon family
//! of [`crate::shapes`]; [`f_numeric`] evaluates `F` for arbitrary convex
//! polygons by Monte Carlo or by midpoint quadrature and serves as the
//! oracle for every closed form.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geom2d::{AffineMap, ConvexPolygon, Vec2};
use crate::rng::{batches, substream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OverlapError {
    #[error("budget must be at least 10, got {0}")]
    BudgetTooSmall(u64),
    #[error("shape parameters must lie in [0, 1/2]: s = {s}, t = {t}")]
    OutOfRange { s: f64, t: f64 },
}

/// Result of a numeric evaluation. Deterministic methods report
/// `std_error = 0`, `seed = 0` and the number of cells in `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            mean: value,
            std_error: 0.0,
            n: 1,
            seed: 0,
        }
    }

    /// `|mean − target| ≤ k·std_error`.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapKind {
    MonteCarlo,
    MidpointQuadrature,
}

impl OverlapKind {
    pub fn name(&self) -> &'static str {
        match self {
            OverlapKind::MonteCarlo => "monte-carlo",
            OverlapKind::MidpointQuadrature => "midpoint-quadrature",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OverlapMethod {
    kind: OverlapKind,
    budget: u64,
}

impl OverlapMethod {
    pub fn new(kind: OverlapKind, budget: u64) -> Result<Self, OverlapError> {
        if budget < 10 {
            return Err(OverlapError::BudgetTooSmall(budget));
        }
        Ok(Self { kind, budget })
    }

    pub fn monte_carlo(budget: u64) -> Result<Self, OverlapError> {
        Self::new(OverlapKind::MonteCarlo, budget)
    }

    pub fn quadrature(budget: u64) -> Result<Self, OverlapError> {
        Self::new(OverlapKind::MidpointQuadrature, budget)
    }

    pub fn kind(&self) -> OverlapKind {
        self.kind
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }
}

/// `a ↦ area(B ∩ (C + a))`.
#[inline]
pub fn overlap_area(b: &ConvexPolygon, c: &ConvexPolygon, shift: Vec2) -> f64 {
    b.intersect(&c.translate(shift)).area()
}

/// Image of `(A, B, C)` under `x ↦ Mx + u`. `A` ranges over translation
/// vectors, so only `M` acts on it; `B` and `C` get the full map. `F` is
/// invariant under this action whenever `det M = 1`.
pub fn act_on_triple(
    g: &AffineMap,
    a: &ConvexPolygon,
    b: &ConvexPolygon,
    c: &ConvexPolygon,
) -> (ConvexPolygon, ConvexPolygon, ConvexPolygon) {
    let [[m11, m12], [m21, m22]] = g.matrix();
    let linear = AffineMap::linear(m11, m12, m21, m22).expect("a valid map has a valid linear part");
    (linear.apply(a), g.apply(b), g.apply(c))
}

/// Numeric `F(A, B, C)`.
///
/// Monte Carlo draws `a` uniformly from `A` by rejection from its bounding
/// box and scales the sample mean by `area(A)`. Quadrature fans `A` from its
/// vertex mean, splits every fan triangle into `k²` congruent cells and
/// evaluates the integrand at cell centroids.
pub fn f_numeric(
    a: &ConvexPolygon,
    b: &ConvexPolygon,
    c: &ConvexPolygon,
    method: OverlapMethod,
    seed: u64,
) -> Estimate {
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Estimate::exact(0.0);
    }
    match method.kind {
        OverlapKind::MonteCarlo => monte_carlo(a, b, c, method.budget, seed),
        OverlapKind::MidpointQuadrature => quadrature(a, b, c, method.budget),
    }
}

/// `F` of finite disjoint unions, by additivity in each argument. Each term
/// uses its own seed so the errors combine in quadrature.
pub fn f_numeric_union(
    a: &[ConvexPolygon],
    b: &[ConvexPolygon],
    c: &[ConvexPolygon],
    method: OverlapMethod,
    seed: u64,
) -> Estimate {
    let mut mean = 0.0;
    let mut var = 0.0;
    let mut n = 0;
    let mut term = 0u64;
    for pa in a {
        for pb in b {
            for pc in c {
                let e = f_numeric(pa, pb, pc, method, seed.wrapping_add(term.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
                mean += e.mean;
                var += e.std_error * e.std_error;
                n += e.n;
                term += 1;
            }
        }
    }
    Estimate {
        mean,
        std_error: var.sqrt(),
        n: n.max(1),
        seed,
    }
}

fn monte_carlo(a: &ConvexPolygon, b: &ConvexPolygon, c: &ConvexPolygon, budget: u64, seed: u64) -> Estimate {
    use rand::Rng;
    let (lo, hi) = a.bounding_box().expect("non-empty");
    let span = hi - lo;
    let parts: Vec<(f64, f64)> = batches(budget)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(stream, len)| {
            let mut rng = substream(seed, stream);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            let mut taken = 0;
            while taken < len {
                let p = Vec2::new(lo.x + span.x * rng.random::<f64>(), lo.y + span.y * rng.random::<f64>());
                if !a.contains(p, 0.0) {
                    continue;
                }
                let v = overlap_area(b, c, p);
                sum += v;
                sum_sq += v * v;
                taken += 1;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = parts.iter().fold((0.0, 0.0), |(s, q), &(ps, pq)| (s + ps, q + pq));
    let n = budget as f64;
    let mean = sum / n;
    let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    let area = a.area();
    Estimate {
        mean: area * mean,
        std_error: area * (var / n).sqrt(),
        n: budget,
        seed,
    }
}

fn quadrature(a: &ConvexPolygon, b: &ConvexPolygon, c: &ConvexPolygon, budget: u64) -> Estimate {
    let verts = a.vertices();
    let centre = a.vertex_mean().expect("non-empty");
    let fans = verts.len() as u64;
    let k = ((budget as f64 / fans as f64).sqrt().floor() as u64).max(1);
    let per_fan: Vec<f64> = (0..verts.len())
        .into_par_iter()
        .map(|i| {
            let p1 = verts[i];
            let p2 = verts[(i + 1) % verts.len()];
            let cell_area = 0.5 * (p1 - centre).cross(p2 - centre) / (k * k) as f64;
            let e1 = (p1 - centre) * (1.0 / k as f64);
            let e2 = (p2 - centre) * (1.0 / k as f64);
            let node = |i: u64, j: u64| centre + e1 * i as f64 + e2 * j as f64;
            let mut sum = 0.0;
            for i in 0..k {
                for j in 0..(k - i) {
                    let (q0, q1, q2) = (node(i, j), node(i + 1, j), node(i, j + 1));
                    sum += overlap_area(b, c, centroid(q0, q1, q2));
                    if i + j + 1 < k {
                        let q3 = node(i + 1, j + 1);
                        sum += overlap_area(b, c, centroid(q1, q3, q2));
                    }
                }
            }
            sum * cell_area
        })
        .collect();
    Estimate {
        mean: per_fan.iter().sum(),
        std_error: 0.0,
        n: fans * k * k,
        seed: 0,
    }
}

#[inline]
fn centroid(p: Vec2, q: Vec2, r: Vec2) -> Vec2 {
    (p + q + r) * (1.0 / 3.0)
}

fn check_range(s: f64, t: f64) -> Result<(), OverlapError> {
    if (0.0..=0.5).contains(&s) && (0.0..=0.5).contains(&t) {
        Ok(())
    } else {
        Err(OverlapError::OutOfRange { s, t })
    }
}

/// `F(Q, Q, Q) = 9/16`.
pub const fn f_qqq() -> f64 {
    9.0 / 16.0
}

/// `F(T, Q, Q) = (st/24)(3 + 2s + 2t + st)`.
pub fn f_tqq(s: f64, t: f64) -> Result<f64, OverlapError> {
    check_range(s, t)?;
    Ok(s * t / 24.0 * (3.0 + 2.0 * s + 2.0 * t + s * t))
}

/// `F(H, T, T) = area(T)² = s²t²/4`, because `T ⊖ T ⊆ H`.
pub fn f_htt(s: f64, t: f64) -> Result<f64, OverlapError> {
    check_range(s, t)?;
    Ok(s * s * t * t / 4.0)
}

/// `F(H, H, T) = (st/24)(3 + 2s + 2t − 11st)`.
pub fn f_hht(s: f64, t: f64) -> Result<f64, OverlapError> {
    check_range(s, t)?;
    Ok(s * t / 24.0 * (3.0 + 2.0 * s + 2.0 * t - 11.0 * s * t))
}

/// `F(H, H, H) = 9/16 − 3st/4 − s²t/2 − st²/2 + 5s²t²/4`.
pub fn f_hhh(s: f64, t: f64) -> Result<f64, OverlapError> {
    check_range(s, t)?;
    let st = s * t;
    Ok(9.0 / 16.0 - 0.75 * st - 0.5 * st * s - 0.5 * st * t + 1.25 * st * st)
}
