//! Flat tori `R² / ⟨(1,0), (a,b)⟩`: shape parameters in the modular domain,
//! Dirichlet domains, the normalizing map onto `H(s,t)`, shortest lattice
//! representatives and homotopy classes of geodesic triangles.

use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::geom2d::{AffineMap, ConvexPolygon, HalfPlane, Vec2};

/// Slack for the unit-circle boundary of the modular domain.
const ARC_TOL: f64 = 1e-12;

/// Squared-norm slack below which two lattice translates count as tied.
const TIE_TOL: f64 = 1e-12;

const MAX_REDUCTION_STEPS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("imaginary part must be positive and finite, got b = {0}")]
    NonPositiveImaginary(f64),
    #[error("tau = {a} + {b}i lies outside the modular domain (use modular reduction)")]
    OutsideModularDomain { a: f64, b: f64 },
    #[error("modular reduction did not converge within {0} steps")]
    ReductionDiverged(usize),
    #[error("hexagon parameters out of range: s = {s}, t = {t}")]
    BadHexParams { s: f64, t: f64 },
}

/// `τ = a + ib` in the modular domain: `a ∈ (−1/2, 1/2]`, `|τ| ≥ 1`, and on
/// the unit circle only the half with `a ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TauParam {
    a: f64,
    b: f64,
}

impl TauParam {
    pub fn new(a: f64, b: f64) -> Result<Self, TorusError> {
        if !b.is_finite() || b <= 0.0 {
            return Err(TorusError::NonPositiveImaginary(b));
        }
        let r = a * a + b * b;
        let inside = a.is_finite()
            && a > -0.5
            && a <= 0.5 + ARC_TOL
            && r >= 1.0 - ARC_TOL
            && !(a < 0.0 && r <= 1.0);
        if !inside {
            return Err(TorusError::OutsideModularDomain { a, b });
        }
        Ok(Self { a: a.min(0.5), b })
    }

    /// The square torus `τ = i`.
    pub fn square() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    /// The hexagonal torus `τ = 1/2 + (√3/2) i`.
    pub fn hexagonal() -> Self {
        Self {
            a: 0.5,
            b: 3f64.sqrt() / 2.0,
        }
    }

    /// Uniform `a ∈ (−1/2, 1/2]` and `b` uniform between the lower boundary
    /// of the domain and `b_max`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, b_max: f64) -> Self {
        loop {
            let a = 0.5 - rng.random::<f64>();
            let lo = (1.0 - a * a).sqrt();
            let b = lo + (b_max - lo) * rng.random::<f64>();
            if let Ok(tau) = Self::new(a, b) {
                return tau;
            }
        }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Reflection `τ ↦ −τ̄`, when it stays inside the domain.
    pub fn mirror(&self) -> Result<Self, TorusError> {
        Self::new(-self.a, self.b)
    }

    /// Plane point `u·(1,0) + v·(a,b)`.
    #[inline]
    pub fn to_plane(&self, u: f64, v: f64) -> Vec2 {
        Vec2::new(u + v * self.a, v * self.b)
    }

    /// Inverse of [`TauParam::to_plane`].
    #[inline]
    pub fn to_lattice(&self, p: Vec2) -> (f64, f64) {
        let v = p.y / self.b;
        (p.x - self.a * v, v)
    }
}

impl fmt::Display for TauParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModularStep {
    /// `τ ↦ τ + k`
    Translate(i64),
    /// `τ ↦ −1/τ`
    Invert,
}

/// Generators applied by [`reduce_to_fundamental`], first step first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ModularWord {
    pub steps: Vec<ModularStep>,
}

impl ModularWord {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the word to `a + ib`.
    pub fn apply(&self, a: f64, b: f64) -> (f64, f64) {
        self.steps.iter().fold((a, b), |(a, b), step| match *step {
            ModularStep::Translate(k) => (a + k as f64, b),
            ModularStep::Invert => {
                let r = a * a + b * b;
                (-a / r, b / r)
            }
        })
    }

    /// The composite Möbius transformation as an integer matrix
    /// `[[p, q], [r, s]]`, `τ ↦ (pτ + q)/(rτ + s)`, with determinant 1.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.steps.iter().fold([[1, 0], [0, 1]], |m, step| {
            let g = match *step {
                ModularStep::Translate(k) => [[1, k], [0, 1]],
                ModularStep::Invert => [[0, -1], [1, 0]],
            };
            [
                [g[0][0] * m[0][0] + g[0][1] * m[1][0], g[0][0] * m[0][1] + g[0][1] * m[1][1]],
                [g[1][0] * m[0][0] + g[1][1] * m[1][0], g[1][0] * m[0][1] + g[1][1] * m[1][1]],
            ]
        })
    }
}

/// Moves `a + ib` into the modular domain by alternately translating the
/// real part into `(−1/2, 1/2]` and inverting while `|τ| < 1`. Points on the
/// left half of the unit circle are inverted onto the right half.
pub fn reduce_to_fundamental(a: f64, b: f64) -> Result<(TauParam, ModularWord), TorusError> {
    if !b.is_finite() || b <= 0.0 {
        return Err(TorusError::NonPositiveImaginary(b));
    }
    if !a.is_finite() {
        return Err(TorusError::OutsideModularDomain { a, b });
    }
    let mut word = ModularWord::default();
    let (mut a, mut b) = (a, b);
    for _ in 0..MAX_REDUCTION_STEPS {
        let k = -(a - 0.5).ceil();
        if k != 0.0 {
            a += k;
            word.steps.push(ModularStep::Translate(k as i64));
        }
        let r = a * a + b * b;
        if r < 1.0 - ARC_TOL || (a < 0.0 && r <= 1.0) {
            a = -a / r;
            b /= r;
            word.steps.push(ModularStep::Invert);
            continue;
        }
        return TauParam::new(a, b).map(|tau| (tau, word));
    }
    Err(TorusError::ReductionDiverged(MAX_REDUCTION_STEPS))
}

/// `(s, t)` with `0 ≤ t ≤ s ≤ 1/2`, the shape of the normalized hexagon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HexParams {
    s: f64,
    t: f64,
}

impl HexParams {
    pub fn new(s: f64, t: f64) -> Result<Self, TorusError> {
        let ok = (0.0..=0.5).contains(&s) && (0.0..=0.5).contains(&t) && t <= s + 1e-12;
        if !ok {
            return Err(TorusError::BadHexParams { s, t });
        }
        Ok(Self { s, t })
    }

    #[inline]
    pub fn s(&self) -> f64 {
        self.s
    }

    #[inline]
    pub fn t(&self) -> f64 {
        self.t
    }
}

/// `s = |a|`, `t = |a| / (a² + b²)`.
pub fn hex_params(tau: &TauParam) -> HexParams {
    let s = tau.a.abs();
    let t = s / (tau.a * tau.a + tau.b * tau.b);
    HexParams { s, t: t.min(s) }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirichletDomain {
    tau: TauParam,
    alpha: f64,
    beta: f64,
    hexagon: ConvexPolygon,
}

impl DirichletDomain {
    pub fn tau(&self) -> TauParam {
        self.tau
    }

    /// Height of the vertices `(±1/2, ±α)` on the vertical edges.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Height of the apex `(a − 1/2, β)` (mirrored for `a < 0`).
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn hexagon(&self) -> &ConvexPolygon {
        &self.hexagon
    }
}

/// Points closer to the origin than to any other lattice point, built from
/// the vertex formulas. With `a ≥ 0` the vertices are `A = (1/2, α)`,
/// `B = (a − 1/2, β)`, `C = (−1/2, α)` and their negatives; for `a < 0` the
/// domain is the mirror image of the one for `|a|`. At `a = 0` `B` merges
/// into `C` and the rectangle has four vertices.
pub fn dirichlet_domain(tau: &TauParam) -> DirichletDomain {
    let (a, b) = (tau.a.abs(), tau.b);
    let alpha = (b * b + a * a - a) / (2.0 * b);
    let beta = (b * b - a * a + a) / (2.0 * b);
    let va = Vec2::new(0.5, alpha);
    let vb = Vec2::new(a - 0.5, beta);
    let vc = Vec2::new(-0.5, alpha);
    let mut ring = vec![va, vb, vc, -va, -vb, -vc];
    if tau.a < 0.0 {
        ring = ring.into_iter().rev().map(|p| Vec2::new(-p.x, p.y)).collect();
    }
    let hexagon = ConvexPolygon::new(ring).expect("Dirichlet vertices form a convex polygon on the modular domain");
    DirichletDomain {
        tau: *tau,
        alpha,
        beta,
        hexagon,
    }
}

/// The six bisector half-planes `{x : g·x ≤ |g|²/2}` for
/// `g = ±(1,0), ±(a,b), ±(a ∓ 1, b)`; their intersection is the Dirichlet
/// domain.
pub fn dirichlet_planes(tau: &TauParam) -> [HalfPlane; 6] {
    let (a, b) = (tau.a, tau.b);
    let shift = if a >= 0.0 { 1.0 } else { -1.0 };
    let gens = [Vec2::new(1.0, 0.0), Vec2::new(a, b), Vec2::new(a - shift, b)];
    let bisector = |g: Vec2| HalfPlane::new(g, 0.5 * g.norm_sq());
    [
        bisector(gens[0]),
        bisector(gens[1]),
        bisector(gens[2]),
        bisector(-gens[0]),
        bisector(-gens[1]),
        bisector(-gens[2]),
    ]
}

/// Linear map taking the Dirichlet domain onto `H(hex_params(τ))`:
/// `[[1, 0], [a/(a²+b²), b/(a²+b²)]]`, preceded by the mirror `x ↦ −x`
/// when `a < 0`.
pub fn normalizing_map(tau: &TauParam) -> AffineMap {
    let (a, b) = (tau.a.abs(), tau.b);
    let r = a * a + b * b;
    let gamma = AffineMap::linear(1.0, 0.0, a / r, b / r).expect("det = b/(a²+b²) > 0");
    if tau.a < 0.0 {
        gamma.compose(&AffineMap::mirror_x())
    } else {
        gamma
    }
}

/// A point of the torus in lattice coordinates `(u, v) ∈ [0, 1)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TorusPoint {
    u: f64,
    v: f64,
}

impl TorusPoint {
    /// Wraps arbitrary lattice coordinates into `[0, 1)²`.
    pub fn new(u: f64, v: f64) -> Self {
        Self {
            u: wrap_unit(u),
            v: wrap_unit(v),
        }
    }

    #[inline]
    pub fn u(&self) -> f64 {
        self.u
    }

    #[inline]
    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn to_plane(&self, tau: &TauParam) -> Vec2 {
        tau.to_plane(self.u, self.v)
    }
}

fn wrap_unit(x: f64) -> f64 {
    let w = x.rem_euclid(1.0);
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Uniform point on the torus: `u, v` independent uniform on `[0, 1)`.
pub fn sample_torus_point<R: Rng + ?Sized>(rng: &mut R) -> TorusPoint {
    let u = rng.random::<f64>();
    let v = rng.random::<f64>();
    TorusPoint { u, v }
}

/// A shortest lift `vector = d − (m·(1,0) + n·(a,b))` of a displacement `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lift {
    pub vector: Vec2,
    pub m: i64,
    pub n: i64,
}

/// Shortest lift of a displacement given in lattice coordinates.
///
/// Rounding puts the residual in the centered fundamental parallelogram; on
/// the modular domain the nearest lattice point then lies in the ring of
/// offsets `{−1, 0, 1}²` around it. Ties go to the lexicographically
/// smallest `(x, y)`.
pub fn shortest_lift(du: f64, dv: f64, tau: &TauParam) -> Lift {
    let (m0, n0) = (du.round(), dv.round());
    let (ru, rv) = (du - m0, dv - n0);
    let mut best: Option<(f64, Lift)> = None;
    for i in -1i64..=1 {
        for j in -1i64..=1 {
            let vector = tau.to_plane(ru - i as f64, rv - j as f64);
            let cand = Lift {
                vector,
                m: m0 as i64 + i,
                n: n0 as i64 + j,
            };
            let d = vector.norm_sq();
            best = match best {
                None => Some((d, cand)),
                Some((bd, b)) => {
                    if d < bd - TIE_TOL {
                        Some((d, cand))
                    } else if d <= bd + TIE_TOL && lex_less(vector, b.vector) {
                        Some((d.min(bd), cand))
                    } else {
                        Some((bd, b))
                    }
                }
            };
        }
    }
    best.expect("nine candidates").1
}

fn lex_less(p: Vec2, q: Vec2) -> bool {
    p.x < q.x || (p.x == q.x && p.y < q.y)
}

/// Lattice translate of `v` of minimal length (the translate lying in the
/// Dirichlet domain).
pub fn shortest_representative(v: Vec2, tau: &TauParam) -> Vec2 {
    let (du, dv) = tau.to_lattice(v);
    shortest_lift(du, dv, tau).vector
}

/// Lattice vector `m·(1,0) + n·(a,b)` that the lifted edges of a geodesic
/// triangle sum to; `(0, 0)` exactly for contractible triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HomotopyClass {
    pub m: i64,
    pub n: i64,
}

impl HomotopyClass {
    pub const TRIVIAL: HomotopyClass = HomotopyClass { m: 0, n: 0 };

    pub fn is_trivial(&self) -> bool {
        *self == Self::TRIVIAL
    }
}

fn edge_lift(from: &TorusPoint, to: &TorusPoint, tau: &TauParam) -> Lift {
    shortest_lift(to.u - from.u, to.v - from.v, tau)
}

/// Sums the shortest lifts of the edges `x1→x2`, `x2→x3`, `x3→x1`. The raw
/// displacements cancel, so the sum is minus the total lattice offset.
pub fn classify_triangle(x1: &TorusPoint, x2: &TorusPoint, x3: &TorusPoint, tau: &TauParam) -> HomotopyClass {
    let l12 = edge_lift(x1, x2, tau);
    let l23 = edge_lift(x2, x3, tau);
    let l31 = edge_lift(x3, x1, tau);
    HomotopyClass {
        m: -(l12.m + l23.m + l31.m),
        n: -(l12.n + l23.n + l31.n),
    }
}

/// Containment form of the same test: with `x1` lifted to the origin and
/// `x2` to its shortest lift `w12`, the triangle is contractible iff the
/// shortest lift of `x3` lies in the Dirichlet domain translated by `w12`.
pub fn is_trivial_by_containment(
    x1: &TorusPoint,
    x2: &TorusPoint,
    x3: &TorusPoint,
    domain: &DirichletDomain,
) -> bool {
    let tau = domain.tau();
    let w12 = edge_lift(x1, x2, &tau).vector;
    let w13 = edge_lift(x1, x3, &tau).vector;
    domain.hexagon().translate(w12).contains(w13, 1e-12)
}
