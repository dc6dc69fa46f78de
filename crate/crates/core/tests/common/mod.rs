#![allow(dead_code)]

use rand::Rng;
use torus_triangles::geom2d::{halfplane_intersection, HalfPlane};
use torus_triangles::{AffineMap, ConvexPolygon, TauParam, TorusPoint, Vec2};

/// Class of a triangle by exhaustive search over lattice offsets in
/// `[−3, 3]²` for every edge. Returns `None` when some edge has two
/// candidates within `margin` of each other in squared length.
pub fn brute_force_class(
    x1: &TorusPoint,
    x2: &TorusPoint,
    x3: &TorusPoint,
    tau: &TauParam,
    margin: f64,
) -> Option<(i64, i64)> {
    let mut total = (0, 0);
    for (p, q) in [(x1, x2), (x2, x3), (x3, x1)] {
        let (du, dv) = (q.u() - p.u(), q.v() - p.v());
        let mut lens: Vec<(f64, i64, i64)> = Vec::with_capacity(49);
        for m in -3i64..=3 {
            for n in -3i64..=3 {
                let v = tau.to_plane(du - m as f64, dv - n as f64);
                lens.push((v.norm_sq(), m, n));
            }
        }
        lens.sort_by(|x, y| x.0.total_cmp(&y.0));
        if lens[1].0 - lens[0].0 < margin {
            return None;
        }
        total.0 -= lens[0].1;
        total.1 -= lens[0].2;
    }
    Some(total)
}

/// Random element of `SL₂(R)` (rotation · shear · diagonal stretch) plus a
/// translation.
pub fn random_unimodular<R: Rng>(rng: &mut R) -> AffineMap {
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let k = rng.random_range(-1.0..1.0);
    let lambda: f64 = rng.random_range(0.5..2.0);
    let (c, s) = (theta.cos(), theta.sin());
    // [c −s; s c] · [1 k; 0 1] · diag(λ, 1/λ)
    let (m11, m12, m21, m22) = (c * lambda, (c * k - s) / lambda, s * lambda, (s * k + c) / lambda);
    let (tx, ty) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    AffineMap::unimodular(m11, m12, m21, m22, tx, ty).expect("product of unimodular factors")
}

/// Splits `p` along the line through its vertex mean at angle `theta`.
pub fn bisect(p: &ConvexPolygon, theta: f64) -> (ConvexPolygon, ConvexPolygon) {
    let centre = p.vertex_mean().expect("non-empty polygon");
    let normal = Vec2::new(theta.cos(), theta.sin());
    let (lo, hi) = p.bounding_box().expect("non-empty polygon");
    let pad = 1.0 + (hi - lo).norm();
    let side = |n: Vec2| {
        let mut planes = vec![HalfPlane::new(n, n.dot(centre))];
        planes.extend([
            HalfPlane::new(Vec2::new(1.0, 0.0), hi.x + pad),
            HalfPlane::new(Vec2::new(-1.0, 0.0), -(lo.x - pad)),
            HalfPlane::new(Vec2::new(0.0, 1.0), hi.y + pad),
            HalfPlane::new(Vec2::new(0.0, -1.0), -(lo.y - pad)),
        ]);
        p.intersect(&halfplane_intersection(&planes).expect("bounded half box"))
    };
    (side(normal), side(-normal))
}

pub fn box_around(lo: Vec2, hi: Vec2) -> ConvexPolygon {
    ConvexPolygon::new(vec![lo, Vec2::new(hi.x, lo.y), hi, Vec2::new(lo.x, hi.y)]).expect("non-degenerate box")
}
