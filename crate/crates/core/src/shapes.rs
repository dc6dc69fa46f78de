//! The polygon family the overlap closed forms are stated for.
//!
//! All of them live in the unit square `Q = [−1/2, 1/2]²`. `T` is the
//! upper-left corner triangle with horizontal leg `s` and vertical leg `t`,
//! `H(s,t)` is `Q` with `T` and `−T` removed, and `V(s,t) = T ⊖ T`.

use crate::geom2d::{ConvexPolygon, Vec2};

pub fn unit_square() -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Vec2::new(-0.5, -0.5),
        Vec2::new(0.5, -0.5),
        Vec2::new(0.5, 0.5),
        Vec2::new(-0.5, 0.5),
    ])
    .expect("unit square is convex")
}

/// Left half `[−1/2, 0] × [−1/2, 1/2]` and right half of `Q`.
pub fn square_halves() -> (ConvexPolygon, ConvexPolygon) {
    let left = ConvexPolygon::new(vec![
        Vec2::new(-0.5, -0.5),
        Vec2::new(0.0, -0.5),
        Vec2::new(0.0, 0.5),
        Vec2::new(-0.5, 0.5),
    ])
    .expect("convex");
    (left.clone(), left.translate(Vec2::new(0.5, 0.0)))
}

/// Upper-left corner triangle `T`; empty when `s·t = 0`.
pub fn corner_triangle(s: f64, t: f64) -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Vec2::new(-0.5, 0.5),
        Vec2::new(-0.5, 0.5 - t),
        Vec2::new(-0.5 + s, 0.5),
    ])
    .unwrap_or_else(|_| ConvexPolygon::empty())
}

/// `H(s,t)`; reduces to `Q` when `s·t = 0`.
pub fn hexagon(s: f64, t: f64) -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Vec2::new(0.5, 0.5),
        Vec2::new(-0.5 + s, 0.5),
        Vec2::new(-0.5, 0.5 - t),
        Vec2::new(-0.5, -0.5),
        Vec2::new(0.5 - s, -0.5),
        Vec2::new(0.5, -0.5 + t),
    ])
    .expect("H(s,t) is convex for s, t in [0, 1/2]")
}

/// `V(s,t)`: translations `w` with `T ∩ T_w ≠ ∅`.
pub fn difference_hexagon(s: f64, t: f64) -> ConvexPolygon {
    let tri = corner_triangle(s, t);
    tri.minkowski_diff(&tri)
}
