mod common;

use rand::Rng as _;
use torus_triangles::overlap::{act_on_triple, f_hht, f_hhh, f_htt, f_numeric, f_numeric_union, f_qqq, f_tqq};
use torus_triangles::rng::substream;
use torus_triangles::shapes::{corner_triangle, difference_hexagon, hexagon, square_halves, unit_square};
use torus_triangles::{AffineMap, Estimate, OverlapMethod, Vec2};

use common::{bisect, box_around, random_unimodular};

const SEED: u64 = 2024;

fn mc() -> OverlapMethod {
    OverlapMethod::monte_carlo(200_000).unwrap()
}

fn close(x: &Estimate, y: &Estimate, scale: f64, k: f64) -> bool {
    let sigma = x.std_error.hypot(scale * y.std_error);
    (x.mean - scale * y.mean).abs() <= k * sigma
}

#[test]
fn affine_invariance() {
    let mut rng = substream(SEED, 1);
    let (h, tri) = (hexagon(0.3, 0.45), corner_triangle(0.3, 0.45));
    let base = f_numeric(&h, &h, &tri, mc(), SEED);
    for k in 0..8 {
        let g = random_unimodular(&mut rng);
        let (a, b, c) = act_on_triple(&g, &h, &h, &tri);
        let e = f_numeric(&a, &b, &c, mc(), SEED + k);
        assert!(close(&e, &base, 1.0, 4.0), "{e:?} vs {base:?}");
    }
}

/// Translating all three arguments by the same vector is not a symmetry:
/// only `B` and `C` take the translation.
#[test]
fn diagonal_translation_moves_the_integrand() {
    let q = unit_square();
    let w = Vec2::new(0.5, 0.0);
    let quad = OverlapMethod::quadrature(40_000).unwrap();
    let shifted = f_numeric(&q.translate(w), &q.translate(w), &q.translate(w), quad, 0).mean;
    let acting = f_numeric(&q, &q.translate(w), &q.translate(w), quad, 0).mean;
    assert!((acting - f_qqq()).abs() < 1e-4);
    assert!((shifted - f_qqq()).abs() > 0.1);
}

#[test]
fn orientation_reversing_maps_also_preserve_f() {
    let h = hexagon(0.4, 0.2);
    let g = AffineMap::new(-1.0, 0.0, 0.0, 1.0, 0.3, -0.1).unwrap();
    let (a, b, c) = act_on_triple(&g, &h, &h, &h);
    let quad = OverlapMethod::quadrature(40_000).unwrap();
    let e = f_numeric(&a, &b, &c, quad, 0).mean;
    assert!((e - f_hhh(0.4, 0.2).unwrap()).abs() < 1e-4);
}

#[test]
fn dilation_scales_by_fourth_power() {
    let h = hexagon(0.25, 0.35);
    let base = f_numeric(&h, &h, &h, mc(), SEED);
    for factor in [0.5, 2.0, 3.0] {
        let d = AffineMap::scaling(factor).unwrap();
        let e = f_numeric(&d.apply(&h), &d.apply(&h), &d.apply(&h), mc(), SEED + 1);
        assert!(close(&e, &base, factor.powi(4), 4.0), "factor {factor}: {e:?}");
    }
}

#[test]
fn additive_under_square_halves() {
    let q = vec![unit_square()];
    let (l, r) = square_halves();
    let halves = vec![l, r];
    let whole = f_numeric(&q[0], &q[0], &q[0], mc(), SEED);
    for (a, b, c) in [(&halves, &q, &q), (&q, &halves, &q), (&q, &q, &halves)] {
        let union = f_numeric_union(a, b, c, mc(), SEED + 3);
        assert!(close(&union, &whole, 1.0, 4.0), "{union:?} vs {whole:?}");
    }
}

#[test]
fn additive_under_random_bisection() {
    let mut rng = substream(SEED, 5);
    let h = hexagon(0.4, 0.4);
    let quad = OverlapMethod::quadrature(40_000).unwrap();
    let whole = f_numeric(&h, &h, &h, quad, 0).mean;
    let (p1, p2) = bisect(&h, rng.random_range(0.0..std::f64::consts::PI));
    assert!((p1.area() + p2.area() - h.area()).abs() < 1e-12);
    let parts = f_numeric(&p1, &h, &h, quad, 0).mean + f_numeric(&p2, &h, &h, quad, 0).mean;
    assert!((parts - whole).abs() < 2e-4, "{parts} vs {whole}");
}

#[test]
fn box_containing_support_gives_area_squared() {
    for x in [corner_triangle(0.5, 0.3), hexagon(0.2, 0.4)] {
        let (lo, hi) = x.minkowski_diff(&x).bounding_box().unwrap();
        let support = box_around(lo - Vec2::new(0.1, 0.1), hi + Vec2::new(0.1, 0.1));
        let e = f_numeric(&support, &x, &x, mc(), SEED);
        assert!(e.agrees_with(x.area().powi(2), 4.0), "{e:?} vs {}", x.area().powi(2));
    }
}

#[test]
fn difference_hexagon_reproduces_htt() {
    let (s, t) = (0.45, 0.15);
    let quad = OverlapMethod::quadrature(40_000).unwrap();
    let tri = corner_triangle(s, t);
    let v = f_numeric(&difference_hexagon(s, t), &tri, &tri, quad, 0).mean;
    let h = f_numeric(&hexagon(s, t), &tri, &tri, quad, 0).mean;
    let exact = f_htt(s, t).unwrap();
    assert!((v - exact).abs() < 1e-6 && (h - exact).abs() < 1e-6, "{v} {h} {exact}");
}

#[test]
fn quadrature_agrees_with_closed_forms() {
    let quad = OverlapMethod::quadrature(100_000).unwrap();
    let q = unit_square();
    for &(s, t) in &[(0.5, 0.5), (0.2, 0.4)] {
        let (tri, h) = (corner_triangle(s, t), hexagon(s, t));
        let cases = [
            (f_tqq(s, t).unwrap(), f_numeric(&tri, &q, &q, quad, 0)),
            (f_htt(s, t).unwrap(), f_numeric(&h, &tri, &tri, quad, 0)),
            (f_hht(s, t).unwrap(), f_numeric(&h, &h, &tri, quad, 0)),
            (f_hhh(s, t).unwrap(), f_numeric(&h, &h, &h, quad, 0)),
        ];
        for (exact, e) in cases {
            assert!((e.mean - exact).abs() < 5e-5, "({s},{t}) {} vs {exact}", e.mean);
        }
    }
}

#[test]
fn hhh_never_exceeds_square_value() {
    for i in 0..=50 {
        for j in 0..=50 {
            let (s, t) = (i as f64 / 100.0, j as f64 / 100.0);
            let v = f_hhh(s, t).unwrap();
            if s * t == 0.0 {
                assert_eq!(v, f_qqq());
            } else {
                assert!(v < f_qqq());
            }
        }
    }
}
