//! Planar primitives: vectors, affine maps, convex polygons, clipping,
//! half-plane intersection and Minkowski differences.
//!
//! Polygons are stored counterclockwise. The empty set is a separate
//! sentinel ([`ConvexPolygon::empty`]) so that areas and overlaps of
//! disjoint pieces are total functions. Anything whose area falls below
//! [`EPS`] collapses to that sentinel.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for on-edge classification and sliver collapse.
pub const EPS: f64 = 1e-12;

/// Feasibility slack for half-plane vertex candidates.
const FEASIBILITY_EPS: f64 = 1e-10;

/// `|det|` below which a linear map is treated as singular.
const SINGULAR_DET: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices do not describe a convex polygon")]
    NotConvex,
    #[error("degenerate affine map (det = {0})")]
    DegenerateMap(f64),
    #[error("map is not unimodular (det = {0})")]
    NotUnimodular(f64),
    #[error("half-plane has a zero or non-finite normal")]
    BadHalfPlane,
    #[error("half-plane intersection is unbounded")]
    Unbounded,
    #[error("half-plane intersection is empty")]
    EmptyIntersection,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product; positive when `o` is
    /// counterclockwise from `self`.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `x ↦ M x + t` with a nonsingular linear part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    m11: f64,
    m12: f64,
    m21: f64,
    m22: f64,
    t: Vec2,
}

impl AffineMap {
    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64, tx: f64, ty: f64) -> Result<Self, GeomError> {
        let map = Self {
            m11,
            m12,
            m21,
            m22,
            t: Vec2::new(tx, ty),
        };
        if ![m11, m12, m21, m22, tx, ty].iter().all(|v| v.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let det = map.det();
        if det.abs() <= SINGULAR_DET {
            return Err(GeomError::DegenerateMap(det));
        }
        Ok(map)
    }

    pub fn linear(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self, GeomError> {
        Self::new(m11, m12, m21, m22, 0.0, 0.0)
    }

    /// An element of `R² ⋊ SL₂(R)`; rejects maps with `|det − 1| > 1e−12`.
    pub fn unimodular(m11: f64, m12: f64, m21: f64, m22: f64, tx: f64, ty: f64) -> Result<Self, GeomError> {
        let map = Self::new(m11, m12, m21, m22, tx, ty)?;
        if !map.is_unimodular() {
            return Err(GeomError::NotUnimodular(map.det()));
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        Self {
            m11: 1.0,
            m12: 0.0,
            m21: 0.0,
            m22: 1.0,
            t: Vec2::ZERO,
        }
    }

    pub fn scaling(k: f64) -> Result<Self, GeomError> {
        Self::linear(k, 0.0, 0.0, k)
    }

    pub fn translation(w: Vec2) -> Self {
        Self {
            t: w,
            ..Self::identity()
        }
    }

    /// Reflection across the vertical axis, `(x, y) ↦ (−x, y)`.
    pub fn mirror_x() -> Self {
        Self {
            m11: -1.0,
            ..Self::identity()
        }
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn is_unimodular(&self) -> bool {
        (self.det() - 1.0).abs() <= 1e-12
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.m11, self.m12], [self.m21, self.m22]]
    }

    pub fn translation_part(&self) -> Vec2 {
        self.t
    }

    #[inline]
    pub fn apply_point(&self, p: Vec2) -> Vec2 {
        Vec2::new(
            self.m11 * p.x + self.m12 * p.y + self.t.x,
            self.m21 * p.x + self.m22 * p.y + self.t.y,
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            m11: self.m11 * other.m11 + self.m12 * other.m21,
            m12: self.m11 * other.m12 + self.m12 * other.m22,
            m21: self.m21 * other.m11 + self.m22 * other.m21,
            m22: self.m21 * other.m12 + self.m22 * other.m22,
            t: self.apply_point(other.t),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let d = self.det();
        let (i11, i12, i21, i22) = (self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d);
        AffineMap {
            m11: i11,
            m12: i12,
            m21: i21,
            m22: i22,
            t: Vec2::new(
                -(i11 * self.t.x + i12 * self.t.y),
                -(i21 * self.t.x + i22 * self.t.y),
            ),
        }
    }

    /// Image of a polygon. Orientation-reversing maps have their output
    /// reversed so the result stays counterclockwise; area scales by `|det|`.
    pub fn apply(&self, p: &ConvexPolygon) -> ConvexPolygon {
        let mut pts: Vec<Vec2> = p.vertices().iter().map(|&v| self.apply_point(v)).collect();
        if self.det() < 0.0 {
            pts.reverse();
        }
        ConvexPolygon::from_ring_lossy(pts)
    }
}

/// Closed half-plane `{x : normal · x ≤ offset}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    pub normal: Vec2,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Vec2, offset: f64) -> Self {
        Self { normal, offset }
    }

    #[inline]
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        self.normal.dot(p) <= self.offset + tol * self.normal.norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Empty,
    Ring(Vec<Vec2>),
}

/// Convex polygon with counterclockwise vertices, or the empty set.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    repr: Repr,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        Self { repr: Repr::Empty }
    }

    /// Validates and normalizes a vertex ring: clockwise input is reversed,
    /// near-duplicate and collinear vertices are dropped.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, GeomError> {
        if !vertices.iter().all(|v| v.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let n_in = vertices.len();
        let mut ring = dedup_ring(vertices);
        if signed_area(&ring) < 0.0 {
            ring.reverse();
        }
        let ring = drop_collinear(ring);
        if ring.len() < 3 {
            return Err(GeomError::TooFewVertices(ring.len().min(n_in)));
        }
        if !is_convex_ccw(&ring) {
            return Err(GeomError::NotConvex);
        }
        Ok(Self { repr: Repr::Ring(ring) })
    }

    /// Convex hull of a point cloud (Andrew's monotone chain). Degenerate
    /// clouds give the empty sentinel.
    pub fn hull(points: &[Vec2]) -> Self {
        let mut pts: Vec<Vec2> = points.iter().copied().filter(|p| p.is_finite()).collect();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup_by(|a, b| a.dist(*b) <= EPS);
        if pts.len() < 3 {
            return Self::empty();
        }
        let turn = |o: Vec2, a: Vec2, b: Vec2| (a - o).cross(b - o);
        let mut lower: Vec<Vec2> = Vec::with_capacity(pts.len());
        for &p in &pts {
            while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Vec2> = Vec::with_capacity(pts.len());
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::from_ring_lossy(lower)
    }

    /// Cleans a ring that is convex up to rounding (clip output, affine
    /// images). Slivers collapse to the empty sentinel instead of erroring.
    pub(crate) fn from_ring_lossy(vertices: Vec<Vec2>) -> Self {
        let ring = drop_collinear(dedup_ring(vertices));
        if ring.len() < 3 || signed_area(&ring) < EPS {
            return Self::empty();
        }
        Self { repr: Repr::Ring(ring) }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.repr, Repr::Empty)
    }

    pub fn vertices(&self) -> &[Vec2] {
        match &self.repr {
            Repr::Empty => &[],
            Repr::Ring(v) => v,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices().len()
    }

    /// Shoelace area; 0 for the empty sentinel.
    pub fn area(&self) -> f64 {
        signed_area(self.vertices()).max(0.0)
    }

    pub fn translate(&self, w: Vec2) -> ConvexPolygon {
        match &self.repr {
            Repr::Empty => Self::empty(),
            Repr::Ring(v) => Self {
                repr: Repr::Ring(v.iter().map(|&p| p + w).collect()),
            },
        }
    }

    pub fn vertex_mean(&self) -> Option<Vec2> {
        let v = self.vertices();
        if v.is_empty() {
            return None;
        }
        let sum = v.iter().fold(Vec2::ZERO, |acc, &p| acc + p);
        Some(sum * (1.0 / v.len() as f64))
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> Option<(Vec2, Vec2)> {
        let v = self.vertices();
        let first = *v.first()?;
        Some(v.iter().fold((first, first), |(lo, hi), p| {
            (
                Vec2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Vec2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        }))
    }

    /// Closed membership with slack `tol` on every edge.
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        let v = self.vertices();
        if v.is_empty() {
            return false;
        }
        edges(v).all(|(a, b)| {
            let e = b - a;
            e.cross(p - a) >= -tol * e.norm()
        })
    }

    /// Convex intersection by clipping `self` against each edge of `clip`
    /// (Sutherland–Hodgman). Contact of measure zero yields the empty sentinel.
    pub fn intersect(&self, clip: &ConvexPolygon) -> ConvexPolygon {
        if self.is_empty() || clip.is_empty() {
            return Self::empty();
        }
        let mut current: Vec<Vec2> = self.vertices().to_vec();
        let mut next: Vec<Vec2> = Vec::with_capacity(current.len() + clip.len());
        for (a, b) in edges(clip.vertices()) {
            let e = b - a;
            let len = e.norm();
            let dist = |p: Vec2| e.cross(p - a) / len;
            next.clear();
            let Some(&last) = current.last() else { break };
            let mut prev = last;
            let mut d_prev = dist(prev);
            for &cur in &current {
                let d_cur = dist(cur);
                let in_prev = d_prev >= -EPS;
                let in_cur = d_cur >= -EPS;
                if in_cur != in_prev {
                    let k = d_prev / (d_prev - d_cur);
                    next.push(prev + (cur - prev) * k);
                }
                if in_cur {
                    next.push(cur);
                }
                prev = cur;
                d_prev = d_cur;
            }
            std::mem::swap(&mut current, &mut next);
            if current.len() < 3 {
                return Self::empty();
            }
        }
        Self::from_ring_lossy(current)
    }

    /// `{u − v : u ∈ self, v ∈ other}` by merging the edge sequences of
    /// `self` and the point reflection of `other`.
    pub fn minkowski_diff(&self, other: &ConvexPolygon) -> ConvexPolygon {
        if self.is_empty() || other.is_empty() {
            return Self::empty();
        }
        let p = rotate_to_lowest(self.vertices().to_vec());
        let q = rotate_to_lowest(other.vertices().iter().map(|&v| -v).collect());
        let (n, m) = (p.len(), q.len());
        let mut out = Vec::with_capacity(n + m);
        let (mut i, mut j) = (0usize, 0usize);
        while i < n || j < m {
            out.push(p[i % n] + q[j % m]);
            let ep = p[(i + 1) % n] - p[i % n];
            let eq = q[(j + 1) % m] - q[j % m];
            let c = ep.cross(eq);
            if i == n {
                j += 1;
            } else if j == m {
                i += 1;
            } else {
                if c >= 0.0 {
                    i += 1;
                }
                if c <= 0.0 {
                    j += 1;
                }
            }
        }
        Self::from_ring_lossy(out)
    }

    /// Same vertex cycle as `other` up to rotation, within `tol` per vertex.
    pub fn approx_eq(&self, other: &ConvexPolygon, tol: f64) -> bool {
        let (a, b) = (self.vertices(), other.vertices());
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let n = a.len();
        (0..n).any(|shift| (0..n).all(|k| a[k].dist(b[(k + shift) % n]) <= tol))
    }
}

impl fmt::Display for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "[")?;
        for (k, v) in self.vertices().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct PolygonJson {
    vertices: Vec<[f64; 2]>,
}

impl Serialize for ConvexPolygon {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolygonJson {
            vertices: self.vertices().iter().map(|v| [v.x, v.y]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConvexPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PolygonJson::deserialize(deserializer)?;
        if raw.vertices.is_empty() {
            return Ok(ConvexPolygon::empty());
        }
        ConvexPolygon::new(raw.vertices.into_iter().map(|[x, y]| Vec2::new(x, y)).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// Boundary of a bounded intersection of closed half-planes.
///
/// Vertices are the feasible pairwise crossings of the boundary lines, so
/// precision does not depend on any artificial bounding box.
pub fn halfplane_intersection(planes: &[HalfPlane]) -> Result<ConvexPolygon, GeomError> {
    for hp in planes {
        if !hp.normal.is_finite() || !hp.offset.is_finite() || hp.normal.norm() == 0.0 {
            return Err(GeomError::BadHalfPlane);
        }
    }
    if !normals_positively_span(planes) {
        // Unbounded unless infeasible; a large box tells the two apart.
        let big = 1e6;
        let mut region = ConvexPolygon::new(vec![
            Vec2::new(-big, -big),
            Vec2::new(big, -big),
            Vec2::new(big, big),
            Vec2::new(-big, big),
        ])?;
        for hp in planes {
            region = clip_halfplane(&region, hp);
        }
        return Err(if region.is_empty() {
            GeomError::EmptyIntersection
        } else {
            GeomError::Unbounded
        });
    }
    let mut candidates = Vec::new();
    for (i, p) in planes.iter().enumerate() {
        for q in &planes[i + 1..] {
            let det = p.normal.cross(q.normal);
            if det.abs() <= 1e-15 * p.normal.norm() * q.normal.norm() {
                continue;
            }
            let x = (p.offset * q.normal.y - q.offset * p.normal.y) / det;
            let y = (p.normal.x * q.offset - q.normal.x * p.offset) / det;
            let v = Vec2::new(x, y);
            if planes.iter().all(|h| h.contains(v, FEASIBILITY_EPS)) {
                candidates.push(v);
            }
        }
    }
    let poly = ConvexPolygon::hull(&candidates);
    if poly.is_empty() {
        return Err(GeomError::EmptyIntersection);
    }
    Ok(poly)
}

fn clip_halfplane(p: &ConvexPolygon, hp: &HalfPlane) -> ConvexPolygon {
    let v = p.vertices();
    if v.is_empty() {
        return ConvexPolygon::empty();
    }
    let len = hp.normal.norm();
    let slack = |q: Vec2| (hp.offset - hp.normal.dot(q)) / len;
    let mut out = Vec::with_capacity(v.len() + 1);
    let mut prev = v[v.len() - 1];
    let mut s_prev = slack(prev);
    for &cur in v {
        let s_cur = slack(cur);
        if (s_cur >= 0.0) != (s_prev >= 0.0) {
            out.push(prev + (cur - prev) * (s_prev / (s_prev - s_cur)));
        }
        if s_cur >= 0.0 {
            out.push(cur);
        }
        prev = cur;
        s_prev = s_cur;
    }
    ConvexPolygon::from_ring_lossy(out)
}

/// True iff every direction has positive dot product with some normal,
/// i.e. the largest angular gap between normals is below π.
fn normals_positively_span(planes: &[HalfPlane]) -> bool {
    if planes.len() < 3 {
        return false;
    }
    let mut angles: Vec<f64> = planes.iter().map(|h| h.normal.y.atan2(h.normal.x)).collect();
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + std::f64::consts::TAU - angles[angles.len() - 1];
    let max_gap = angles
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(wrap, f64::max);
    max_gap < std::f64::consts::PI - 1e-12
}

fn edges(v: &[Vec2]) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
    (0..v.len()).map(move |i| (v[i], v[(i + 1) % v.len()]))
}

fn signed_area(v: &[Vec2]) -> f64 {
    if v.len() < 3 {
        return 0.0;
    }
    0.5 * edges(v).map(|(a, b)| a.cross(b)).sum::<f64>()
}

fn dedup_ring(mut v: Vec<Vec2>) -> Vec<Vec2> {
    v.dedup_by(|a, b| a.dist(*b) <= EPS);
    while v.len() > 1 && v[0].dist(v[v.len() - 1]) <= EPS {
        v.pop();
    }
    v
}

/// Removes vertices where the boundary continues straight on.
fn drop_collinear(mut v: Vec<Vec2>) -> Vec<Vec2> {
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let straight = (0..n).find(|&i| {
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            let (e1, e2) = (v[i] - prev, next - v[i]);
            e1.cross(e2).abs() <= EPS * e1.norm() * e2.norm().max(1.0) && e1.dot(e2) > 0.0
        });
        match straight {
            Some(i) => {
                v.remove(i);
            }
            None => return v,
        }
    }
}

fn is_convex_ccw(v: &[Vec2]) -> bool {
    let n = v.len();
    let mut turning = 0.0;
    for i in 0..n {
        let e1 = v[(i + 1) % n] - v[i];
        let e2 = v[(i + 2) % n] - v[(i + 1) % n];
        let c = e1.cross(e2);
        if c < -EPS * e1.norm() * e2.norm() {
            return false;
        }
        turning += c.atan2(e1.dot(e2));
    }
    (turning - std::f64::consts::TAU).abs() < 1e-6
}

fn rotate_to_lowest(mut v: Vec<Vec2>) -> Vec<Vec2> {
    let start = (0..v.len())
        .min_by(|&i, &j| v[i].y.total_cmp(&v[j].y).then(v[i].x.total_cmp(&v[j].x)))
        .unwrap_or(0);
    v.rotate_left(start);
    v
}
