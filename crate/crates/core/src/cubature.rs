//! Globally adaptive cubature on rectangles with tensor Gauss–Kronrod 7/15
//! rules. The cell with the largest error estimate is bisected along its
//! longer side until the summed estimate drops below the tolerance.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// The 15 Kronrod nodes on `[−1, 1]` with Kronrod and embedded Gauss weights.
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for k in 0..7 {
        let g = if k % 2 == 1 { WG[k / 2] } else { 0.0 };
        out[k] = (-XGK[k], WGK[k], g);
        out[14 - k] = (XGK[k], WGK[k], g);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubatureResult {
    pub value: f64,
    pub error: f64,
    pub cells: usize,
    pub converged: bool,
}

struct Cell {
    rect: Rect,
    value: f64,
    error: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn evaluate<F: Fn(f64, f64) -> f64>(f: &F, r: Rect) -> Cell {
    let (cx, hx) = (0.5 * (r.x0 + r.x1), 0.5 * (r.x1 - r.x0));
    let (cy, hy) = (0.5 * (r.y0 + r.y1), 0.5 * (r.y1 - r.y0));
    let nodes = rule();
    let (mut kron, mut gauss) = (0.0, 0.0);
    for &(xi, wkx, wgx) in &nodes {
        for &(yj, wky, wgy) in &nodes {
            let v = f(cx + hx * xi, cy + hy * yj);
            kron += wkx * wky * v;
            gauss += wgx * wgy * v;
        }
    }
    let jac = hx * hy;
    Cell {
        rect: r,
        value: kron * jac,
        error: ((kron - gauss) * jac).abs(),
    }
}

/// Integrates `f` over `rect` to absolute tolerance `tol`, using at most
/// `max_cells` cells. Not converging is reported in the result rather than
/// as an error so callers can surface the partial value.
pub fn integrate<F: Fn(f64, f64) -> f64>(f: F, rect: Rect, tol: f64, max_cells: usize) -> CubatureResult {
    let mut heap = BinaryHeap::new();
    let first = evaluate(&f, rect);
    let mut error = first.error;
    heap.push(first);
    let mut cells = 1;
    while error > tol && cells + 2 <= max_cells.max(1) {
        let worst = heap.pop().expect("heap never empties");
        let r = worst.rect;
        let (a, b) = if r.x1 - r.x0 >= r.y1 - r.y0 {
            let xm = 0.5 * (r.x0 + r.x1);
            (Rect { x1: xm, ..r }, Rect { x0: xm, ..r })
        } else {
            let ym = 0.5 * (r.y0 + r.y1);
            (Rect { y1: ym, ..r }, Rect { y0: ym, ..r })
        };
        let (ca, cb) = (evaluate(&f, a), evaluate(&f, b));
        error += ca.error + cb.error - worst.error;
        heap.push(ca);
        heap.push(cb);
        cells += 2;
        if cells % 64 == 1 {
            // Refresh the running sum against drift.
            error = heap.iter().map(|c| c.error).sum();
        }
    }
    let value = heap.iter().map(|c| c.value).sum();
    let error = heap.iter().map(|c| c.error).sum();
    CubatureResult {
        value,
        error,
        cells,
        converged: error <= tol,
    }
}
