//! Adaptive Gauss–Kronrod (7/15 point) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{NcfError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_SEGMENTS: usize = 5000;

/// Integral value with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`: the segment with the
/// largest error estimate is bisected until the total estimate drops below `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0 });
    }
    let mut heap = BinaryHeap::new();
    let (value, error) = gk15(&f, a, b);
    heap.push(Segment { a, b, value, error });
    let mut err = error;
    while err > tol {
        if heap.len() >= MAX_SEGMENTS {
            return Err(NcfError::Numeric(format!(
                "quadrature on [{a}, {b}] stalled at error {err:e} (tolerance {tol:e})"
            )));
        }
        let seg = heap.pop().unwrap();
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&f, seg.a, mid);
        let (v2, e2) = gk15(&f, mid, seg.b);
        err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
    }
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    if !f64::is_finite(value) {
        return Err(NcfError::Numeric("quadrature produced a non-finite value".into()));
    }
    Ok(Quadrature { value, error })
}

/// `∫_0^b f(x) dx` for `f` with an integrable logarithmic singularity at 0,
/// evaluated as `∫_{-ln b}^{∞} f(e^{-t}) e^{-t} dt` with the tail beyond
/// `t = 200` dropped.
pub fn integrate_from_zero<F: Fn(f64) -> f64>(f: F, b: f64, tol: f64) -> Result<Quadrature> {
    if b <= 0.0 {
        return Err(NcfError::Argument(format!("upper limit {b} must be positive")));
    }
    let t0 = -b.ln();
    let g = |t: f64| {
        let x = (-t).exp();
        f(x) * x
    };
    // split so each piece has a moderate dynamic range
    let mut q = Quadrature { value: 0.0, error: 0.0 };
    let mut lo = t0;
    for hi in [t0 + 1.0, t0 + 5.0, t0 + 20.0, t0 + 60.0, 200.0f64.max(t0 + 61.0)] {
        let part = integrate(g, lo, hi, tol / 8.0)?;
        q.value += part.value;
        q.error += part.error;
        lo = hi;
    }
    Ok(q)
}
