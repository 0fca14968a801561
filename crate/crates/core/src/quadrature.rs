//! Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.
//!
//! Floating point only. Used as an oracle for the moment integrals and by
//! the bubble diagnostics; never on the certified path.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

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

/// Gauss weights at `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    /// Estimate of the integral of `|f|`.
    pub l1: f64,
    pub evaluations: usize,
    /// False when the segment budget ran out before the tolerance was met.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Error target relative to the integral of `|f|`; useful when the
    /// signed integral cancels to (near) zero.
    pub l1_tol: f64,
    pub max_segments: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 0.0, rel_tol: 1e-12, l1_tol: 0.0, max_segments: 4000 }
    }
}

impl QuadOptions {
    pub fn relative(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }

    /// Error target `tol` times the integral of `|f|`.
    pub fn l1_relative(tol: f64) -> Self {
        Self { rel_tol: 0.0, l1_tol: tol, ..Self::default() }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    l1: f64,
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

/// Kronrod value, error estimate and `|f|` integral of each component.
fn kronrod_vec<const K: usize, F: Fn(f64) -> [f64; K]>(f: &F, a: f64, b: f64) -> ([f64; K], [f64; K], [f64; K]) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut gauss = fc.map(|v| v * WG[3]);
    let mut kron = fc.map(|v| v * WGK[7]);
    let mut abs = kron.map(f64::abs);
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        for k in 0..K {
            kron[k] += WGK[j] * (f1[k] + f2[k]);
            abs[k] += WGK[j] * (f1[k].abs() + f2[k].abs());
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * (f1[k] + f2[k]);
            }
        }
    }
    let mut value = [0.0; K];
    let mut error = [0.0; K];
    let mut l1 = [0.0; K];
    for k in 0..K {
        value[k] = kron[k] * h;
        // floor the estimate at roundoff level
        error[k] = ((kron[k] - gauss[k]) * h).abs().max(50.0 * f64::EPSILON * abs[k] * h.abs());
        l1[k] = abs[k] * h.abs();
    }
    (value, error, l1)
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let (value, error, l1) = kronrod_vec(&|x| [f(x)], a, b);
    Segment { a, b, value: value[0], error: error[0], l1: l1[0] }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> QuadResult {
    integrate_with_breaks(f, &[a, b], opts)
}

/// Integrates `f` over `[points[0], points[last]]`, splitting first at every
/// interior point (kinks, peaks, or scale changes of the integrand).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: F, points: &[f64], opts: QuadOptions) -> QuadResult {
    assert!(points.len() >= 2, "need at least two points");
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(&f, w[0], w[1]));
        }
    }
    let mut evaluations = 15 * heap.len();
    loop {
        let value: f64 = heap.iter().map(|s| s.value).sum();
        let error: f64 = heap.iter().map(|s| s.error).sum();
        let l1: f64 = heap.iter().map(|s| s.l1).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs()).max(opts.l1_tol * l1);
        if error <= target || heap.len() >= opts.max_segments {
            return QuadResult { value, error, l1, evaluations, converged: error <= target };
        }
        let Some(worst) = heap.pop() else {
            return QuadResult { value: 0.0, error: 0.0, l1: 0.0, evaluations, converged: true };
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further in floating point
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        heap.push(kronrod(&f, worst.a, mid));
        heap.push(kronrod(&f, mid, worst.b));
        evaluations += 30;
    }
}

struct PairSegment {
    a: f64,
    b: f64,
    value: [f64; 2],
    error: [f64; 2],
}

impl PairSegment {
    fn new<F: Fn(f64) -> [f64; 2]>(f: &F, a: f64, b: f64) -> Self {
        let (value, error, _) = kronrod_vec(f, a, b);
        Self { a, b, value, error }
    }

    fn total_error(&self) -> f64 {
        self.error[0] + self.error[1]
    }
}

/// Integrates a pair `f = [g, m]` where `m >= |g|` bounds the modulus of
/// the signed component, in one adaptive pass. Both integrals are driven to
/// `rel_tol * int m`, so the signed one may cancel to zero. Returns
/// `(int g, int m)`.
pub fn integrate_signed_pair<F: Fn(f64) -> [f64; 2]>(f: F, points: &[f64], rel_tol: f64, max_segments: usize) -> (QuadResult, QuadResult) {
    assert!(points.len() >= 2, "need at least two points");
    let mut segments: Vec<PairSegment> =
        points.windows(2).filter(|w| w[1] > w[0]).map(|w| PairSegment::new(&f, w[0], w[1])).collect();
    let mut evaluations = 15 * segments.len();
    loop {
        let sum = |k: usize, err: bool| -> f64 {
            segments.iter().map(|s| if err { s.error[k] } else { s.value[k] }).sum()
        };
        let bound = sum(1, false);
        let error = sum(0, true) + sum(1, true);
        let target = rel_tol * bound.abs();
        if error <= target || segments.len() >= max_segments || segments.is_empty() {
            let converged = error <= target;
            let make = |k: usize| QuadResult { value: sum(k, false), error: sum(k, true), l1: bound, evaluations, converged };
            return (make(0), make(1));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_error().total_cmp(&b.1.total_error()))
            .expect("nonempty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            segments.push(PairSegment { error: [0.0; 2], ..seg });
            continue;
        }
        segments.push(PairSegment::new(&f, seg.a, mid));
        segments.push(PairSegment::new(&f, mid, seg.b));
        evaluations += 30;
    }
}

/// Geometric break points `a, a + s, a + 2s, a + 4s, ...` up to `b`, for
/// integrands that vary on scale `s` near `a` and decay slowly afterwards.
pub fn geometric_breaks(a: f64, b: f64, s: f64) -> Vec<f64> {
    let mut pts = vec![a];
    let mut step = s;
    while a + step < b {
        pts.push(a + step);
        step *= 2.0;
    }
    pts.push(b);
    pts
}
