//! Adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae on [0, 1], descending; the last is the centre.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
// Gauss weights for the odd Kronrod abscissae XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

const MAX_INTERVALS: usize = 20_000;

/// One 15-point Kronrod estimate and its distance from the embedded
/// 7-point Gauss estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let pair = f(centre - half * x) + f(centre + half * x);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err).is_eq()
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// `∫_a^b f` to absolute error about `tol`, bisecting the piece with the
/// largest error estimate first. Stops early once the estimate reaches the
/// roundoff level of the result.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (value, err) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, err });
    let (mut total, mut total_err) = (value, err);
    while total_err > tol.max(64.0 * f64::EPSILON * total.abs()) && heap.len() < MAX_INTERVALS {
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.err;
        heap.push(Piece { a: worst.a, b: mid, value: lv, err: le });
        heap.push(Piece { a: mid, b: worst.b, value: rv, err: re });
    }
    // Re-sum to shed the drift of the running updates.
    heap.iter().map(|p| p.value).sum()
}

/// `∫_a^∞ f` for `a > 0`, via `u = a/s`, which maps the range to `(0, 1]`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> f64 {
    debug_assert!(a > 0.0);
    integrate(
        |s| if s == 0.0 { 0.0 } else { f(a / s) * a / (s * s) },
        0.0,
        1.0,
        tol,
    )
}
