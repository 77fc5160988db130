//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Used as an independent oracle for sampled transforms and for the
//! frequency-side integrals of the uniform derivative bounds.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::sum::NeumaierSum;

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
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Tolerances for the adaptive driver.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-14,
            rel: 1e-12,
            max_intervals: 4000,
        }
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Estimate {
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
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
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Estimate {
    if a == b {
        return Estimate {
            value: 0.0,
            error: 0.0,
        };
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&f, a, b);
    heap.push(Piece { a, b, est: first });
    let mut value = first.value;
    let mut error = first.error;
    while heap.len() < tol.max_intervals && error > tol.abs.max(tol.rel * value.abs()) {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        value += left.value + right.value - worst.est.value;
        error += left.error + right.error - worst.est.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            est: right,
        });
    }
    // final value recomputed with compensation over the leaves
    let mut v = NeumaierSum::new();
    let mut e = NeumaierSum::new();
    for p in heap.iter() {
        v.add(p.est.value);
        e.add(p.est.error);
    }
    Estimate {
        value: v.value(),
        error: e.value(),
    }
}

/// Integrates `f` over `[a, ∞)` through `x = a + t / (1 − t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: Tolerance) -> Estimate {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t;
        let x = a + t / s;
        let v = f(x) / (s * s);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

/// Integrates `f` over the whole real line.
pub fn integrate_real_line<F: Fn(f64) -> f64>(f: F, tol: Tolerance) -> Estimate {
    let right = integrate_to_infinity(&f, 0.0, tol);
    let left = integrate_to_infinity(|x| f(-x), 0.0, tol);
    Estimate {
        value: right.value + left.value,
        error: right.error + left.error,
    }
}

/// Computes `∫_0^∞ g(x) cos(ω x) dx` for a smooth, slowly decaying `g`.
///
/// The range is cut into half-periods up to `cutoff`; beyond it two steps of
/// integration by parts give the tail from `g(cutoff)` and `g'(cutoff)`
/// (supplied by `dg`). The cutoff is moved to a zero of `sin(ω x)`.
pub fn cosine_integral<F, D>(g: F, dg: D, omega: f64, cutoff: f64, tol: Tolerance) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if omega == 0.0 {
        return integrate_to_infinity(g, 0.0, tol).value;
    }
    let half = std::f64::consts::PI / omega.abs();
    let pieces = (cutoff / half).ceil().max(1.0) as usize;
    let mut acc = NeumaierSum::new();
    for i in 0..pieces {
        let a = i as f64 * half;
        let est = integrate(|x| g(x) * (omega * x).cos(), a, a + half, tol);
        acc.add(est.value);
    }
    let x0 = pieces as f64 * half;
    // ∫_{x0}^∞ g cos(ωx) = [g sin/ω]_{x0}^∞ + [g' cos/ω²]_{x0}^∞ − ∫ g'' cos/ω²
    // sin(ω x0) = 0 and cos(ω x0) = ±1.
    let c0 = (omega * x0).cos();
    acc.add(-dg(x0) * c0 / (omega * omega));
    acc.value()
}
