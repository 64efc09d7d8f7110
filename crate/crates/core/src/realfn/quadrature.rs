//! Adaptive Gauss–Kronrod (7/15) quadrature with known split points.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{lit, sort_dedup, Scalar};

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
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions<T> {
    /// Absolute tolerance on the total error bound.
    pub tol: T,
    /// Subdivisions allowed beyond the initial split.
    pub max_subdivisions: usize,
}

impl<T: Scalar> Default for QuadratureOptions<T> {
    fn default() -> Self {
        Self { tol: T::default_tol(), max_subdivisions: 4000 }
    }
}

impl<T: Scalar> QuadratureOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// One Kronrod panel: (value, |K15 − G7|).
pub fn gauss_kronrod<T: Scalar>(f: &impl Fn(T) -> T, a: T, b: T) -> (T, T) {
    let half = (b - a) * lit(0.5);
    let center = (a + b) * lit(0.5);
    let fc = f(center);
    let mut kron = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        kron = kron + s * lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * lit(WG[j / 2]);
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Scalar> Eq for Panel<T> {}
impl<T: Scalar> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`, splitting first at
/// every point of `splits` inside the interval.
pub fn integrate<T: Scalar>(
    f: impl Fn(T) -> T,
    a: T,
    b: T,
    splits: &[T],
    opts: QuadratureOptions<T>,
) -> Result<Estimate<T>> {
    if a == b {
        return Ok(Estimate { value: T::zero(), error: T::zero() });
    }
    if a > b {
        let e = integrate(f, b, a, splits, opts)?;
        return Ok(Estimate { value: -e.value, error: e.error });
    }
    let mut knots: Vec<T> = splits.iter().copied().filter(|&s| s > a && s < b).collect();
    knots.push(a);
    knots.push(b);
    sort_dedup(&mut knots);
    let mut heap = BinaryHeap::with_capacity(knots.len() + 16);
    let (mut total, mut err) = (T::zero(), T::zero());
    for w in knots.windows(2) {
        let (value, error) = gauss_kronrod(&f, w[0], w[1]);
        total = total + value;
        err = err + error;
        heap.push(Panel { a: w[0], b: w[1], value, error });
    }
    let mut splits_done = 0;
    while err > opts.tol {
        if splits_done >= opts.max_subdivisions {
            return Err(Error::Quadrature { tol: opts.tol.as_f64(), error: err.as_f64(), intervals: heap.len() });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = (worst.a + worst.b) * lit(0.5);
        if !(mid > worst.a && mid < worst.b) {
            // cannot subdivide further in this precision
            heap.push(worst);
            return Err(Error::Quadrature { tol: opts.tol.as_f64(), error: err.as_f64(), intervals: heap.len() });
        }
        let (v1, e1) = gauss_kronrod(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod(&f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        err = err - worst.error + e1 + e2;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        splits_done += 1;
        if splits_done % 64 == 0 {
            // refresh running sums against cancellation drift
            total = heap.iter().fold(T::zero(), |s, p| s + p.value);
            err = heap.iter().fold(T::zero(), |s, p| s + p.error);
        }
    }
    let value = heap.iter().fold(T::zero(), |s, p| s + p.value);
    Ok(Estimate { value, error: err })
}
