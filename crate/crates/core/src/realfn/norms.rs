use rayon::prelude::*;

use crate::error::Result;
use crate::realfn::handle::RealFn;
use crate::realfn::interval::Interval;
use crate::realfn::quadrature::{integrate, Estimate, QuadratureOptions};
use crate::scalar::{lit, sort_dedup, Scalar};

/// `∫ |f|` over `interval` by adaptive quadrature, split first at the
/// breakpoints `f` reports.
pub fn l1_norm<T: Scalar, F: RealFn<T> + ?Sized>(f: &F, interval: Interval<T>) -> Result<Estimate<T>> {
    l1_norm_with(f, interval, QuadratureOptions::default())
}

pub fn l1_norm_with<T: Scalar, F: RealFn<T> + ?Sized>(
    f: &F,
    interval: Interval<T>,
    opts: QuadratureOptions<T>,
) -> Result<Estimate<T>> {
    let (lo, hi) = (interval.lo(), interval.hi());
    let splits = f.breakpoints(lo, hi);
    integrate(|x| f.eval(x).abs(), lo, hi, &splits, opts)
}

const GOLDEN: f64 = 0.381_966_011_250_105_1;
const TOP_CANDIDATES: usize = 4;

fn golden_max<T: Scalar>(f: &(impl Fn(T) -> T + ?Sized), mut a: T, mut b: T) -> (T, T) {
    let g: T = lit(GOLDEN);
    let mut x1 = a + g * (b - a);
    let mut x2 = b - g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if b - a <= T::epsilon() * lit(4.0) * (T::one() + a.abs()) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Supremum of `f` on `[lo, hi]`: values at the seeds and on a dyadic grid
/// refined from 2^6 to 2^12 cells, with golden-section search around the
/// best grid maxima, stopping once two levels agree within `1e-9`.
/// Always a value actually attained, hence a lower bound.
pub fn sup_estimate<T: Scalar>(f: &(impl Fn(T) -> T + Sync + ?Sized), lo: T, hi: T, seeds: &[T]) -> T {
    let mut pts: Vec<T> = seeds.iter().copied().filter(|&x| x >= lo && x <= hi).collect();
    pts.push(lo);
    pts.push(hi);
    sort_dedup(&mut pts);
    let mut best = pts.iter().map(|&x| f(x)).fold(T::neg_infinity(), T::max);
    if lo == hi {
        return best;
    }
    let mut prev: Option<T> = None;
    for level in 6..=12u32 {
        let n = 1usize << level;
        let step = (hi - lo) / T::from_usize_lossy(n);
        let xs: Vec<T> = (0..=n).map(|i| if i == n { hi } else { lo + step * T::from_usize_lossy(i) }).collect();
        let vals: Vec<T> = xs.par_iter().map(|&x| f(x)).collect();
        let mut peaks: Vec<usize> = (0..=n)
            .filter(|&i| (i == 0 || vals[i] >= vals[i - 1]) && (i == n || vals[i] >= vals[i + 1]))
            .collect();
        peaks.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap_or(std::cmp::Ordering::Equal));
        peaks.truncate(TOP_CANDIDATES);
        for &v in &vals {
            best = best.max(v);
        }
        for i in peaks {
            let a = if i == 0 { xs[0] } else { xs[i - 1] };
            let b = if i == n { xs[n] } else { xs[i + 1] };
            best = best.max(golden_max(f, a, b).1);
        }
        if let Some(p) = prev {
            if level >= 8 && best - p <= lit::<T>(1e-9) * (T::one() + best.abs()) {
                break;
            }
        }
        prev = Some(best);
    }
    best
}

/// `sup |f|` on `interval`, seeded with the breakpoints of `f`.
pub fn uniform_norm<T: Scalar, F: RealFn<T> + ?Sized>(f: &F, interval: Interval<T>) -> T {
    let (lo, hi) = (interval.lo(), interval.hi());
    let seeds = f.breakpoints(lo, hi);
    sup_estimate(&|x| f.eval(x).abs(), lo, hi, &seeds)
}
