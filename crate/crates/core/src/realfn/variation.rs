use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::realfn::bvfunc::BvFunc;
use crate::realfn::handle::RealFn;
use crate::realfn::interval::Interval;
use crate::realfn::staircase::{active_sets_disjoint, SingularStaircase};
use crate::scalar::{lit, Scalar};

/// Refinement schedule of the partition oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Dyadic level of the coarsest partition.
    pub min_level: u32,
    /// Dyadic level after which a non-converged estimate is an error.
    pub max_level: u32,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { min_level: 4, max_level: 22 }
    }
}

/// Result of the partition oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationEstimate<T> {
    pub estimate: T,
    /// Partition sums over the nested partitions, as a running maximum.
    pub lower_bounds: Vec<T>,
    /// Last increment of the sequence.
    pub increment: T,
    /// Dyadic level of the finest partition used.
    pub level: u32,
}

/// How [`total_variation_detailed`] obtained its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariationMode {
    Structural,
    Oracle,
}

const PAR_THRESHOLD: usize = 1 << 13;

fn partition_sum<T: Scalar, F: RealFn<T> + ?Sized>(f: &F, breaks: &[T], lo: T, hi: T, level: u32) -> T {
    let n = 1usize << level;
    let step = (hi - lo) / T::from_usize_lossy(n);
    let mut pts = Vec::with_capacity(n + 1 + breaks.len());
    let mut j = 0;
    for i in 0..=n {
        let g = if i == n { hi } else { lo + step * T::from_usize_lossy(i) };
        while j < breaks.len() && breaks[j] < g {
            pts.push(breaks[j]);
            j += 1;
        }
        if pts.last() != Some(&g) {
            pts.push(g);
        }
    }
    let values: Vec<T> = if pts.len() > PAR_THRESHOLD {
        pts.par_iter().map(|&x| f.eval(x)).collect()
    } else {
        pts.iter().map(|&x| f.eval(x)).collect()
    };
    values.windows(2).fold(T::zero(), |s, w| s + (w[1] - w[0]).abs())
}

/// Brute-force total variation: partition sums over nested partitions made of
/// the dyadic grid at increasing levels plus every breakpoint `f` reports.
/// Stops when the running maximum grows by less than `tol`.
pub fn variation_oracle<T: Scalar, F: RealFn<T> + ?Sized>(
    f: &F,
    interval: Interval<T>,
    tol: T,
) -> Result<VariationEstimate<T>> {
    variation_oracle_with(f, interval, tol, OracleOptions::default())
}

pub fn variation_oracle_with<T: Scalar, F: RealFn<T> + ?Sized>(
    f: &F,
    interval: Interval<T>,
    tol: T,
    opts: OracleOptions,
) -> Result<VariationEstimate<T>> {
    if !(tol > T::zero()) {
        return Err(Error::Parameter(format!("oracle tolerance must be positive, got {tol}")));
    }
    if opts.min_level > opts.max_level || opts.max_level > 30 {
        return Err(Error::Parameter(format!("bad oracle levels {}..={}", opts.min_level, opts.max_level)));
    }
    let (lo, hi) = (interval.lo(), interval.hi());
    if lo == hi {
        return Ok(VariationEstimate { estimate: T::zero(), lower_bounds: vec![T::zero()], increment: T::zero(), level: 0 });
    }
    let mut breaks: Vec<T> = f.breakpoints(lo, hi).into_iter().filter(|&x| x > lo && x < hi).collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();

    let mut seq: Vec<T> = Vec::new();
    let mut increment = T::infinity();
    let mut level = opts.min_level;
    loop {
        let s = partition_sum(f, &breaks, lo, hi, level);
        match seq.last().copied() {
            None => seq.push(s),
            Some(best) => {
                increment = (s - best).max(T::zero());
                seq.push(best.max(s));
                if increment < tol {
                    break;
                }
            }
        }
        if level == opts.max_level {
            let estimate = *seq.last().unwrap();
            return Err(Error::OracleNonConvergence {
                estimate: estimate.as_f64(),
                increment: increment.as_f64(),
                tol: tol.as_f64(),
                level,
            });
        }
        level += 1;
    }
    Ok(VariationEstimate { estimate: *seq.last().unwrap(), lower_bounds: seq, increment, level })
}

/// Exact variation from the Lebesgue normal form, when certified: staircases
/// with pairwise disjoint active sets on `[lo, hi]`, each running in the same
/// direction as the ac part on its hull.
pub(crate) fn structural_variation<T: Scalar>(f: &BvFunc<T>, lo: T, hi: T) -> Option<T> {
    if !(lo <= hi) {
        return None;
    }
    let ac = f.ac();
    let ac_var = ac.variation(lo, hi);
    let live: Vec<&SingularStaircase<T>> = f
        .singular()
        .iter()
        .filter(|s| {
            let (a, b) = s.hull();
            a.max(lo) < b.min(hi)
        })
        .collect();
    if live.is_empty() {
        return Some(ac_var);
    }
    if !active_sets_disjoint(&live, lo, hi) {
        return None;
    }
    for s in &live {
        let (a, b) = s.hull();
        let dir = ac.monotone_direction(a.max(lo), b.min(hi))?;
        let sign = if s.scale() > T::zero() { 1 } else { -1 };
        if dir != 0 && dir != sign {
            return None;
        }
    }
    // the staircases rise on disjoint sets and the ac part never opposes
    // them, so the variation of the sum splits into ac and singular parts
    let mut parts: Vec<T> = live.iter().map(|s| s.variation_on(lo, hi)).collect();
    parts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Some(parts.into_iter().fold(ac_var, |acc, v| acc + v))
}

/// Total variation on `interval`, exact when the structure certifies it and
/// from the oracle otherwise.
pub fn total_variation<T: Scalar, F: RealFn<T> + ?Sized>(f: &F, interval: Interval<T>) -> Result<T> {
    total_variation_detailed(f, interval).map(|(v, _)| v)
}

pub fn total_variation_detailed<T: Scalar, F: RealFn<T> + ?Sized>(
    f: &F,
    interval: Interval<T>,
) -> Result<(T, VariationMode)> {
    if let Some(v) = f.structural_variation(interval.lo(), interval.hi()) {
        return Ok((v, VariationMode::Structural));
    }
    let tol = T::default_tol() * lit(0.1);
    Ok((variation_oracle(f, interval, tol)?.estimate, VariationMode::Oracle))
}

/// `|F(0)| + V_0^1(F)`.
pub fn bv_norm<T: Scalar, F: RealFn<T> + ?Sized>(f: &F) -> Result<T> {
    Ok(f.eval(T::zero()).abs() + total_variation(f, Interval::unit())?)
}
