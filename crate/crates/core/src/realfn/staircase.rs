//! Depth-truncated Cantor-type staircases.
//!
//! The base function `C` on `[0, 1]` keeps the outer `1/R` of every interval
//! (R is the radix, 3 for the classical Cantor function) and is constant on
//! the removed middle parts. After `depth` levels the remaining `2^depth`
//! rise intervals carry a linear ramp, so the truncated function is exactly
//! representable, monotone, and has variation 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realfn::handle::RealFn;
use crate::scalar::{lit, sort_dedup, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StaircaseBase {
    Cantor,
}

/// `x ↦ scale · C((x + offset − a) / (b − a))`, with `C` clamped to 0 left of
/// its domain and 1 right of it.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularStaircase<T> {
    base: StaircaseBase,
    radix: u32,
    depth: u32,
    a: T,
    b: T,
    scale: T,
    offset: T,
}

pub const CLASSICAL_RADIX: u32 = 3;

impl<T: Scalar> SingularStaircase<T> {
    pub fn new(base: StaircaseBase, radix: u32, depth: u32, a: T, b: T, scale: T, offset: T) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Parameter("staircase depth must be at least 1".into()));
        }
        if radix < 3 {
            return Err(Error::Parameter(format!("staircase radix {radix} < 3")));
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Parameter(format!("staircase domain map needs a < b, got ({a}, {b})")));
        }
        if !scale.is_finite() || !offset.is_finite() {
            return Err(Error::Parameter("staircase scale and offset must be finite".into()));
        }
        Ok(Self { base, radix, depth, a, b, scale, offset })
    }

    /// Classical Cantor function on `[0, 1]` truncated at `depth`.
    pub fn cantor(depth: u32) -> Result<Self> {
        Self::new(StaircaseBase::Cantor, CLASSICAL_RADIX, depth, T::zero(), T::one(), T::one(), T::zero())
    }

    pub fn base(&self) -> StaircaseBase {
        self.base
    }
    pub fn radix(&self) -> u32 {
        self.radix
    }
    pub fn depth(&self) -> u32 {
        self.depth
    }
    pub fn a(&self) -> T {
        self.a
    }
    pub fn b(&self) -> T {
        self.b
    }
    pub fn scale(&self) -> T {
        self.scale
    }
    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn with_scale(&self, scale: T) -> Self {
        Self { scale, ..self.clone() }
    }

    pub fn with_offset(&self, offset: T) -> Self {
        Self { offset, ..self.clone() }
    }

    /// Same staircase with its domain map replaced.
    pub fn with_domain(&self, a: T, b: T) -> Result<Self> {
        Self::new(self.base, self.radix, self.depth, a, b, self.scale, self.offset)
    }

    fn to_base(&self, x: T) -> T {
        (x + self.offset - self.a) / (self.b - self.a)
    }

    fn domain_point(&self, t: T) -> T {
        self.a - self.offset + (self.b - self.a) * t
    }

    /// Truncated base function on its own coordinate.
    pub fn base_eval(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        if t >= T::one() {
            return T::one();
        }
        let r = T::from_u32(self.radix).unwrap();
        let keep_hi = r - T::one();
        let half = lit::<T>(0.5);
        let mut t = t;
        let mut v = T::zero();
        let mut w = T::one();
        for _ in 0..self.depth {
            t = t * r;
            if t <= T::one() {
                // left kept part
            } else if t >= keep_hi {
                v = v + w * half;
                t = t - keep_hi;
            } else {
                return v + w * half;
            }
            w = w * half;
        }
        v + w * t.max(T::zero()).min(T::one())
    }

    pub fn eval(&self, x: T) -> T {
        self.scale * self.base_eval(self.to_base(x))
    }

    /// Total variation over the whole line, `|scale|`.
    pub fn variation(&self) -> T {
        self.scale.abs()
    }

    /// Variation over `[lo, hi]`; the staircase is monotone.
    pub fn variation_on(&self, lo: T, hi: T) -> T {
        (self.eval(hi) - self.eval(lo)).abs()
    }

    /// Smallest interval outside which the staircase is constant.
    pub fn hull(&self) -> (T, T) {
        (self.domain_point(T::zero()), self.domain_point(T::one()))
    }

    /// Length of one depth-`depth` rise interval in `x`.
    pub fn rise_length(&self) -> T {
        let r = T::from_u32(self.radix).unwrap();
        (self.b - self.a) / r.powi(self.depth as i32)
    }

    /// Slope on every rise interval.
    pub fn rise_slope(&self) -> T {
        let two_pow = lit::<T>(2.0).powi(self.depth as i32);
        self.scale / (two_pow * self.rise_length())
    }

    /// Total length of the active set, `(2/R)^depth · (b − a)`.
    pub fn active_length(&self) -> T {
        let r = T::from_u32(self.radix).unwrap();
        (lit::<T>(2.0) / r).powi(self.depth as i32) * (self.b - self.a)
    }

    /// Rise intervals (in `x`) that meet `[lo, hi]`, sorted, unclipped.
    pub fn rise_intervals(&self, lo: T, hi: T) -> Vec<(T, T)> {
        let (h0, h1) = self.hull();
        let mut out = Vec::new();
        if h1 < lo || h0 > hi {
            return out;
        }
        let r = T::from_u32(self.radix).unwrap();
        let width = self.b - self.a;
        self.collect_rises(T::zero(), T::one(), 0, r, width, lo, hi, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn collect_rises(&self, start: T, len: T, level: u32, r: T, width: T, lo: T, hi: T, out: &mut Vec<(T, T)>) {
        let x0 = self.a - self.offset + width * start;
        let x1 = x0 + width * len;
        if x1 < lo || x0 > hi {
            return;
        }
        if level == self.depth {
            out.push((x0, x1));
            return;
        }
        let child = len / r;
        self.collect_rises(start, child, level + 1, r, width, lo, hi, out);
        self.collect_rises(start + len - child, child, level + 1, r, width, lo, hi, out);
    }

    /// Whether `x` lies in the closed active set, where the truncated staircase
    /// ramps and the singular limit has no derivative.
    pub fn in_active_set(&self, x: T) -> bool {
        let t = self.to_base(x);
        if t < T::zero() || t > T::one() {
            return false;
        }
        let r = T::from_u32(self.radix).unwrap();
        let keep_hi = r - T::one();
        let mut t = t;
        for _ in 0..self.depth {
            t = t * r;
            if t <= T::one() {
            } else if t >= keep_hi {
                t = t - keep_hi;
            } else {
                return false;
            }
        }
        true
    }

    /// Canonical ordering key that ignores the sign of the scale.
    pub(crate) fn sort_key(&self) -> (u32, u32, T, T, T, T) {
        (self.radix, self.depth, self.a, self.b, self.offset, self.scale.abs())
    }
}

impl<T: Scalar> RealFn<T> for SingularStaircase<T> {
    fn eval(&self, x: T) -> T {
        SingularStaircase::eval(self, x)
    }

    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        let mut out: Vec<T> = self
            .rise_intervals(lo, hi)
            .into_iter()
            .flat_map(|(a, b)| [a, b])
            .filter(|&x| x >= lo && x <= hi)
            .collect();
        sort_dedup(&mut out);
        out
    }
}

/// Certifies that the rise intervals of the given staircases, restricted to
/// `[lo, hi]`, have pairwise disjoint interiors. Contacts below a few ulps
/// count as touching.
pub fn active_sets_disjoint<T: Scalar>(stairs: &[&SingularStaircase<T>], lo: T, hi: T) -> bool {
    if stairs.len() < 2 {
        return true;
    }
    // only staircases whose hulls meet another hull need enumeration
    let hulls: Vec<(T, T)> = stairs
        .iter()
        .map(|s| {
            let (a, b) = s.hull();
            (a.max(lo), b.min(hi))
        })
        .collect();
    let mut involved = vec![false; stairs.len()];
    for i in 0..stairs.len() {
        for j in (i + 1)..stairs.len() {
            let (a, b) = (hulls[i], hulls[j]);
            if a.0 < a.1 && b.0 < b.1 && a.0 < b.1 && b.0 < a.1 {
                involved[i] = true;
                involved[j] = true;
            }
        }
    }
    let mut rises: Vec<(T, T, usize)> = Vec::new();
    for (k, s) in stairs.iter().enumerate().filter(|(k, _)| involved[*k]) {
        rises.extend(
            s.rise_intervals(lo, hi)
                .into_iter()
                .map(|(a, b)| (a.max(lo), b.min(hi), k))
                .filter(|(a, b, _)| a < b),
        );
    }
    rises.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let ulps = T::epsilon() * lit(64.0);
    let mut reach: Option<(T, usize)> = None;
    for (a, b, k) in rises {
        if let Some((end, owner)) = reach {
            let tol = ulps * T::one().max(a.abs());
            if owner != k && a < end - tol {
                return false;
            }
            if b > end {
                reach = Some((b, k));
            }
        } else {
            reach = Some((b, k));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor(d: u32) -> SingularStaircase<f64> {
        SingularStaircase::cantor(d).unwrap()
    }

    /// Independent oracle: ternary digits of `t`, 2 ↦ 1, stop at the first 1.
    fn digit_map(t_num: u64, t_den: u64, depth: u32) -> f64 {
        // exact rational t = num/den
        let (mut num, den) = (t_num, t_den);
        let mut v = 0.0;
        let mut w = 0.5;
        for _ in 0..depth {
            num *= 3;
            let d = num / den;
            num %= den;
            match d {
                0 => {}
                1 => return v + w,
                _ => v += w,
            }
            w /= 2.0;
        }
        // remaining linear ramp
        v + 2.0 * w * (num as f64 / den as f64)
    }

    #[test]
    fn endpoints_and_known_values() {
        let c = cantor(20);
        assert_eq!(c.eval(0.0), 0.0);
        assert_eq!(c.eval(1.0), 1.0);
        assert!((c.eval(0.5) - 0.5).abs() < 1e-15);
        assert!((c.eval(1.0 / 3.0) - 0.5).abs() < 1e-12);
        assert!((c.eval(2.0 / 9.0) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn matches_digit_oracle_on_rationals() {
        let c = cantor(12);
        for (n, d) in [(1u64, 4u64), (3, 4), (1, 7), (5, 13), (2, 9), (7, 27), (100, 243)] {
            let want = digit_map(n, d, 12);
            let got = c.eval(n as f64 / d as f64);
            assert!((got - want).abs() < 1e-12, "{n}/{d}: {got} vs {want}");
        }
    }

    #[test]
    fn active_set_structure() {
        for d in [1, 4, 9] {
            let c = cantor(d);
            let rises = c.rise_intervals(0.0, 1.0);
            assert_eq!(rises.len(), 1 << d);
            let total: f64 = rises.iter().map(|(a, b)| b - a).sum();
            assert!((total - (2.0f64 / 3.0).powi(d as i32)).abs() < 1e-12);
            assert!((c.active_length() - total).abs() < 1e-12);
            assert!(rises.windows(2).all(|w| w[0].1 <= w[1].0));
        }
    }

    #[test]
    fn monotone_and_flat_off_active_set() {
        let c = cantor(6);
        let mut prev = 0.0;
        for i in 0..=3000 {
            let x = i as f64 / 3000.0;
            let v = c.eval(x);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        // middle gap
        assert!(!c.in_active_set(0.5));
        assert_eq!(c.eval(0.4), c.eval(0.6));
        assert!(c.in_active_set(0.0));
    }

    #[test]
    fn translate_and_scale() {
        let s = SingularStaircase::<f64>::new(StaircaseBase::Cantor, 3, 8, 0.25, 0.75, -2.0, 0.1).unwrap();
        assert_eq!(s.hull(), (0.15, 0.65));
        assert_eq!(s.eval(0.0), 0.0);
        assert_eq!(s.eval(1.0), -2.0);
        assert!((s.eval(0.4) + 1.0).abs() < 1e-12);
        assert_eq!(s.variation(), 2.0);
        assert!((s.variation_on(0.0, 0.4) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn radix_four_is_exact_in_binary() {
        let s = SingularStaircase::new(StaircaseBase::Cantor, 4, 10, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(s.eval(0.25), 0.5);
        assert_eq!(s.eval(0.5), 0.5);
        assert_eq!(s.eval(0.75), 0.5);
        assert_eq!(s.eval(1.0 / 16.0), 0.25);
        assert_eq!(s.active_length(), 0.5f64.powi(10));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SingularStaircase::<f64>::cantor(0).is_err());
        assert!(SingularStaircase::new(StaircaseBase::Cantor, 2, 3, 0.0, 1.0, 1.0, 0.0).is_err());
        assert!(SingularStaircase::new(StaircaseBase::Cantor, 3, 3, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn disjointness_certificate() {
        let g = SingularStaircase::new(StaircaseBase::Cantor, 4, 6, 0.25, 0.75, 1.0, 0.0).unwrap();
        // translate by an odd multiple of the finest scale in a gap-aligned spot
        let far = g.with_offset(0.6);
        assert!(active_sets_disjoint(&[&g, &far], 0.0, 1.0));
        let near = g.with_offset(g.rise_length() / 2.0);
        assert!(!active_sets_disjoint(&[&g, &near], 0.0, 1.0));
    }

    #[test]
    fn works_in_single_precision() {
        let c = SingularStaircase::<f32>::cantor(10).unwrap();
        assert!((c.eval(0.5) - 0.5).abs() < 1e-6);
        assert!((c.eval(2.0 / 9.0) - 0.25).abs() < 1e-5);
    }
}
