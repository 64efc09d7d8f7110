use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::diffeo::explift::ExpLift;
use crate::diffeo::jet;
use crate::diffeo::manifold::Manifold;
use crate::diffeo::solve::solve_increasing;
use crate::error::{Error, Result};
use crate::realfn::{BvFunc, PiecewisePolynomial, Polynomial, RealFn};
use crate::scalar::{lit, sort_dedup, Scalar};

/// Largest supported regularity order `k`.
pub const MAX_ORDER: usize = 8;

/// Regularity class of a diffeomorphism of order `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegularityClass {
    /// `C^k`.
    #[serde(rename = "Ck")]
    Ck,
    /// `C^k` with absolutely continuous `k`-th derivative.
    #[serde(rename = "CkAC")]
    CkAc,
    /// `C^k` with `k`-th derivative of bounded variation.
    #[serde(rename = "CkBV")]
    CkBv,
}

impl RegularityClass {
    fn rank(self) -> u8 {
        match self {
            RegularityClass::CkAc => 0,
            RegularityClass::CkBv => 1,
            RegularityClass::Ck => 2,
        }
    }

    /// The weaker of two classes, which is the class of a composition.
    pub fn weaker(self, other: Self) -> Self {
        if self.rank() >= other.rank() {
            self
        } else {
            other
        }
    }
}

#[derive(Debug)]
pub(crate) enum Repr<T> {
    /// Lift `x ↦ x + shift`.
    Translation { shift: T },
    /// Lift `x ↦ ⌊x⌋ + F(x − ⌊x⌋) + offset`, `F` the normalized `∫ e^G`.
    Exp { lift: ExpLift<T>, offset: T },
    /// Lift `x ↦ ⌊x⌋ + p(x − ⌊x⌋)` (interval: `p` itself).
    Polynomial { p: PiecewisePolynomial<T> },
    /// Lift `x ↦ outer(inner(x)) + shift` with an integer `shift`.
    Compose { outer: Diffeo<T>, inner: Diffeo<T>, shift: T },
    /// Lift `y ↦ base⁻¹(y) + shift` with an integer `shift`.
    Inverse { base: Diffeo<T>, shift: T },
}

#[derive(Debug)]
pub(crate) struct Inner<T> {
    pub(crate) manifold: Manifold,
    pub(crate) k: usize,
    pub(crate) class: RegularityClass,
    pub(crate) repr: Repr<T>,
    breaks: OnceLock<Vec<T>>,
}

/// Orientation-preserving diffeomorphism of the interval or the circle,
/// of regularity order `k`, evaluated through its lift.
///
/// Cloning is cheap; values are immutable.
#[derive(Debug, Clone)]
pub struct Diffeo<T> {
    pub(crate) inner: Arc<Inner<T>>,
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 || k > MAX_ORDER {
        return Err(Error::OrderOutOfRange { order: k, max: MAX_ORDER });
    }
    Ok(())
}

fn unit_offset<T: Scalar>(r: T) -> T {
    let o = r - r.floor();
    if o >= T::one() {
        T::zero()
    } else {
        o
    }
}

/// Integer part of a lift value that should be exactly normalized: values
/// within rounding of an integer count as that integer, so a composite that
/// returns `0` to `1 − 1e-16` is still normalized to `f̃(0) ≈ 0`.
fn lift_floor<T: Scalar>(v: T) -> T {
    let n = v.round();
    if (v - n).abs() <= lit::<T>(1e-12) {
        n
    } else {
        v.floor()
    }
}

fn close<T: Scalar>(a: T, b: T, tol: T) -> bool {
    (a - b).abs() <= tol * (T::one() + a.abs().max(b.abs()))
}

impl<T: Scalar> Diffeo<T> {
    fn build(manifold: Manifold, k: usize, class: RegularityClass, repr: Repr<T>) -> Self {
        Self { inner: Arc::new(Inner { manifold, k, class, repr, breaks: OnceLock::new() }) }
    }

    pub fn identity(manifold: Manifold, k: usize) -> Result<Self> {
        check_order(k)?;
        Ok(Self::build(manifold, k, RegularityClass::CkAc, Repr::Translation { shift: T::zero() }))
    }

    /// Rotation of the circle by `h` turns (taken mod 1).
    pub fn rotation(h: T, k: usize) -> Result<Self> {
        check_order(k)?;
        if !h.is_finite() {
            return Err(Error::Parameter(format!("rotation offset must be finite, got {h}")));
        }
        Ok(Self::build(Manifold::Circle, k, RegularityClass::CkAc, Repr::Translation { shift: unit_offset(h) }))
    }

    /// The diffeomorphism with `log f' = G − log ∫₀¹ e^G`, followed on the
    /// circle by the rotation `rotation_offset`.
    ///
    /// For `k ≥ 2`, `G` must be `C^{k−1}` without singular part; on the circle
    /// `G` and its first `k − 1` derivatives must agree at 0 and 1.
    pub fn from_log_derivative(g: BvFunc<T>, manifold: Manifold, rotation_offset: T, k: usize) -> Result<Self> {
        check_order(k)?;
        if !rotation_offset.is_finite() {
            return Err(Error::Parameter(format!("rotation offset must be finite, got {rotation_offset}")));
        }
        if manifold == Manifold::Interval && rotation_offset != T::zero() {
            return Err(Error::Parameter("rotation offset is only meaningful on the circle".into()));
        }
        let tol = lit::<T>(1e-9).max(T::epsilon() * lit(64.0));
        if k >= 2 {
            if !g.singular().is_empty() {
                return Err(Error::Regularity(format!("order {k} needs a log-derivative without singular part")));
            }
            if !g.ac().is_smooth_to_order(k - 1, tol) {
                return Err(Error::Regularity(format!("order {k} needs a C^{} log-derivative", k - 1)));
            }
        }
        if manifold == Manifold::Circle {
            let (g0, g1) = (g.value(T::zero()), g.value(T::one()));
            if !close(g0, g1, tol) {
                return Err(Error::CircleCompatibility(format!("G(0) = {g0} but G(1) = {g1}")));
            }
            for j in 1..k {
                let (d0, d1) = (g.ac().derivative_at(T::zero(), j), g.ac().derivative_at(T::one(), j));
                if !close(d0, d1, tol) {
                    return Err(Error::CircleCompatibility(format!("G^({j})(0) = {d0} but G^({j})(1) = {d1}")));
                }
            }
        }
        let class = if g.singular().is_empty() { RegularityClass::CkAc } else { RegularityClass::CkBv };
        let offset = if manifold == Manifold::Circle { unit_offset(rotation_offset) } else { T::zero() };
        Ok(Self::build(manifold, k, class, Repr::Exp { lift: ExpLift::new(g)?, offset }))
    }

    /// A diffeomorphism given by a piecewise polynomial lift `p` on `[0, 1]`.
    ///
    /// Interval: `p(0) = 0`, `p(1) = 1`. Circle: `p(0) ∈ [0, 1)`,
    /// `p(1) = p(0) + 1` and `p^{(j)}(0) = p^{(j)}(1)` for `j ≤ k`. In both
    /// cases `p' > 0` and `p` is `C^k` across its breakpoints.
    pub fn from_lift_polynomial(p: PiecewisePolynomial<T>, manifold: Manifold, k: usize) -> Result<Self> {
        check_order(k)?;
        let tol = lit::<T>(1e-12).max(T::epsilon() * lit(64.0));
        let (p0, p1) = (p.eval(T::zero()), p.eval(T::one()));
        match manifold {
            Manifold::Interval => {
                if !close(p0, T::zero(), tol) || !close(p1, T::one(), tol) {
                    return Err(Error::Parameter(format!("interval lift must fix 0 and 1, got {p0} and {p1}")));
                }
            }
            Manifold::Circle => {
                if !(p0 >= T::zero() && p0 < T::one()) || !close(p1, p0 + T::one(), tol) {
                    return Err(Error::CircleCompatibility(format!("lift values {p0} at 0 and {p1} at 1")));
                }
                for j in 1..=k {
                    let (d0, d1) = (p.derivative_at(T::zero(), j), p.derivative_at(T::one(), j));
                    if !close(d0, d1, lit(1e-9)) {
                        return Err(Error::CircleCompatibility(format!("lift derivative {j}: {d0} at 0, {d1} at 1")));
                    }
                }
            }
        }
        if !p.is_smooth_to_order(k, lit(1e-9)) {
            return Err(Error::Regularity(format!("lift is not C^{k} across its breakpoints")));
        }
        let mut min_slope = T::infinity();
        let breaks = p.breakpoints().to_vec();
        for (w, piece) in breaks.windows(2).zip(p.pieces()) {
            let d = piece.derivative();
            let mut cands = vec![w[0], w[1]];
            cands.extend(d.critical_points_in(w[0], w[1]));
            for x in cands {
                min_slope = min_slope.min(d.eval(x));
            }
        }
        if !(min_slope > T::zero()) {
            return Err(Error::Parameter(format!("lift is not strictly increasing (min slope {min_slope})")));
        }
        Ok(Self::build(manifold, k, RegularityClass::CkAc, Repr::Polynomial { p }))
    }

    /// Single polynomial lift; see [`Diffeo::from_lift_polynomial`].
    pub fn from_polynomial(p: Polynomial<T>, manifold: Manifold, k: usize) -> Result<Self> {
        Self::from_lift_polynomial(PiecewisePolynomial::from_polynomial(p), manifold, k)
    }

    pub fn manifold(&self) -> Manifold {
        self.inner.manifold
    }

    /// Regularity order `k`.
    pub fn order(&self) -> usize {
        self.inner.k
    }

    pub fn class(&self) -> RegularityClass {
        self.inner.class
    }

    /// Whether this is a rotation (or the identity) by construction.
    pub fn is_translation(&self) -> bool {
        matches!(self.inner.repr, Repr::Translation { .. })
    }

    fn split(&self, x: T) -> (T, T) {
        match self.inner.manifold {
            Manifold::Interval => (T::zero(), x),
            Manifold::Circle => {
                let m = x.floor();
                (m, x - m)
            }
        }
    }

    /// Taylor coefficients of the lift at `x` up to order `n`.
    pub(crate) fn jet(&self, x: T, n: usize) -> Vec<T> {
        match &self.inner.repr {
            Repr::Translation { shift } => {
                let mut out = vec![T::zero(); n + 1];
                out[0] = x + *shift;
                if n >= 1 {
                    out[1] = T::one();
                }
                out
            }
            Repr::Exp { lift, offset } => {
                let (m, t) = self.split(x);
                let mut out = lift.jet(t, n);
                out[0] = out[0] + m + *offset;
                out
            }
            Repr::Polynomial { p } => {
                let (m, t) = self.split(x);
                let mut out = p.taylor_at(t, n);
                out[0] = p.eval(t) + m;
                out
            }
            Repr::Compose { outer, inner, shift } => {
                let gi = inner.jet(x, n);
                let fo = outer.jet(gi[0], n);
                let mut out = jet::compose(&fo, &gi);
                out[0] = out[0] + *shift;
                out
            }
            Repr::Inverse { base, shift } => {
                let x0 = base.preimage_unchecked(x);
                let mut out = jet::revert(&base.jet(x0, n), x0);
                out[0] = out[0] + *shift;
                out
            }
        }
    }

    /// The lift `f̃(x)`, defined for all real `x` on the circle.
    pub fn lift(&self, x: T) -> T {
        match &self.inner.repr {
            Repr::Translation { shift } => x + *shift,
            Repr::Exp { lift, offset } => {
                let (m, t) = self.split(x);
                m + lift.primitive(t) + *offset
            }
            Repr::Polynomial { p } => {
                let (m, t) = self.split(x);
                m + p.eval(t)
            }
            Repr::Compose { outer, inner, shift } => outer.lift(inner.lift(x)) + *shift,
            Repr::Inverse { base, shift } => base.preimage_unchecked(x) + *shift,
        }
    }

    /// `f(x)` in the `[0, 1]` parametrization (`[0, 1)` on the circle).
    pub fn eval(&self, x: T) -> T {
        let y = self.lift(x);
        match self.inner.manifold {
            Manifold::Interval => y,
            Manifold::Circle => unit_offset(y),
        }
    }

    /// `f^{(j)}(x)` for `1 ≤ j ≤ k + 1`; order `k + 1` is the a.e. density.
    pub fn derivative(&self, x: T, j: usize) -> Result<T> {
        if j == 0 || j > self.inner.k + 1 {
            return Err(Error::OrderOutOfRange { order: j, max: self.inner.k + 1 });
        }
        Ok(jet::to_derivatives(&self.jet(x, j))[j])
    }

    /// `[f(x), f'(x), …, f^{(n)}(x)]` of the lift, unchecked.
    pub fn derivatives_unchecked(&self, x: T, n: usize) -> Vec<T> {
        jet::to_derivatives(&self.jet(x, n))
    }

    /// Solves `f̃(x) = y`.
    pub fn preimage(&self, y: T) -> Result<T> {
        self.try_preimage(y).map_err(|_| Error::RootNonConvergence { target: y.as_f64() })
    }

    pub(crate) fn preimage_unchecked(&self, y: T) -> T {
        match self.try_preimage(y) {
            Ok(x) | Err(x) => x,
        }
    }

    fn try_preimage(&self, y: T) -> Result<T, T> {
        if let Repr::Translation { shift } = &self.inner.repr {
            return Ok(y - *shift);
        }
        let f = |x: T| {
            let j = self.jet(x, 1);
            (j[0], j[1])
        };
        match self.inner.manifold {
            Manifold::Circle => {
                let m = y.floor();
                let r = y - m;
                // f̃(−1) = f̃(0) − 1 < 0 ≤ r < 1 ≤ f̃(1)
                solve_increasing(f, r, -T::one(), T::one()).map(|x| x + m).map_err(|x| x + m)
            }
            Manifold::Interval => {
                let (mut lo, mut hi) = (T::zero(), T::one());
                for _ in 0..4 {
                    if self.lift(lo) <= y {
                        break;
                    }
                    lo = lo - T::one();
                }
                for _ in 0..4 {
                    if self.lift(hi) >= y {
                        break;
                    }
                    hi = hi + T::one();
                }
                solve_increasing(f, y, lo, hi)
            }
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Diffeo<T>) -> Result<Self> {
        if self.manifold() != g.manifold() {
            return Err(Error::ManifoldMismatch(format!("{} ∘ {}", self.manifold(), g.manifold())));
        }
        if self.order() != g.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: g.order() });
        }
        let class = self.class().weaker(g.class());
        let shift = match self.manifold() {
            Manifold::Interval => T::zero(),
            Manifold::Circle => -lift_floor(self.lift(g.lift(T::zero()))),
        };
        Ok(Self::build(self.manifold(), self.order(), class, Repr::Compose { outer: self.clone(), inner: g.clone(), shift }))
    }

    /// `self⁻¹`, evaluated by monotone root finding on the lift.
    pub fn invert(&self) -> Result<Self> {
        if let Repr::Translation { shift } = &self.inner.repr {
            let s = match self.manifold() {
                Manifold::Interval => -*shift,
                Manifold::Circle => unit_offset(-*shift),
            };
            return Ok(Self::build(self.manifold(), self.order(), self.class(), Repr::Translation { shift: s }));
        }
        for i in 0..=16 {
            let y = T::from_usize_lossy(i) / lit(16.0);
            self.preimage(y)?;
        }
        let shift = match self.manifold() {
            Manifold::Interval => T::zero(),
            Manifold::Circle => -lift_floor(self.preimage(T::zero())?),
        };
        Ok(Self::build(self.manifold(), self.order(), self.class(), Repr::Inverse { base: self.clone(), shift }))
    }

    /// Points in `[lo, hi]` where the derivative tower may fail to be smooth,
    /// endpoints included.
    pub fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        let all = self.inner.breaks.get_or_init(|| self.compute_breakpoints());
        let mut out: Vec<T> = all.iter().copied().filter(|&x| x > lo && x < hi).collect();
        out.push(lo);
        out.push(hi);
        sort_dedup(&mut out);
        out
    }

    /// Points `x ∈ [0, 1]` whose lift value is congruent (circle) or equal
    /// (interval) to one of `targets ⊂ [0, 1]`.
    pub(crate) fn preimages_of(&self, targets: &[T]) -> Vec<T> {
        let mut out = Vec::new();
        match self.manifold() {
            Manifold::Interval => {
                for &t in targets {
                    out.push(self.preimage_unchecked(t));
                }
            }
            Manifold::Circle => {
                let (a, b) = (self.lift(T::zero()), self.lift(T::one()));
                for &t in targets {
                    let mut m = (a - t).floor();
                    while t + m <= b {
                        if t + m >= a {
                            out.push(self.preimage_unchecked(t + m));
                        }
                        m = m + T::one();
                    }
                }
            }
        }
        out.retain(|&x| x >= T::zero() && x <= T::one());
        out
    }

    fn compute_breakpoints(&self) -> Vec<T> {
        let (zero, one) = (T::zero(), T::one());
        let mut pts = vec![zero, one];
        match &self.inner.repr {
            Repr::Translation { .. } => {}
            Repr::Exp { lift, .. } => pts.extend(lift.g.breakpoints(zero, one)),
            Repr::Polynomial { p } => pts.extend_from_slice(p.breakpoints()),
            Repr::Compose { outer, inner, .. } => {
                pts.extend(inner.breakpoints(zero, one));
                pts.extend(inner.preimages_of(&outer.breakpoints(zero, one)));
            }
            Repr::Inverse { base, .. } => {
                for b in base.breakpoints(zero, one) {
                    let y = base.lift(b);
                    pts.push(match self.manifold() {
                        Manifold::Interval => y,
                        Manifold::Circle => unit_offset(y),
                    });
                }
            }
        }
        sort_dedup(&mut pts);
        pts.retain(|&x| x >= zero && x <= one);
        pts
    }

    /// Handle on `f^{(j)}` for `1 ≤ j ≤ k + 1`.
    pub fn derivative_tower(&self, j: usize) -> Result<TowerHandle<T>> {
        if j == 0 || j > self.order() + 1 {
            return Err(Error::OrderOutOfRange { order: j, max: self.order() + 1 });
        }
        Ok(TowerHandle { f: self.clone(), j })
    }

    pub(crate) fn repr(&self) -> &Repr<T> {
        &self.inner.repr
    }
}

/// `x ↦ f^{(j)}(x)` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct TowerHandle<T> {
    f: Diffeo<T>,
    j: usize,
}

impl<T: Scalar> TowerHandle<T> {
    pub fn order(&self) -> usize {
        self.j
    }
}

impl<T: Scalar> RealFn<T> for TowerHandle<T> {
    fn eval(&self, x: T) -> T {
        jet::to_derivatives(&self.f.jet(x, self.j))[self.j]
    }

    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        self.f.breakpoints(lo, hi)
    }
}
