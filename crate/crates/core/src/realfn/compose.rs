use crate::diffeo::{Diffeo, Manifold};
use crate::error::{Error, Result};
use crate::realfn::bvfunc::BvFunc;
use crate::realfn::handle::RealFn;
use crate::scalar::{lit, sort_dedup, Scalar};

/// `F ∘ u` for `F` on `[0, 1]` and a homeomorphism `u`, as a function on
/// `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Composed<T> {
    f: BvFunc<T>,
    u: Diffeo<T>,
}

/// `F ∘ u`, where `u` must act on `manifold`.
pub fn compose_with<T: Scalar>(f: &BvFunc<T>, u: &Diffeo<T>, manifold: Manifold) -> Result<Composed<T>> {
    if u.manifold() != manifold {
        return Err(Error::ManifoldMismatch(format!("function on the {manifold}, map of the {}", u.manifold())));
    }
    Ok(Composed { f: f.clone(), u: u.clone() })
}

impl<T: Scalar> Composed<T> {
    pub fn function(&self) -> &BvFunc<T> {
        &self.f
    }

    pub fn map(&self) -> &Diffeo<T> {
        &self.u
    }

    /// Whether the circle lift crosses an integer inside `(0, 1)`, where
    /// `F ∘ u` jumps from `F(1)` to `F(0)`.
    fn wraps(&self) -> bool {
        if self.u.manifold() != Manifold::Circle {
            return false;
        }
        let a = self.u.lift(T::zero());
        a != a.floor()
    }
}

impl<T: Scalar> RealFn<T> for Composed<T> {
    fn eval(&self, x: T) -> T {
        let y = self.u.lift(x);
        let y = match self.u.manifold() {
            Manifold::Interval => y.max(T::zero()).min(T::one()),
            Manifold::Circle => {
                let r = y - y.floor();
                if r >= T::one() {
                    T::zero()
                } else {
                    r
                }
            }
        };
        self.f.value(y)
    }

    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        let (zero, one) = (T::zero(), T::one());
        let mut pts = self.u.preimages_of(&self.f.breakpoints(zero, one));
        if self.wraps() {
            let q = self.u.preimage_unchecked(self.u.lift(zero).floor() + one);
            let eta = lit::<T>(1e-12);
            pts.extend([q - eta, q, q + eta]);
        }
        pts.retain(|&x| x >= lo && x <= hi);
        pts.push(lo);
        pts.push(hi);
        sort_dedup(&mut pts);
        pts
    }

    /// `V(F ∘ u) = V(F)` over the whole domain; on the circle a lift that
    /// wraps adds the jump `|F(1) − F(0)|`, which vanishes for periodic `F`.
    fn structural_variation(&self, lo: T, hi: T) -> Option<T> {
        if lo != T::zero() || hi != T::one() {
            return None;
        }
        let v = self.f.structural_variation(lo, hi)?;
        if self.wraps() {
            Some(v + (self.f.value(T::one()) - self.f.value(T::zero())).abs())
        } else {
            Some(v)
        }
    }
}
