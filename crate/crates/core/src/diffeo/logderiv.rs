use std::sync::{Arc, OnceLock};

use crate::diffeo::element::{Diffeo, Repr};
use crate::diffeo::manifold::Manifold;
use crate::realfn::{BvFunc, RealFn};
use crate::scalar::{sort_dedup, Scalar};

#[derive(Debug)]
enum Kind<T> {
    /// `G − log Z` in normal form.
    Structural(BvFunc<T>),
    /// `log f'` sampled from the derivative tower.
    Sampled(Diffeo<T>),
    /// `outer ∘ map + inner`, the log-derivative of a composition.
    Composite { outer: LogDerivative<T>, map: Diffeo<T>, inner: LogDerivative<T> },
    /// `−base ∘ inverse`, the log-derivative of an inverse.
    Transported { base: LogDerivative<T>, forward: Diffeo<T>, inverse: Diffeo<T> },
}

#[derive(Debug)]
struct Inner<T> {
    kind: Kind<T>,
    breaks: OnceLock<Vec<T>>,
}

/// `log f'` of a diffeomorphism as a function on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct LogDerivative<T> {
    inner: Arc<Inner<T>>,
}

fn project<T: Scalar>(m: Manifold, y: T) -> T {
    match m {
        Manifold::Interval => y.max(T::zero()).min(T::one()),
        Manifold::Circle => {
            let r = y - y.floor();
            if r >= T::one() {
                T::zero()
            } else {
                r
            }
        }
    }
}

impl<T: Scalar> LogDerivative<T> {
    fn new(kind: Kind<T>) -> Self {
        Self { inner: Arc::new(Inner { kind, breaks: OnceLock::new() }) }
    }

    pub(crate) fn of(f: &Diffeo<T>) -> Self {
        match f.repr() {
            Repr::Translation { .. } => Self::new(Kind::Structural(BvFunc::zero())),
            Repr::Exp { lift, .. } => Self::new(Kind::Structural(lift.g.add_constant(-lift.log_z))),
            Repr::Polynomial { .. } => Self::new(Kind::Sampled(f.clone())),
            Repr::Compose { outer, inner, .. } => Self::new(Kind::Composite {
                outer: outer.log_derivative(),
                map: inner.clone(),
                inner: inner.log_derivative(),
            }),
            Repr::Inverse { base, .. } => Self::new(Kind::Transported {
                base: base.log_derivative(),
                forward: base.clone(),
                inverse: f.clone(),
            }),
        }
    }

    /// The normal form, when `log f'` is held as one.
    pub fn as_bvfunc(&self) -> Option<&BvFunc<T>> {
        match &self.inner.kind {
            Kind::Structural(g) => Some(g),
            _ => None,
        }
    }

    fn is_constant(&self) -> bool {
        self.as_bvfunc().is_some_and(|g| g.singular().is_empty() && g.ac().is_constant())
    }

    fn compute_breakpoints(&self) -> Vec<T> {
        let (zero, one) = (T::zero(), T::one());
        let mut pts = vec![zero, one];
        match &self.inner.kind {
            Kind::Structural(g) => pts.extend(g.breakpoints(zero, one)),
            Kind::Sampled(f) => {
                pts.extend(f.breakpoints(zero, one));
                if let Repr::Polynomial { p } = f.repr() {
                    // log p' turns where p'' changes sign
                    for (w, piece) in p.breakpoints().windows(2).zip(p.pieces()) {
                        pts.extend(piece.derivative().derivative().roots_in(w[0], w[1]));
                    }
                }
            }
            Kind::Composite { outer, map, inner } => {
                pts.extend(map.preimages_of(&outer.breakpoints(zero, one)));
                pts.extend(inner.breakpoints(zero, one));
            }
            Kind::Transported { base, forward, .. } => {
                let m = forward.manifold();
                pts.extend(base.breakpoints(zero, one).into_iter().map(|b| project(m, forward.lift(b))));
            }
        }
        sort_dedup(&mut pts);
        pts.retain(|&x| x >= zero && x <= one);
        pts
    }
}

impl<T: Scalar> RealFn<T> for LogDerivative<T> {
    fn eval(&self, x: T) -> T {
        match &self.inner.kind {
            Kind::Structural(g) => g.value(x),
            Kind::Sampled(f) => f.derivatives_unchecked(x, 1)[1].ln(),
            Kind::Composite { outer, map, inner } => {
                outer.eval(project(map.manifold(), map.lift(x))) + inner.eval(x)
            }
            Kind::Transported { base, inverse, .. } => -base.eval(project(inverse.manifold(), inverse.lift(x))),
        }
    }

    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        let all = self.inner.breaks.get_or_init(|| self.compute_breakpoints());
        let mut out: Vec<T> = all.iter().copied().filter(|&x| x > lo && x < hi).collect();
        out.push(lo);
        out.push(hi);
        sort_dedup(&mut out);
        out
    }

    fn structural_variation(&self, lo: T, hi: T) -> Option<T> {
        let full = lo == T::zero() && hi == T::one();
        match &self.inner.kind {
            Kind::Structural(g) => g.structural_variation(lo, hi),
            // variation is invariant under composition with a homeomorphism
            // of the whole domain (on the circle log f' is periodic)
            Kind::Transported { base, .. } if full => base.structural_variation(lo, hi),
            Kind::Composite { outer, inner, .. } if full && inner.is_constant() => outer.structural_variation(lo, hi),
            _ => None,
        }
    }
}

impl<T: Scalar> Diffeo<T> {
    /// `log f'` on `[0, 1]`.
    pub fn log_derivative(&self) -> LogDerivative<T> {
        LogDerivative::of(self)
    }
}
