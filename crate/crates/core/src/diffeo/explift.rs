use crate::error::Result;
use crate::realfn::{gauss_kronrod, integrate, BvFunc, QuadratureOptions, RealFn};
use crate::scalar::{lit, sort_dedup, Scalar};

const GRID: usize = 64;

/// `t ↦ ∫₀ᵗ e^G / ∫₀¹ e^G` with cumulative integrals tabulated at every
/// breakpoint of `G` and on a uniform grid, so that each evaluation only
/// integrates over one smooth cell.
#[derive(Debug, Clone)]
pub(crate) struct ExpLift<T> {
    pub(crate) g: BvFunc<T>,
    pub(crate) log_z: T,
    z: T,
    nodes: Vec<T>,
    cum: Vec<T>,
    tol: T,
}

fn cell_tol<T: Scalar>() -> T {
    lit::<T>(1e-15).max(T::epsilon() * lit(16.0))
}

impl<T: Scalar> ExpLift<T> {
    pub(crate) fn new(g: BvFunc<T>) -> Result<Self> {
        let mut nodes = g.breakpoints(T::zero(), T::one());
        nodes.extend((0..=GRID).map(|i| T::from_usize_lossy(i) / T::from_usize_lossy(GRID)));
        sort_dedup(&mut nodes);
        nodes.retain(|&x| x >= T::zero() && x <= T::one());
        let tol = cell_tol::<T>();
        let mut cum = Vec::with_capacity(nodes.len());
        let mut acc = T::zero();
        cum.push(acc);
        for w in nodes.windows(2) {
            let e = integrate(|s| g.value(s).exp(), w[0], w[1], &[], QuadratureOptions { tol, max_subdivisions: 64 })?;
            acc = acc + e.value;
            cum.push(acc);
        }
        let z = acc;
        Ok(Self { g, log_z: z.ln(), z, nodes, cum, tol })
    }

    fn cell_integral(&self, a: T, b: T) -> T {
        let f = |s: T| self.g.value(s).exp();
        let (v, e) = gauss_kronrod(&f, a, b);
        if e <= self.tol * (T::one() + v.abs()) {
            return v;
        }
        integrate(f, a, b, &[], QuadratureOptions { tol: self.tol * (T::one() + v.abs()), max_subdivisions: 256 })
            .map(|e| e.value)
            .unwrap_or(v)
    }

    /// Normalized primitive at `t`; extends smoothly past the ends.
    pub(crate) fn primitive(&self, t: T) -> T {
        if t == T::zero() {
            return T::zero();
        }
        if t == T::one() {
            return T::one();
        }
        let i = self.nodes.partition_point(|&n| n <= t).saturating_sub(1).min(self.nodes.len() - 1);
        (self.cum[i] + self.cell_integral(self.nodes[i], t)) / self.z
    }

    /// Taylor coefficients of the primitive at `t` up to order `n`.
    pub(crate) fn jet(&self, t: T, n: usize) -> Vec<T> {
        let mut out = vec![self.primitive(t)];
        if n == 0 {
            return out;
        }
        let mut g = self.g.ac().taylor_at(t, n - 1);
        g[0] = self.g.value(t) - self.log_z;
        let e = crate::diffeo::jet::exp(&g);
        out.extend(e.iter().enumerate().map(|(j, &c)| c / T::from_usize_lossy(j + 1)));
        out
    }
}
