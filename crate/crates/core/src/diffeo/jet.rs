//! Truncated Taylor series `Σ c_j t^j`, used to carry derivative towers
//! through products, compositions and inverses.

use crate::scalar::Scalar;

pub(crate) fn mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|m| (0..=m).fold(T::zero(), |s, j| s + a[j] * b[m - j]))
        .collect()
}

/// `exp` of a series.
pub(crate) fn exp<T: Scalar>(g: &[T]) -> Vec<T> {
    let n = g.len();
    let mut e = Vec::with_capacity(n);
    if n == 0 {
        return e;
    }
    e.push(g[0].exp());
    for m in 1..n {
        let s = (1..=m).fold(T::zero(), |s, j| s + T::from_usize_lossy(j) * g[j] * e[m - j]);
        e.push(s / T::from_usize_lossy(m));
    }
    e
}

/// `outer ∘ inner`, where `outer` is expanded about `inner[0]`.
pub(crate) fn compose<T: Scalar>(outer: &[T], inner: &[T]) -> Vec<T> {
    let n = outer.len().min(inner.len());
    let mut u: Vec<T> = inner[..n].to_vec();
    if n > 0 {
        u[0] = T::zero();
    }
    let mut out = vec![T::zero(); n];
    let mut pow = vec![T::zero(); n];
    if n > 0 {
        pow[0] = T::one();
    }
    for a in outer.iter().take(n) {
        for (o, p) in out.iter_mut().zip(&pow) {
            *o = *o + *a * *p;
        }
        pow = mul(&pow, &u);
    }
    out
}

/// Series of the local inverse: if `f` is expanded about `x0` with
/// `f[1] ≠ 0`, returns the expansion of `f⁻¹` about `f[0]`, with constant
/// term `x0`.
pub(crate) fn revert<T: Scalar>(f: &[T], x0: T) -> Vec<T> {
    let n = f.len();
    let mut b = vec![T::zero(); n];
    if n == 0 {
        return b;
    }
    if n > 1 {
        b[1] = T::one() / f[1];
    }
    for m in 2..n {
        // f(x0 + Σ_{j<m} b_j v^j) − f(x0) must equal v up to order m
        let mut f0 = f[..=m].to_vec();
        f0[0] = T::zero();
        let c = compose(&f0, &b[..=m]);
        b[m] = -c[m] / f[1];
    }
    b[0] = x0;
    b
}

/// Converts Taylor coefficients to derivatives: `d_j = j!·c_j`.
pub(crate) fn to_derivatives<T: Scalar>(c: &[T]) -> Vec<T> {
    let mut f = T::one();
    c.iter()
        .enumerate()
        .map(|(j, &v)| {
            if j > 1 {
                f = f * T::from_usize_lossy(j);
            }
            v * f
        })
        .collect()
}
