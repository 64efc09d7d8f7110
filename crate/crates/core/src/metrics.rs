//! Distances on diffeomorphism groups: the manifold metric, `d_{C^k}`, the
//! `C^{k+AC}` metric with its `L¹` top-order term, and the `C^{1+BV}` metric
//! built from `‖log f' − log g'‖_BV`.

use std::sync::Arc;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::diffeo::{Diffeo, RegularityClass};
use crate::error::{Error, Result};
use crate::realfn::{integrate, sup_estimate, total_variation, Combination, Interval, QuadratureOptions, RealFn};
use crate::scalar::{sort_dedup, Scalar};

pub use crate::diffeo::manifold_distance;

/// A distance together with the named nonnegative terms it is the sum of.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue<T> {
    total: T,
    summands: Vec<(String, T)>,
}

impl<T: Scalar> MetricValue<T> {
    pub fn new(summands: Vec<(String, T)>) -> Self {
        let total = summands.iter().fold(T::zero(), |s, (_, v)| s + *v);
        Self { total, summands }
    }

    pub fn total(&self) -> T {
        self.total
    }

    pub fn summands(&self) -> &[(String, T)] {
        &self.summands
    }

    pub fn summand(&self, name: &str) -> Option<T> {
        self.summands.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// `‖log f' − log g'‖_BV`: the endpoint and variation summands.
    pub fn bv_term(&self) -> Option<T> {
        Some(self.summand("bv_endpoint")? + self.summand("bv_variation")?)
    }
}

impl<T: Scalar> Serialize for MetricValue<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Named<'a, T>(&'a [(String, T)]);
        impl<T: Scalar> Serialize for Named<'_, T> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    m.serialize_entry(k, &v.as_f64())?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("total", &self.total.as_f64())?;
        m.serialize_entry("summands", &Named(&self.summands))?;
        m.end()
    }
}

fn same_manifold<T: Scalar>(f: &Diffeo<T>, g: &Diffeo<T>) -> Result<()> {
    if f.manifold() != g.manifold() {
        return Err(Error::ManifoldMismatch(format!("{} vs {}", f.manifold(), g.manifold())));
    }
    Ok(())
}

fn seeds<T: Scalar>(f: &Diffeo<T>, g: &Diffeo<T>) -> Vec<T> {
    let mut s = f.breakpoints(T::zero(), T::one());
    s.extend(g.breakpoints(T::zero(), T::one()));
    sort_dedup(&mut s);
    s
}

fn sup_term<T: Scalar>(f: &Diffeo<T>, g: &Diffeo<T>, seeds: &[T]) -> T {
    let m = f.manifold();
    sup_estimate(&|x| m.distance(f.lift(x), g.lift(x)), T::zero(), T::one(), seeds)
}

/// `sup_x d_M(f(x), g(x)) + Σ_{i ≤ k} sup_x |f^{(i)}(x) − g^{(i)}(x)|`.
///
/// Suprema are grid estimates refined until stable, seeded with every
/// breakpoint of either map; each is a value actually attained.
pub fn dist_ck<T: Scalar>(f: &Diffeo<T>, g: &Diffeo<T>, k: usize) -> Result<MetricValue<T>> {
    same_manifold(f, g)?;
    let max = f.order().min(g.order());
    if k > max {
        return Err(Error::OrderOutOfRange { order: k, max });
    }
    let seeds = seeds(f, g);
    let mut summands = vec![("sup".to_string(), sup_term(f, g, &seeds))];
    for i in 1..=k {
        let diff = |x: T| {
            let (a, b) = (f.derivatives_unchecked(x, i), g.derivatives_unchecked(x, i));
            (a[i] - b[i]).abs()
        };
        summands.push((format!("c{i}"), sup_estimate(&diff, T::zero(), T::one(), &seeds)));
    }
    Ok(MetricValue::new(summands))
}

/// `d_{C^k}(f, g) + ‖f^{(k+1)} − g^{(k+1)}‖_{L¹}` on `C^{k+AC}` maps.
pub fn dist_k_ac<T: Scalar>(f: &Diffeo<T>, g: &Diffeo<T>, k: usize) -> Result<MetricValue<T>> {
    for h in [f, g] {
        if h.class() != RegularityClass::CkAc {
            return Err(Error::MetricDomain(format!(
                "the C^{{k+AC}} metric needs absolutely continuous top derivatives, got class {:?}",
                h.class()
            )));
        }
    }
    let base = dist_ck(f, g, k)?;
    let seeds = seeds(f, g);
    let top = |x: T| {
        let (a, b) = (f.derivatives_unchecked(x, k + 1), g.derivatives_unchecked(x, k + 1));
        (a[k + 1] - b[k + 1]).abs()
    };
    let l1 = integrate(top, T::zero(), T::one(), &seeds, QuadratureOptions::default())?.value;
    let mut summands = base.summands;
    summands.push(("l1_top".to_string(), l1));
    Ok(MetricValue::new(summands))
}

/// `sup_x d_M(f(x), g(x)) + ‖log f' − log g'‖_BV`, the BV norm reported as
/// `bv_endpoint = |D(0)|` and `bv_variation = V(D)` for `D = log f' − log g'`.
pub fn dist_1_bv<T: Scalar>(f: &Diffeo<T>, g: &Diffeo<T>) -> Result<MetricValue<T>> {
    same_manifold(f, g)?;
    let seeds = seeds(f, g);
    let sup = sup_term(f, g, &seeds);
    let (endpoint, variation) = log_derivative_distance(f, g)?;
    Ok(MetricValue::new(vec![
        ("sup".to_string(), sup),
        ("bv_endpoint".to_string(), endpoint),
        ("bv_variation".to_string(), variation),
    ]))
}

/// `(|D(0)|, V(D))` for `D = log f' − log g'`. Normal forms are subtracted
/// exactly; anything else goes through the sampled handles.
pub fn log_derivative_distance<T: Scalar>(f: &Diffeo<T>, g: &Diffeo<T>) -> Result<(T, T)> {
    same_manifold(f, g)?;
    let (lf, lg) = (f.log_derivative(), g.log_derivative());
    match (lf.as_bvfunc(), lg.as_bvfunc()) {
        (Some(a), Some(b)) => {
            let d = a.sub(b);
            Ok((d.value(T::zero()).abs(), total_variation(&d, Interval::unit())?))
        }
        _ => {
            let d = Combination::new().with(T::one(), Arc::new(lf)).with(-T::one(), Arc::new(lg));
            Ok((d.eval(T::zero()).abs(), total_variation(&d, Interval::unit())?))
        }
    }
}

/// Whether `V(log f') ≤ n`, with margin `n − V(log f')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallMembership<T> {
    pub member: bool,
    pub margin: T,
    pub variation: T,
}

pub fn variation_ball_membership<T: Scalar>(f: &Diffeo<T>, n: u32) -> Result<BallMembership<T>> {
    let v = total_variation(&f.log_derivative(), Interval::unit())?;
    let margin = T::from_u32(n).expect("u32 fits") - v;
    Ok(BallMembership { member: margin >= T::zero(), margin, variation: v })
}
