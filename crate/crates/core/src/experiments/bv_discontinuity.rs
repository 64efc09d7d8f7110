use rayon::prelude::*;

use crate::diffeo::{Diffeo, Manifold};
use crate::error::{Error, Result};
use crate::experiments::random::{trial_rng, uniform};
use crate::experiments::report::{Cell, ExperimentReport};
use crate::metrics::{dist_1_bv, log_derivative_distance};
use crate::realfn::{total_variation, BvFunc, Interval, PiecewisePolynomial, Polynomial, CLASSICAL_RADIX};

const DELTA: f64 = 1.0 / 6.0;
const FIRST_N: i32 = 3;
const LAST_N: i32 = 12;
const FINAL_THRESHOLD: f64 = 0.05;

pub const COLUMNS: &[&str] = &["manifold", "n", "h", "sup_term", "log_fn_bv", "dist", "prev_dist", "jump", "epsilon"];

/// Interval map that translates `[δ, 1 − δ]` by `h`, with trapezoidal
/// derivative bumps of ramp width `δ/8` on `[0, δ]` and `[1 − δ, 1]`.
pub fn bump_translation(h: f64) -> Result<Diffeo<f64>> {
    let rho = DELTA / 8.0;
    let amp = h / (DELTA - rho);
    if amp >= 1.0 {
        return Err(Error::Parameter(format!("translation {h} too large for the window")));
    }
    let xs = [0.0, rho, DELTA - rho, DELTA, 1.0 - DELTA, 1.0 - DELTA + rho, 1.0 - rho, 1.0];
    let ds = [1.0, 1.0 + amp, 1.0 + amp, 1.0, 1.0, 1.0 - amp, 1.0 - amp, 1.0];
    let mut coeffs = Vec::with_capacity(xs.len() - 1);
    let mut value = 0.0;
    for i in 0..xs.len() - 1 {
        let slope = (ds[i + 1] - ds[i]) / (xs[i + 1] - xs[i]);
        let d = Polynomial::linear(ds[i] - slope * xs[i], slope);
        let a = d.antiderivative();
        let p = a.add(&Polynomial::constant(value - a.eval(xs[i])));
        value = p.eval(xs[i + 1]);
        coeffs.push(p.coeffs().to_vec());
    }
    let pp = PiecewisePolynomial::new(xs.to_vec(), coeffs)?;
    Diffeo::from_lift_polynomial(pp, Manifold::Interval, 1)
}

/// `log g' = α + γ` up to a constant, with `α = c·x(1 − x)` and `γ` the
/// separated-family shape of variation 1 supported in `[δ, 1 − δ]`.
pub fn singular_diffeo(manifold: Manifold, depth: u32, c: f64) -> Result<(Diffeo<f64>, f64)> {
    let gamma = BvFunc::separated_family_member(1.0, 0.0, depth)?;
    let alpha = BvFunc::from_polynomial(Polynomial::new(vec![0.0, c, -c]));
    let g = BvFunc::linear_combine(&[1.0, 1.0], &[&alpha, &gamma])?;
    let eps = total_variation(&gamma, Interval::new(DELTA, 1.0 - DELTA)?)?;
    Ok((Diffeo::from_log_derivative(g, manifold, 0.0, 1)?, eps))
}

fn approach(manifold: Manifold, h: f64) -> Result<Diffeo<f64>> {
    match manifold {
        Manifold::Circle => Diffeo::rotation(h, 1),
        Manifold::Interval => bump_translation(h),
    }
}

pub fn run(depth: u32, manifolds: &[Manifold], seed: u64, tol: f64) -> Result<ExperimentReport> {
    let finest = 10.0 * (CLASSICAL_RADIX as f64).powi(-(depth as i32));
    let hs: Vec<(i32, f64)> = (FIRST_N..=LAST_N).map(|n| (n, 2f64.powi(-n))).collect();
    if let Some(&(n, h)) = hs.iter().find(|(_, h)| 6.0 * h <= finest) {
        return Err(Error::Misalignment(format!(
            "h_{n} = {h} is below the staircase scale at depth {depth}; raise the depth"
        )));
    }
    let names: Vec<&str> = manifolds.iter().map(|m| m.name()).collect();
    let params = vec![
        ("depth".to_string(), Cell::from(depth)),
        ("manifold".to_string(), names.join("+").into()),
        ("seed".to_string(), seed.into()),
        ("delta".to_string(), DELTA.into()),
        ("tol".to_string(), tol.into()),
    ];
    let mut report = ExperimentReport::new("bv-discontinuity", params, COLUMNS);
    for (mi, &m) in manifolds.iter().enumerate() {
        let mut rng = trial_rng(seed, 3, mi as u64);
        let c = uniform(&mut rng, 0.5, 2.0);
        let (g, eps) = singular_diffeo(m, depth, c)?;
        let e = Diffeo::identity(m, 1)?;
        let rows: Vec<Result<(f64, f64, f64, f64)>> = hs
            .par_iter()
            .map(|&(_, h)| {
                let f = approach(m, h)?;
                let d = dist_1_bv(&f, &e)?;
                let (end, var) = log_derivative_distance(&g.compose(&f)?, &g)?;
                Ok((d.summand("sup").unwrap(), d.bv_term().unwrap(), d.total(), end + var))
            })
            .collect();
        let mut prev: Option<f64> = None;
        for (&(n, h), row) in hs.iter().zip(rows) {
            let (sup, logbv, dist, jump) = row?;
            let decreasing = prev.is_none_or(|p| dist < p);
            let final_ok = n != LAST_N || dist < FINAL_THRESHOLD;
            let pass = jump >= eps && decreasing && final_ok;
            report.push(
                vec![
                    m.name().into(),
                    (n as i64).into(),
                    h.into(),
                    sup.into(),
                    logbv.into(),
                    dist.into(),
                    prev.into(),
                    jump.into(),
                    eps.into(),
                ],
                pass,
            );
            prev = Some(dist);
        }
    }
    Ok(report)
}
