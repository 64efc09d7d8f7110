use rand::Rng;
use rayon::prelude::*;

use crate::diffeo::{Diffeo, Manifold};
use crate::error::Result;
use crate::experiments::random::{self, trial_rng, uniform};
use crate::experiments::report::{Cell, ExperimentReport};
use crate::realfn::{integrate, l1_norm, BvFunc, Density, Interval, Polynomial, QuadratureOptions};
use crate::scalar::sort_dedup;

const RESIDUAL_TOL: f64 = 1e-7;
const QUAD_TOL: f64 = 1e-11;
/// Size of the product perturbations. The product error is `‖A/m + B/m²‖`
/// with `A` linear and `B` quadratic in this size; keeping it small makes
/// the `1/m` term dominate from the first step.
const PRODUCT_PERTURBATION: f64 = 0.05;
pub const STEPS: &[u32] = &[1, 2, 4, 8];

pub const COLUMNS: &[&str] = &[
    "manifold", "trial", "a", "b", "p", "q", "residual", "cont_1", "cont_2", "cont_4", "cont_8", "prod_1", "prod_2",
    "prod_4", "prod_8",
];

struct Trial {
    g: Density<f64>,
    log_u: Polynomial<f64>,
    offset: f64,
    q_dir: Polynomial<f64>,
    b: Density<f64>,
    rho: Density<f64>,
    beta: Density<f64>,
    ab: (f64, f64),
}

fn draw(seed: u64, manifold: Manifold, trial: u64) -> Trial {
    let tag_trial = trial | if manifold == Manifold::Circle { 1 << 32 } else { 0 };
    let mut rng = trial_rng(seed, 5, tag_trial);
    let g = if trial == 0 { Density::piecewise(vec![0.0, 1.0], vec![vec![1.0]]).expect("constant") } else { random::density(&mut rng) };
    let (log_u, q_dir, offset) = match manifold {
        Manifold::Interval => {
            let deg = rng.gen_range(1..=3);
            (random::polynomial(&mut rng, deg, 1.0), random::polynomial(&mut rng, 2, 0.5), 0.0)
        }
        Manifold::Circle => (
            random::periodic_polynomial(&mut rng, 1.0),
            random::periodic_polynomial(&mut rng, 0.5),
            uniform(&mut rng, 0.0, 1.0),
        ),
    };
    let (log_u, offset) = if trial == 1 { (Polynomial::zero(), 0.0) } else { (log_u, offset) };
    let mut ab = (uniform(&mut rng, 0.0, 1.0), uniform(&mut rng, 0.0, 1.0));
    if ab.0 > ab.1 {
        ab = (ab.1, ab.0);
    }
    Trial {
        g,
        log_u,
        offset,
        q_dir,
        b: random::density(&mut rng),
        rho: random::density(&mut rng).scale(PRODUCT_PERTURBATION),
        beta: random::density(&mut rng).scale(PRODUCT_PERTURBATION),
        ab,
    }
}

fn map(t: &Trial, manifold: Manifold, m: Option<u32>) -> Result<Diffeo<f64>> {
    let log = match m {
        None => t.log_u.clone(),
        Some(m) => t.log_u.add(&t.q_dir.scale(1.0 / m as f64)),
    };
    Diffeo::from_log_derivative(BvFunc::from_polynomial(log), manifold, t.offset, 1)
}

/// `x ↦ g(u(x))·u'(x)`, reading `g` on the circle through the fractional part.
fn pullback(g: &Density<f64>, u: &Diffeo<f64>, x: f64) -> f64 {
    let y = u.lift(x);
    let y = if u.manifold() == Manifold::Circle { y - y.floor() } else { y };
    g.ac_value(y) * u.derivatives_unchecked(x, 1)[1]
}

fn splits(g: &Density<f64>, maps: &[&Diffeo<f64>]) -> Vec<f64> {
    let mut pts = Vec::new();
    for u in maps {
        pts.extend(u.breakpoints(0.0, 1.0));
        pts.extend(u.preimages_of(g.breakpoints()));
    }
    sort_dedup(&mut pts);
    pts
}

fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, splits: &[f64]) -> Result<f64> {
    Ok(integrate(f, a, b, splits, QuadratureOptions::with_tol(QUAD_TOL))?.value)
}

/// `(residual, p, q)`. On the interval: `|∫_{u(a)}^{u(b)} g − ∫_a^b (g∘u)u'|`.
/// On the circle the pullback integral over `[0, 1]` is split at
/// `q = ũ⁻¹(1)`, the two halves matching `∫_p^1 g` and `∫_0^p g` for `p = ũ(0)`.
fn residual(t: &Trial, u: &Diffeo<f64>, manifold: Manifold) -> Result<(f64, Option<f64>, Option<f64>)> {
    let s = splits(&t.g, &[u]);
    match manifold {
        Manifold::Interval => {
            let (a, b) = t.ab;
            let lhs = t.g.integral(u.lift(a), u.lift(b));
            let rhs = quad(|x| pullback(&t.g, u, x), a, b, &s)?;
            Ok(((lhs - rhs).abs(), None, None))
        }
        Manifold::Circle => {
            let p = u.lift(0.0);
            let q = if p == 0.0 {
                1.0
            } else {
                u.preimages_of(&[1.0])
                    .into_iter()
                    .find(|&x| (u.lift(x) - 1.0).abs() < 1e-9)
                    .unwrap_or(1.0)
            };
            let head = quad(|x| pullback(&t.g, u, x), 0.0, q, &s)?;
            let tail = quad(|x| pullback(&t.g, u, x), q, 1.0, &s)?;
            let r = (head - t.g.integral(p, 1.0)).abs() + (tail - t.g.integral(0.0, p)).abs();
            Ok((r, Some(p), Some(q)))
        }
    }
}

fn continuity(t: &Trial, u: &Diffeo<f64>, manifold: Manifold, m: u32) -> Result<f64> {
    let um = map(t, manifold, Some(m))?;
    let s = splits(&t.g, &[u, &um]);
    quad(|x| (pullback(&t.g, &um, x) - pullback(&t.g, u, x)).abs(), 0.0, 1.0, &s)
}

fn product(t: &Trial, m: u32) -> Result<f64> {
    let c = 1.0 / m as f64;
    let gm = Density::combine(&[(1.0, &t.g), (c, &t.rho)]);
    let bm = Density::combine(&[(1.0, &t.b), (c, &t.beta)]);
    let diff = Density::combine(&[(1.0, &gm.mul(&bm)), (-1.0, &t.g.mul(&t.b))]);
    Ok(l1_norm(&diff, Interval::unit())?.value)
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn trial_row(seed: u64, manifold: Manifold, trial: u64) -> Result<(Vec<Cell>, bool)> {
    let t = draw(seed, manifold, trial);
    let u = map(&t, manifold, None)?;
    let (res, p, q) = residual(&t, &u, manifold)?;
    let cont = STEPS.iter().map(|&m| continuity(&t, &u, manifold, m)).collect::<Result<Vec<_>>>()?;
    let prod = STEPS.iter().map(|&m| product(&t, m)).collect::<Result<Vec<_>>>()?;
    let pass = res < RESIDUAL_TOL && strictly_decreasing(&cont) && strictly_decreasing(&prod);
    let (a, b) = match manifold {
        Manifold::Interval => (Some(t.ab.0), Some(t.ab.1)),
        Manifold::Circle => (None, None),
    };
    let mut cells: Vec<Cell> = vec![manifold.name().into(), trial.into(), a.into(), b.into(), p.into(), q.into(), res.into()];
    cells.extend(cont.into_iter().map(Cell::from));
    cells.extend(prod.into_iter().map(Cell::from));
    Ok((cells, pass))
}

pub fn run(trials: usize, manifolds: &[Manifold], seed: u64, tol: f64) -> Result<ExperimentReport> {
    let names: Vec<&str> = manifolds.iter().map(|m| m.name()).collect();
    let params = vec![
        ("trials".to_string(), Cell::from(trials)),
        ("manifold".to_string(), names.join("+").into()),
        ("seed".to_string(), seed.into()),
        ("tol".to_string(), tol.into()),
    ];
    let mut report = ExperimentReport::new("change-of-variables", params, COLUMNS);
    let jobs: Vec<(Manifold, u64)> = manifolds.iter().flat_map(|&m| (0..trials as u64).map(move |t| (m, t))).collect();
    let rows: Vec<Result<(Vec<Cell>, bool)>> = jobs.par_iter().map(|&(m, t)| trial_row(seed, m, t)).collect();
    for row in rows {
        let (cells, pass) = row?;
        report.push(cells, pass);
    }
    Ok(report)
}
