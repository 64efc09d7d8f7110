use rayon::prelude::*;

use crate::diffeo::{Diffeo, Manifold};
use crate::error::Result;
use crate::experiments::random::{self, trial_rng, uniform};
use crate::experiments::report::{Cell, ExperimentReport};
use crate::metrics::dist_k_ac;
use crate::realfn::{BvFunc, Polynomial};

/// Size of the perturbation added to the base log-derivative at `n = 1`.
pub const PERTURBATION: f64 = 0.002;
/// Coefficient size of the base and composing log-derivatives; keeps `f'` within a modest
/// factor of 1 so inverse towers stay comparable to forward ones.
pub const BASE_SCALE: f64 = 0.5;
pub const STEPS: &[u32] = &[1, 2, 4, 8, 16, 32, 64];
const FINAL_D: f64 = 1e-3;
const FINAL_OTHERS: f64 = 1e-2;
/// Rows from this `n` on must decrease in every column.
const TREND_FROM: u32 = 8;

pub const COLUMNS: &[&str] = &["manifold", "k", "n", "d", "d_inv", "d_comp", "prev_d", "prev_inv", "prev_comp"];

/// `(G, P, offset)`: random base log-derivative, fixed perturbation direction.
/// `P = ε·x` on the interval and `ε·16x²(1 − x)²` on the circle.
fn ingredients(seed: u64, trial: u64, manifold: Manifold) -> (Polynomial<f64>, Polynomial<f64>, f64) {
    let mut rng = trial_rng(seed, 4, trial);
    match manifold {
        Manifold::Interval => {
            let g = random::polynomial(&mut rng, 3, BASE_SCALE);
            (g, Polynomial::linear(0.0, PERTURBATION), 0.0)
        }
        Manifold::Circle => {
            let g = random::periodic_polynomial(&mut rng, BASE_SCALE);
            let bump = Polynomial::new(vec![0.0, 0.0, 16.0, -32.0, 16.0]).scale(PERTURBATION);
            (g, bump, uniform(&mut rng, 0.0, 1.0))
        }
    }
}

/// `f_n = exp-lift of G + P/n`.
pub fn sequence_member(g: &Polynomial<f64>, p: &Polynomial<f64>, n: u32, manifold: Manifold, offset: f64, k: usize) -> Result<Diffeo<f64>> {
    let log = g.add(&p.scale(1.0 / n as f64));
    Diffeo::from_log_derivative(BvFunc::from_polynomial(log), manifold, offset, k)
}

pub fn run(orders: &[usize], manifold: Manifold, seed: u64, tol: f64) -> Result<ExperimentReport> {
    let params = vec![
        ("k".to_string(), Cell::from(orders.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("+"))),
        ("manifold".to_string(), manifold.name().into()),
        ("seed".to_string(), seed.into()),
        ("perturbation".to_string(), PERTURBATION.into()),
        ("base_scale".to_string(), BASE_SCALE.into()),
        ("tol".to_string(), tol.into()),
    ];
    let mut report = ExperimentReport::new("ac-continuity", params, COLUMNS);
    for (ti, &k) in orders.iter().enumerate() {
        let (g, p, offset) = ingredients(seed, ti as u64, manifold);
        let mut rng = trial_rng(seed, 4, 1000 + ti as u64);
        let h_log = match manifold {
            Manifold::Interval => random::polynomial(&mut rng, 3, BASE_SCALE),
            Manifold::Circle => random::periodic_polynomial(&mut rng, BASE_SCALE),
        };
        let h_offset = if manifold == Manifold::Circle { uniform(&mut rng, 0.0, 1.0) } else { 0.0 };
        let h = Diffeo::from_log_derivative(BvFunc::from_polynomial(h_log), manifold, h_offset, k)?;
        let f0 = Diffeo::from_log_derivative(BvFunc::from_polynomial(g.clone()), manifold, offset, k)?;
        let f0_inv = f0.invert()?;
        let f0_comp = f0.compose(&h)?;
        let rows: Vec<Result<[f64; 3]>> = STEPS
            .par_iter()
            .map(|&n| {
                let f = sequence_member(&g, &p, n, manifold, offset, k)?;
                let d = dist_k_ac(&f, &f0, k)?.total();
                let di = dist_k_ac(&f.invert()?, &f0_inv, k)?.total();
                let dc = dist_k_ac(&f.compose(&h)?, &f0_comp, k)?.total();
                Ok([d, di, dc])
            })
            .collect();
        let mut prev: Option<[f64; 3]> = None;
        for (&n, row) in STEPS.iter().zip(rows) {
            let [d, di, dc] = row?;
            let trend = n < TREND_FROM || prev.is_none_or(|q| d < q[0] && di < q[1] && dc < q[2]);
            let last = n != *STEPS.last().unwrap()
                || (d < FINAL_D
                    && di < FINAL_OTHERS
                    && dc < FINAL_OTHERS
                    && di < 10.0 * d + 1e-6
                    && dc < 10.0 * d + 1e-6);
            report.push(
                vec![
                    manifold.name().into(),
                    k.into(),
                    n.into(),
                    d.into(),
                    di.into(),
                    dc.into(),
                    prev.map(|q| q[0]).into(),
                    prev.map(|q| q[1]).into(),
                    prev.map(|q| q[2]).into(),
                ],
                trend && last,
            );
            prev = Some([d, di, dc]);
        }
    }
    Ok(report)
}
