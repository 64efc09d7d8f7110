use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::random::{trial_rng, uniform};
use crate::experiments::report::{Cell, ExperimentReport};
use crate::realfn::{active_sets_disjoint, bv_norm, variation_oracle, BvFunc, Interval, SingularStaircase};

/// Staircase radix used by the translation experiments.
pub const RADIX: u32 = 4;
const ORACLE_TOL: f64 = 1e-10;
const SINGLE_TOL: f64 = 1e-9;
const PAIR_TOL: f64 = 1e-6;

pub const COLUMNS: &[&str] = &["kind", "h1", "h2", "structural", "oracle", "target", "abs_error", "threshold"];

fn member(r: f64, h: f64, depth: u32) -> Result<BvFunc<f64>> {
    BvFunc::separated_family_member_with_radix(r, h, depth, RADIX)
}

fn certified(a: &BvFunc<f64>, b: &BvFunc<f64>) -> bool {
    let stairs: Vec<&SingularStaircase<f64>> = a.singular().iter().chain(b.singular()).collect();
    active_sets_disjoint(&stairs, 0.0, 1.0)
}

fn oracle_norm(f: &BvFunc<f64>) -> Result<f64> {
    Ok(f.eval(0.0)?.abs() + variation_oracle(f, Interval::unit(), ORACLE_TOL)?.estimate)
}

/// Draws `num_h` translates in `[−1/6, 1/6]`, pairwise farther apart than
/// the finest staircase scale and with certified disjoint active sets.
pub fn sample_translates(r: f64, num_h: usize, depth: u32, seed: u64) -> Result<Vec<f64>> {
    let mut rng = trial_rng(seed, 1, 0);
    let min_sep = 10.0 * (RADIX as f64).powi(-(depth as i32)) / 6.0;
    let mut hs: Vec<f64> = Vec::with_capacity(num_h);
    let mut fs: Vec<BvFunc<f64>> = Vec::with_capacity(num_h);
    let budget = 200 * num_h.max(1);
    let mut attempts = 0;
    while hs.len() < num_h {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Misalignment(format!(
                "found only {} of {num_h} separated translates after {budget} draws; lower the count or raise the depth",
                hs.len()
            )));
        }
        let h = uniform(&mut rng, -1.0 / 6.0, 1.0 / 6.0);
        if hs.iter().any(|&x| (x - h).abs() <= min_sep) {
            continue;
        }
        let f = member(r, h, depth)?;
        if fs.iter().all(|g| certified(&f, g)) {
            hs.push(h);
            fs.push(f);
        }
    }
    Ok(hs)
}

pub fn run(r: f64, num_h: usize, depth: u32, seed: u64, tol: f64) -> Result<ExperimentReport> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("r must be positive, got {r}")));
    }
    let hs = sample_translates(r, num_h, depth, seed)?;
    let params = vec![
        ("r".to_string(), Cell::from(r)),
        ("num_h".to_string(), num_h.into()),
        ("depth".to_string(), depth.into()),
        ("radix".to_string(), RADIX.into()),
        ("seed".to_string(), seed.into()),
        ("tol".to_string(), tol.into()),
    ];
    let mut report = ExperimentReport::new("separated-family", params, COLUMNS);

    // (kind, i, j): singles, one self-difference, then all pairs
    let mut jobs: Vec<(&str, usize, usize)> = (0..hs.len()).map(|i| ("single", i, i)).collect();
    if !hs.is_empty() {
        jobs.push(("self", 0, 0));
    }
    for i in 0..hs.len() {
        for j in (i + 1)..hs.len() {
            jobs.push(("pair", i, j));
        }
    }
    let rows: Vec<Result<(Vec<Cell>, bool)>> = jobs
        .par_iter()
        .map(|&(kind, i, j)| {
            let (h1, h2) = (hs[i], hs[j]);
            let f1 = member(r, h1, depth)?;
            let (f, target, threshold) = match kind {
                "single" => (f1, r, SINGLE_TOL),
                "self" => (f1.sub(&f1), 0.0, tol),
                _ => (f1.sub(&member(r, h2, depth)?), 2.0 * r, PAIR_TOL),
            };
            let s = bv_norm(&f)?;
            let o = oracle_norm(&f)?;
            let err = (s - target).abs().max((o - target).abs());
            let cells = vec![
                kind.into(),
                h1.into(),
                h2.into(),
                s.into(),
                o.into(),
                target.into(),
                err.into(),
                threshold.into(),
            ];
            Ok((cells, err < threshold))
        })
        .collect();
    for row in rows {
        let (cells, pass) = row?;
        report.push(cells, pass);
    }
    Ok(report)
}
