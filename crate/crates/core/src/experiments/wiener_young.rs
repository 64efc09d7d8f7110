use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::random::{trial_rng, uniform};
use crate::experiments::report::{Cell, ExperimentReport};
use crate::experiments::separated::RADIX;
use crate::realfn::{
    active_sets_disjoint, total_variation, variation_oracle, BvFunc, Interval, SingularStaircase, StaircaseBase,
};

const ORACLE_TOL: f64 = 1e-10;
const RATIO_TOL: f64 = 1e-6;
/// Support of `g` inside `[0, 1]`; translates by `|h| ≤ 1/4` stay inside.
const SUPPORT: (f64, f64) = (0.25, 0.75);

pub const COLUMNS: &[&str] = &["kind", "h", "variation", "oracle", "twice_variation_g", "ratio", "oracle_ratio", "threshold"];

fn staircase(depth: u32, h: f64) -> Result<SingularStaircase<f64>> {
    SingularStaircase::new(StaircaseBase::Cantor, RADIX, depth, SUPPORT.0, SUPPORT.1, 1.0, h)
}

fn sample_shifts(depth: u32, num_h: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = trial_rng(seed, 2, 0);
    let g = staircase(depth, 0.0)?;
    let width = SUPPORT.1 - SUPPORT.0;
    let min_shift = 10.0 * (RADIX as f64).powi(-(depth as i32)) * width;
    let budget = 200 * num_h.max(1);
    let mut out = Vec::with_capacity(num_h);
    for _ in 0..budget {
        if out.len() == num_h {
            return Ok(out);
        }
        let h = uniform(&mut rng, -0.25, 0.25);
        if h.abs() <= min_shift {
            continue;
        }
        if active_sets_disjoint(&[&g, &staircase(depth, h)?], 0.0, 1.0) {
            out.push(h);
        }
    }
    if out.len() == num_h {
        return Ok(out);
    }
    Err(Error::Misalignment(format!("found only {} of {num_h} misaligned shifts after {budget} draws", out.len())))
}

pub fn run(depth: u32, num_h: usize, seed: u64, tol: f64) -> Result<ExperimentReport> {
    let hs = sample_shifts(depth, num_h, seed)?;
    let params = vec![
        ("depth".to_string(), Cell::from(depth)),
        ("num_h".to_string(), num_h.into()),
        ("radix".to_string(), RADIX.into()),
        ("seed".to_string(), seed.into()),
        ("tol".to_string(), tol.into()),
    ];
    let mut report = ExperimentReport::new("wiener-young", params, COLUMNS);
    let g = BvFunc::from_staircase(staircase(depth, 0.0)?);
    let twice = 2.0 * total_variation(&g, Interval::unit())?;
    let mut jobs = vec![("zero", 0.0)];
    jobs.extend(hs.iter().map(|&h| ("sample", h)));
    let rows: Vec<Result<(Vec<Cell>, bool)>> = jobs
        .par_iter()
        .map(|&(kind, h)| {
            let gh = BvFunc::from_staircase(staircase(depth, h)?);
            let d = gh.sub(&g);
            let v = total_variation(&d, Interval::unit())?;
            let o = variation_oracle(&d, Interval::unit(), ORACLE_TOL)?.estimate;
            let (ratio, oratio) = (v / twice, o / twice);
            let (pass, threshold) = if kind == "zero" {
                (v <= tol && o <= tol, tol)
            } else {
                let bounded = v <= twice + tol && o <= twice + tol;
                (bounded && (ratio - 1.0).abs() < RATIO_TOL && (oratio - 1.0).abs() < RATIO_TOL, RATIO_TOL)
            };
            let cells = vec![
                kind.into(),
                h.into(),
                v.into(),
                o.into(),
                twice.into(),
                ratio.into(),
                oratio.into(),
                threshold.into(),
            ];
            Ok((cells, pass))
        })
        .collect();
    for row in rows {
        let (cells, pass) = row?;
        report.push(cells, pass);
    }
    Ok(report)
}
