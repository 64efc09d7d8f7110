use rand::Rng;
use rayon::prelude::*;

use crate::diffeo::{Diffeo, Manifold};
use crate::error::Result;
use crate::experiments::random::{self, trial_rng, uniform};
use crate::experiments::report::{Cell, ExperimentReport};
use crate::realfn::{compose_with, total_variation, variation_oracle, Interval, VariationEstimate};

pub const THRESHOLD: f64 = 1e-7;
const ORACLE_TOL: f64 = 1e-10;

pub const COLUMNS: &[&str] =
    &["trial", "manifold", "variation", "oracle_gap", "composition", "additivity", "scaling", "shift", "monotone"];

fn monotone(e: &VariationEstimate<f64>) -> bool {
    e.lower_bounds.windows(2).all(|w| w[1] >= w[0])
}

/// Even trials on the interval, odd ones on the circle. Trial 0 composes
/// with the identity; circle trials alternate rotations and random maps.
fn trial_row(seed: u64, trial: u64) -> Result<(Vec<Cell>, bool)> {
    let mut rng = trial_rng(seed, 6, trial);
    let manifold = if trial.is_multiple_of(2) { Manifold::Interval } else { Manifold::Circle };
    let f = random::bvfunc(&mut rng, manifold == Manifold::Circle);
    let u = match (trial, manifold) {
        (0, m) => Diffeo::identity(m, 1)?,
        (_, Manifold::Interval) => random::interval_diffeo(&mut rng, 1)?,
        (t, Manifold::Circle) if t % 4 == 1 => Diffeo::rotation(uniform(&mut rng, 0.0, 1.0), 1)?,
        (_, Manifold::Circle) => random::circle_diffeo(&mut rng, 1)?,
    };
    let unit = Interval::unit();
    let v = total_variation(&f, unit)?;

    let direct = variation_oracle(&f, unit, ORACLE_TOL)?;
    let oracle_gap = (direct.estimate - v).abs();
    let composed = variation_oracle(&compose_with(&f, &u, manifold)?, unit, ORACLE_TOL)?;
    let composition = (composed.estimate - v).abs();

    let e = rng.gen_range(0.05..0.95);
    let (left, right) = unit.split(e)?;
    let additivity = (total_variation(&f, left)? + total_variation(&f, right)? - v).abs();

    let k = rng.gen_range(-3.0..3.0);
    let scaling = (total_variation(&f.scale(k), unit)? - k.abs() * v).abs();
    let c = rng.gen_range(-5.0..5.0);
    let shift = (total_variation(&f.add_constant(c), unit)? - v).abs();

    let mono = monotone(&direct) && monotone(&composed);
    let pass = [oracle_gap, composition, additivity, scaling, shift].iter().all(|&r| r < THRESHOLD) && mono;
    let cells = vec![
        trial.into(),
        manifold.name().into(),
        v.into(),
        oracle_gap.into(),
        composition.into(),
        additivity.into(),
        scaling.into(),
        shift.into(),
        mono.into(),
    ];
    Ok((cells, pass))
}

pub fn run(trials: usize, seed: u64, tol: f64) -> Result<ExperimentReport> {
    let params = vec![
        ("trials".to_string(), Cell::from(trials)),
        ("seed".to_string(), seed.into()),
        ("threshold".to_string(), THRESHOLD.into()),
        ("tol".to_string(), tol.into()),
    ];
    let mut report = ExperimentReport::new("variation-invariance", params, COLUMNS);
    let rows: Vec<Result<(Vec<Cell>, bool)>> = (0..trials as u64).into_par_iter().map(|t| trial_row(seed, t)).collect();
    for row in rows {
        let (cells, pass) = row?;
        report.push(cells, pass);
    }
    Ok(report)
}

