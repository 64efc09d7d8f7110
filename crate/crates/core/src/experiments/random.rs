//! Random test objects for the experiments.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diffeo::{Diffeo, Manifold};
use crate::error::Result;
use crate::realfn::{BvFunc, Density, PiecewisePolynomial, Polynomial, SingularStaircase, StaircaseBase};

/// Independent generator for one trial: the seed selects the key, the
/// experiment tag and trial index select the stream.
pub fn trial_rng(seed: u64, tag: u32, trial: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((tag as u64) << 40) | trial);
    rng
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// Polynomial with coefficients uniform in `[−scale, scale]`.
pub fn polynomial(rng: &mut ChaCha8Rng, degree: usize, scale: f64) -> Polynomial<f64> {
    Polynomial::new((0..=degree).map(|_| rng.gen_range(-scale..scale)).collect())
}

/// Smooth periodic polynomial `x²(1−x)²·(a + b·x(1−x))` scaled into
/// `[−scale, scale]`-ish, with `G(0) = G(1) = 0` and matching first
/// derivatives at the ends.
pub fn periodic_polynomial(rng: &mut ChaCha8Rng, scale: f64) -> Polynomial<f64> {
    let a = rng.gen_range(-scale..scale) * 16.0;
    let b = rng.gen_range(-scale..scale) * 64.0;
    let q = Polynomial::new(vec![0.0, 0.0, 1.0, -2.0, 1.0]);
    let w = Polynomial::new(vec![0.0, 1.0, -1.0]);
    q.mul(&Polynomial::constant(a).add(&w.scale(b)))
}

/// Sorted interior breakpoints, at least `gap` apart.
fn interior_breaks(rng: &mut ChaCha8Rng, count: usize, gap: f64) -> Vec<f64> {
    loop {
        let mut xs: Vec<f64> = (0..count).map(|_| rng.gen_range(gap..1.0 - gap)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if xs.windows(2).all(|w| w[1] - w[0] >= gap) {
            return xs;
        }
    }
}

/// Piecewise polynomial density, possibly discontinuous at its breakpoints.
pub fn density(rng: &mut ChaCha8Rng) -> Density<f64> {
    let pieces = rng.gen_range(1..=4);
    let mut breaks = vec![0.0];
    breaks.extend(interior_breaks(rng, pieces - 1, 0.05));
    breaks.push(1.0);
    let coeffs = (0..pieces)
        .map(|_| {
            let deg = rng.gen_range(0..=3);
            polynomial(rng, deg, 1.0).coeffs().to_vec()
        })
        .collect();
    Density::piecewise(breaks, coeffs).expect("valid breakpoints")
}

/// Continuous piecewise polynomial, assembled piece by piece so that
/// consecutive pieces agree at the shared breakpoint.
pub fn piecewise_polynomial(rng: &mut ChaCha8Rng) -> PiecewisePolynomial<f64> {
    let pieces = rng.gen_range(1..=3);
    let mut breaks = vec![0.0];
    breaks.extend(interior_breaks(rng, pieces - 1, 0.05));
    breaks.push(1.0);
    let mut coeffs = Vec::with_capacity(pieces);
    let mut value = rng.gen_range(-1.0..1.0);
    for w in breaks.windows(2) {
        let deg = rng.gen_range(1..=3);
        let shape = polynomial(rng, deg, 1.0);
        let p = shape.add(&Polynomial::constant(value - shape.eval(w[0])));
        value = p.eval(w[1]);
        coeffs.push(p.coeffs().to_vec());
    }
    PiecewisePolynomial::new(breaks, coeffs).expect("continuous by construction")
}

/// Staircase with random radix-3 depth in `4..=8`, domain inside `[0, 1]`.
pub fn staircase(rng: &mut ChaCha8Rng) -> SingularStaircase<f64> {
    let depth = rng.gen_range(4..=8);
    let a: f64 = rng.gen_range(0.0..0.7);
    let b = (a + rng.gen_range(0.1..1.0 - a)).min(1.0);
    let scale = rng.gen_range(-2.0..2.0);
    SingularStaircase::new(StaircaseBase::Cantor, 3, depth, a, b, scale, 0.0).expect("valid staircase")
}

/// Random continuous BV function: a piecewise polynomial plus up to two
/// staircases. With `periodic`, the result takes equal values at 0 and 1.
pub fn bvfunc(rng: &mut ChaCha8Rng, periodic: bool) -> BvFunc<f64> {
    let ac = piecewise_polynomial(rng);
    let stairs: Vec<_> = (0..rng.gen_range(0..=2)).map(|_| staircase(rng)).collect();
    let f = BvFunc::new(ac, stairs);
    if !periodic {
        return f;
    }
    let drift = f.value(1.0) - f.value(0.0);
    let line = BvFunc::from_polynomial(Polynomial::new(vec![0.0, drift]));
    f.sub(&line)
}

/// Interval diffeomorphism with a random polynomial log-derivative.
pub fn interval_diffeo(rng: &mut ChaCha8Rng, k: usize) -> Result<Diffeo<f64>> {
    let deg = rng.gen_range(1..=3);
    let g = polynomial(rng, deg, 1.0);
    Diffeo::from_log_derivative(BvFunc::from_polynomial(g), Manifold::Interval, 0.0, k)
}

/// Circle diffeomorphism with a random periodic log-derivative and offset.
pub fn circle_diffeo(rng: &mut ChaCha8Rng, k: usize) -> Result<Diffeo<f64>> {
    let g = periodic_polynomial(rng, 1.0);
    let offset = rng.gen_range(0.0..1.0);
    Diffeo::from_log_derivative(BvFunc::from_polynomial(g), Manifold::Circle, offset, k)
}

pub fn diffeo(rng: &mut ChaCha8Rng, manifold: Manifold, k: usize) -> Result<Diffeo<f64>> {
    match manifold {
        Manifold::Interval => interval_diffeo(rng, k),
        Manifold::Circle => circle_diffeo(rng, k),
    }
}
