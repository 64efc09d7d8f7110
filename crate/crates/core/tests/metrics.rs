use difflab::diffeo::{Diffeo, Manifold};
use difflab::metrics::{dist_1_bv, dist_ck, dist_k_ac, manifold_distance, variation_ball_membership};
use difflab::realfn::{BvFunc, Polynomial};
use difflab::Error;

fn half_quadratic() -> Diffeo<f64> {
    Diffeo::from_polynomial(Polynomial::new(vec![0.0, 0.5, 0.5]), Manifold::Interval, 1).unwrap()
}

fn id(m: Manifold) -> Diffeo<f64> {
    Diffeo::identity(m, 1).unwrap()
}

#[test]
fn manifold_distances() {
    assert!(manifold_distance(Manifold::Circle, 0.0, 1.0_f64) < 1e-15);
    assert!((manifold_distance(Manifold::Circle, 0.0, 0.5_f64) - 2.0).abs() < 1e-15);
    assert!((manifold_distance(Manifold::Interval, 0.2, 0.7_f64) - 0.5).abs() < 1e-15);
}

#[test]
fn ck_against_identity() {
    let f = half_quadratic();
    let d = dist_ck(&f, &id(Manifold::Interval), 1).unwrap();
    assert!((d.summand("sup").unwrap() - 0.125).abs() < 1e-12);
    assert!((d.summand("c1").unwrap() - 0.5).abs() < 1e-15);
    assert!((d.total() - 0.625).abs() < 1e-12);
    assert_eq!(dist_ck(&f, &f, 1).unwrap().total(), 0.0);
    assert!(matches!(dist_ck(&f, &f, 2), Err(Error::OrderOutOfRange { .. })));
}

#[test]
fn k_ac_against_identity() {
    let f = half_quadratic();
    let d = dist_k_ac(&f, &id(Manifold::Interval), 1).unwrap();
    assert!((d.summand("l1_top").unwrap() - 1.0).abs() < 1e-14);
    assert!((d.total() - 1.625).abs() < 1e-12);
    assert_eq!(dist_k_ac(&f, &f, 1).unwrap().total(), 0.0);
    let bv = Diffeo::from_log_derivative(BvFunc::cantor(5).unwrap(), Manifold::Interval, 0.0, 1).unwrap();
    assert!(matches!(dist_k_ac(&bv, &f, 1), Err(Error::MetricDomain(_))));
}

#[test]
fn bv_metric_of_rotation() {
    for h in [0.01, 0.2, 0.5, 0.93] {
        let r = Diffeo::rotation(h, 1).unwrap();
        let d = dist_1_bv(&r, &id(Manifold::Circle)).unwrap();
        let chord = ((2.0 * std::f64::consts::PI * h).cos() - 1.0).hypot((2.0 * std::f64::consts::PI * h).sin());
        assert!((d.summand("sup").unwrap() - chord).abs() < 1e-12);
        assert_eq!(d.bv_term().unwrap(), 0.0);
    }
}

#[test]
fn bv_metric_on_separated_family() {
    let make = |h: f64| {
        let g = BvFunc::separated_family_member_with_radix(1.0, h, 10, 4).unwrap();
        Diffeo::from_log_derivative(g, Manifold::Interval, 0.0, 1).unwrap()
    };
    let (a, b) = (make(0.0), make(0.0371));
    let d = dist_1_bv(&a, &b).unwrap();
    assert!((d.bv_term().unwrap() - 2.0).abs() < 1e-9);
    let e = dist_1_bv(&b, &a).unwrap();
    assert_eq!(d.total(), e.total());
}

#[test]
fn summands_add_up_and_serialize() {
    let f = half_quadratic();
    let d = dist_k_ac(&f, &id(Manifold::Interval), 1).unwrap();
    let sum: f64 = d.summands().iter().map(|(_, v)| v).sum();
    assert!((sum - d.total()).abs() < 1e-12);
    let json = serde_json::to_value(&d).unwrap();
    assert_eq!(json["summands"]["c1"], 0.5);
    assert!(json["total"].is_number());
}

#[test]
fn ball_membership() {
    let m = variation_ball_membership(&id(Manifold::Interval), 1).unwrap();
    assert!(m.member);
    assert_eq!(m.margin, 1.0);
    let g = BvFunc::<f64>::separated_family_member(1.0, 0.0, 10).unwrap();
    let f = Diffeo::from_log_derivative(g, Manifold::Interval, 0.0, 1).unwrap();
    let m = variation_ball_membership(&f, 1).unwrap();
    assert!(m.member);
    assert!(m.margin.abs() < 1e-15);
    assert!(!variation_ball_membership(&f, 0).unwrap().member);
    let inv = variation_ball_membership(&f.invert().unwrap(), 1).unwrap();
    assert_eq!(inv.member, m.member);
}

fn sample(seed: u64, i: u64, m: Manifold) -> Diffeo<f64> {
    use difflab::experiments::random::{diffeo, trial_rng};
    diffeo(&mut trial_rng(seed, 50, i), m, 1).unwrap()
}

#[test]
fn bv_term_of_ac_pairs_is_l1_of_log_slope_difference() {
    use difflab::realfn::{integrate, QuadratureOptions, RealFn};
    for i in 0..12 {
        let m = if i % 2 == 0 { Manifold::Interval } else { Manifold::Circle };
        let (f, g) = (sample(1, 2 * i, m), sample(1, 2 * i + 1, m));
        let d = dist_1_bv(&f, &g).unwrap();
        let (lf, lg) = (f.log_derivative(), g.log_derivative());
        let (pf, pg) = (lf.as_bvfunc().unwrap().ac().clone(), lg.as_bvfunc().unwrap().ac().clone());
        let l1 = integrate(
            |x| (pf.derivative_at(x, 1) - pg.derivative_at(x, 1)).abs(),
            0.0,
            1.0,
            &[],
            QuadratureOptions::with_tol(1e-12),
        )
        .unwrap()
        .value;
        assert!((d.summand("bv_variation").unwrap() - l1).abs() < 1e-8, "{i}");
        let d0 = lf.eval(0.0) - lg.eval(0.0);
        assert!((d.summand("bv_endpoint").unwrap() - d0.abs()).abs() < 1e-12);
        assert_eq!(dist_1_bv(&f, &f).unwrap().total(), 0.0);
    }
}

#[test]
fn variation_balls_are_closed_under_products_and_inverses() {
    use difflab::realfn::{total_variation, Interval};
    let v = |f: &Diffeo<f64>| total_variation(&f.log_derivative(), Interval::unit()).unwrap();
    for i in 0..10 {
        let m = if i % 2 == 0 { Manifold::Interval } else { Manifold::Circle };
        let (f, g) = (sample(2, 2 * i, m), sample(2, 2 * i + 1, m));
        assert!(v(&f.compose(&g).unwrap()) <= v(&f) + v(&g) + 1e-8);
        assert!((v(&f.invert().unwrap()) - v(&f)).abs() < 1e-8);
    }
}

#[test]
fn summands_add_up_on_random_pairs() {
    for i in 0..10 {
        let (f, g) = (sample(3, 2 * i, Manifold::Circle), sample(3, 2 * i + 1, Manifold::Circle));
        for d in [dist_ck(&f, &g, 1).unwrap(), dist_k_ac(&f, &g, 1).unwrap(), dist_1_bv(&f, &g).unwrap()] {
            let sum: f64 = d.summands().iter().map(|(_, v)| v).sum();
            assert!((sum - d.total()).abs() < 1e-12);
        }
    }
}
