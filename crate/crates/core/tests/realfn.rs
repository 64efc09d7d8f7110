use std::f64::consts::PI;

use difflab::diffeo::{Diffeo, Manifold};
use difflab::experiments::random::{self, trial_rng};
use difflab::realfn::*;
use proptest::prelude::*;

fn unit() -> Interval<f64> {
    Interval::unit()
}

fn cantor(d: u32) -> BvFunc<f64> {
    BvFunc::cantor(d).unwrap()
}

#[test]
fn cantor_values_and_variation() {
    let c = cantor(20);
    assert_eq!(c.eval(0.0).unwrap(), 0.0);
    assert!((c.eval(0.5).unwrap() - 0.5).abs() < 1e-15);
    assert!((c.eval(2.0 / 9.0).unwrap() - 0.25).abs() < 1e-12);
    assert!((c.eval(1.0 / 3.0).unwrap() - 0.5).abs() < 1e-12);
    for d in [1, 5, 12, 20] {
        assert_eq!(total_variation(&cantor(d), unit()).unwrap(), 1.0);
        let s = SingularStaircase::<f64>::cantor(d).unwrap();
        assert!((s.active_length() - (2.0f64 / 3.0).powi(d as i32)).abs() < 1e-15);
    }
    assert_eq!(uniform_norm(&c, unit()), 1.0);
}

#[test]
fn separated_member_shape() {
    for r in [0.5, 1.0, 3.0] {
        let f = BvFunc::<f64>::separated_family_member(r, 0.0, 14).unwrap();
        assert!((f.eval(0.5).unwrap() - r / 2.0).abs() < 1e-15);
        assert_eq!(f.eval(0.0).unwrap(), 0.0);
        assert!((total_variation(&f, unit()).unwrap() - r).abs() < 1e-12);
        assert!((bv_norm(&f).unwrap() - r).abs() < 1e-12);
    }
}

#[test]
fn algebra_examples() {
    let c = cantor(9);
    let z = BvFunc::linear_combine(&[1.0, -1.0], &[&c, &c]).unwrap();
    assert!((0..=100).all(|i| z.eval(i as f64 / 100.0).unwrap() == 0.0));
    assert_eq!(total_variation(&c.scale(-3.0), unit()).unwrap(), 3.0);
    assert_eq!(total_variation(&c.add_constant(2.5), unit()).unwrap(), 1.0);
    assert_eq!(bv_norm(&BvFunc::constant(-1.5)).unwrap(), 1.5);
}

#[test]
fn lebesgue_parts_examples() {
    let p = BvFunc::<f64>::from_polynomial(Polynomial::new(vec![1.0, 2.0, -3.0]));
    let (ac, sing) = p.lebesgue_parts();
    assert_eq!(ac, p);
    assert!(sing.ac().is_zero() && sing.singular().is_empty());
    let (ac, sing) = cantor(6).lebesgue_parts();
    assert!(ac.ac().is_zero() && ac.singular().is_empty());
    assert_eq!(sing, cantor(6));
}

#[test]
fn parabola_variation_and_norms() {
    let p = BvFunc::<f64>::from_polynomial(Polynomial::new(vec![0.0, 1.0, -1.0]));
    assert!((total_variation(&p, unit()).unwrap() - 0.5).abs() < 1e-15);
    assert!((uniform_norm(&p, unit()) - 0.25).abs() < 1e-15);
    let d = p.derivative_ae();
    for i in 0..=20 {
        let x = i as f64 / 20.0;
        assert!((d.eval(x).unwrap() - (1.0 - 2.0 * x)).abs() < 1e-15);
    }
    assert!((l1_norm(&d, unit()).unwrap().value - 0.5).abs() < 1e-12);
    let c = Density::piecewise(vec![0.0, 1.0], vec![vec![-2.5]]).unwrap();
    assert!((l1_norm(&c, unit()).unwrap().value - 2.5).abs() < 1e-13);
}

#[test]
fn oracle_on_sine() {
    let f = FnHandle::new(|x: f64| (2.0 * PI * x).sin(), vec![]);
    let e = variation_oracle(&f, unit(), 1e-10).unwrap();
    assert!((e.estimate - 4.0).abs() < 1e-8, "{}", e.estimate);
    assert!(e.lower_bounds.windows(2).all(|w| w[1] >= w[0]));
    // with its turning points reported the first partition is already exact
    let g = FnHandle::new(|x: f64| (2.0 * PI * x).sin(), vec![0.25, 0.75]);
    assert!((variation_oracle(&g, unit(), 1e-12).unwrap().lower_bounds[0] - 4.0).abs() < 1e-14);
}

#[test]
fn oracle_on_cantor_is_exact_with_plateau_endpoints() {
    let c = cantor(12);
    let e = variation_oracle(&c, unit(), 1e-12).unwrap();
    assert!((e.estimate - 1.0).abs() < 1e-14);
    assert!((e.lower_bounds[0] - 1.0).abs() < 1e-14);
}

#[test]
fn composition_with_identity_and_rotation() {
    let mut rng = trial_rng(11, 99, 0);
    let f = random::bvfunc(&mut rng, true);
    let id = Diffeo::identity(Manifold::Interval, 1).unwrap();
    let fu = compose_with(&f, &id, Manifold::Interval).unwrap();
    for i in 0..=64 {
        let x = i as f64 / 64.0;
        assert_eq!(fu.eval(x), f.value(x));
    }
    let v = total_variation(&f, unit()).unwrap();
    let rot = Diffeo::rotation(0.2871, 1).unwrap();
    let fr = compose_with(&f, &rot, Manifold::Circle).unwrap();
    let o = variation_oracle(&fr, unit(), 1e-11).unwrap().estimate;
    assert!((o - v).abs() < 1e-8, "{o} vs {v}");
    assert!(compose_with(&f, &rot, Manifold::Interval).is_err());
}

#[test]
fn descriptor_round_trip_is_exact() {
    for t in 0..20 {
        let mut rng = trial_rng(3, 98, t);
        let f = random::bvfunc(&mut rng, t % 2 == 0);
        let back = BvFunc::<f64>::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back, f);
    }
}

fn random_f(seed: u64, periodic: bool) -> BvFunc<f64> {
    random::bvfunc(&mut trial_rng(seed, 97, 0), periodic)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn variation_is_additive(seed in any::<u64>(), e in 0.01f64..0.99, c in 0.0f64..0.5, d in 0.5f64..1.0) {
        let f = random_f(seed, false);
        let e = c + (d - c) * e;
        let whole = total_variation(&f, Interval::new(c, d).unwrap()).unwrap();
        let left = total_variation(&f, Interval::new(c, e).unwrap()).unwrap();
        let right = total_variation(&f, Interval::new(e, d).unwrap()).unwrap();
        prop_assert!((left + right - whole).abs() < 1e-8);
    }

    #[test]
    fn scaling_and_shift(seed in any::<u64>(), k in -4.0f64..4.0, s in -10.0f64..10.0) {
        let f = random_f(seed, false);
        let v = total_variation(&f, unit()).unwrap();
        prop_assert!((total_variation(&f.scale(k), unit()).unwrap() - k.abs() * v).abs() < 1e-8 * (1.0 + v));
        prop_assert!((total_variation(&f.add_constant(s), unit()).unwrap() - v).abs() < 1e-8 * (1.0 + v));
    }

    #[test]
    fn oracle_agrees_with_structure(seed in any::<u64>()) {
        let f = random_f(seed, false);
        let (v, mode) = total_variation_detailed(&f, unit()).unwrap();
        let e = variation_oracle(&f, unit(), 1e-10).unwrap();
        prop_assert!(e.lower_bounds.windows(2).all(|w| w[1] >= w[0]));
        if mode == VariationMode::Structural {
            prop_assert!((e.estimate - v).abs() < 1e-8, "{} vs {}", e.estimate, v);
        }
    }

    #[test]
    fn ac_variation_is_l1_of_derivative(seed in any::<u64>()) {
        let ac = random::piecewise_polynomial(&mut trial_rng(seed, 96, 0));
        let f = BvFunc::from_ac(ac);
        let v = total_variation(&f, unit()).unwrap();
        let l1 = l1_norm(&f.derivative_ae(), unit()).unwrap().value;
        prop_assert!((v - l1).abs() < 1e-8);
    }

    #[test]
    fn ftc_round_trip(seed in any::<u64>(), x in 0.0f64..1.0) {
        let ac = random::piecewise_polynomial(&mut trial_rng(seed, 95, 0));
        let f = BvFunc::from_ac(ac);
        let d = f.derivative_ae();
        prop_assert!((f.value(x) - f.value(0.0) - d.integral(0.0, x)).abs() < 1e-10);
        let q = integrate(|t| d.ac_value(t), 0.0, x, d.breakpoints(), QuadratureOptions::default()).unwrap();
        prop_assert!((f.value(x) - f.value(0.0) - q.value).abs() < 1e-9);
    }

    #[test]
    fn bv_norm_is_a_norm(a in any::<u64>(), b in any::<u64>(), k in -3.0f64..3.0) {
        let (f, g) = (random_f(a, false), random_f(b, false));
        let sum = BvFunc::linear_combine(&[1.0, 1.0], &[&f, &g]).unwrap();
        prop_assert!(bv_norm(&sum).unwrap() <= bv_norm(&f).unwrap() + bv_norm(&g).unwrap() + 1e-8);
        prop_assert!((bv_norm(&f.scale(k)).unwrap() - k.abs() * bv_norm(&f).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn variation_survives_interval_homeomorphisms(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 94, 0);
        let f = random::bvfunc(&mut rng, false);
        let u = random::interval_diffeo(&mut rng, 1).unwrap();
        let fu = compose_with(&f, &u, Manifold::Interval).unwrap();
        let v = total_variation(&f, unit()).unwrap();
        let o = variation_oracle(&fu, unit(), 1e-10).unwrap().estimate;
        prop_assert!((o - v).abs() < 1e-8, "{} vs {}", o, v);
    }
}
