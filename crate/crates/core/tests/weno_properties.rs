use fvrecon::experiments::InitialCondition;
use fvrecon::weno3::{
    h_weno, h_weno_large_asym, h_weno_small_asym, weights_js, weights_yc, WenoParams, GAMMA_MINUS,
    GAMMA_PLUS,
};
use fvrecon::SlopePair;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_pair(rng: &mut ChaCha8Rng) -> SlopePair {
    let mag = 10f64.powf(rng.gen_range(-8.0..3.0));
    SlopePair::new(
        mag * rng.gen_range(-1.0..1.0),
        mag * rng.gen_range(-1.0..1.0),
    )
}

#[test]
fn weights_are_a_convex_combination() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let variants = [
        WenoParams::js(1e-6).unwrap(),
        WenoParams::js(1e-2).unwrap(),
        WenoParams::yc(1e-4).unwrap(),
        WenoParams::amm(1e-4).unwrap(),
        WenoParams::js(1e-6).unwrap().with_power(1).unwrap(),
    ];
    for _ in 0..100_000 {
        let s = random_pair(&mut rng);
        for p in &variants {
            let (wm, wp) = p.weights(s);
            assert!(wm >= 0.0 && wp >= 0.0, "{p:?} {s:?}");
            assert!((wm + wp - 1.0).abs() <= 1e-14, "{p:?} {s:?}: {}", wm + wp);
        }
    }
}

proptest! {
    #[test]
    fn equal_slopes_give_ideal_weights(d in -1e3..1e3f64, eps in 1e-12..1.0f64) {
        let s = SlopePair::new(d, d);
        let js = weights_js(s, &WenoParams::js(eps).unwrap());
        prop_assert_eq!(js, (GAMMA_MINUS, GAMMA_PLUS));
        let yc = weights_yc(s, eps);
        prop_assert_eq!(yc, (GAMMA_MINUS, GAMMA_PLUS));
    }

    #[test]
    fn amm_and_yc_weights_coincide(dm in -10.0..10.0f64, dp in -10.0..10.0f64, eps in 1e-10..1.0f64) {
        let s = SlopePair::new(dm, dp);
        prop_assert_eq!(WenoParams::amm(eps).unwrap().weights(s), weights_yc(s, eps));
        prop_assert_eq!(WenoParams::amm(eps).unwrap().h(s), WenoParams::yc(eps).unwrap().h(s));
    }
}

#[test]
fn js_approaches_its_asymptotes() {
    let s = SlopePair::new(1.0, 2.0);
    let far = h_weno_large_asym(s, 2).unwrap();
    for eps in [1e-6, 1e-8, 1e-10] {
        let p = WenoParams::js(eps).unwrap();
        assert!((h_weno(s, p.weights(s)) - far).abs() <= 1e-3, "eps {eps}");
    }
    let tiny = s.scaled(1e-9);
    let p = WenoParams::js(1e-6).unwrap();
    let near = h_weno_small_asym(tiny);
    assert!((p.h(tiny) - near).abs() <= 1e-12 * s.norm());
}

fn round_to(x: f64, digits: i32) -> f64 {
    let f = 10f64.powi(digits);
    (x * f).round() / f
}

#[test]
fn smooth_bump_constants() {
    let ic = InitialCondition::SmoothBump;
    let domain = ic.default_domain();
    assert_eq!(round_to(ic.alpha(domain), 2), 493.48);
    assert_eq!(round_to(ic.epsilon_coefficient(domain), 2), 20.67);
}

#[test]
fn mixed_features_constants() {
    let ic = InitialCondition::MixedFeatures;
    let domain = ic.default_domain();
    assert_eq!(round_to(ic.alpha(domain), 2), 8887.87);
    assert_eq!(round_to(ic.epsilon_coefficient(domain), 2), 1042.83);
}

#[test]
fn shu_osher_alpha() {
    let ic = InitialCondition::ShuOsher;
    assert_eq!(round_to(ic.alpha(ic.default_domain()), 1), 5.0);
}

#[test]
fn shu_osher_epsilon() {
    let ic = InitialCondition::ShuOsher;
    let c = ic.epsilon_coefficient(ic.default_domain());
    assert_eq!(round_to(c, 3), 21.932, "coefficient {c}");
}
