use std::f64::consts::PI;

use fvrecon::limiters::{
    eta, eta_ct, h3, h3l, h3l_combined, h_ct, h_ct_tvd, h_from_phi, phi3, phi_as, phi_ct,
    phi_ct_combined, phi_ct_tvd,
};
use fvrecon::weno3::{h_weno_large_asym, WenoParams};
use fvrecon::{Grid1D, LimiterKind, LimiterScheme, SlopePair, SmoothnessContext};
use proptest::prelude::*;

const SCALES: [f64; 4] = [-3.0, -1.0, 0.5, 7.0];

type NamedH = (&'static str, fn(SlopePair) -> f64);
type NamedPhi = (&'static str, fn(f64) -> f64);

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn all_schemes(dx: f64) -> Vec<(&'static str, LimiterScheme)> {
    let ctx = SmoothnessContext::new(493.48, dx).unwrap();
    vec![
        ("h3", LimiterScheme::h3()),
        ("ct", LimiterScheme::limiter(LimiterKind::CT).unwrap()),
        (
            "ct-tvd",
            LimiterScheme::limiter(LimiterKind::CTTVD).unwrap(),
        ),
        (
            "as",
            LimiterScheme::limiter(LimiterKind::AS { q: 1.4 }).unwrap(),
        ),
        ("h3l", LimiterScheme::h3l()),
        (
            "ct-c",
            LimiterScheme::combined(LimiterKind::CTCombined { r: 1.0 }, ctx).unwrap(),
        ),
        (
            "h3l-c",
            LimiterScheme::combined(LimiterKind::H3LCombined, ctx).unwrap(),
        ),
        (
            "weno-js",
            LimiterScheme::weno(WenoParams::js(1e-6).unwrap()),
        ),
        (
            "weno-yc",
            LimiterScheme::weno(WenoParams::yc(20.67 * dx * dx).unwrap()),
        ),
        (
            "weno-amm",
            LimiterScheme::weno(WenoParams::amm(1e-3).unwrap()),
        ),
    ]
}

fn slope() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3..1e3f64, -1e-3..1e-3f64, -1.0..1.0f64]
}

proptest! {
    #[test]
    fn every_scheme_reproduces_equal_slopes(d in slope().prop_filter("nonzero", |d| *d != 0.0)) {
        for (name, scheme) in all_schemes(1.0 / 200.0) {
            let h = scheme.h(SlopePair::new(d, d));
            prop_assert!(close(h, d, 1e-14), "{name}: H({d},{d}) = {h}");
        }
    }

    #[test]
    fn linear_limiters_are_homogeneous(dm in slope(), dp in slope()) {
        let s = SlopePair::new(dm, dp);
        let cases: [NamedH; 4] =
            [("h3", h3), ("ct", h_ct), ("ct-tvd", h_ct_tvd), ("h3l", h3l)];
        for (name, h) in cases {
            for k in SCALES {
                // Relative to the slopes: H can cancel to zero.
                let (a, b) = (h(s.scaled(k)), k * h(s));
                prop_assert!((a - b).abs() <= 1e-12 * k.abs() * s.norm(), "{name} k={k}: {a} vs {b}");
            }
        }
        if dm != 0.0 || dp != 0.0 {
            for k in SCALES {
                let a = h_weno_large_asym(s.scaled(k), 2).unwrap();
                let b = k * h_weno_large_asym(s, 2).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * k.abs() * s.norm(), "large asymptote k={k}");
            }
        }
    }

    #[test]
    fn h3l_combined_is_homogeneous_with_coscaled_alpha(dm in slope(), dp in slope(), alpha in 0.1..1e4f64) {
        let dx = 0.01;
        let s = SlopePair::new(dm, dp);
        let ctx = SmoothnessContext::new(alpha, dx).unwrap();
        let e = eta(s, &ctx).unwrap();
        // Rounding may flip the sharp switch right at the boundary.
        prop_assume!((e - 1.0).abs() > 1e-9);
        for k in SCALES {
            let scaled_ctx = SmoothnessContext::new(alpha * k.abs(), dx).unwrap();
            let a = h3l_combined(s.scaled(k), &scaled_ctx);
            let b = k * h3l_combined(s, &ctx);
            prop_assert!((a - b).abs() <= 1e-12 * k.abs() * s.norm(), "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn eta_is_scale_free_and_eta_ct_quadratic(dm in slope(), dp in slope(), alpha in 0.1..1e4f64) {
        let s = SlopePair::new(dm, dp);
        let ctx = SmoothnessContext::new(alpha, 0.01).unwrap().with_radius(1.0).unwrap();
        for k in SCALES {
            let scaled = SmoothnessContext::new(alpha * k.abs(), 0.01).unwrap();
            prop_assert!(close(eta(s.scaled(k), &scaled).unwrap(), eta(s, &ctx).unwrap(), 1e-12));
            prop_assert!(close(eta_ct(s.scaled(k), &ctx).unwrap(), k * k * eta_ct(s, &ctx).unwrap(), 1e-12));
        }
    }

    #[test]
    fn two_slope_form_is_the_homogeneous_extension(dm in slope(), dp in slope().prop_filter("nonzero", |d| *d != 0.0)) {
        let s = SlopePair::new(dm, dp);
        let theta = dm / dp;
        let phis: [NamedPhi; 4] = [
            ("phi3", phi3),
            ("phi_ct", phi_ct),
            ("phi_ct_tvd", phi_ct_tvd),
            ("phi_as", |t| phi_as(t, 1.4)),
        ];
        for (name, phi) in phis {
            let h = h_from_phi(phi, s);
            prop_assert!(close(h, phi(theta) * dp, 1e-12), "{name}");
            let extended = h_from_phi(phi, SlopePair::new(theta, 1.0)) * dp;
            prop_assert!((h - extended).abs() <= 1e-12 * h.abs().max(extended.abs()) + 1e-300, "{name}");
        }
    }
}

#[test]
fn ct_tvd_stays_in_the_tvd_envelope() {
    for i in 0..=200_000 {
        let theta = -10.0 + i as f64 * 1e-4;
        let phi = phi_ct_tvd(theta);
        let bound = 0f64.max(2f64.min(2.0 * theta));
        assert!(
            phi >= 0.0 && phi <= bound + 1e-15,
            "theta {theta}: {phi} > {bound}"
        );
    }
}

#[test]
fn ct_combined_depends_on_the_scale_of_the_slopes() {
    let ctx = SmoothnessContext::new(0.0, 0.1)
        .unwrap()
        .with_radius(1.0)
        .unwrap();
    let s = SlopePair::new(0.03, 0.01);
    assert!(eta_ct(s, &ctx).unwrap() < 1.0);
    let k = 7.0;
    assert!(eta_ct(s.scaled(k), &ctx).unwrap() >= 1.0);
    let scaled = phi_ct_combined(s.scaled(k), &ctx).unwrap();
    let linear = k * phi_ct_combined(s, &ctx).unwrap();
    assert!((scaled - linear).abs() > 1e-3, "{scaled} vs {linear}");
}

#[test]
fn h3l_treats_mirrored_situations_alike() {
    let same = |h: fn(SlopePair) -> f64, a: f64, b: f64| {
        (h(SlopePair::new(a, b)) - h3(SlopePair::new(a, b))).abs() <= 1e-12
    };
    let n = 161;
    for i in 0..n {
        for j in 0..n {
            let d1 = -4.0 + 8.0 * i as f64 / (n - 1) as f64;
            let d2 = -4.0 + 8.0 * j as f64 / (n - 1) as f64;
            assert_eq!(same(h3l, d1, d2), same(h3l, -d2, -d1), "({d1}, {d2})");
        }
    }
    assert!(same(h3l, -0.5, 1.0) && same(h3l, -1.0, 0.5));
    assert!(!same(h_ct, -0.5, 1.0));
    assert!(same(h_ct, -1.0, 0.5));
}

#[test]
fn slopes_near_sine_extrema_obey_the_magnitude_bound() {
    for n in [100usize, 200, 400] {
        let grid = Grid1D::new(n, -1.0, 1.0).unwrap();
        let dx = grid.dx();
        let avg = |i: isize| {
            let a = -1.0 + i as f64 * dx;
            ((PI * a).cos() - (PI * (a + dx)).cos()) / (PI * dx)
        };
        let bound = (2.5f64).sqrt() * PI * PI * dx * dx * (1.0 + 5.0 * dx);
        let mut checked = 0;
        for i in 0..n as isize {
            let x = grid.center(i as usize);
            if (x - 0.5).abs() > dx && (x + 0.5).abs() > dx {
                continue;
            }
            let s = SlopePair::from_averages(avg(i - 1), avg(i), avg(i + 1));
            assert!(s.norm() <= bound, "n={n} x={x}: {} > {bound}", s.norm());
            checked += 1;
        }
        assert!(checked >= 2);
    }
}

#[test]
fn as_limiter_tends_to_phi3_for_small_q() {
    for theta in [-1.5, -0.5, 0.5, 2.0, 5.0] {
        assert!(
            (phi_as(theta, 1e-6) - phi3(theta)).abs() <= 1e-3,
            "theta {theta}"
        );
    }
}
