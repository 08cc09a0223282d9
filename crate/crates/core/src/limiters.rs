//! Limiter functions in the univariate form `phi(theta)` and the two-slope
//! form `H(delta_minus, delta_plus)`, together with the smoothness indicators
//! that decide where the unlimited third-order reconstruction is used.
//!
//! Every `H` here returns the limited (undivided) slope. The face value to the
//! right of cell `i` is `u_i + H(delta_minus, delta_plus) / 2`.

use crate::error::{Error, Result};

/// Plateau of the CT limiter for large positive `theta`.
const CT_PLATEAU: f64 = 1.6;
/// Plateau of `H3L`, relative to `|delta_plus|`.
const H3L_PLATEAU: f64 = 1.5;
/// `sqrt(5/2)`, the slope-norm bound constant near a smooth extremum.
const SQRT_FIVE_HALVES: f64 = 1.581_138_830_084_189_8;

/// Number of uniform samples used when searching for `max |u0''|`.
pub const ALPHA_SAMPLES: usize = 10_000;

/// Undivided differences around a cell: `u_i - u_{i-1}` and `u_{i+1} - u_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopePair {
    pub delta_minus: f64,
    pub delta_plus: f64,
}

impl SlopePair {
    /// Finite inputs are a precondition; checked in debug builds only.
    /// Use [`SlopePair::try_new`] for unvalidated data.
    #[inline]
    pub fn new(delta_minus: f64, delta_plus: f64) -> Self {
        debug_assert!(delta_minus.is_finite() && delta_plus.is_finite());
        SlopePair {
            delta_minus,
            delta_plus,
        }
    }

    pub fn try_new(delta_minus: f64, delta_plus: f64) -> Result<Self> {
        if delta_minus.is_finite() && delta_plus.is_finite() {
            Ok(SlopePair {
                delta_minus,
                delta_plus,
            })
        } else {
            Err(Error::NonFiniteSlopes(delta_minus, delta_plus))
        }
    }

    /// Slopes of the stencil `(u_{i-1}, u_i, u_{i+1})`.
    #[inline]
    pub fn from_averages(u_m: f64, u_i: f64, u_p: f64) -> Self {
        SlopePair::new(u_i - u_m, u_p - u_i)
    }

    /// The pair seen from the opposite face: `(delta_plus, delta_minus)`.
    #[inline]
    pub fn swapped(self) -> Self {
        SlopePair::new(self.delta_plus, self.delta_minus)
    }

    #[inline]
    pub fn scaled(self, k: f64) -> Self {
        SlopePair::new(k * self.delta_minus, k * self.delta_plus)
    }

    /// Slope ratio `delta_minus / delta_plus`, `None` when `delta_plus == 0`.
    #[inline]
    pub fn theta(self) -> Option<f64> {
        (self.delta_plus != 0.0).then(|| self.delta_minus / self.delta_plus)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.delta_minus * self.delta_minus + self.delta_plus * self.delta_plus
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.delta_minus.hypot(self.delta_plus)
    }
}

/// How a combined limiter moves between the unlimited and the limited branch.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SwitchMode {
    /// Unlimited for indicator < 1, limited otherwise.
    #[default]
    Sharp,
    /// Linear blend for indicator in `[1, 1 + width]`; Lipschitz in the slopes.
    Linear { width: f64 },
}

impl SwitchMode {
    /// Default blend used by `SwitchMode::linear()`: indicator in `[1, 1.1]`.
    pub const DEFAULT_WIDTH: f64 = 0.1;

    pub fn linear() -> Self {
        SwitchMode::Linear {
            width: Self::DEFAULT_WIDTH,
        }
    }

    /// Weight of the limited branch for a given indicator value.
    #[inline]
    fn limited_weight(self, indicator: f64) -> f64 {
        match self {
            SwitchMode::Sharp => {
                if indicator < 1.0 {
                    0.0
                } else {
                    1.0
                }
            }
            SwitchMode::Linear { width } => ((indicator - 1.0) / width).clamp(0.0, 1.0),
        }
    }

    #[inline]
    fn combine(
        self,
        indicator: f64,
        unlimited: impl FnOnce() -> f64,
        limited: impl FnOnce() -> f64,
    ) -> f64 {
        let w = self.limited_weight(indicator);
        if w == 0.0 {
            unlimited()
        } else if w == 1.0 {
            limited()
        } else {
            let h_unlimited = unlimited();
            h_unlimited + w * (limited() - h_unlimited)
        }
    }
}

/// Parameters of the smoothness indicators.
///
/// `alpha` is `max |u0''|` away from discontinuities (solution units per
/// length squared). `radius_r` is only needed by the CT indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessContext {
    pub alpha: f64,
    pub dx: f64,
    pub radius_r: Option<f64>,
    pub switch: SwitchMode,
}

impl SmoothnessContext {
    pub fn new(alpha: f64, dx: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be >= 0, got {alpha}"
            )));
        }
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidParameter(format!("dx must be > 0, got {dx}")));
        }
        Ok(SmoothnessContext {
            alpha,
            dx,
            radius_r: None,
            switch: SwitchMode::Sharp,
        })
    }

    pub fn with_radius(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "radius r must be > 0, got {r}"
            )));
        }
        self.radius_r = Some(r);
        Ok(self)
    }

    pub fn with_switch(mut self, switch: SwitchMode) -> Self {
        self.switch = switch;
        self
    }
}

#[allow(unknown_lints, unpredictable_function_pointer_comparisons)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimiterKind {
    /// Unlimited third order, `H3`.
    Phi3Full,
    CT,
    CTTVD,
    /// `phi_CT` with the CT asymptotic region of radius `r`.
    CTCombined {
        r: f64,
    },
    /// Double-logarithmic limiter with exponent `q`.
    AS {
        q: f64,
    },
    H3L,
    /// `H3L` with the parameter-free asymptotic region.
    H3LCombined,
    /// Any univariate limiter, lifted to two slopes through `h_from_phi`.
    UserPhi(fn(f64) -> f64),
}

impl LimiterKind {
    pub fn needs_smoothness(&self) -> bool {
        matches!(
            self,
            LimiterKind::CTCombined { .. } | LimiterKind::H3LCombined
        )
    }
}

/// Unlimited third-order reconstruction.
#[inline]
pub fn phi3(theta: f64) -> f64 {
    (2.0 + theta) / 3.0
}

#[inline]
pub fn phi_ct(theta: f64) -> f64 {
    let p3 = phi3(theta);
    0f64.max(p3.min((-0.5 * theta).max((2.0 * theta).min(p3).min(CT_PLATEAU))))
}

/// TVD restriction of `phi_ct`: the negative-`theta` branch is dropped.
#[inline]
pub fn phi_ct_tvd(theta: f64) -> f64 {
    0f64.max((2.0 * theta).min(phi3(theta)).min(CT_PLATEAU))
}

/// `(1 + e) ln(1 + e) - e - e^2 / 2`, accurate for small `e`.
fn log_remainder(e: f64) -> f64 {
    if e.abs() < 0.25 {
        // sum_{n>=3} (-1)^n e^n / (n (n - 1))
        let mut term = e * e;
        let mut sum = 0.0;
        for n in 3..60 {
            term *= -e;
            let contrib = term / (n * (n - 1)) as f64;
            sum += contrib;
            if contrib.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (1.0 + e) * e.ln_1p() - e - 0.5 * e * e
    }
}

/// Double-logarithmic limiter.
///
/// The closed form is `0/0` at `p = 1` (i.e. `|theta| = 1` or `q -> 0`). With
/// `p = 1 + e` the numerator is rewritten as
/// `2 (1 - theta) g(e) + e^2 ln(1 + e)` with `g` from `log_remainder`, and the
/// denominator as `e^3 (2 + e)`; the common `e^3` is cancelled analytically.
pub fn phi_as(theta: f64, q: f64) -> f64 {
    debug_assert!(q > 0.0);
    let a = theta.abs();
    if a == 0.0 {
        return 0.0;
    }
    let aq = a.powf(q);
    // p = 2 a^q / (1 + a^2q), written to stay finite for huge a^q
    let p = if aq > 1.0 {
        2.0 / (aq + 1.0 / aq)
    } else {
        2.0 * aq / (1.0 + aq * aq)
    };
    if p == 0.0 {
        return 0.0;
    }
    let e = p - 1.0;
    if e == 0.0 {
        return phi3(theta);
    }
    if e.abs() < 1e-3 {
        let g_over_e3 = log_remainder(e) / (e * e * e);
        let l_over_e = e.ln_1p() / e;
        let n_over_e3 = 2.0 * (1.0 - theta) * g_over_e3 + l_over_e;
        return 2.0 * p * n_over_e3 / (2.0 + e);
    }
    let num = 2.0 * (1.0 - theta) * log_remainder(e) + e * e * e.ln_1p();
    2.0 * p * num / (e * e * e * (2.0 + e))
}

/// Unlimited third-order reconstruction in two-slope form.
#[inline]
pub fn h3(s: SlopePair) -> f64 {
    // (2 dp + dm) / 3, arranged to return dp exactly when dm == dp
    s.delta_plus + (s.delta_minus - s.delta_plus) / 3.0
}

/// Lifts a univariate limiter to two slopes: `phi(dm / dp) * dp`, and 0 on `dp = 0`.
#[inline]
pub fn h_from_phi(phi: impl Fn(f64) -> f64, s: SlopePair) -> f64 {
    if s.delta_plus == 0.0 {
        0.0
    } else {
        phi(s.delta_minus / s.delta_plus) * s.delta_plus
    }
}

/// `phi_ct(dm / dp) * dp` without the division: the sign of `dp` is factored
/// out so that the third-order branch returns `h3(s)` bit for bit.
#[inline]
pub fn h_ct(s: SlopePair) -> f64 {
    let sp = sgn(s.delta_plus);
    let sh3 = sp * h3(s);
    let sdm = sp * s.delta_minus;
    let inner = (2.0 * sdm).min(sh3).min(CT_PLATEAU * s.delta_plus.abs());
    sp * 0f64.max(sh3.min((-0.5 * sdm).max(inner)))
}

/// `phi_ct_tvd(dm / dp) * dp` in the same division-free form as [`h_ct`].
#[inline]
pub fn h_ct_tvd(s: SlopePair) -> f64 {
    let sp = sgn(s.delta_plus);
    let sdm = sp * s.delta_minus;
    sp * 0f64.max(
        (2.0 * sdm)
            .min(sp * h3(s))
            .min(CT_PLATEAU * s.delta_plus.abs()),
    )
}

#[inline]
fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Third-order limiter that treats `(d1, d2)` and `(-d2, -d1)` alike.
#[inline]
pub fn h3l(s: SlopePair) -> f64 {
    let sp = sgn(s.delta_plus);
    let sh3 = sp * h3(s);
    let sdm = sp * s.delta_minus;
    let inner = (2.0 * sdm).min(sh3).min(H3L_PLATEAU * s.delta_plus.abs());
    sp * 0f64.max(sh3.min((-sdm).max(inner)))
}

/// Dimensionless slope magnitude; values below 1 mark the asymptotic region
/// around a smooth extremum. Errors when `alpha == 0`.
pub fn eta(s: SlopePair, ctx: &SmoothnessContext) -> Result<f64> {
    if ctx.alpha == 0.0 {
        return Err(Error::DegenerateContext("eta is undefined for alpha = 0"));
    }
    Ok(eta_unchecked(s, ctx.alpha, ctx.dx))
}

#[inline]
fn eta_unchecked(s: SlopePair, alpha: f64, dx: f64) -> f64 {
    s.norm() / (SQRT_FIVE_HALVES * alpha * dx * dx)
}

/// The CT indicator: `(dm^2 + dp^2) / (r dx)^2`.
pub fn eta_ct(s: SlopePair, ctx: &SmoothnessContext) -> Result<f64> {
    let r = ctx
        .radius_r
        .ok_or(Error::DegenerateContext("eta_ct needs a radius r"))?;
    Ok(eta_ct_with(s, r, ctx.dx))
}

#[inline]
fn eta_ct_with(s: SlopePair, r: f64, dx: f64) -> f64 {
    let rdx = r * dx;
    s.norm_sq() / (rdx * rdx)
}

/// `phi_CT` combined with the CT asymptotic region, returned as an `H` value.
///
/// The unlimited branch is evaluated as `H3`, which equals `phi3(theta) dp` for
/// `dp != 0` and stays continuous across `dp = 0`.
pub fn phi_ct_combined(s: SlopePair, ctx: &SmoothnessContext) -> Result<f64> {
    let r = ctx
        .radius_r
        .ok_or(Error::DegenerateContext("phi_ct_combined needs a radius r"))?;
    Ok(ct_combined_with(s, r, ctx.dx, ctx.switch))
}

#[inline]
pub(crate) fn ct_combined_with(s: SlopePair, r: f64, dx: f64, switch: SwitchMode) -> f64 {
    switch.combine(eta_ct_with(s, r, dx), || h3(s), || h_ct(s))
}

/// `H3` inside the asymptotic region `eta < 1`, `H3L` outside. With `alpha = 0`
/// the region is empty and this is plain `H3L`.
#[inline]
pub fn h3l_combined(s: SlopePair, ctx: &SmoothnessContext) -> f64 {
    if ctx.alpha == 0.0 {
        return h3l(s);
    }
    ctx.switch
        .combine(eta_unchecked(s, ctx.alpha, ctx.dx), || h3(s), || h3l(s))
}

/// `true` if `x` lies in any of the closed intervals.
fn is_excluded(x: f64, excluded: &[(f64, f64)]) -> bool {
    excluded.iter().any(|&(a, b)| x >= a && x <= b)
}

/// `max |u0''|` over samples `(x, u0''(x))` that fall outside `excluded`;
/// 0 when nothing remains.
pub fn alpha_from_samples(samples: &[(f64, f64)], excluded: &[(f64, f64)]) -> f64 {
    samples
        .iter()
        .filter(|(x, _)| !is_excluded(*x, excluded))
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max)
}

/// `max |u0''|` on `domain` minus `excluded`, from an analytic second derivative.
///
/// The derivative is sampled at [`ALPHA_SAMPLES`] uniform points; the best
/// sample is then refined by golden-section search over its two neighbouring
/// sample intervals, since a uniform grid alone misses the peak of oscillatory
/// data by `O(h^2)`.
pub fn alpha_from_ic(
    second_derivative: impl Fn(f64) -> f64,
    domain: (f64, f64),
    excluded: &[(f64, f64)],
) -> f64 {
    let (lo, hi) = domain;
    let h = (hi - lo) / (ALPHA_SAMPLES - 1) as f64;
    let samples: Vec<(f64, f64)> = (0..ALPHA_SAMPLES)
        .map(|k| {
            let x = lo + k as f64 * h;
            (x, second_derivative(x))
        })
        .filter(|(x, _)| !is_excluded(*x, excluded))
        .collect();
    let Some(&(x_best, v_best)) = samples
        .iter()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    else {
        return 0.0;
    };
    if v_best == 0.0 {
        return 0.0;
    }
    let a = (x_best - h).max(lo);
    let b = (x_best + h).min(hi);
    let abs_d2 = |x: f64| {
        if is_excluded(x, excluded) {
            0.0
        } else {
            second_derivative(x).abs()
        }
    };
    let refined = golden_max(&abs_d2, a, b);
    refined.max(v_best.abs())
}

/// Numerical fallback for ICs only known pointwise: centred second
/// differences on the sampling grid. Stencils touching `excluded` are skipped.
pub fn alpha_from_values(
    u0: impl Fn(f64) -> f64,
    domain: (f64, f64),
    excluded: &[(f64, f64)],
) -> f64 {
    let (lo, hi) = domain;
    let h = (hi - lo) / (ALPHA_SAMPLES - 1) as f64;
    let values: Vec<f64> = (0..ALPHA_SAMPLES).map(|k| u0(lo + k as f64 * h)).collect();
    let mut best = 0.0f64;
    for k in 1..ALPHA_SAMPLES - 1 {
        let x = lo + k as f64 * h;
        let touches = excluded.iter().any(|&(a, b)| x + h >= a && x - h <= b);
        if touches {
            continue;
        }
        let d2 = (values[k + 1] - 2.0 * values[k] + values[k - 1]) / (h * h);
        best = best.max(d2.abs());
    }
    best
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sp(a: f64, b: f64) -> SlopePair {
        SlopePair::new(a, b)
    }

    #[test]
    fn phi3_values() {
        assert_eq!(phi3(1.0), 1.0);
        assert_eq!(phi3(-2.0), 0.0);
        assert_eq!(phi3(4.0), 2.0);
    }

    #[test]
    fn phi_ct_values() {
        assert_eq!(phi_ct(1.0), 1.0);
        assert_relative_eq!(phi_ct(-1.0), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(phi_ct(10.0), 1.6);
        assert_eq!(phi_ct(-0.5), 0.25);
    }

    #[test]
    fn phi_ct_tvd_values() {
        assert_eq!(phi_ct_tvd(-1.0), 0.0);
        assert_eq!(phi_ct_tvd(1.0), 1.0);
        assert_eq!(phi_ct_tvd(10.0), 1.6);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn phi_as_matches_high_precision_values() {
        // 50-digit evaluations of the closed form
        let cases = [
            (0.5, 1.4, 0.811_188_132_165_784_2),
            (2.0, 1.4, 1.294_628_983_814_626_7),
            (-0.5, 1.4, 0.488_894_231_066_555_8),
            (-2.0, 1.4, 0.005_453_379_417_713_322),
            (0.9, 1.4, 0.966_647_867_416_989_7),
            (1.001, 1.4, 1.000_333_333_333_173_5),
            (0.99999, 1.4, 0.999_996_666_666_666_7),
            (5.0, 1.4, 1.523_712_226_527_609_2),
            (0.3, 0.5, 0.763_160_811_199_941_9),
            (-0.999, 2.0, 0.333_666_666_666_532_8),
        ];
        for (theta, q, want) in cases {
            assert_relative_eq!(phi_as(theta, q), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn phi_as_at_unit_theta_and_origin() {
        assert_eq!(phi_as(1.0, 1.4), 1.0);
        assert_eq!(phi_as(0.0, 0.7), 0.0);
        assert_eq!(phi_as(0.0, 3.0), 0.0);
        assert_relative_eq!(phi_as(-1.0, 1.4), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn phi_as_small_q_tends_to_phi3() {
        assert!((phi_as(3.0, 1e-6) - 5.0 / 3.0).abs() < 1e-3);
        for theta in [-1.5, -0.5, 0.5, 2.0, 5.0] {
            assert!(
                (phi_as(theta, 1e-6) - phi3(theta)).abs() < 1e-3,
                "theta={theta}"
            );
        }
    }

    #[test]
    fn phi_as_large_theta_is_finite() {
        assert!(phi_as(1e300, 1.4).is_finite());
        assert!(phi_as(-1e-300, 1.4).is_finite());
    }

    #[test]
    fn h3_values() {
        assert_eq!(h3(sp(1.0, 1.0)), 1.0);
        assert_relative_eq!(h3(sp(-1.0, 1.0)), 1.0 / 3.0);
        assert_eq!(h3(sp(0.0, 0.0)), 0.0);
    }

    #[test]
    fn h_from_phi_values() {
        assert_relative_eq!(h_from_phi(phi3, sp(1.0, 2.0)), 5.0 / 3.0, epsilon = 1e-15);
        assert_eq!(h_from_phi(phi_ct, sp(1.0, 1.0)), 1.0);
        assert_eq!(h_from_phi(phi3, sp(1.0, 0.0)), 0.0);
        assert_eq!(h_from_phi(phi_ct, sp(1.0, 0.0)), 0.0);
    }

    #[test]
    fn h3l_values() {
        assert_eq!(h3l(sp(1.0, 1.0)), 1.0);
        assert_eq!(h3l(sp(-0.5, 1.0)), 0.5);
        assert_eq!(h3l(sp(-1.0, 0.5)), 0.0);
        assert_eq!(h3l(sp(1.0, 0.0)), 0.0);
        // the CT limiter clips the first of these
        assert_eq!(h_ct(sp(-0.5, 1.0)), 0.25);
    }

    #[test]
    fn eta_values() {
        let ctx = SmoothnessContext::new(1.0, 0.1).unwrap();
        assert_eq!(eta(sp(0.0, 0.0), &ctx).unwrap(), 0.0);
        let d = 5f64.sqrt() / 2.0 * 1e-2;
        assert_relative_eq!(eta(sp(d, d), &ctx).unwrap(), 1.0, epsilon = 1e-14);
        let zero = SmoothnessContext::new(0.0, 0.1).unwrap();
        assert!(matches!(
            eta(sp(1.0, 1.0), &zero),
            Err(Error::DegenerateContext(_))
        ));
    }

    #[test]
    fn eta_is_scale_free_with_alpha() {
        let s = sp(0.013, -0.002);
        let ctx = SmoothnessContext::new(3.0, 0.05).unwrap();
        for k in [-3.0, 0.5, 7.0] {
            let ctx_k = SmoothnessContext::new(3.0 * f64::abs(k), 0.05).unwrap();
            assert_relative_eq!(
                eta(s.scaled(k), &ctx_k).unwrap(),
                eta(s, &ctx).unwrap(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn eta_ct_values() {
        let ctx = SmoothnessContext::new(0.0, 0.1)
            .unwrap()
            .with_radius(1.0)
            .unwrap();
        assert_eq!(eta_ct(sp(0.0, 0.0), &ctx).unwrap(), 0.0);
        assert_relative_eq!(eta_ct(sp(0.1, 0.1), &ctx).unwrap(), 2.0, epsilon = 1e-14);
        let s = sp(0.03, -0.07);
        assert_relative_eq!(
            eta_ct(s.scaled(3.0), &ctx).unwrap(),
            9.0 * eta_ct(s, &ctx).unwrap(),
            max_relative = 1e-14
        );
        let no_r = SmoothnessContext::new(0.0, 0.1).unwrap();
        assert!(eta_ct(s, &no_r).is_err());
    }

    #[test]
    fn ct_combined_branches() {
        let ctx = SmoothnessContext::new(0.0, 0.1)
            .unwrap()
            .with_radius(1.0)
            .unwrap();
        // eta_ct ~ 2e-10: unlimited
        let small = sp(1e-6, -1e-6);
        assert_eq!(phi_ct_combined(small, &ctx).unwrap(), h3(small));
        // eta_ct = 200: limited
        let big = sp(-0.5, 1.0);
        assert_eq!(phi_ct_combined(big, &ctx).unwrap(), h_ct(big));
        assert_ne!(h_ct(big), h3(big));
        for d in [1e-6, 1.0] {
            assert_relative_eq!(
                phi_ct_combined(sp(d, d), &ctx).unwrap(),
                d,
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn h3l_combined_branches() {
        let zero = SmoothnessContext::new(0.0, 0.1).unwrap();
        assert_eq!(h3l_combined(sp(-0.5, 1.0), &zero), 0.5);
        let ctx = SmoothnessContext::new(493.48, 1.0 / 3000.0).unwrap();
        let s = sp(1e-9, 2e-9);
        assert!(eta(s, &ctx).unwrap() < 1.0);
        assert_eq!(h3l_combined(s, &ctx), h3(s));
        // opposite signs far out: limited branch
        let s = sp(1.0, -0.1);
        assert_eq!(h3l_combined(s, &ctx), h3l(s));
        assert_eq!(h3l_combined(sp(0.7, 0.7), &ctx), 0.7);
    }

    #[test]
    fn linear_switch_is_continuous_at_both_ends() {
        let ctx = SmoothnessContext::new(1.0, 0.1)
            .unwrap()
            .with_switch(SwitchMode::linear());
        let scale = SQRT_FIVE_HALVES * 1e-2;
        // direction where H3 and H3L differ
        let dir = sp(1.0, -0.2);
        let unit = dir.norm();
        let at = |eta_target: f64| h3l_combined(dir.scaled(eta_target * scale / unit), &ctx);
        let h3_at = |eta_target: f64| h3(dir.scaled(eta_target * scale / unit));
        let h3l_at = |eta_target: f64| h3l(dir.scaled(eta_target * scale / unit));
        assert_relative_eq!(at(1.0), h3_at(1.0), max_relative = 1e-12);
        assert_relative_eq!(at(1.1), h3l_at(1.1), max_relative = 1e-9, epsilon = 1e-18);
        let mid = at(1.05);
        let (a, b) = (h3_at(1.05), h3l_at(1.05));
        assert!(mid <= a.max(b) && mid >= a.min(b));
    }

    #[test]
    fn alpha_sine_and_square_wave() {
        use std::f64::consts::PI;
        let a = alpha_from_ic(|x| -PI * PI * (PI * x).sin(), (-1.0, 1.0), &[]);
        assert_relative_eq!(a, PI * PI, max_relative = 1e-12);
        assert_eq!(
            alpha_from_ic(|_| 0.0, (-1.0, 1.0), &[(-0.5, -0.5), (0.5, 0.5)]),
            0.0
        );
    }

    #[test]
    fn alpha_respects_exclusions() {
        let a = alpha_from_ic(
            |x| if x < 0.5 { 100.0 } else { 1.0 },
            (0.0, 1.0),
            &[(0.0, 0.5)],
        );
        assert_eq!(a, 1.0);
        let samples = [(0.1, 5.0), (0.2, -7.0), (0.3, 2.0)];
        assert_eq!(alpha_from_samples(&samples, &[]), 7.0);
        assert_eq!(alpha_from_samples(&samples, &[(0.15, 0.25)]), 5.0);
        assert_eq!(alpha_from_samples(&samples, &[(0.0, 1.0)]), 0.0);
    }

    #[test]
    fn alpha_numeric_fallback() {
        use std::f64::consts::PI;
        let a = alpha_from_values(|x| (PI * x).sin(), (-1.0, 1.0), &[]);
        assert_relative_eq!(a, PI * PI, max_relative = 1e-5);
        let step = |x: f64| if x.abs() < 0.5 { 1.0 } else { 0.0 };
        let a = alpha_from_values(step, (-1.0, 1.0), &[(-0.5, -0.5), (0.5, 0.5)]);
        assert_eq!(a, 0.0);
    }
}
