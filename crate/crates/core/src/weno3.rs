//! Three-point WENO written in the two-slope form.
//!
//! With sub-stencil weights `(w_minus, w_plus)` the face value to the right of
//! cell `i` is `u_i + (w_minus * delta_minus + w_plus * delta_plus) / 2`, so
//! every weight rule below is just another `H(delta_minus, delta_plus)`.

use crate::error::{Error, Result};
use crate::limiters::SlopePair;
use crate::quadrature;

/// Ideal weight of the left (upwind) sub-stencil.
pub const GAMMA_MINUS: f64 = 1.0 / 3.0;
/// Ideal weight of the centred sub-stencil.
pub const GAMMA_PLUS: f64 = 2.0 / 3.0;
/// The constant used by the classical weights.
pub const EPSILON_JS: f64 = 1e-6;
/// Quadrature panels for the `epsilon_yc` norms.
pub const EPSILON_PANELS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WenoVariant {
    /// Jiang-Shu: `gamma / (eps + beta)^p`.
    JS,
    /// Yamaleev-Carpenter: `gamma (1 + tau / (eps + beta))`.
    YC,
    /// Arandiga et al. with `mu = 1`; same weights as YC, `eps = K dx^q`.
    AMM,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoParams {
    pub variant: WenoVariant,
    epsilon: f64,
    pub power_p: i32,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

impl WenoParams {
    pub fn new(variant: WenoVariant, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "WENO epsilon must be > 0, got {epsilon}"
            )));
        }
        Ok(WenoParams {
            variant,
            epsilon,
            power_p: 2,
            gamma_minus: GAMMA_MINUS,
            gamma_plus: GAMMA_PLUS,
        })
    }

    pub fn js(epsilon: f64) -> Result<Self> {
        Self::new(WenoVariant::JS, epsilon)
    }

    pub fn yc(epsilon: f64) -> Result<Self> {
        Self::new(WenoVariant::YC, epsilon)
    }

    pub fn amm(epsilon: f64) -> Result<Self> {
        Self::new(WenoVariant::AMM, epsilon)
    }

    pub fn with_power(mut self, p: i32) -> Result<Self> {
        if p < 1 {
            return Err(Error::InvalidParameter(format!(
                "WENO power p must be >= 1, got {p}"
            )));
        }
        self.power_p = p;
        Ok(self)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn weights(&self, s: SlopePair) -> (f64, f64) {
        match self.variant {
            WenoVariant::JS => weights_js(s, self),
            WenoVariant::YC | WenoVariant::AMM => {
                weights_tau(s, self.epsilon, self.gamma_minus, self.gamma_plus)
            }
        }
    }

    /// The two-slope value `w_minus dm + w_plus dp`.
    #[inline]
    pub fn h(&self, s: SlopePair) -> f64 {
        h_weno(s, self.weights(s))
    }
}

/// How `epsilon` is obtained for a given grid spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonPolicy {
    /// A grid-independent value (`1e-6` for the classical scheme).
    Fixed(f64),
    /// `C dx^2`, with `C` from the initial data.
    YcFromIc { coefficient: f64 },
    /// `K dx^q`.
    PowerLaw { k: f64, q: i32 },
}

impl EpsilonPolicy {
    pub fn epsilon(&self, dx: f64) -> f64 {
        match *self {
            EpsilonPolicy::Fixed(e) => e,
            EpsilonPolicy::YcFromIc { coefficient } => coefficient * dx * dx,
            EpsilonPolicy::PowerLaw { k, q } => k * dx.powi(q),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            EpsilonPolicy::Fixed(e) => e > 0.0 && e.is_finite(),
            EpsilonPolicy::YcFromIc { coefficient } => coefficient > 0.0 && coefficient.is_finite(),
            EpsilonPolicy::PowerLaw { k, q } => k > 0.0 && k.is_finite() && q >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "epsilon policy {self:?} does not give eps > 0"
            )))
        }
    }
}

/// Smoothness indicator of a two-point sub-stencil.
#[inline]
pub fn beta(delta: f64) -> f64 {
    delta * delta
}

/// Classical weights, evaluated through the ratio
/// `r = ((eps + beta_minus) / (eps + beta_plus))^p` so that equal slopes give
/// the ideal weights bit for bit.
#[inline]
pub fn weights_js(s: SlopePair, params: &WenoParams) -> (f64, f64) {
    let eps = params.epsilon;
    let r = ((eps + beta(s.delta_minus)) / (eps + beta(s.delta_plus))).powi(params.power_p);
    let gp_r = params.gamma_plus * r;
    let denom = params.gamma_minus + gp_r;
    (params.gamma_minus / denom, gp_r / denom)
}

#[inline]
fn weights_tau(s: SlopePair, eps: f64, gamma_minus: f64, gamma_plus: f64) -> (f64, f64) {
    let jump = s.delta_plus - s.delta_minus;
    let tau = jump * jump;
    let a_minus = gamma_minus * (1.0 + tau / (eps + beta(s.delta_minus)));
    let a_plus = gamma_plus * (1.0 + tau / (eps + beta(s.delta_plus)));
    let denom = a_minus + a_plus;
    (a_minus / denom, a_plus / denom)
}

/// Yamaleev-Carpenter weights with `tau = (dp - dm)^2`.
#[inline]
pub fn weights_yc(s: SlopePair, epsilon: f64) -> (f64, f64) {
    weights_tau(s, epsilon, GAMMA_MINUS, GAMMA_PLUS)
}

#[inline]
pub fn h_weno(s: SlopePair, w: (f64, f64)) -> f64 {
    w.0 * s.delta_minus + w.1 * s.delta_plus
}

/// Leading-order form near the origin (`|delta| << eps`); identical to `H3`.
#[inline]
pub fn h_weno_small_asym(s: SlopePair) -> f64 {
    s.delta_minus / 3.0 + 2.0 * s.delta_plus / 3.0
}

/// Leading-order form far from the origin (`|delta| >> eps`).
///
/// Evaluated after multiplying through by `(dm dp)^{2p}`, which keeps it
/// finite when one slope vanishes.
pub fn h_weno_large_asym(s: SlopePair, p: i32) -> Result<f64> {
    let (dm, dp) = (s.delta_minus, s.delta_plus);
    if dm == 0.0 && dp == 0.0 {
        return Err(Error::UndefinedAtOrigin);
    }
    let dm2p = dm.powi(2 * p);
    let dp2p = dp.powi(2 * p);
    let num = GAMMA_MINUS * dm * dp2p + GAMMA_PLUS * dp * dm2p;
    let den = GAMMA_MINUS * dp2p + GAMMA_PLUS * dm2p;
    Ok(num / den)
}

/// `max(||u0^2||_1, ||(u0')^2||_1)` over `domain`, the coefficient `C` of
/// `eps = C dx^2`. The integrals use [`EPSILON_PANELS`] Gauss-Legendre panels,
/// split at `breakpoints` (jumps and kinks of `u0`) and skipping `excluded`.
pub fn epsilon_yc_coefficient(
    u0: impl Fn(f64) -> f64,
    du0: impl Fn(f64) -> f64,
    domain: (f64, f64),
    breakpoints: &[f64],
    excluded: &[(f64, f64)],
) -> f64 {
    let inside = |x: f64| !excluded.iter().any(|&(a, b)| x >= a && x <= b);
    let mut cuts: Vec<f64> = breakpoints.to_vec();
    for &(a, b) in excluded {
        cuts.push(a);
        cuts.push(b);
    }
    let norm_u2 = quadrature::composite(
        |x| if inside(x) { u0(x).powi(2) } else { 0.0 },
        domain.0,
        domain.1,
        &cuts,
        EPSILON_PANELS,
    );
    let norm_du2 = quadrature::composite(
        |x| if inside(x) { du0(x).powi(2) } else { 0.0 },
        domain.0,
        domain.1,
        &cuts,
        EPSILON_PANELS,
    );
    norm_u2.max(norm_du2)
}

pub fn epsilon_yc(
    u0: impl Fn(f64) -> f64,
    du0: impl Fn(f64) -> f64,
    domain: (f64, f64),
    breakpoints: &[f64],
    excluded: &[(f64, f64)],
    dx: f64,
) -> f64 {
    epsilon_yc_coefficient(u0, du0, domain, breakpoints, excluded) * dx * dx
}
