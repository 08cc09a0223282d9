//! Initial conditions, run configurations, the preset catalog and sweeps.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::diagnostics::{
    cell_averages, cell_averages_vec, config_hash, convergence_orders, l1_error, linf_error,
    periodic_shifted_averages, total_variation, ErrorReport, ReferenceSolution,
};
use crate::error::{Error, Result};
use crate::grid::{CellField, Grid1D};
use crate::limiters::{self, LimiterKind, SmoothnessContext, SwitchMode};
use crate::physics::{
    primitive_to_conservative, AdvectionModel, EulerModel, FluxOptions, Model, Primitive,
};
use crate::reconstruction::LimiterScheme;
use crate::solver::{
    self, BoundaryCondition, Discretization, Integration, RunOutput, TimestepMode,
};
use crate::weno3::{self, EpsilonPolicy, WenoParams};

const SHU_OSHER_LEFT: Primitive = Primitive {
    density: 3.857143,
    velocity: 2.629369,
    pressure: 10.33333,
};
const SHU_OSHER_SHOCK: f64 = -4.0;
const SOD_LEFT: Primitive = Primitive {
    density: 1.0,
    velocity: 0.0,
    pressure: 1.0,
};
const SOD_RIGHT: Primitive = Primitive {
    density: 0.125,
    velocity: 0.0,
    pressure: 0.1,
};

/// Named initial data. Euler cases expose their density through the scalar
/// accessors, which is what `alpha` and `epsilon` are computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// `sin(pi x)`.
    Sine,
    /// `(0.5 + 0.5 cos(5 pi (x - 0.5)))^4` on `[0.3, 0.7]`, zero elsewhere.
    SmoothBump,
    /// `1 + offset` on `(-0.5, 0.5)`, `offset` elsewhere.
    SquareWave {
        offset: f64,
    },
    /// Triangle on `[0.1, 0.3]` plus a modulated wave packet around 0.7.
    MixedFeatures,
    Sod,
    ShuOsher,
}

impl InitialCondition {
    pub fn name(&self) -> &'static str {
        match self {
            InitialCondition::Sine => "sine",
            InitialCondition::SmoothBump => "smooth-bump",
            InitialCondition::SquareWave { .. } => "square-wave",
            InitialCondition::MixedFeatures => "mixed-features",
            InitialCondition::Sod => "sod",
            InitialCondition::ShuOsher => "shu-osher",
        }
    }

    pub fn from_name(name: &str, offset: f64) -> Result<Self> {
        Ok(match name {
            "sine" => InitialCondition::Sine,
            "smooth-bump" => InitialCondition::SmoothBump,
            "square-wave" => InitialCondition::SquareWave { offset },
            "mixed-features" => InitialCondition::MixedFeatures,
            "sod" => InitialCondition::Sod,
            "shu-osher" => InitialCondition::ShuOsher,
            other => {
                return Err(Error::Config(format!(
                    "unknown initial condition `{other}`"
                )))
            }
        })
    }

    pub fn is_euler(&self) -> bool {
        matches!(self, InitialCondition::Sod | InitialCondition::ShuOsher)
    }

    pub fn ncomp(&self) -> usize {
        if self.is_euler() {
            3
        } else {
            1
        }
    }

    pub fn default_domain(&self) -> (f64, f64) {
        match self {
            InitialCondition::Sine | InitialCondition::SquareWave { .. } => (-1.0, 1.0),
            InitialCondition::SmoothBump | InitialCondition::MixedFeatures => (0.0, 1.0),
            InitialCondition::Sod => (-2.0, 2.0),
            InitialCondition::ShuOsher => (-4.5, 4.5),
        }
    }

    /// Jump locations (the discontinuity set).
    pub fn discontinuities(&self) -> Vec<f64> {
        match self {
            InitialCondition::SquareWave { .. } => vec![-0.5, 0.5],
            InitialCondition::Sod => vec![0.0],
            InitialCondition::ShuOsher => vec![SHU_OSHER_SHOCK],
            _ => Vec::new(),
        }
    }

    /// Jumps plus kinks and support boundaries; quadrature splits here.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            InitialCondition::SmoothBump => vec![0.3, 0.7],
            InitialCondition::MixedFeatures => vec![0.1, 0.2, 0.3],
            _ => self.discontinuities(),
        }
    }

    /// Scalar value (density for Euler data).
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::Sine => (PI * x).sin(),
            InitialCondition::SmoothBump => {
                if (0.3..=0.7).contains(&x) {
                    (0.5 + 0.5 * (5.0 * PI * (x - 0.5)).cos()).powi(4)
                } else {
                    0.0
                }
            }
            InitialCondition::SquareWave { offset } => {
                offset + if x > -0.5 && x < 0.5 { 1.0 } else { 0.0 }
            }
            InitialCondition::MixedFeatures => {
                let y = x / 0.1 - 2.0;
                (y.min(-y) + 1.0).max(0.0) + packet(x).0
            }
            InitialCondition::Sod | InitialCondition::ShuOsher => self.primitive(x).density,
        }
    }

    /// First derivative of [`value`](Self::value) away from breakpoints.
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::Sine => PI * (PI * x).cos(),
            InitialCondition::SmoothBump => bump_derivatives(x).1,
            InitialCondition::SquareWave { .. } | InitialCondition::Sod => 0.0,
            InitialCondition::MixedFeatures => {
                let ramp = if x > 0.1 && x < 0.2 {
                    10.0
                } else if x > 0.2 && x < 0.3 {
                    -10.0
                } else {
                    0.0
                };
                ramp + packet(x).1
            }
            InitialCondition::ShuOsher => {
                if x < SHU_OSHER_SHOCK {
                    0.0
                } else {
                    (5.0 * x).cos()
                }
            }
        }
    }

    /// Second derivative of [`value`](Self::value) away from breakpoints.
    pub fn second_derivative(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::Sine => -PI * PI * (PI * x).sin(),
            InitialCondition::SmoothBump => bump_derivatives(x).2,
            InitialCondition::SquareWave { .. } | InitialCondition::Sod => 0.0,
            InitialCondition::MixedFeatures => packet(x).2,
            InitialCondition::ShuOsher => {
                if x < SHU_OSHER_SHOCK {
                    0.0
                } else {
                    -5.0 * (5.0 * x).sin()
                }
            }
        }
    }

    /// Primitive Euler state; scalar data is returned as density at rest.
    pub fn primitive(&self, x: f64) -> Primitive {
        match self {
            InitialCondition::Sod => {
                if x < 0.0 {
                    SOD_LEFT
                } else {
                    SOD_RIGHT
                }
            }
            InitialCondition::ShuOsher => {
                if x < SHU_OSHER_SHOCK {
                    SHU_OSHER_LEFT
                } else {
                    Primitive::new(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
                }
            }
            _ => Primitive::new(self.value(x), 0.0, 0.0),
        }
    }

    /// Exact cell averages of the conserved variables.
    pub fn cell_averages(&self, grid: &Grid1D, model: &Model) -> Result<CellField> {
        match model {
            Model::Advection(_) => {
                if self.is_euler() {
                    return Err(Error::Config(format!(
                        "`{}` needs the Euler model",
                        self.name()
                    )));
                }
                let avg = cell_averages(|x| self.value(x), grid, &self.breakpoints());
                CellField::from_interior(*grid, 1, &avg)
            }
            Model::Euler(e) => {
                if !self.is_euler() {
                    return Err(Error::Config(format!("`{}` is scalar data", self.name())));
                }
                let g = e.gamma();
                Ok(cell_averages_vec(
                    |x, out| {
                        out.copy_from_slice(
                            &primitive_to_conservative(self.primitive(x), g).to_array(),
                        )
                    },
                    3,
                    grid,
                    &self.breakpoints(),
                ))
            }
        }
    }

    /// `max |u0''|` off the discontinuity set.
    pub fn alpha(&self, domain: (f64, f64)) -> f64 {
        let excluded: Vec<(f64, f64)> =
            self.discontinuities().into_iter().map(|x| (x, x)).collect();
        limiters::alpha_from_ic(|x| self.second_derivative(x), domain, &excluded)
    }

    /// Coefficient `C` of `eps = C dx^2`.
    pub fn epsilon_coefficient(&self, domain: (f64, f64)) -> f64 {
        weno3::epsilon_yc_coefficient(
            |x| self.value(x),
            |x| self.derivative(x),
            domain,
            &self.breakpoints(),
            &[],
        )
    }
}

/// `(u, u', u'')` of the smooth bump.
fn bump_derivatives(x: f64) -> (f64, f64, f64) {
    if !(0.3..=0.7).contains(&x) {
        return (0.0, 0.0, 0.0);
    }
    let k = 5.0 * PI;
    let th = k * (x - 0.5);
    let c = 0.5 + 0.5 * th.cos();
    let dc = -0.5 * k * th.sin();
    let d2c = -0.5 * k * k * th.cos();
    (
        c.powi(4),
        4.0 * c.powi(3) * dc,
        12.0 * c * c * dc * dc + 4.0 * c.powi(3) * d2c,
    )
}

/// `(g, g', g'')` of `exp(-((x - 0.7) / 0.15)^4) sin(30 pi x)`.
fn packet(x: f64) -> (f64, f64, f64) {
    let w = 0.15;
    let s = (x - 0.7) / w;
    let e = (-s.powi(4)).exp();
    let de = -4.0 * s.powi(3) / w * e;
    let d2e = e * ((4.0 * s.powi(3) / w).powi(2) - 12.0 * s * s / (w * w));
    let k = 30.0 * PI;
    let (sn, cs) = (k * x).sin_cos();
    (
        e * sn,
        de * sn + e * k * cs,
        d2e * sn + 2.0 * de * k * cs - e * k * k * sn,
    )
}

/// A scheme by name, before grid-dependent parameters are fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeSpec {
    H3,
    CT,
    CTTVD,
    CTCombined {
        r: f64,
    },
    AS {
        q: f64,
    },
    H3L,
    H3LCombined,
    WenoJs {
        epsilon: f64,
    },
    /// `None` takes the configuration's epsilon policy.
    WenoYc {
        epsilon: Option<EpsilonPolicy>,
    },
    WenoPow {
        k: f64,
        q: i32,
    },
}

impl SchemeSpec {
    pub const DEFAULT_R: f64 = 1.0;
    pub const DEFAULT_Q: f64 = 1.4;

    /// Resolves the grid-dependent parameters for spacing `dx`.
    pub fn resolve(
        &self,
        dx: f64,
        alpha: f64,
        yc_epsilon: EpsilonPolicy,
        switch: SwitchMode,
    ) -> Result<LimiterScheme> {
        let ctx = || SmoothnessContext::new(alpha, dx).map(|c| c.with_switch(switch));
        Ok(match *self {
            SchemeSpec::H3 => LimiterScheme::h3(),
            SchemeSpec::CT => LimiterScheme::limiter(LimiterKind::CT)?,
            SchemeSpec::CTTVD => LimiterScheme::limiter(LimiterKind::CTTVD)?,
            SchemeSpec::AS { q } => LimiterScheme::limiter(LimiterKind::AS { q })?,
            SchemeSpec::H3L => LimiterScheme::h3l(),
            SchemeSpec::CTCombined { r } => {
                LimiterScheme::combined(LimiterKind::CTCombined { r }, ctx()?)?
            }
            SchemeSpec::H3LCombined => LimiterScheme::combined(LimiterKind::H3LCombined, ctx()?)?,
            SchemeSpec::WenoJs { epsilon } => LimiterScheme::weno(WenoParams::js(epsilon)?),
            SchemeSpec::WenoYc { epsilon } => {
                let policy = epsilon.unwrap_or(yc_epsilon);
                policy.validate()?;
                LimiterScheme::weno(WenoParams::yc(policy.epsilon(dx))?)
            }
            SchemeSpec::WenoPow { k, q } => {
                let policy = EpsilonPolicy::PowerLaw { k, q };
                policy.validate()?;
                LimiterScheme::weno(WenoParams::amm(policy.epsilon(dx))?)
            }
        })
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SchemeSpec::H3 => f.write_str("h3"),
            SchemeSpec::CT => f.write_str("ct"),
            SchemeSpec::CTTVD => f.write_str("ct-tvd"),
            SchemeSpec::CTCombined { r } => write!(f, "ct-c:r={r}"),
            SchemeSpec::AS { q } => write!(f, "as:q={q}"),
            SchemeSpec::H3L => f.write_str("h3l"),
            SchemeSpec::H3LCombined => f.write_str("h3l-c"),
            SchemeSpec::WenoJs { epsilon } if epsilon == weno3::EPSILON_JS => {
                f.write_str("weno-js")
            }
            SchemeSpec::WenoJs { epsilon } => write!(f, "weno-js:eps={epsilon}"),
            SchemeSpec::WenoYc { epsilon: None } => f.write_str("weno-yc"),
            SchemeSpec::WenoYc { epsilon: Some(p) } => write!(f, "weno-yc:{}", format_policy(&p)),
            SchemeSpec::WenoPow { k, q } => write!(f, "weno-pow:K={k},q={q}"),
        }
    }
}

/// `fixed:E`, `yc:C=c` or `pow:K=k,q=q` as used on the command line, or the
/// bare parameter list inside a scheme name.
fn format_policy(p: &EpsilonPolicy) -> String {
    match *p {
        EpsilonPolicy::Fixed(e) => format!("eps={e}"),
        EpsilonPolicy::YcFromIc { coefficient } => format!("C={coefficient}"),
        EpsilonPolicy::PowerLaw { k, q } => format!("K={k},q={q}"),
    }
}

fn parse_params(text: &str) -> Result<Vec<(String, String)>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::UnknownScheme(format!("malformed parameter `{kv}`")))
        })
        .collect()
}

fn param_f64(v: &str, full: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::UnknownScheme(format!("{full}: bad number `{v}`")))
}

fn policy_from_params(params: &[(String, String)], full: &str) -> Result<Option<EpsilonPolicy>> {
    let get = |key: &str| {
        params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };
    for (k, _) in params {
        if !matches!(k.as_str(), "eps" | "C" | "K" | "q") {
            return Err(Error::UnknownScheme(format!(
                "{full}: unknown parameter `{k}`"
            )));
        }
    }
    let policy = match (get("eps"), get("C"), get("K")) {
        (Some(e), None, None) => EpsilonPolicy::Fixed(param_f64(e, full)?),
        (None, Some(c), None) => EpsilonPolicy::YcFromIc {
            coefficient: param_f64(c, full)?,
        },
        (None, None, Some(k)) => {
            let q = get("q")
                .ok_or_else(|| Error::UnknownScheme(format!("{full}: K needs q")))?
                .parse::<i32>()
                .map_err(|_| Error::UnknownScheme(format!("{full}: q must be an integer")))?;
            EpsilonPolicy::PowerLaw {
                k: param_f64(k, full)?,
                q,
            }
        }
        (None, None, None) if params.is_empty() => return Ok(None),
        _ => {
            return Err(Error::UnknownScheme(format!(
                "{full}: give exactly one of eps, C, K"
            )))
        }
    };
    policy
        .validate()
        .map_err(|_| Error::UnknownScheme(format!("{full}: epsilon must be positive")))?;
    Ok(Some(policy))
}

impl FromStr for SchemeSpec {
    type Err = Error;

    fn from_str(full: &str) -> Result<Self> {
        let (base, rest) = full.split_once(':').unwrap_or((full, ""));
        let params = parse_params(rest)?;
        let single = |key: &str, default: f64| -> Result<f64> {
            match params.as_slice() {
                [] => Ok(default),
                [(k, v)] if k == key => param_f64(v, full),
                _ => Err(Error::UnknownScheme(format!(
                    "{full}: expected only `{key}`"
                ))),
            }
        };
        let bare = |s: SchemeSpec| {
            if params.is_empty() {
                Ok(s)
            } else {
                Err(Error::UnknownScheme(format!("{full}: takes no parameters")))
            }
        };
        match base {
            "h3" => bare(SchemeSpec::H3),
            "ct" => bare(SchemeSpec::CT),
            "ct-tvd" => bare(SchemeSpec::CTTVD),
            "h3l" => bare(SchemeSpec::H3L),
            "h3l-c" => bare(SchemeSpec::H3LCombined),
            "ct-c" => {
                let r = single("r", Self::DEFAULT_R)?;
                if r <= 0.0 {
                    return Err(Error::UnknownScheme(format!("{full}: r must be positive")));
                }
                Ok(SchemeSpec::CTCombined { r })
            }
            "as" => {
                let q = single("q", Self::DEFAULT_Q)?;
                if q <= 0.0 {
                    return Err(Error::UnknownScheme(format!("{full}: q must be positive")));
                }
                Ok(SchemeSpec::AS { q })
            }
            "weno-js" => {
                let epsilon = single("eps", weno3::EPSILON_JS)?;
                if epsilon <= 0.0 {
                    return Err(Error::UnknownScheme(format!(
                        "{full}: eps must be positive"
                    )));
                }
                Ok(SchemeSpec::WenoJs { epsilon })
            }
            "weno-yc" => Ok(SchemeSpec::WenoYc {
                epsilon: policy_from_params(&params, full)?,
            }),
            "weno-pow" => match policy_from_params(&params, full)? {
                Some(EpsilonPolicy::PowerLaw { k, q }) => Ok(SchemeSpec::WenoPow { k, q }),
                _ => Err(Error::UnknownScheme(format!("{full}: needs K and q"))),
            },
            _ => Err(Error::UnknownScheme(full.to_string())),
        }
    }
}

/// Parses `fixed:E`, `yc:C=c` or `pow:K=k,q=q`.
pub fn parse_epsilon_policy(text: &str) -> Result<EpsilonPolicy> {
    let bad = || Error::Config(format!("bad epsilon policy `{text}`"));
    let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
    let policy = match kind {
        "fixed" => EpsilonPolicy::Fixed(rest.trim().parse().map_err(|_| bad())?),
        "yc" | "pow" => {
            let params = parse_params(rest).map_err(|_| bad())?;
            policy_from_params(&params, text)
                .map_err(|_| bad())?
                .ok_or_else(bad)?
        }
        _ => return Err(bad()),
    };
    match (kind, policy) {
        ("yc", EpsilonPolicy::YcFromIc { .. })
        | ("pow", EpsilonPolicy::PowerLaw { .. })
        | ("fixed", _) => {}
        _ => return Err(bad()),
    }
    policy.validate().map_err(|_| bad())?;
    Ok(policy)
}

/// Inverse of [`parse_epsilon_policy`].
pub fn format_epsilon_policy(p: &EpsilonPolicy) -> String {
    match *p {
        EpsilonPolicy::Fixed(e) => format!("fixed:{e}"),
        EpsilonPolicy::YcFromIc { coefficient } => format!("yc:C={coefficient}"),
        EpsilonPolicy::PowerLaw { k, q } => format!("pow:K={k},q={q}"),
    }
}

/// One fully specified run plus the comparison set a sweep uses by default.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub model: Model,
    pub ic: InitialCondition,
    pub domain: (f64, f64),
    pub n_cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub bc: BoundaryCondition,
    pub scheme: SchemeSpec,
    /// `max |u0''|` for the combined limiters.
    pub alpha: f64,
    /// Epsilon for `weno-yc` when the scheme name does not fix it.
    pub yc_epsilon: EpsilonPolicy,
    pub switch: SwitchMode,
    pub flux: FluxOptions,
    pub timestep: TimestepMode,
    /// Errors are measured on cells whose centres lie in this interval.
    pub error_range: Option<(f64, f64)>,
    pub record_tv: bool,
    pub schemes: Vec<SchemeSpec>,
    pub n_list: Vec<usize>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be >= 0, got {}", self.t_end));
        }
        if self.n_cells < 3 {
            return bad(format!("need at least 3 cells, got {}", self.n_cells));
        }
        if !(self.domain.0.is_finite()
            && self.domain.1.is_finite()
            && self.domain.1 > self.domain.0)
        {
            return bad(format!("bad domain {:?}", self.domain));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be >= 0, got {}", self.alpha));
        }
        if self.ic.ncomp() != self.model.ncomp() {
            return bad(format!(
                "initial condition `{}` does not match the model",
                self.ic.name()
            ));
        }
        if let Model::Euler(e) = self.model {
            EulerModel::new(e.gamma()).map_err(|e| Error::Config(e.to_string()))?;
        }
        if let BoundaryCondition::Fixed { left, right } = &self.bc {
            if left.len() != self.model.ncomp() || right.len() != self.model.ncomp() {
                return bad("fixed boundary states have the wrong size".into());
            }
        }
        if let Some((a, b)) = self.error_range {
            if !(a <= b) {
                return bad(format!("empty error range [{a}, {b}]"));
            }
        }
        self.yc_epsilon
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.n_cells, self.domain.0, self.domain.1)
    }

    pub fn with_scheme(&self, scheme: SchemeSpec) -> Self {
        RunConfig {
            scheme,
            ..self.clone()
        }
    }

    pub fn with_n(&self, n_cells: usize) -> Self {
        RunConfig {
            n_cells,
            ..self.clone()
        }
    }

    pub fn resolved_scheme(&self) -> Result<LimiterScheme> {
        let dx = self.grid()?.dx();
        self.scheme
            .resolve(dx, self.alpha, self.yc_epsilon, self.switch)
    }

    pub fn discretization(&self) -> Result<Discretization> {
        Ok(Discretization {
            model: self.model,
            scheme: self.resolved_scheme()?,
            bc: self.bc.clone(),
            flux: self.flux,
        })
    }

    pub fn initial_field(&self) -> Result<CellField> {
        self.ic.cell_averages(&self.grid()?, &self.model)
    }

    /// Exact cell averages at time `t` for periodic advection.
    pub fn exact_field(&self, t: f64) -> Result<Option<Vec<f64>>> {
        match (&self.model, &self.bc) {
            (Model::Advection(a), BoundaryCondition::Periodic) => {
                let grid = self.grid()?;
                let ic = self.ic;
                Ok(Some(periodic_shifted_averages(
                    |x| ic.value(x),
                    &grid,
                    &ic.breakpoints(),
                    a.speed * t,
                )))
            }
            _ => Ok(None),
        }
    }

    /// Text identifying everything that influences the computed solution.
    pub fn canonical_text(&self) -> String {
        format!(
            "{:?}|{:?}|{:?}|{}|{:?}|{:?}|{:?}|{}|{:?}|{:?}|{:?}|{:?}|{:?}",
            self.model,
            self.ic,
            self.domain,
            self.n_cells,
            self.cfl,
            self.t_end,
            self.bc,
            self.scheme,
            self.alpha,
            self.yc_epsilon,
            self.switch,
            self.flux,
            self.timestep
        )
    }

    pub fn hash(&self) -> u64 {
        config_hash(&self.canonical_text())
    }
}

/// Runs `config` from its initial data to `t_end`.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let disc = config.discretization()?;
    solver::integrate(
        &disc,
        config.initial_field()?,
        &Integration {
            cfl: config.cfl,
            t_end: config.t_end,
            timestep: config.timestep,
            record_tv: config.record_tv,
        },
    )
}

/// Errors of a finished run against the exact solution (periodic advection)
/// or against `reference` (density, remapped onto the run's grid). Without
/// either the norms are NaN.
pub fn evaluate(
    config: &RunConfig,
    output: &RunOutput,
    reference: Option<&ReferenceSolution>,
) -> Result<ErrorReport> {
    let grid = config.grid()?;
    let approx = output.field.interior(0);
    let exact = match config.exact_field(output.time)? {
        Some(e) => Some(e),
        None => reference.map(|r| r.restrict(0, &grid)).transpose()?,
    };
    let (l1, linf) = match exact {
        Some(e) => (
            l1_error(approx, &e, &grid, config.error_range)?,
            linf_error(approx, &e, &grid, config.error_range)?,
        ),
        None => (f64::NAN, f64::NAN),
    };
    Ok(ErrorReport {
        scheme: config.scheme.to_string(),
        n: grid.n_cells,
        dx: grid.dx(),
        l1,
        linf,
        order_l1: None,
        order_linf: None,
        tv: total_variation(approx, config.bc == BoundaryCondition::Periodic),
    })
}

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub report: ErrorReport,
    pub output: RunOutput,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub scheme: SchemeSpec,
    pub n: usize,
    pub result: Result<SweepRun>,
}

/// Every `(scheme, n)` pair, in scheme-major order, with orders filled in
/// between consecutive successful runs of the same scheme.
pub fn sweep(
    config: &RunConfig,
    schemes: &[SchemeSpec],
    n_list: &[usize],
    reference: Option<&ReferenceSolution>,
) -> Vec<SweepRow> {
    let jobs: Vec<(SchemeSpec, usize)> = schemes
        .iter()
        .flat_map(|&s| n_list.iter().map(move |&n| (s, n)))
        .collect();
    let slots: Vec<Mutex<Option<Result<SweepRun>>>> =
        jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(scheme, n)) = jobs.get(k) else {
                    break;
                };
                let cfg = config.with_scheme(scheme).with_n(n);
                let result = run(&cfg).and_then(|output| {
                    let report = evaluate(&cfg, &output, reference)?;
                    Ok(SweepRun { report, output })
                });
                *slots[k].lock().expect("sweep slot poisoned") = Some(result);
            });
        }
    });
    let mut rows: Vec<SweepRow> = jobs
        .into_iter()
        .zip(slots)
        .map(|((scheme, n), slot)| SweepRow {
            scheme,
            n,
            result: slot
                .into_inner()
                .expect("sweep slot poisoned")
                .expect("every job runs"),
        })
        .collect();
    let mut reports: Vec<ErrorReport> = rows
        .iter()
        .filter_map(|r| r.result.as_ref().ok().map(|s| s.report.clone()))
        .collect();
    convergence_orders(&mut reports);
    let mut it = reports.into_iter();
    for row in rows.iter_mut() {
        if let Ok(run) = row.result.as_mut() {
            run.report = it.next().expect("one report per successful run");
        }
    }
    rows
}

pub const PRESET_NAMES: &[&str] = &[
    "prelim-sine-ct-r-scan",
    "prelim-sine-weno-eps-scan",
    "prelim-weno-yc-eps-scan",
    "smooth-bump",
    "square-wave",
    "square-wave-shifted",
    "mixed-features",
    "sod",
    "shu-osher",
];

fn advection_base(name: &str, ic: InitialCondition, n: usize, cfl: f64, t_end: f64) -> RunConfig {
    RunConfig {
        name: name.to_string(),
        model: Model::Advection(AdvectionModel { speed: 1.0 }),
        ic,
        domain: ic.default_domain(),
        n_cells: n,
        cfl,
        t_end,
        bc: BoundaryCondition::Periodic,
        scheme: SchemeSpec::H3LCombined,
        alpha: 0.0,
        yc_epsilon: EpsilonPolicy::YcFromIc { coefficient: 1.0 },
        switch: SwitchMode::Sharp,
        flux: FluxOptions::default(),
        timestep: TimestepMode::Adaptive,
        error_range: None,
        record_tv: false,
        schemes: Vec::new(),
        n_list: vec![n],
    }
}

fn euler_base(name: &str, ic: InitialCondition, n: usize, t_end: f64) -> RunConfig {
    RunConfig {
        model: Model::Euler(EulerModel::air()),
        bc: BoundaryCondition::Transmissive,
        ..advection_base(name, ic, n, 0.95, t_end)
    }
}

const SINE_N_LIST: [usize; 6] = [20, 40, 80, 160, 320, 640];

/// The catalog of experiment setups.
pub fn preset(name: &str) -> Result<RunConfig> {
    use SchemeSpec::*;
    let js = WenoJs {
        epsilon: weno3::EPSILON_JS,
    };
    let yc = WenoYc { epsilon: None };
    let sine = |name| RunConfig {
        alpha: PI * PI,
        yc_epsilon: EpsilonPolicy::YcFromIc {
            coefficient: PI * PI,
        },
        n_list: SINE_N_LIST.to_vec(),
        ..advection_base(name, InitialCondition::Sine, 80, 0.9, 1.0)
    };
    let square = |name, offset: f64, c: f64| RunConfig {
        yc_epsilon: EpsilonPolicy::YcFromIc { coefficient: c },
        schemes: vec![H3L, H3LCombined, js, yc],
        n_list: vec![160, 320, 640, 1280],
        record_tv: true,
        ..advection_base(
            name,
            InitialCondition::SquareWave { offset },
            320,
            0.8,
            10.0,
        )
    };
    Ok(match name {
        "prelim-sine-ct-r-scan" => RunConfig {
            scheme: CTCombined { r: 1.0 },
            schemes: [0.1, 1.0, 10.0].map(|r| CTCombined { r }).to_vec(),
            ..sine(name)
        },
        "prelim-sine-weno-eps-scan" => RunConfig {
            scheme: js,
            schemes: [1e-2, 1e-4, 1e-6, 1e-8]
                .map(|epsilon| WenoJs { epsilon })
                .to_vec(),
            ..sine(name)
        },
        "prelim-weno-yc-eps-scan" => RunConfig {
            scheme: yc,
            schemes: [1e3, 1.0, 1e-1, 1e-2, 1e-3]
                .map(|coefficient| WenoYc {
                    epsilon: Some(EpsilonPolicy::YcFromIc { coefficient }),
                })
                .to_vec(),
            ..sine(name)
        },
        "smooth-bump" => RunConfig {
            alpha: 493.48,
            yc_epsilon: EpsilonPolicy::YcFromIc { coefficient: 20.67 },
            schemes: vec![H3, H3LCombined, js, yc],
            n_list: vec![
                20, 40, 50, 100, 120, 170, 200, 300, 500, 700, 1000, 1500, 3000,
            ],
            ..advection_base(name, InitialCondition::SmoothBump, 170, 0.8, 10.0)
        },
        "square-wave" => square(name, 0.0, 1.0),
        "square-wave-shifted" => square(name, 100.0, 20201.0),
        "mixed-features" => RunConfig {
            alpha: 8887.87,
            yc_epsilon: EpsilonPolicy::YcFromIc {
                coefficient: 1042.83,
            },
            schemes: vec![H3, H3LCombined, js, yc, WenoPow { k: 1.0, q: 2 }],
            n_list: (0..8).map(|i| 20 << i).collect(),
            error_range: Some((0.4, 1.0)),
            ..advection_base(name, InitialCondition::MixedFeatures, 640, 0.8, 10.0)
        },
        "sod" => RunConfig {
            alpha: 0.0,
            yc_epsilon: EpsilonPolicy::Fixed(2.25),
            schemes: vec![H3, H3LCombined, js, yc],
            ..euler_base(name, InitialCondition::Sod, 100, 0.8)
        },
        "shu-osher" => RunConfig {
            alpha: 5.0,
            yc_epsilon: EpsilonPolicy::Fixed(21.932),
            schemes: vec![H3, js, yc, H3LCombined],
            n_list: vec![640, 1280],
            ..euler_base(name, InitialCondition::ShuOsher, 640, 1.8)
        },
        other => return Err(Error::UnknownPreset(other.to_string())),
    })
}

pub const SHU_OSHER_REFERENCE_N: usize = 10_000;

/// The high-resolution WENO-JS run that Shu-Osher errors are measured against.
pub fn shu_osher_reference_config() -> RunConfig {
    let base = preset("shu-osher").expect("catalog entry");
    RunConfig {
        name: "shu-osher-reference".into(),
        scheme: SchemeSpec::WenoJs {
            epsilon: weno3::EPSILON_JS,
        },
        n_cells: SHU_OSHER_REFERENCE_N,
        n_list: vec![SHU_OSHER_REFERENCE_N],
        ..base
    }
}

/// Loads the reference cached at `path` if it was produced by `config`,
/// otherwise computes and caches it.
pub fn cached_reference(config: &RunConfig, path: &std::path::Path) -> Result<ReferenceSolution> {
    let hash = config.hash();
    if let Ok(r) = ReferenceSolution::load(path, Some(hash)) {
        return Ok(r);
    }
    let out = run(config)?;
    let gamma = match config.model {
        Model::Euler(e) => e.gamma(),
        Model::Advection(_) => f64::NAN,
    };
    let r = ReferenceSolution {
        scheme: config.scheme.to_string(),
        t_end: config.t_end,
        gamma,
        config_hash: hash,
        field: out.field,
    };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    r.write(path)?;
    Ok(r)
}

/// Fingerprint of the whole preset catalog.
pub fn catalog_checksum() -> u64 {
    let text: String = PRESET_NAMES
        .iter()
        .map(|n| format!("{:?}\n", preset(n).expect("catalog entry")))
        .collect();
    config_hash(&text)
}
