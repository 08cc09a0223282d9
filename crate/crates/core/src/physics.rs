//! Linear advection and the 1D Euler equations with their face fluxes.

use crate::error::{Error, Result, StateVariable};

/// `u_t + a u_x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvectionModel {
    pub speed: f64,
}

impl AdvectionModel {
    pub fn new(speed: f64) -> Result<Self> {
        if !speed.is_finite() {
            return Err(Error::InvalidParameter(format!("advection speed {speed}")));
        }
        Ok(AdvectionModel { speed })
    }
}

/// Ideal-gas Euler equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerModel {
    gamma: f64,
}

impl EulerModel {
    pub const AIR: f64 = 1.4;

    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be > 1, got {gamma}"
            )));
        }
        Ok(EulerModel { gamma })
    }

    pub fn air() -> Self {
        EulerModel { gamma: Self::AIR }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Advection(AdvectionModel),
    Euler(EulerModel),
}

impl Model {
    pub fn ncomp(&self) -> usize {
        match self {
            Model::Advection(_) => 1,
            Model::Euler(_) => 3,
        }
    }
}

/// Which numerical flux couples the two face states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxKind {
    /// Local Lax-Friedrichs.
    #[default]
    Rusanov,
    /// Two-wave HLL with Davis speed estimates.
    Hll,
}

/// Where the signal speeds of an Euler face flux come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WaveSpeedSource {
    /// The two cell averages adjacent to the face. Reconstructed face states
    /// only enter through the physical flux, so they may be nonphysical.
    #[default]
    CellAverages,
    /// The reconstructed face states themselves; a face with nonpositive
    /// density or pressure is an error.
    FaceStates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FluxOptions {
    pub kind: FluxKind,
    pub speeds: WaveSpeedSource,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub density: f64,
    pub velocity: f64,
    pub pressure: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved {
    pub density: f64,
    pub momentum: f64,
    pub energy: f64,
}

impl Primitive {
    pub fn new(density: f64, velocity: f64, pressure: f64) -> Self {
        Primitive {
            density,
            velocity,
            pressure,
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.density, self.velocity, self.pressure]
    }

    pub fn from_slice(w: &[f64]) -> Self {
        Primitive::new(w[0], w[1], w[2])
    }

    /// First nonpositive (or NaN) variable, density before pressure.
    pub fn nonpositive(&self) -> Option<(StateVariable, f64)> {
        if !(self.density > 0.0) {
            Some((StateVariable::Density, self.density))
        } else if !(self.pressure > 0.0) {
            Some((StateVariable::Pressure, self.pressure))
        } else {
            None
        }
    }

    pub fn sound_speed(&self, gamma: f64) -> Result<f64> {
        if let Some((variable, value)) = self.nonpositive() {
            return Err(Error::NonphysicalState { variable, value });
        }
        Ok((gamma * self.pressure / self.density).sqrt())
    }
}

impl Conserved {
    pub fn new(density: f64, momentum: f64, energy: f64) -> Self {
        Conserved {
            density,
            momentum,
            energy,
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.density, self.momentum, self.energy]
    }

    pub fn from_slice(u: &[f64]) -> Self {
        Conserved::new(u[0], u[1], u[2])
    }
}

#[inline]
pub fn primitive_to_conservative(w: Primitive, gamma: f64) -> Conserved {
    let momentum = w.density * w.velocity;
    Conserved {
        density: w.density,
        momentum,
        energy: w.pressure / (gamma - 1.0) + 0.5 * momentum * w.velocity,
    }
}

/// Fails only for nonpositive density; a nonpositive pressure is returned
/// as is and left to the caller.
#[inline]
pub fn conservative_to_primitive(u: Conserved, gamma: f64) -> Result<Primitive> {
    if !(u.density > 0.0) {
        return Err(Error::NonphysicalState {
            variable: StateVariable::Density,
            value: u.density,
        });
    }
    let velocity = u.momentum / u.density;
    Ok(Primitive {
        density: u.density,
        velocity,
        pressure: (gamma - 1.0) * (u.energy - 0.5 * u.momentum * velocity),
    })
}

/// Physical flux from a primitive state. No positivity requirement.
#[inline]
pub fn euler_flux_primitive(w: Primitive, gamma: f64) -> [f64; 3] {
    let m = w.density * w.velocity;
    let e = w.pressure / (gamma - 1.0) + 0.5 * m * w.velocity;
    [
        m,
        m * w.velocity + w.pressure,
        w.velocity * (e + w.pressure),
    ]
}

pub fn euler_flux(u: Conserved, gamma: f64) -> Result<[f64; 3]> {
    Ok(euler_flux_primitive(
        conservative_to_primitive(u, gamma)?,
        gamma,
    ))
}

/// Largest characteristic speed of one state (`|a|`, or `|v| + c` for a
/// conserved Euler state).
pub fn max_wave_speed(state: &[f64], model: &Model) -> Result<f64> {
    match model {
        Model::Advection(a) => Ok(a.speed.abs()),
        Model::Euler(e) => {
            let w = conservative_to_primitive(Conserved::from_slice(state), e.gamma)?;
            Ok(w.velocity.abs() + w.sound_speed(e.gamma)?)
        }
    }
}

/// Exact upwind flux of linear advection.
#[inline]
pub fn upwind_flux(u_left: f64, u_right: f64, speed: f64) -> f64 {
    if speed >= 0.0 {
        speed * u_left
    } else {
        speed * u_right
    }
}

/// Rusanov flux with a given bound `s` on the local signal speed.
#[inline]
pub fn rusanov_flux(wl: Primitive, wr: Primitive, s: f64, gamma: f64) -> [f64; 3] {
    let fl = euler_flux_primitive(wl, gamma);
    let fr = euler_flux_primitive(wr, gamma);
    let ul = primitive_to_conservative(wl, gamma).to_array();
    let ur = primitive_to_conservative(wr, gamma).to_array();
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * s * (ur[k] - ul[k]);
    }
    out
}

/// HLL flux with signal speed bounds `sl <= sr`.
#[inline]
pub fn hll_flux(wl: Primitive, wr: Primitive, sl: f64, sr: f64, gamma: f64) -> [f64; 3] {
    let fl = euler_flux_primitive(wl, gamma);
    if sl >= 0.0 {
        return fl;
    }
    let fr = euler_flux_primitive(wr, gamma);
    if sr <= 0.0 {
        return fr;
    }
    let ul = primitive_to_conservative(wl, gamma).to_array();
    let ur = primitive_to_conservative(wr, gamma).to_array();
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = (sr * fl[k] - sl * fr[k] + sl * sr * (ur[k] - ul[k])) / (sr - sl);
    }
    out
}

/// Davis bounds `(min(v - c), max(v + c))` of two states given their velocities
/// and sound speeds.
#[inline]
pub fn davis_speeds(vl: f64, cl: f64, vr: f64, cr: f64) -> (f64, f64) {
    ((vl - cl).min(vr - cr), (vl + cl).max(vr + cr))
}

/// Euler face flux with speeds taken from the face states themselves.
pub fn numerical_flux(
    wl: Primitive,
    wr: Primitive,
    model: &EulerModel,
    kind: FluxKind,
) -> Result<[f64; 3]> {
    let g = model.gamma;
    let cl = wl.sound_speed(g)?;
    let cr = wr.sound_speed(g)?;
    Ok(match kind {
        FluxKind::Rusanov => {
            let s = (wl.velocity.abs() + cl).max(wr.velocity.abs() + cr);
            rusanov_flux(wl, wr, s, g)
        }
        FluxKind::Hll => {
            let (sl, sr) = davis_speeds(wl.velocity, cl, wr.velocity, cr);
            hll_flux(wl, wr, sl, sr, g)
        }
    })
}
