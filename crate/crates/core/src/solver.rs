//! Semi-discrete finite-volume operator and SSP-RK3 time stepping.

use crate::diagnostics::total_variation;
use crate::error::{Error, Result};
use crate::grid::CellField;
use crate::physics::{
    self, davis_speeds, hll_flux, rusanov_flux, upwind_flux, Conserved, FluxKind, FluxOptions,
    Model, Primitive, WaveSpeedSource,
};
use crate::reconstruction::{reconstruct_range, LimiterScheme};

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    Periodic,
    /// Zero-gradient extrapolation.
    Transmissive,
    /// Constant ghost states (conserved variables), left then right.
    Fixed {
        left: Vec<f64>,
        right: Vec<f64>,
    },
}

/// Fills every ghost layer of `field`.
pub fn fill_ghosts(field: &mut CellField, bc: &BoundaryCondition) -> Result<()> {
    let grid = *field.grid();
    let (n, g) = (grid.n_cells, grid.ghost_layers);
    if g > n {
        return Err(Error::InsufficientGhostLayers {
            needed: g,
            found: n,
        });
    }
    if let BoundaryCondition::Fixed { left, right } = bc {
        if left.len() != field.ncomp() || right.len() != field.ncomp() {
            return Err(Error::GridMismatch(format!(
                "fixed boundary states need {} components",
                field.ncomp()
            )));
        }
    }
    for c in 0..field.ncomp() {
        let v = field.component_mut(c);
        for k in 0..g {
            let (lo, hi) = (g - 1 - k, g + n + k);
            match bc {
                BoundaryCondition::Periodic => {
                    v[lo] = v[g + n - 1 - k];
                    v[hi] = v[g + k];
                }
                BoundaryCondition::Transmissive => {
                    v[lo] = v[g];
                    v[hi] = v[g + n - 1];
                }
                BoundaryCondition::Fixed { left, right } => {
                    v[lo] = left[c];
                    v[hi] = right[c];
                }
            }
        }
    }
    Ok(())
}

/// Everything the operator needs besides the state.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    pub model: Model,
    pub scheme: LimiterScheme,
    pub bc: BoundaryCondition,
    pub flux: FluxOptions,
}

/// Evaluates `L(u) = -(F_{i+1/2} - F_{i-1/2}) / dx` with reusable scratch.
#[derive(Debug, Clone)]
pub struct Operator {
    disc: Discretization,
    prim: Vec<f64>,
    speed: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
    flux: Vec<f64>,
}

impl Operator {
    pub fn new(disc: Discretization) -> Self {
        Operator {
            disc,
            prim: Vec::new(),
            speed: Vec::new(),
            left: Vec::new(),
            right: Vec::new(),
            flux: Vec::new(),
        }
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    /// Fills ghosts of `field`, then writes `L(u)` for the interior into `out`
    /// (component-major). Euler cell averages with nonpositive density or
    /// pressure are reported with their interior cell index.
    pub fn apply(&mut self, field: &mut CellField, out: &mut [f64]) -> Result<()> {
        let grid = *field.grid();
        if grid.ghost_layers < 2 {
            return Err(Error::InsufficientGhostLayers {
                needed: 2,
                found: grid.ghost_layers,
            });
        }
        let ncomp = self.disc.model.ncomp();
        if field.ncomp() != ncomp || out.len() != ncomp * grid.n_cells {
            return Err(Error::GridMismatch(
                "operator and field disagree on size".into(),
            ));
        }
        fill_ghosts(field, &self.disc.bc)?;
        let (n, g, len) = (grid.n_cells, grid.ghost_layers, grid.padded_len());
        let inv_dx = 1.0 / grid.dx();
        // Faces f = 0..=n sit between padded cells g-1+f and g+f; the cells
        // g-1 ..= g+n are reconstructed.
        let first = g - 1;
        let count = n + 2;
        self.left.resize(ncomp * count, 0.0);
        self.right.resize(ncomp * count, 0.0);
        self.flux.resize(ncomp * (n + 1), 0.0);

        match self.disc.model {
            Model::Advection(a) => {
                reconstruct_range(
                    field.component(0),
                    first,
                    first + count,
                    &self.disc.scheme,
                    &mut self.left,
                    &mut self.right,
                );
                for f in 0..=n {
                    self.flux[f] = upwind_flux(self.right[f], self.left[f + 1], a.speed);
                }
            }
            Model::Euler(e) => {
                let gamma = e.gamma();
                self.prim.resize(3 * len, 0.0);
                self.speed.resize(2 * len, 0.0);
                for j in 0..len {
                    let u = Conserved::new(
                        field.component(0)[j],
                        field.component(1)[j],
                        field.component(2)[j],
                    );
                    let interior = j >= g && j < g + n;
                    let w = match physics::conservative_to_primitive(u, gamma) {
                        Ok(w) => w,
                        Err(_) => Primitive::new(u.density, f64::NAN, f64::NAN),
                    };
                    if let Some((variable, value)) = w.nonpositive() {
                        let cell = if interior {
                            j - g
                        } else if j < g {
                            0
                        } else {
                            n - 1
                        };
                        return Err(Error::Positivity {
                            cell,
                            variable,
                            value,
                        });
                    }
                    self.prim[j] = w.density;
                    self.prim[len + j] = w.velocity;
                    self.prim[2 * len + j] = w.pressure;
                    self.speed[j] = w.velocity;
                    self.speed[len + j] = (gamma * w.pressure / w.density).sqrt();
                }
                for c in 0..3 {
                    reconstruct_range(
                        &self.prim[c * len..(c + 1) * len],
                        first,
                        first + count,
                        &self.disc.scheme,
                        &mut self.left[c * count..(c + 1) * count],
                        &mut self.right[c * count..(c + 1) * count],
                    );
                }
                for f in 0..=n {
                    let face_state = |buf: &[f64], k: usize| {
                        Primitive::new(buf[k], buf[count + k], buf[2 * count + k])
                    };
                    let wl = face_state(&self.right, f);
                    let wr = face_state(&self.left, f + 1);
                    let fl = match self.disc.flux.speeds {
                        WaveSpeedSource::CellAverages => {
                            let (jl, jr) = (first + f, first + f + 1);
                            let (vl, cl) = (self.speed[jl], self.speed[len + jl]);
                            let (vr, cr) = (self.speed[jr], self.speed[len + jr]);
                            match self.disc.flux.kind {
                                FluxKind::Rusanov => {
                                    rusanov_flux(wl, wr, (vl.abs() + cl).max(vr.abs() + cr), gamma)
                                }
                                FluxKind::Hll => {
                                    let (sl, sr) = davis_speeds(vl, cl, vr, cr);
                                    hll_flux(wl, wr, sl, sr, gamma)
                                }
                            }
                        }
                        WaveSpeedSource::FaceStates => {
                            for (w, owner) in [(wl, f as isize - 1), (wr, f as isize)] {
                                if let Some((variable, value)) = w.nonpositive() {
                                    let cell = owner.clamp(0, n as isize - 1) as usize;
                                    return Err(Error::Positivity {
                                        cell,
                                        variable,
                                        value,
                                    });
                                }
                            }
                            physics::numerical_flux(wl, wr, &e, self.disc.flux.kind)?
                        }
                    };
                    for (c, v) in fl.into_iter().enumerate() {
                        self.flux[c * (n + 1) + f] = v;
                    }
                }
            }
        }

        for c in 0..ncomp {
            let fc = &self.flux[c * (n + 1)..(c + 1) * (n + 1)];
            let oc = &mut out[c * n..(c + 1) * n];
            for i in 0..n {
                oc[i] = -(fc[i + 1] - fc[i]) * inv_dx;
            }
        }
        Ok(())
    }
}

/// One-shot `L(u)`; fills ghosts of `field` as a side effect.
pub fn rhs(field: &mut CellField, disc: &Discretization) -> Result<Vec<f64>> {
    let mut op = Operator::new(disc.clone());
    let mut out = vec![0.0; field.ncomp() * field.grid().n_cells];
    op.apply(field, &mut out)?;
    Ok(out)
}

/// Three-stage SSP Runge-Kutta step for `du/dt = L(u)`.
pub fn ssp_rk3_step(
    u: &[f64],
    dt: f64,
    mut rhs: impl FnMut(&[f64]) -> Result<Vec<f64>>,
) -> Result<Vec<f64>> {
    let l0 = rhs(u)?;
    let u1: Vec<f64> = u.iter().zip(&l0).map(|(a, l)| a + dt * l).collect();
    let l1 = rhs(&u1)?;
    let u2: Vec<f64> = u
        .iter()
        .zip(u1.iter().zip(&l1))
        .map(|(a, (b, l))| 0.75 * a + 0.25 * (b + dt * l))
        .collect();
    let l2 = rhs(&u2)?;
    Ok(u.iter()
        .zip(u2.iter().zip(&l2))
        .map(|(a, (b, l))| a / 3.0 + 2.0 / 3.0 * (b + dt * l))
        .collect())
}

/// Largest characteristic speed over the interior cells.
pub fn max_speed(field: &CellField, model: &Model) -> Result<f64> {
    match model {
        Model::Advection(a) => Ok(a.speed.abs()),
        Model::Euler(_) => {
            let mut s = 0.0f64;
            let mut state = [0.0; 3];
            for i in 0..field.grid().n_cells {
                for (c, v) in state.iter_mut().enumerate() {
                    *v = field.get(c, i);
                }
                let local = physics::max_wave_speed(&state, model).map_err(|e| match e {
                    Error::NonphysicalState { variable, value } => Error::Positivity {
                        cell: i,
                        variable,
                        value,
                    },
                    other => other,
                })?;
                s = s.max(local);
            }
            Ok(s)
        }
    }
}

/// `cfl * dx / max speed`.
pub fn compute_dt(field: &CellField, model: &Model, cfl: f64) -> Result<f64> {
    let s = max_speed(field, model)?;
    if !(s > 0.0) {
        return Err(Error::DegenerateTimestep);
    }
    Ok(cfl * field.grid().dx() / s)
}

/// How often the CFL step is recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimestepMode {
    /// From the current state at every step.
    #[default]
    Adaptive,
    /// From the initial state only.
    Frozen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub cfl: f64,
    pub t_end: f64,
    pub timestep: TimestepMode,
    /// Record the total variation of component 0 after every step.
    pub record_tv: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub field: CellField,
    pub time: f64,
    pub steps: usize,
    /// `(t, TV)` pairs starting at `t = 0`; empty unless requested.
    pub tv_history: Vec<(f64, f64)>,
}

/// Advances `initial` to `t_end`. The last step is shortened to land on
/// `t_end` exactly.
pub fn integrate(
    disc: &Discretization,
    initial: CellField,
    opts: &Integration,
) -> Result<RunOutput> {
    if !(opts.cfl > 0.0 && opts.cfl.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "cfl must be > 0, got {}",
            opts.cfl
        )));
    }
    if !(opts.t_end >= 0.0 && opts.t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be >= 0, got {}",
            opts.t_end
        )));
    }
    let periodic = disc.bc == BoundaryCondition::Periodic;
    let mut op = Operator::new(disc.clone());
    let mut work = initial.clone();
    let mut u = initial.interior_flat();
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut tv_history = Vec::new();
    if opts.record_tv {
        tv_history.push((0.0, total_variation(initial.interior(0), periodic)));
    }
    let frozen_dt = match opts.timestep {
        TimestepMode::Frozen => Some(compute_dt(&initial, &disc.model, opts.cfl)?),
        TimestepMode::Adaptive => None,
    };
    let abort = |step: usize, time: f64, e: Error| match e {
        Error::Positivity {
            cell,
            variable,
            value,
        } => Error::PositivityAbort {
            step,
            time,
            cell,
            variable,
            value,
        },
        other => other,
    };

    while t < opts.t_end {
        work.set_interior(&u);
        let mut dt = match frozen_dt {
            Some(dt) => dt,
            None => compute_dt(&work, &disc.model, opts.cfl).map_err(|e| abort(steps, t, e))?,
        };
        let last = t + dt >= opts.t_end;
        if last {
            dt = opts.t_end - t;
        }
        let mut buf = vec![0.0; u.len()];
        u = ssp_rk3_step(&u, dt, |v| {
            work.set_interior(v);
            op.apply(&mut work, &mut buf)?;
            Ok(buf.clone())
        })
        .map_err(|e| abort(steps, t, e))?;
        steps += 1;
        t = if last { opts.t_end } else { t + dt };
        if opts.record_tv {
            tv_history.push((t, total_variation(&u[..initial.grid().n_cells], periodic)));
        }
    }
    work.set_interior(&u);
    fill_ghosts(&mut work, &disc.bc)?;
    Ok(RunOutput {
        field: work,
        time: t,
        steps,
        tv_history,
    })
}
