//! Face values from cell averages through a two-slope function `H`.

use crate::error::{Error, Result};
use crate::grid::CellField;
use crate::limiters::{self, LimiterKind, SlopePair, SmoothnessContext, SwitchMode};
use crate::weno3::WenoParams;

/// A fully resolved reconstruction: every parameter that depends on the grid
/// (`dx`, `epsilon`) is already fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterScheme(Family);

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    Limiter {
        kind: LimiterKind,
        ctx: Option<SmoothnessContext>,
    },
    Weno(WenoParams),
}

impl LimiterScheme {
    /// A limiter that needs no smoothness information.
    pub fn limiter(kind: LimiterKind) -> Result<Self> {
        if kind.needs_smoothness() {
            return Err(Error::DegenerateContext(
                "combined limiter needs a smoothness context",
            ));
        }
        if let LimiterKind::AS { q } = kind {
            if !(q > 0.0 && q.is_finite()) {
                return Err(Error::InvalidParameter(format!("q must be > 0, got {q}")));
            }
        }
        Ok(LimiterScheme(Family::Limiter { kind, ctx: None }))
    }

    /// `H3` / `phi_CT` with an asymptotic region. For `CTCombined` the radius
    /// from the kind is copied into the context.
    pub fn combined(kind: LimiterKind, ctx: SmoothnessContext) -> Result<Self> {
        let ctx = match kind {
            LimiterKind::CTCombined { r } => ctx.with_radius(r)?,
            LimiterKind::H3LCombined => ctx,
            _ => return Self::limiter(kind),
        };
        Ok(LimiterScheme(Family::Limiter {
            kind,
            ctx: Some(ctx),
        }))
    }

    pub fn weno(params: WenoParams) -> Self {
        LimiterScheme(Family::Weno(params))
    }

    pub fn h3() -> Self {
        LimiterScheme(Family::Limiter {
            kind: LimiterKind::Phi3Full,
            ctx: None,
        })
    }

    pub fn h3l() -> Self {
        LimiterScheme(Family::Limiter {
            kind: LimiterKind::H3L,
            ctx: None,
        })
    }

    pub fn limiter_kind(&self) -> Option<LimiterKind> {
        match self.0 {
            Family::Limiter { kind, .. } => Some(kind),
            Family::Weno(_) => None,
        }
    }

    pub fn weno_params(&self) -> Option<WenoParams> {
        match self.0 {
            Family::Weno(p) => Some(p),
            Family::Limiter { .. } => None,
        }
    }

    pub fn smoothness(&self) -> Option<SmoothnessContext> {
        match self.0 {
            Family::Limiter { ctx, .. } => ctx,
            Family::Weno(_) => None,
        }
    }

    /// Replaces the switch of a combined limiter; other schemes are unchanged.
    pub fn with_switch(self, switch: SwitchMode) -> Self {
        match self.0 {
            Family::Limiter {
                kind,
                ctx: Some(ctx),
            } => LimiterScheme(Family::Limiter {
                kind,
                ctx: Some(ctx.with_switch(switch)),
            }),
            _ => self,
        }
    }

    /// `H(delta_minus, delta_plus)`: twice the offset of the downwind face
    /// value from the cell average.
    #[inline]
    pub fn h(&self, s: SlopePair) -> f64 {
        match self.0 {
            Family::Limiter { kind, ctx } => match kind {
                LimiterKind::Phi3Full => limiters::h3(s),
                LimiterKind::CT => limiters::h_ct(s),
                LimiterKind::CTTVD => limiters::h_ct_tvd(s),
                LimiterKind::AS { q } => limiters::h_from_phi(|t| limiters::phi_as(t, q), s),
                LimiterKind::H3L => limiters::h3l(s),
                LimiterKind::UserPhi(phi) => limiters::h_from_phi(phi, s),
                LimiterKind::CTCombined { r } => {
                    let ctx = ctx.expect("combined scheme always carries a context");
                    limiters::ct_combined_with(s, r, ctx.dx, ctx.switch)
                }
                LimiterKind::H3LCombined => {
                    let ctx = ctx.expect("combined scheme always carries a context");
                    limiters::h3l_combined(s, &ctx)
                }
            },
            Family::Weno(p) => p.h(s),
        }
    }
}

/// Face values of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfacePair {
    /// Value at `x_{i-1/2}` seen from inside cell `i`.
    pub left_face_value: f64,
    /// Value at `x_{i+1/2}` seen from inside cell `i`.
    pub right_face_value: f64,
}

/// Face values of cell `i` from its three-cell stencil. The left face uses the
/// mirrored slopes, so both faces share one `H`.
#[inline]
pub fn interface_values(u_m: f64, u_i: f64, u_p: f64, scheme: &LimiterScheme) -> InterfacePair {
    let s = SlopePair::from_averages(u_m, u_i, u_p);
    InterfacePair {
        left_face_value: u_i - 0.5 * scheme.h(s.swapped()),
        right_face_value: u_i + 0.5 * scheme.h(s),
    }
}

/// Face values for padded cells `first..last` of one component (indices into
/// the padded array, which must have a neighbour on both sides of the range).
pub(crate) fn reconstruct_range(
    values: &[f64],
    first: usize,
    last: usize,
    scheme: &LimiterScheme,
    left: &mut [f64],
    right: &mut [f64],
) {
    for (k, j) in (first..last).enumerate() {
        let pair = interface_values(values[j - 1], values[j], values[j + 1], scheme);
        left[k] = pair.left_face_value;
        right[k] = pair.right_face_value;
    }
}

/// Face values of every interior cell of component `c`. Ghosts must be filled.
pub fn reconstruct_field(
    field: &CellField,
    c: usize,
    scheme: &LimiterScheme,
) -> Result<Vec<InterfacePair>> {
    let grid = field.grid();
    if grid.ghost_layers < 1 {
        return Err(Error::InsufficientGhostLayers {
            needed: 1,
            found: grid.ghost_layers,
        });
    }
    if c >= field.ncomp() {
        return Err(Error::GridMismatch(format!(
            "component {c} of {}",
            field.ncomp()
        )));
    }
    let values = field.component(c);
    let g = grid.ghost_layers;
    Ok((g..g + grid.n_cells)
        .map(|j| interface_values(values[j - 1], values[j], values[j + 1], scheme))
        .collect())
}
