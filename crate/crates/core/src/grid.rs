use crate::error::{Error, Result};

/// Number of ghost layers every field carries. The face flux at a boundary
/// face depends on cells `i-1 ..= i+2`, so two layers are read.
pub const GHOST_LAYERS: usize = 2;

/// Uniform 1D grid of `n_cells` cells on `[x_left, x_right]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n_cells: usize,
    pub x_left: f64,
    pub x_right: f64,
    pub ghost_layers: usize,
}

impl Grid1D {
    pub fn new(n_cells: usize, x_left: f64, x_right: f64) -> Result<Self> {
        Self::with_ghosts(n_cells, x_left, x_right, GHOST_LAYERS)
    }

    pub fn with_ghosts(
        n_cells: usize,
        x_left: f64,
        x_right: f64,
        ghost_layers: usize,
    ) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidParameter(
                "a grid needs at least one cell".into(),
            ));
        }
        if !(x_left.is_finite() && x_right.is_finite() && x_right > x_left) {
            return Err(Error::InvalidParameter(format!(
                "bad domain [{x_left}, {x_right}]"
            )));
        }
        Ok(Grid1D {
            n_cells,
            x_left,
            x_right,
            ghost_layers,
        })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.n_cells as f64
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// Centre of interior cell `i` (0-based).
    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx()
    }

    /// Left face of interior cell `i`; `face(n_cells)` is the right boundary.
    #[inline]
    pub fn face(&self, i: usize) -> f64 {
        if i == self.n_cells {
            self.x_right
        } else {
            self.x_left + i as f64 * self.dx()
        }
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    /// Cells per component including ghosts.
    #[inline]
    pub fn padded_len(&self) -> usize {
        self.n_cells + 2 * self.ghost_layers
    }
}

/// Cell averages of `ncomp` components with ghost layers on both sides.
///
/// Storage is component-major: component `c` occupies one contiguous run of
/// `padded_len` values, interior cell `i` at offset `ghost_layers + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    grid: Grid1D,
    ncomp: usize,
    data: Vec<f64>,
}

impl CellField {
    pub fn zeros(grid: Grid1D, ncomp: usize) -> Self {
        assert!(ncomp > 0, "a field needs at least one component");
        CellField {
            grid,
            ncomp,
            data: vec![0.0; ncomp * grid.padded_len()],
        }
    }

    /// Field whose interior is taken from `interior` (component-major,
    /// `ncomp * n_cells` values); ghosts are zero.
    pub fn from_interior(grid: Grid1D, ncomp: usize, interior: &[f64]) -> Result<Self> {
        if interior.len() != ncomp * grid.n_cells {
            return Err(Error::GridMismatch(format!(
                "expected {} interior values, got {}",
                ncomp * grid.n_cells,
                interior.len()
            )));
        }
        let mut f = Self::zeros(grid, ncomp);
        f.set_interior(interior);
        Ok(f)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    /// Component `c` including ghosts.
    #[inline]
    pub fn component(&self, c: usize) -> &[f64] {
        let len = self.grid.padded_len();
        &self.data[c * len..(c + 1) * len]
    }

    #[inline]
    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let len = self.grid.padded_len();
        &mut self.data[c * len..(c + 1) * len]
    }

    /// Interior cells of component `c`.
    #[inline]
    pub fn interior(&self, c: usize) -> &[f64] {
        let g = self.grid.ghost_layers;
        &self.component(c)[g..g + self.grid.n_cells]
    }

    #[inline]
    pub fn interior_mut(&mut self, c: usize) -> &mut [f64] {
        let g = self.grid.ghost_layers;
        let n = self.grid.n_cells;
        &mut self.component_mut(c)[g..g + n]
    }

    /// Value of interior cell `i`, component `c`.
    #[inline]
    pub fn get(&self, c: usize, i: usize) -> f64 {
        self.interior(c)[i]
    }

    #[inline]
    pub fn set(&mut self, c: usize, i: usize, v: f64) {
        self.interior_mut(c)[i] = v;
    }

    /// Interior values of all components, component-major.
    pub fn interior_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.ncomp * self.grid.n_cells);
        for c in 0..self.ncomp {
            out.extend_from_slice(self.interior(c));
        }
        out
    }

    pub fn set_interior(&mut self, interior: &[f64]) {
        let n = self.grid.n_cells;
        for c in 0..self.ncomp {
            self.interior_mut(c)
                .copy_from_slice(&interior[c * n..(c + 1) * n]);
        }
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}
