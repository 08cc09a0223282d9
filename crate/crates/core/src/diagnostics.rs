//! Exact cell averages, error norms, total variation and reference solutions.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{CellField, Grid1D};
use crate::quadrature::{gauss5, gauss5_vec, split_at};

/// Cell averages of `f`, integrating each piece between `breakpoints`
/// separately with a 5-point Gauss-Legendre rule.
pub fn cell_averages(f: impl Fn(f64) -> f64, grid: &Grid1D, breakpoints: &[f64]) -> Vec<f64> {
    // Dividing by the rounded face distance rather than dx keeps constants exact.
    let mut f = f;
    (0..grid.n_cells)
        .map(|i| {
            let (a, b) = (grid.face(i), grid.face(i + 1));
            split_at(a, b, breakpoints)
                .into_iter()
                .map(|(lo, hi)| gauss5(&mut f, lo, hi))
                .sum::<f64>()
                / (b - a)
        })
        .collect()
}

/// Cell averages of a vector-valued `f(x, out)` with `ncomp` components.
pub fn cell_averages_vec(
    f: impl Fn(f64, &mut [f64]),
    ncomp: usize,
    grid: &Grid1D,
    breakpoints: &[f64],
) -> CellField {
    let mut field = CellField::zeros(*grid, ncomp);
    let mut f = f;
    let mut scratch = vec![0.0; ncomp];
    let mut acc = vec![0.0; ncomp];
    for i in 0..grid.n_cells {
        acc.iter_mut().for_each(|v| *v = 0.0);
        let (a, b) = (grid.face(i), grid.face(i + 1));
        for (lo, hi) in split_at(a, b, breakpoints) {
            gauss5_vec(&mut f, lo, hi, &mut scratch, &mut acc);
        }
        for (c, v) in acc.iter().enumerate() {
            field.set(c, i, v / (b - a));
        }
    }
    field
}

/// Cell averages of `x -> f(x - shift)` with `f` extended periodically from
/// the grid's domain. `breakpoints` are the jumps and kinks of `f` within one
/// period.
pub fn periodic_shifted_averages(
    f: impl Fn(f64) -> f64,
    grid: &Grid1D,
    breakpoints: &[f64],
    shift: f64,
) -> Vec<f64> {
    let (lo, len) = (grid.x_left, grid.length());
    let wrap = |x: f64| lo + (x - lo).rem_euclid(len);
    // Shifted breakpoints, plus the image of the period boundary.
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .chain(std::iter::once(&lo))
        .map(|&b| wrap(b + shift))
        .collect();
    cuts.push(lo);
    cuts.sort_by(f64::total_cmp);
    cell_averages(|x| f(wrap(x - shift)), grid, &cuts)
}

/// `dx * sum |approx - exact|` over interior cells whose centres lie in
/// `range` (whole grid when `None`).
pub fn l1_error(
    approx: &[f64],
    exact: &[f64],
    grid: &Grid1D,
    range: Option<(f64, f64)>,
) -> Result<f64> {
    let cells = selected_cells(approx, exact, grid, range)?;
    Ok(grid.dx() * cells.map(|(a, e)| (a - e).abs()).sum::<f64>())
}

/// `max |approx - exact|` over the same cells as [`l1_error`].
pub fn linf_error(
    approx: &[f64],
    exact: &[f64],
    grid: &Grid1D,
    range: Option<(f64, f64)>,
) -> Result<f64> {
    let cells = selected_cells(approx, exact, grid, range)?;
    Ok(cells.map(|(a, e)| (a - e).abs()).fold(0.0, f64::max))
}

fn selected_cells<'a>(
    approx: &'a [f64],
    exact: &'a [f64],
    grid: &'a Grid1D,
    range: Option<(f64, f64)>,
) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
    if approx.len() != grid.n_cells || exact.len() != grid.n_cells {
        return Err(Error::GridMismatch(format!(
            "{} and {} values on a grid of {} cells",
            approx.len(),
            exact.len(),
            grid.n_cells
        )));
    }
    let (a, b) = range.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    Ok((0..grid.n_cells)
        .filter(move |&i| {
            let x = grid.center(i);
            x >= a && x <= b
        })
        .map(move |i| (approx[i], exact[i])))
}

/// `sum |u_{i+1} - u_i|`, including the wrap-around jump when periodic.
pub fn total_variation(values: &[f64], periodic: bool) -> f64 {
    let inner: f64 = values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    match (periodic, values.first(), values.last()) {
        (true, Some(first), Some(last)) => inner + (first - last).abs(),
        _ => inner,
    }
}

/// Observed order between two resolutions; `None` when an error is zero.
pub fn observed_order(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> Option<f64> {
    if e_coarse > 0.0 && e_fine > 0.0 && n_fine != n_coarse {
        Some((e_coarse / e_fine).ln() / (n_fine as f64 / n_coarse as f64).ln())
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub scheme: String,
    pub n: usize,
    pub dx: f64,
    pub l1: f64,
    pub linf: f64,
    pub order_l1: Option<f64>,
    pub order_linf: Option<f64>,
    pub tv: f64,
}

/// Fills the order columns from consecutive reports of the same scheme, in
/// the order given.
pub fn convergence_orders(reports: &mut [ErrorReport]) {
    for k in 0..reports.len() {
        let prev = (0..k)
            .rev()
            .find(|&j| reports[j].scheme == reports[k].scheme);
        let (ol1, olinf) = match prev {
            Some(j) => (
                observed_order(reports[j].l1, reports[k].l1, reports[j].n, reports[k].n),
                observed_order(reports[j].linf, reports[k].linf, reports[j].n, reports[k].n),
            ),
            None => (None, None),
        };
        reports[k].order_l1 = ol1;
        reports[k].order_linf = olinf;
    }
}

/// Conservative remap of cell averages onto a coarser uniform grid covering
/// the same domain; fine cells straddling a coarse face are split by overlap.
pub fn restrict(values: &[f64], fine: &Grid1D, coarse: &Grid1D) -> Result<Vec<f64>> {
    if values.len() != fine.n_cells {
        return Err(Error::GridMismatch(format!(
            "{} values for {} cells",
            values.len(),
            fine.n_cells
        )));
    }
    let tol = 1e-12 * fine.length();
    if (fine.x_left - coarse.x_left).abs() > tol || (fine.x_right - coarse.x_right).abs() > tol {
        return Err(Error::GridMismatch(
            "restriction needs identical domains".into(),
        ));
    }
    if coarse.n_cells > fine.n_cells {
        return Err(Error::GridMismatch(
            "restriction target is finer than the source".into(),
        ));
    }
    let mut out = vec![0.0; coarse.n_cells];
    let mut j = 0;
    for (i, slot) in out.iter_mut().enumerate() {
        let (a, b) = (coarse.face(i), coarse.face(i + 1));
        while j > 0 && fine.face(j) > a {
            j -= 1;
        }
        let mut sum = 0.0;
        let mut k = j;
        while k < fine.n_cells && fine.face(k) < b {
            let overlap = fine.face(k + 1).min(b) - fine.face(k).max(a);
            if overlap > 0.0 {
                sum += overlap * values[k];
            }
            k += 1;
        }
        j = k.saturating_sub(1);
        *slot = sum / (b - a);
    }
    Ok(out)
}

/// 64-bit FNV-1a, used to tie cached references to the configuration that
/// produced them.
pub fn config_hash(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// High-resolution solution cached on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub scheme: String,
    pub t_end: f64,
    pub gamma: f64,
    pub config_hash: u64,
    /// Cell averages of the conserved variables.
    pub field: CellField,
}

const REFERENCE_MAGIC: &str = "# fvrecon reference solution";

impl ReferenceSolution {
    pub fn grid(&self) -> &Grid1D {
        self.field.grid()
    }

    /// Text form: `key: value` header lines, a `data:` line, then one line per
    /// cell `x v0 v1 ...` with 17 significant digits, which round-trips.
    pub fn to_text(&self) -> String {
        let g = self.grid();
        let mut s = String::new();
        let _ = writeln!(s, "{REFERENCE_MAGIC}");
        let _ = writeln!(s, "scheme: {}", self.scheme);
        let _ = writeln!(s, "n: {}", g.n_cells);
        let _ = writeln!(s, "t_end: {:.16e}", self.t_end);
        let _ = writeln!(s, "gamma: {:.16e}", self.gamma);
        let _ = writeln!(s, "x_left: {:.16e}", g.x_left);
        let _ = writeln!(s, "x_right: {:.16e}", g.x_right);
        let _ = writeln!(s, "components: {}", self.field.ncomp());
        let _ = writeln!(s, "config_hash: {:016x}", self.config_hash);
        let _ = writeln!(s, "data:");
        for i in 0..g.n_cells {
            let _ = write!(s, "{:.16e}", g.center(i));
            for c in 0..self.field.ncomp() {
                let _ = write!(s, " {:.16e}", self.field.get(c, i));
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Reference(m);
        let mut lines = text.lines();
        if lines.next() != Some(REFERENCE_MAGIC) {
            return Err(bad("missing header line".into()));
        }
        let mut header = std::collections::HashMap::new();
        for line in lines.by_ref() {
            if line == "data:" {
                break;
            }
            let (k, v) = line
                .split_once(':')
                .ok_or_else(|| bad(format!("malformed header line `{line}`")))?;
            header.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| header.get(k).ok_or_else(|| bad(format!("missing `{k}`")));
        let num =
            |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| bad(format!("bad `{k}`"))) };
        let int =
            |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| bad(format!("bad `{k}`"))) };
        let n = int("n")?;
        let ncomp = int("components")?;
        let grid = Grid1D::new(n, num("x_left")?, num("x_right")?)?;
        let config_hash = u64::from_str_radix(get("config_hash")?, 16)
            .map_err(|_| bad("bad `config_hash`".into()))?;
        let mut field = CellField::zeros(grid, ncomp);
        let mut count = 0;
        for (i, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
            if i >= n {
                return Err(bad("more data lines than cells".into()));
            }
            let mut parts = line.split_whitespace();
            parts
                .next()
                .ok_or_else(|| bad(format!("empty data line {i}")))?;
            for c in 0..ncomp {
                let v: f64 = parts
                    .next()
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| bad(format!("bad value on data line {i}")))?;
                field.set(c, i, v);
            }
            count += 1;
        }
        if count != n {
            return Err(bad(format!("expected {n} data lines, found {count}")));
        }
        Ok(ReferenceSolution {
            scheme: get("scheme")?.clone(),
            t_end: num("t_end")?,
            gamma: num("gamma")?,
            config_hash,
            field,
        })
    }

    /// Writes through a sibling temporary so concurrent readers never see a
    /// partial file.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(format!(".{}.tmp", std::process::id()));
        std::fs::write(&tmp, self.to_text())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Loads a cached reference; with `expected_hash`, a file produced by a
    /// different configuration is rejected.
    pub fn load(path: &Path, expected_hash: Option<u64>) -> Result<Self> {
        let r = Self::parse(&std::fs::read_to_string(path)?)?;
        if let Some(h) = expected_hash {
            if h != r.config_hash {
                return Err(Error::Reference(format!(
                    "{} was produced by configuration {:016x}, expected {h:016x}",
                    path.display(),
                    r.config_hash
                )));
            }
        }
        Ok(r)
    }

    /// Component `c` remapped onto `coarse`.
    pub fn restrict(&self, c: usize, coarse: &Grid1D) -> Result<Vec<f64>> {
        restrict(self.field.interior(c), self.grid(), coarse)
    }
}
