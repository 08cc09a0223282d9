//! Composite 5-point Gauss-Legendre quadrature.

const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];

const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Rounded sum of [`WEIGHTS`]; dividing by it keeps constants exact to a few ulp.
fn weight_sum() -> f64 {
    WEIGHTS.iter().sum()
}

/// Integral of `f` over `[a, b]` with one 5-point rule; exact up to degree 9.
#[inline]
pub fn gauss5(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for k in 0..5 {
        sum += WEIGHTS[k] * f(mid + half * NODES[k]);
    }
    sum / weight_sum() * (b - a)
}

/// Same rule for vector-valued integrands, accumulated into `out`.
pub fn gauss5_vec(
    f: &mut impl FnMut(f64, &mut [f64]),
    a: f64,
    b: f64,
    scratch: &mut [f64],
    out: &mut [f64],
) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let scale = (b - a) / weight_sum();
    for k in 0..5 {
        f(mid + half * NODES[k], scratch);
        for (o, v) in out.iter_mut().zip(scratch.iter()) {
            *o += WEIGHTS[k] * scale * v;
        }
    }
}

/// Splits `[a, b]` at every breakpoint strictly inside it. Breakpoints within
/// rounding distance of an end are dropped rather than producing slivers.
pub fn split_at(a: f64, b: f64, breakpoints: &[f64]) -> Vec<(f64, f64)> {
    let tol = 1e-10 * (b - a);
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a + tol && x < b - tol)
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = a;
    for c in cuts {
        out.push((lo, c));
        lo = c;
    }
    out.push((lo, b));
    out
}

/// Integral over `[a, b]` with `panels` panels, distributed over the pieces
/// between breakpoints in proportion to their length.
pub fn composite(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    panels: usize,
) -> f64 {
    let total = b - a;
    split_at(a, b, breakpoints)
        .into_iter()
        .map(|(lo, hi)| {
            let m = (((hi - lo) / total) * panels as f64).ceil().max(1.0) as usize;
            let h = (hi - lo) / m as f64;
            (0..m)
                .map(|k| {
                    let x0 = lo + k as f64 * h;
                    let x1 = if k + 1 == m { hi } else { x0 + h };
                    gauss5(&mut f, x0, x1)
                })
                .sum::<f64>()
        })
        .sum()
}
