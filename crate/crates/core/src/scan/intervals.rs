//! Violation intervals along one grid row.

use crate::inequalities::VIOLATION_TOL;

/// Bisection stops once the bracket is this narrow.
pub const ARG_TOL: f64 = 1e-9;

const MAX_ITER: usize = 200;
const RECHECK_DEPTH: usize = 4;
const RECHECK_SAMPLES: usize = 17;

pub(crate) fn inside(v: Option<f64>) -> bool {
    v.is_some_and(|r| r < 1.0 - VIOLATION_TOL)
}

/// Crossing of `R = 1` on `[lo, hi]` where `inside` differs at the ends.
///
/// Narrows the bracket to `arg_tol`, then keeps going while `|R - 1|` is at
/// least `val_tol` and the bracket can still shrink. Returns the argument
/// and the value there.
pub(crate) fn bisect<F>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    arg_tol: f64,
    val_tol: f64,
) -> (f64, Option<f64>)
where
    F: Fn(f64) -> Option<f64>,
{
    let lo_inside = inside(f(lo));
    let mut best = (0.5 * (lo + hi), None);
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        best = (mid, v);
        let close = v.is_some_and(|r| (r - 1.0).abs() < val_tol);
        if hi - lo <= arg_tol && close {
            break;
        }
        if inside(v) == lo_inside {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best
}

/// `t`-intervals where `R < 1`, given samples `values` of `f` on `grid`.
///
/// Sign changes between defined neighbours are refined by bisection;
/// intervals touching the grid ends start or stop there. Each interval is
/// then re-checked at its midpoint and resampled if the check fails.
pub(crate) fn violation_intervals<F>(f: &F, grid: &[f64], values: &[Option<f64>]) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> Option<f64>,
{
    extract(f, grid, values, RECHECK_DEPTH)
}

fn extract<F>(f: &F, grid: &[f64], values: &[Option<f64>], depth: usize) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> Option<f64>,
{
    let mut raw = Vec::new();
    let mut start = inside(values[0]).then_some(grid[0]);
    for i in 0..grid.len() - 1 {
        let (a, b) = (inside(values[i]), inside(values[i + 1]));
        if a == b {
            continue;
        }
        let cross = if values[i].is_some() && values[i + 1].is_some() {
            bisect(f, grid[i], grid[i + 1], ARG_TOL, f64::INFINITY).0
        } else if a {
            grid[i]
        } else {
            grid[i + 1]
        };
        if b {
            start = Some(cross);
        } else if let Some(s) = start.take() {
            raw.push((s, cross));
        }
    }
    if let Some(s) = start {
        raw.push((s, grid[grid.len() - 1]));
    }

    let mut out = Vec::new();
    for (lo, hi) in raw {
        if inside(f(0.5 * (lo + hi))) {
            out.push((lo, hi));
        } else if depth > 0 && hi - lo > ARG_TOL {
            let sub: Vec<f64> = (0..RECHECK_SAMPLES)
                .map(|k| lo + (hi - lo) * k as f64 / (RECHECK_SAMPLES - 1) as f64)
                .collect();
            let vals: Vec<Option<f64>> = sub.iter().map(|&t| f(t)).collect();
            out.extend(extract(f, &sub, &vals, depth - 1));
        }
    }
    out
}
