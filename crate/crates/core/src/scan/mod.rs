//! Grid scans of `R_N` over time and Werner purity.

mod contour;
mod intervals;
mod output;
mod report;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequalities::{assignment, PointFlag, ProbabilityConvention, WignerEvaluator};
use crate::species::Parameterization;
use crate::twobody::TwoMesonState;

pub use contour::VALUE_TOL as CONTOUR_VALUE_TOL;
pub use intervals::ARG_TOL as INTERVAL_ARG_TOL;
pub use report::{run_static_report, EpsilonForm, StaticLine, StaticReport};

/// Default `c t` range in mm for a species' plots, if it has one.
pub fn default_t_max(species: &str) -> Option<f64> {
    match species {
        "K0" => Some(400.0),
        "D0" => Some(40.0),
        "Bs" => Some(25.0),
        _ => None,
    }
}

/// `R` on a `(t, x)` grid. Matrices are indexed `[x][t]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub species: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub param: Option<Parameterization>,
    pub convention: ProbabilityConvention,
    pub t0: f64,
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    /// `None` where the flag is not `ok`.
    pub values: Vec<Vec<Option<f64>>>,
    pub flags: Vec<Vec<PointFlag>>,
    /// Polylines of `(t, x)` vertices on which `R = 1`.
    pub contour: Vec<Vec<(f64, f64)>>,
    /// For each `x`, the `t` intervals with `R < 1`.
    pub violation_intervals: Vec<Vec<(f64, f64)>>,
}

impl ScanResult {
    pub fn value(&self, ix: usize, it: usize) -> Option<f64> {
        self.values[ix][it]
    }

    /// Smallest defined value with its `(t, x)`.
    pub fn min(&self) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for (ix, row) in self.values.iter().enumerate() {
            for (it, v) in row.iter().enumerate() {
                if let Some(r) = *v {
                    if best.is_none_or(|b| r < b.0) {
                        best = Some((r, self.t_grid[it], self.x_grid[ix]));
                    }
                }
            }
        }
        best
    }

    /// Whether some grid point with `x <= x_max` has `R < 1`.
    pub fn violated_at_or_below(&self, x_max: f64) -> bool {
        self.x_grid
            .iter()
            .zip(&self.values)
            .filter(|(&x, _)| x <= x_max)
            .any(|(_, row)| row.iter().any(|&v| intervals::inside(v)))
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// `R` at `(t, x)`; `x = None` is the pure singlet.
struct Sampler<'a> {
    eval: WignerEvaluator<'a>,
    n: usize,
}

impl Sampler<'_> {
    fn at(&self, t: f64, x: Option<f64>) -> Option<f64> {
        let state = match x {
            None => TwoMesonState::pure_singlet(),
            // The bisection never leaves [0, 1] but clamp against rounding.
            Some(x) => TwoMesonState::werner(x.clamp(0.0, 1.0)).ok()?,
        };
        self.eval.r_n(self.n, 0.0, t, &state).ok()?.ratio
    }

    fn grid(&self, ts: &[f64], xs: &[Option<f64>]) -> Vec<Vec<Option<f64>>> {
        let flat: Vec<Option<f64>> = (0..xs.len() * ts.len())
            .into_par_iter()
            .map(|k| self.at(ts[k % ts.len()], xs[k / ts.len()]))
            .collect();
        flat.chunks(ts.len()).map(<[_]>::to_vec).collect()
    }
}

fn check_time_grid(t_max: f64, steps: usize) -> Result<()> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 time samples, got {steps}"
        )));
    }
    Ok(())
}

fn flags_of(values: &[Vec<Option<f64>>]) -> Vec<Vec<PointFlag>> {
    values
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    if v.is_some() {
                        PointFlag::Ok
                    } else {
                        PointFlag::ZeroLhs
                    }
                })
                .collect()
        })
        .collect()
}

fn result(
    eval: &WignerEvaluator,
    n: usize,
    t_grid: Vec<f64>,
    x_grid: Vec<f64>,
    values: Vec<Vec<Option<f64>>>,
    contour: Vec<Vec<(f64, f64)>>,
    violation_intervals: Vec<Vec<(f64, f64)>>,
) -> ScanResult {
    ScanResult {
        species: eval.kernel().species().to_string(),
        n,
        param: eval.kernel().parameterization(),
        convention: eval.convention(),
        t0: 0.0,
        flags: flags_of(&values),
        t_grid,
        x_grid,
        values,
        contour,
        violation_intervals,
    }
}

/// `R_N(t)` on `steps` uniform samples of `[0, t_max]` with `t0 = 0`.
///
/// `x = None` uses the pure singlet and reports `x = 1`.
pub fn run_rn_curve(
    eval: &WignerEvaluator,
    n: usize,
    t_max: f64,
    steps: usize,
    x: Option<f64>,
) -> Result<ScanResult> {
    assignment(n)?;
    check_time_grid(t_max, steps)?;
    if let Some(x) = x {
        TwoMesonState::werner(x)?;
    }
    let sampler = Sampler { eval: *eval, n };
    let ts = linspace(0.0, t_max, steps);
    let values = sampler.grid(&ts, &[x]);
    let f = |t: f64| sampler.at(t, x);
    let iv = intervals::violation_intervals(&f, &ts, &values[0]);
    Ok(result(
        eval,
        n,
        ts,
        vec![x.unwrap_or(1.0)],
        values,
        Vec::new(),
        vec![iv],
    ))
}

/// `R~_N(t, x)` on a uniform `t_steps x x_steps` grid over `[0, t_max] x [0, 1]`,
/// with the `R~ = 1` contour and per-row violation intervals.
pub fn run_werner_heatmap(
    eval: &WignerEvaluator,
    n: usize,
    t_max: f64,
    t_steps: usize,
    x_steps: usize,
) -> Result<ScanResult> {
    assignment(n)?;
    check_time_grid(t_max, t_steps)?;
    if x_steps < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 purity samples, got {x_steps}"
        )));
    }
    let sampler = Sampler { eval: *eval, n };
    let ts = linspace(0.0, t_max, t_steps);
    let xs = linspace(0.0, 1.0, x_steps);
    let xs_opt: Vec<Option<f64>> = xs.iter().copied().map(Some).collect();
    let values = sampler.grid(&ts, &xs_opt);

    let f2 = |t: f64, x: f64| sampler.at(t, Some(x));
    let contour = contour::extract_contour(&f2, &ts, &xs, &values);
    let intervals: Vec<Vec<(f64, f64)>> = xs
        .par_iter()
        .zip(values.par_iter())
        .map(|(&x, row)| intervals::violation_intervals(&|t| sampler.at(t, Some(x)), &ts, row))
        .collect();
    Ok(result(eval, n, ts, xs, values, contour, intervals))
}
