//! Meson pairs in the flavor singlet or a Werner mixture.
//!
//! The singlet is `|Psi-> = (|M>_I |Mbar>_II - |Mbar>_I |M>_II) / sqrt(2)` and
//! the Werner state is `x |Psi-><Psi-| + (1 - x)/4 * I`. Both mesons evolve
//! for the same elapsed time with `U (x) U`, including the identity part of
//! the Werner state. Outcomes are projections onto product basis states.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::RowVector2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{elapsed, DichotomousValue, EvolutionKernel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StateKind {
    PureSinglet,
    Werner(f64),
}

/// A two-meson state prepared at `t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoMesonState {
    kind: StateKind,
}

impl TwoMesonState {
    pub fn pure_singlet() -> Self {
        Self {
            kind: StateKind::PureSinglet,
        }
    }

    pub fn werner(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidPurity(x));
        }
        Ok(Self {
            kind: StateKind::Werner(x),
        })
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    /// Singlet weight `x`; 1 for the pure state.
    pub fn purity(&self) -> f64 {
        match self.kind {
            StateKind::PureSinglet => 1.0,
            StateKind::Werner(x) => x,
        }
    }
}

/// `<o| U` as a row vector over the flavor basis.
fn projected_row(
    kernel: &EvolutionKernel,
    outcome: DichotomousValue,
    dt: f64,
) -> RowVector2<Complex64> {
    kernel.state(outcome).adjoint() * kernel.propagator(dt)
}

/// `<o_II (x) o_I| (U (x) U) |Psi->`.
pub fn singlet_amplitude(
    kernel: &EvolutionKernel,
    out_ii: DichotomousValue,
    out_i: DichotomousValue,
    dt: f64,
) -> Complex64 {
    let r_i = projected_row(kernel, out_i, dt);
    let r_ii = projected_row(kernel, out_ii, dt);
    (r_i[0] * r_ii[1] - r_i[1] * r_ii[0]) * FRAC_1_SQRT_2
}

/// Probability of outcome `out_ii` on meson II and `out_i` on meson I after
/// the pair, prepared at `t0`, has evolved until `t`.
pub fn joint_probability(
    kernel: &EvolutionKernel,
    state: &TwoMesonState,
    out_ii: DichotomousValue,
    out_i: DichotomousValue,
    t0: f64,
    t: f64,
) -> Result<f64> {
    let dt = elapsed(t0, t)?;
    Ok(joint_probability_elapsed(kernel, state, out_ii, out_i, dt))
}

pub(crate) fn joint_probability_elapsed(
    kernel: &EvolutionKernel,
    state: &TwoMesonState,
    out_ii: DichotomousValue,
    out_i: DichotomousValue,
    dt: f64,
) -> f64 {
    let r_i = projected_row(kernel, out_i, dt);
    let r_ii = projected_row(kernel, out_ii, dt);
    let pure = ((r_i[0] * r_ii[1] - r_i[1] * r_ii[0]) * FRAC_1_SQRT_2).norm_sqr();
    match state.kind {
        StateKind::PureSinglet => pure,
        StateKind::Werner(x) => {
            let noise = 0.25 * r_i.norm_squared() * r_ii.norm_squared();
            x * pure + (1.0 - x) * noise
        }
    }
}

/// Trace of the evolved pair density operator: the probability that neither
/// meson has decayed after `dt`.
pub fn pair_survival(kernel: &EvolutionKernel, state: &TwoMesonState, dt: f64) -> f64 {
    let u = kernel.propagator(dt);
    let det = u.determinant().norm_sqr();
    let frob = u.norm_squared();
    let x = state.purity();
    x * det + (1.0 - x) * 0.25 * frob * frob
}

/// `(P(d), exp(-(Gamma_L + Gamma_H) d) * P(0))` for the pure singlet.
///
/// The two agree because `(U (x) U)|Psi-> = det(U) |Psi->`.
pub fn equal_time_pure_scaling_check(
    kernel: &EvolutionKernel,
    out_ii: DichotomousValue,
    out_i: DichotomousValue,
    d: f64,
) -> Result<(f64, f64)> {
    let pure = TwoMesonState::pure_singlet();
    let lhs = joint_probability(kernel, &pure, out_ii, out_i, 0.0, d)?;
    let at_zero = joint_probability(kernel, &pure, out_ii, out_i, 0.0, 0.0)?;
    let decay = (-(kernel.gamma_l() + kernel.gamma_h()) * d).exp();
    Ok((lhs, decay * at_zero))
}
