//! Static and two-time Wigner inequalities for meson pairs.
//!
//! Each inequality is labelled by an assignment `N` binding the dichotomous
//! variables `a`, `b`, `c` to flavor, CP and mass states. `a` is read on meson
//! II and `b` on meson I. The two-time form bounds `w(a+(t), b+(t))` by
//! `t0` joint probabilities weighted with single-meson transition
//! probabilities:
//!
//! ```text
//! w(a+, b+; t) <= w(a+, c+; t0) T(a+ -> a+) [T(b+ -> b+) + T(b- -> b+)]
//!              +  w(a-, c+; t0) T(a- -> a+) [T(b+ -> b+) + T(b- -> b+)]
//!              +  w(c+, b+; t0) T(b+ -> b+) [T(a+ -> a+) + T(a- -> a+)]
//!              +  w(c+, b-; t0) T(b- -> b+) [T(a+ -> a+) + T(a- -> a+)]
//! ```
//!
//! `R_N = rhs / lhs`, so `R_N < 1` is a violation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{elapsed, DichotomousValue, EvolutionKernel};
use crate::error::{Error, Result};
use crate::twobody::{joint_probability_elapsed, pair_survival, TwoMesonState};

/// One row of the correspondence table between `a, b, c` and meson states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InequalityAssignment {
    pub index: usize,
    pub a_plus: DichotomousValue,
    pub b_plus: DichotomousValue,
    pub c_plus: DichotomousValue,
    pub a_minus: DichotomousValue,
    pub b_minus: DichotomousValue,
    pub c_minus: DichotomousValue,
}

impl InequalityAssignment {
    /// The six bound states in `a+, b+, c+, a-, b-, c-` order.
    pub fn values(&self) -> [DichotomousValue; 6] {
        [
            self.a_plus,
            self.b_plus,
            self.c_plus,
            self.a_minus,
            self.b_minus,
            self.c_minus,
        ]
    }
}

const fn row(
    index: usize,
    a_plus: DichotomousValue,
    b_plus: DichotomousValue,
    c_plus: DichotomousValue,
    a_minus: DichotomousValue,
    b_minus: DichotomousValue,
    c_minus: DichotomousValue,
) -> InequalityAssignment {
    InequalityAssignment {
        index,
        a_plus,
        b_plus,
        c_plus,
        a_minus,
        b_minus,
        c_minus,
    }
}

use DichotomousValue as V;

pub const ASSIGNMENTS: [InequalityAssignment; 8] = [
    row(1, V::M1, V::MBAR, V::MH, V::M2, V::M, V::ML),
    row(2, V::M1, V::M, V::MH, V::M2, V::MBAR, V::ML),
    row(3, V::M2, V::MBAR, V::MH, V::M1, V::M, V::ML),
    row(4, V::M2, V::M, V::MH, V::M1, V::MBAR, V::ML),
    row(5, V::M1, V::MBAR, V::ML, V::M2, V::M, V::MH),
    row(6, V::M1, V::M, V::ML, V::M2, V::MBAR, V::MH),
    row(7, V::M2, V::MBAR, V::ML, V::M1, V::M, V::MH),
    row(8, V::M2, V::M, V::ML, V::M1, V::MBAR, V::MH),
];

pub fn assignment(n: usize) -> Result<&'static InequalityAssignment> {
    n.checked_sub(1)
        .and_then(|i| ASSIGNMENTS.get(i))
        .ok_or(Error::InvalidIndex(n))
}

/// How decay loss enters the probabilities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilityConvention {
    /// Raw probabilities including decay loss.
    #[default]
    Unnormalized,
    /// Probabilities conditioned on survival: joint probabilities are divided
    /// by the trace of the evolved pair state, transition probabilities by
    /// the norm of the evolved single-meson state.
    SurvivalNormalized,
}

/// A point counts as violating only if `R < 1 - VIOLATION_TOL`; exact
/// equalities evaluate to `1 - O(1e-16)`.
pub const VIOLATION_TOL: f64 = 1e-12;

/// Marker for points where the ratio cannot be formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFlag {
    Ok,
    ZeroLhs,
}

impl PointFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            PointFlag::Ok => "ok",
            PointFlag::ZeroLhs => "zero_lhs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RnEvaluation {
    pub n: usize,
    pub t0: f64,
    pub t: f64,
    /// Werner purity, `None` for the pure singlet.
    pub x: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs / lhs`, absent when `lhs` vanishes.
    pub ratio: Option<f64>,
    pub violated: bool,
}

impl RnEvaluation {
    fn new(n: usize, t0: f64, t: f64, x: Option<f64>, lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs.is_finite() && lhs >= f64::MIN_POSITIVE {
            Some(rhs / lhs)
        } else {
            None
        };
        Self {
            n,
            t0,
            t,
            x,
            lhs,
            rhs,
            ratio,
            violated: ratio.is_some_and(|r| r < 1.0 - VIOLATION_TOL),
        }
    }

    pub fn flag(&self) -> PointFlag {
        if self.ratio.is_some() {
            PointFlag::Ok
        } else {
            PointFlag::ZeroLhs
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

impl StaticCheck {
    pub fn ratio(&self) -> f64 {
        self.rhs / self.lhs
    }
}

/// Absolute slack allowed when deciding a static check, so that exact
/// equalities are not reported as violations because of rounding.
pub const STATIC_TOL: f64 = 1e-12;

/// `w(a+, b+) <= w(c+, b+) + w(a+, c+)` on the state as prepared.
pub fn static_wigner_check(
    kernel: &EvolutionKernel,
    assignment: &InequalityAssignment,
    state: &TwoMesonState,
) -> StaticCheck {
    let w = |ii, i| joint_probability_elapsed(kernel, state, ii, i, 0.0);
    let lhs = w(assignment.a_plus, assignment.b_plus);
    let rhs = w(assignment.c_plus, assignment.b_plus) + w(assignment.a_plus, assignment.c_plus);
    StaticCheck {
        lhs,
        rhs,
        satisfied: lhs <= rhs + STATIC_TOL,
    }
}

/// Largest Werner purity for which the static inequality still holds:
/// `(1 + |eps|^2) / (1 + 2 Re(eps) - |eps|^2)`.
pub fn werner_purity_threshold(epsilon: Complex64) -> Result<f64> {
    let e2 = epsilon.norm_sqr();
    let denom = 1.0 + 2.0 * epsilon.re - e2;
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::UndefinedThreshold(denom));
    }
    Ok((1.0 + e2) / denom)
}

/// Evaluates `R_N` and its Werner generalization for one kernel.
#[derive(Debug, Clone, Copy)]
pub struct WignerEvaluator<'a> {
    kernel: &'a EvolutionKernel,
    convention: ProbabilityConvention,
}

impl<'a> WignerEvaluator<'a> {
    pub fn new(kernel: &'a EvolutionKernel) -> Self {
        Self {
            kernel,
            convention: ProbabilityConvention::default(),
        }
    }

    pub fn with_convention(mut self, convention: ProbabilityConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn kernel(&self) -> &EvolutionKernel {
        self.kernel
    }

    pub fn convention(&self) -> ProbabilityConvention {
        self.convention
    }

    pub fn r_n(&self, n: usize, t0: f64, t: f64, state: &TwoMesonState) -> Result<RnEvaluation> {
        let asg = assignment(n)?;
        let dt = elapsed(t0, t)?;
        let x = match state.kind() {
            crate::twobody::StateKind::PureSinglet => None,
            crate::twobody::StateKind::Werner(x) => Some(x),
        };
        let (lhs, rhs) = self.sides(asg, state, dt);
        Ok(RnEvaluation::new(n, t0, t, x, lhs, rhs))
    }

    pub fn r_n_tilde(&self, n: usize, t0: f64, t: f64, x: f64) -> Result<RnEvaluation> {
        self.r_n(n, t0, t, &TwoMesonState::werner(x)?)
    }

    fn sides(&self, asg: &InequalityAssignment, state: &TwoMesonState, dt: f64) -> (f64, f64) {
        let k = self.kernel;
        let normalized = self.convention == ProbabilityConvention::SurvivalNormalized;

        let mut lhs = joint_probability_elapsed(k, state, asg.a_plus, asg.b_plus, dt);
        if normalized {
            lhs /= pair_survival(k, state, dt);
        }

        let u = k.propagator(dt);
        let trans = |from: DichotomousValue, to: DichotomousValue| {
            let evolved = u * k.state(from);
            let p = k.state(to).dotc(&evolved).norm_sqr();
            if normalized {
                p / evolved.norm_squared()
            } else {
                p
            }
        };
        let t_aa = trans(asg.a_plus, asg.a_plus);
        let t_ma = trans(asg.a_minus, asg.a_plus);
        let t_bb = trans(asg.b_plus, asg.b_plus);
        let t_mb = trans(asg.b_minus, asg.b_plus);

        let w0 = |ii, i| joint_probability_elapsed(k, state, ii, i, 0.0);
        let b_sum = t_bb + t_mb;
        let a_sum = t_aa + t_ma;
        let rhs = w0(asg.a_plus, asg.c_plus) * t_aa * b_sum
            + w0(asg.a_minus, asg.c_plus) * t_ma * b_sum
            + w0(asg.c_plus, asg.b_plus) * t_bb * a_sum
            + w0(asg.c_plus, asg.b_minus) * t_mb * a_sum;
        (lhs, rhs)
    }
}

/// `R_N(t, t0)` with unnormalized probabilities.
pub fn r_n(
    kernel: &EvolutionKernel,
    n: usize,
    t0: f64,
    t: f64,
    state: &TwoMesonState,
) -> Result<RnEvaluation> {
    WignerEvaluator::new(kernel).r_n(n, t0, t, state)
}

/// `R~_N(t, t0, x)` with unnormalized probabilities.
pub fn r_n_tilde(
    kernel: &EvolutionKernel,
    n: usize,
    t0: f64,
    t: f64,
    x: f64,
) -> Result<RnEvaluation> {
    WignerEvaluator::new(kernel).r_n_tilde(n, t0, t, x)
}
