//! Classical models of the pair: one ontic probability table plus an
//! independent Markov kernel per observable.
//!
//! Subsystem I carries three dichotomous observables `a`, `b`, `c` with a
//! joint distribution over the 8 value triples. Subsystem II is perfectly
//! anticorrelated with it, so `a^II = -a^I` and likewise for `b` and `c`.
//! Each observable evolves from `t0` to `t` through two kernel steps
//! (`t0 -> t_mid -> t`) whose rows may sum to less than one, which models
//! decay.
//!
//! Everything is exact table arithmetic; nothing is sampled except the
//! models themselves.

#![allow(clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{Basis, DichotomousValue, EvolutionKernel};
use crate::error::{Error, Result};
use crate::inequalities::InequalityAssignment;
use crate::twobody::{joint_probability, TwoMesonState};

/// `[from][to]` over `{+, -}` (index 0 is `+`).
pub type Kernel2 = [[f64; 2]; 2];
pub type Table2 = [[f64; 2]; 2];
pub type Table3 = [[[f64; 2]; 2]; 2];

const PLUS: usize = 0;
const MINUS: usize = 1;

pub const IDENTITY: Kernel2 = [[1.0, 0.0], [0.0, 1.0]];

fn compose(first: &Kernel2, second: &Kernel2) -> Kernel2 {
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = first[i][0] * second[0][j] + first[i][1] * second[1][j];
        }
    }
    out
}

/// A two-step Markov evolution for one observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovKernel {
    pub first: Kernel2,
    pub second: Kernel2,
}

impl MarkovKernel {
    pub const IDENTITY: Self = Self {
        first: IDENTITY,
        second: IDENTITY,
    };

    /// A single step `t0 -> t`, with the intermediate step trivial.
    pub fn single(k: Kernel2) -> Self {
        Self {
            first: k,
            second: IDENTITY,
        }
    }

    /// The `t0 -> t` kernel.
    pub fn composite(&self) -> Kernel2 {
        compose(&self.first, &self.second)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        for k in [&self.first, &self.second] {
            for row in k {
                if row.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
                    return Err(format!("kernel entry outside [0, 1]: {row:?}"));
                }
                if row[0] + row[1] > 1.0 + 1e-12 {
                    return Err(format!("kernel row sums above 1: {row:?}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    I,
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalModel {
    /// `P(a^I, b^I, c^I)` indexed `[a][b][c]`.
    ontic: Table3,
    /// `[subsystem][observable]`, subsystem 0 = I.
    kernels: [[MarkovKernel; 3]; 2],
}

impl ClassicalModel {
    pub fn new(ontic: Table3, kernels: [[MarkovKernel; 3]; 2]) -> Result<Self> {
        let mut total = 0.0;
        for &w in ontic.iter().flatten().flatten() {
            if w.is_nan() || w < 0.0 {
                return Err(Error::InvalidModel(format!("negative ontic weight {w}")));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidModel(format!("ontic weights sum to {total}")));
        }
        for k in kernels.iter().flatten() {
            k.validate().map_err(Error::InvalidModel)?;
        }
        Ok(Self { ontic, kernels })
    }

    /// Uniform kernels of one kind on every observable.
    pub fn with_kernel(ontic: Table3, kernel: MarkovKernel) -> Result<Self> {
        Self::new(ontic, [[kernel; 3]; 2])
    }

    /// The ontic state `(a, b, c)` of subsystem I with certainty, identity evolution.
    pub fn deterministic(a: usize, b: usize, c: usize) -> Self {
        let mut ontic = [[[0.0; 2]; 2]; 2];
        ontic[a][b][c] = 1.0;
        Self {
            ontic,
            kernels: [[MarkovKernel::IDENTITY; 3]; 2],
        }
    }

    /// Dirichlet(1, ..., 1) ontic table and kernel rows drawn uniformly from
    /// the sub-stochastic simplex `{w(+), w(-), w(decay)}`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut ontic = [[[0.0; 2]; 2]; 2];
        let mut total = 0.0;
        for w in ontic.iter_mut().flatten().flatten() {
            *w = rng.sample::<f64, _>(Exp1);
            total += *w;
        }
        for w in ontic.iter_mut().flatten().flatten() {
            *w /= total;
        }
        let kernel = |rng: &mut R| {
            let mut k = [[0.0; 2]; 2];
            for row in k.iter_mut() {
                let e: [f64; 3] = std::array::from_fn(|_| rng.sample::<f64, _>(Exp1));
                let s = e[0] + e[1] + e[2];
                *row = [e[0] / s, e[1] / s];
            }
            k
        };
        let mut kernels = [[MarkovKernel::IDENTITY; 3]; 2];
        for k in kernels.iter_mut().flatten() {
            let first = kernel(rng);
            let second = kernel(rng);
            *k = MarkovKernel { first, second };
        }
        Self { ontic, kernels }
    }

    pub fn ontic(&self) -> &Table3 {
        &self.ontic
    }

    pub fn kernel(&self, subsystem: Subsystem, observable: Observable) -> &MarkovKernel {
        let s = match subsystem {
            Subsystem::I => 0,
            Subsystem::II => 1,
        };
        let o = match observable {
            Observable::A => 0,
            Observable::B => 1,
            Observable::C => 2,
        };
        &self.kernels[s][o]
    }

    /// `P(a^I, b^I, c^I)` with `None` summing over that observable.
    fn marginal(&self, a: Option<usize>, b: Option<usize>, c: Option<usize>) -> f64 {
        let pick = |v: Option<usize>| v.map_or(0..2, |i| i..i + 1);
        let mut s = 0.0;
        for i in pick(a) {
            for j in pick(b) {
                for k in pick(c) {
                    s += self.ontic[i][j][k];
                }
            }
        }
        s
    }

    /// Marginalization identities of [`Self::tables`].
    pub fn verify_identities(&self) -> MarginalizationReport {
        verify_marginalization_identities(&self.tables())
    }

    /// Epistemic tables implied by the model, measured at `t0`.
    pub fn tables(&self) -> EpistemicTables {
        let flip = |v: usize| 1 - v;
        let mut triple = [[[0.0; 2]; 2]; 2];
        let mut ab = [[0.0; 2]; 2];
        let mut cb = [[0.0; 2]; 2];
        let mut ac = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    // a^II = i, c^II = k, b^I = j
                    triple[i][k][j] = self.ontic[flip(i)][j][flip(k)];
                }
                ab[i][j] = self.marginal(Some(flip(i)), Some(j), None);
                // c^II = i
                cb[i][j] = self.marginal(None, Some(j), Some(flip(i)));
                // a^II = i, c^I = j
                ac[i][j] = self.marginal(Some(flip(i)), None, Some(j));
            }
        }
        let a_ii = [0, 1].map(|i| self.marginal(Some(flip(i)), None, None));
        let c_ii = [0, 1].map(|k| self.marginal(None, None, Some(flip(k))));
        let b_i = [0, 1].map(|j| self.marginal(None, Some(j), None));
        let c_i = [0, 1].map(|k| self.marginal(None, None, Some(k)));

        let time_tables = |label: &str, initial: [f64; 2], kernel: &MarkovKernel| {
            let composite = kernel.composite();
            let mut two_time = [[0.0; 2]; 2];
            let mut three_time = [[[0.0; 2]; 2]; 2];
            for a in 0..2 {
                for e in 0..2 {
                    two_time[a][e] = initial[a] * composite[a][e];
                    for m in 0..2 {
                        three_time[a][m][e] = initial[a] * kernel.first[a][m] * kernel.second[m][e];
                    }
                }
            }
            TimeTables {
                label: label.to_string(),
                two_time,
                three_time,
            }
        };
        let nsit = vec![
            time_tables("a^II", a_ii, self.kernel(Subsystem::II, Observable::A)),
            time_tables("b^I", b_i, self.kernel(Subsystem::I, Observable::B)),
            time_tables("c^I", c_i, self.kernel(Subsystem::I, Observable::C)),
        ];

        EpistemicTables {
            triple,
            ab,
            cb,
            ac,
            a_ii,
            c_ii,
            b_i,
            c_i,
            nsit,
        }
    }
}

/// Left and right side of the two-time inequality for a classical model.
///
/// The left side is the four-term composition of `t0` joint probabilities
/// with the `a^II` and `b^I` kernels; the right side is the bound built from
/// the same kernels and `t0` marginals.
pub fn classical_lhs_rhs(model: &ClassicalModel) -> (f64, f64) {
    let ka = model.kernel(Subsystem::II, Observable::A).composite();
    let kb = model.kernel(Subsystem::I, Observable::B).composite();
    let flip = |v: usize| 1 - v;

    let w_ab = |alpha: usize, beta: usize| model.marginal(Some(flip(alpha)), Some(beta), None);
    let mut lhs = 0.0;
    for alpha in 0..2 {
        for beta in 0..2 {
            lhs += ka[alpha][PLUS] * kb[beta][PLUS] * w_ab(alpha, beta);
        }
    }

    // w(a_alpha^II, c+^I) and w(c+^II, b_beta^I)
    let w_ac = |alpha: usize| model.marginal(Some(flip(alpha)), None, Some(PLUS));
    let w_cb = |beta: usize| model.marginal(None, Some(beta), Some(MINUS));
    let b_sum = kb[PLUS][PLUS] + kb[MINUS][PLUS];
    let a_sum = ka[PLUS][PLUS] + ka[MINUS][PLUS];
    let rhs = w_ac(PLUS) * ka[PLUS][PLUS] * b_sum
        + w_ac(MINUS) * ka[MINUS][PLUS] * b_sum
        + w_cb(PLUS) * kb[PLUS][PLUS] * a_sum
        + w_cb(MINUS) * kb[MINUS][PLUS] * a_sum;
    (lhs, rhs)
}

/// Two- and three-time tables for one observable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeTables {
    pub label: String,
    /// `w(o(t0), o(t))`
    pub two_time: Table2,
    /// `w(o(t0), o(t_mid), o(t))`
    pub three_time: Table3,
}

/// Probability tables of the kind an experimenter could assemble, indexed
/// by outcome (0 = `+`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpistemicTables {
    /// `w(a_i^II, c_k^II, b_j^I)` as `[i][k][j]`.
    pub triple: Table3,
    /// `w(a_i^II, b_j^I)`
    pub ab: Table2,
    /// `w(c_k^II, b_j^I)`
    pub cb: Table2,
    /// `w(a_i^II, c_k^I)`
    pub ac: Table2,
    pub a_ii: [f64; 2],
    pub c_ii: [f64; 2],
    pub b_i: [f64; 2],
    pub c_i: [f64; 2],
    pub nsit: Vec<TimeTables>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IdentityFamily {
    Nsc,
    Ensc,
    Nsit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub family: IdentityFamily,
    pub label: String,
    /// Largest absolute deviation over the table cells.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalizationReport {
    pub checks: Vec<IdentityCheck>,
}

impl MarginalizationReport {
    pub fn max_residual(&self, family: IdentityFamily) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.family == family)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }

    pub fn failures(&self, tol: f64) -> impl Iterator<Item = &IdentityCheck> {
        self.checks
            .iter()
            .filter(move |c| c.residual.is_nan() || c.residual > tol)
    }

    pub fn all_pass(&self, tol: f64) -> bool {
        self.failures(tol).next().is_none()
    }
}

/// Check the no-signaling (NSC), enhanced no-signaling (ENSC) and
/// no-signaling-in-time (NSIT) marginalization identities on a set of tables.
pub fn verify_marginalization_identities(t: &EpistemicTables) -> MarginalizationReport {
    let mut checks = Vec::new();
    let mut push = |family, label: &str, residual: f64| {
        checks.push(IdentityCheck {
            family,
            label: label.to_string(),
            residual,
        })
    };
    let dev = |pairs: &mut dyn Iterator<Item = (f64, f64)>| {
        pairs.map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    let idx2 = || (0..2).flat_map(|i| (0..2).map(move |j| (i, j)));

    // NSC on each pairwise table.
    for (label, table, row_marg, col_marg) in [
        ("ab", &t.ab, &t.a_ii, &t.b_i),
        ("cb", &t.cb, &t.c_ii, &t.b_i),
        ("ac", &t.ac, &t.a_ii, &t.c_i),
    ] {
        let r = dev(&mut (0..2).map(|i| (table[i][0] + table[i][1], row_marg[i])));
        push(
            IdentityFamily::Nsc,
            &format!("sum_j {label}[i][j] = row marginal"),
            r,
        );
        let c = dev(&mut (0..2).map(|j| (table[0][j] + table[1][j], col_marg[j])));
        push(
            IdentityFamily::Nsc,
            &format!("sum_i {label}[i][j] = column marginal"),
            c,
        );
    }

    // NSC on the three-observable table: summing the remote b^I leaves the
    // co-located (a^II, c^II) table, which anticorrelation ties to ac.
    let r = dev(&mut idx2().map(|(i, k)| (t.triple[i][k][0] + t.triple[i][k][1], t.ac[i][1 - k])));
    push(IdentityFamily::Nsc, "sum_j triple[i][k][j] = ac[i][-k]", r);
    let r = dev(&mut (0..2).map(|j| {
        let s: f64 = idx2().map(|(i, k)| t.triple[i][k][j]).sum();
        (s, t.b_i[j])
    }));
    push(IdentityFamily::Nsc, "sum_ik triple[i][k][j] = b_i[j]", r);

    // ENSC: summing either co-located observable leaves the pairwise table.
    let r = dev(&mut idx2().map(|(i, j)| (t.triple[i][0][j] + t.triple[i][1][j], t.ab[i][j])));
    push(IdentityFamily::Ensc, "sum_k triple[i][k][j] = ab[i][j]", r);
    let r = dev(&mut idx2().map(|(k, j)| (t.triple[0][k][j] + t.triple[1][k][j], t.cb[k][j])));
    push(IdentityFamily::Ensc, "sum_i triple[i][k][j] = cb[k][j]", r);

    for tt in &t.nsit {
        let r = dev(&mut idx2().map(|(a, e)| {
            (
                tt.three_time[a][0][e] + tt.three_time[a][1][e],
                tt.two_time[a][e],
            )
        }));
        push(
            IdentityFamily::Nsit,
            &format!("sum_mid {}(t0, t_mid, t) = {}(t0, t)", tt.label, tt.label),
            r,
        );
    }

    MarginalizationReport { checks }
}

/// Quantum probability tables for the pair, read as if they were classical.
///
/// Pairwise tables are joint probabilities of the prepared state. The
/// three-observable table comes from measuring `a` then `c` on meson II
/// (Lueders rule), which is the only way to obtain both values at once.
/// No time tables are produced.
pub fn quantum_tables(
    kernel: &EvolutionKernel,
    state: &TwoMesonState,
    assignment: &InequalityAssignment,
) -> Result<EpistemicTables> {
    let a = [assignment.a_plus, assignment.a_minus];
    let b = [assignment.b_plus, assignment.b_minus];
    let c = [assignment.c_plus, assignment.c_minus];
    let w = |ii: DichotomousValue, i: DichotomousValue| {
        joint_probability(kernel, state, ii, i, 0.0, 0.0)
    };

    let mut ab = [[0.0; 2]; 2];
    let mut cb = [[0.0; 2]; 2];
    let mut ac = [[0.0; 2]; 2];
    let mut triple = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            ab[i][j] = w(a[i], b[j])?;
            cb[i][j] = w(c[i], b[j])?;
            ac[i][j] = w(a[i], c[j])?;
        }
    }
    for i in 0..2 {
        for k in 0..2 {
            let overlap = kernel.state(c[k]).dotc(&kernel.state(a[i])).norm_sqr();
            for j in 0..2 {
                triple[i][k][j] = overlap * ab[i][j];
            }
        }
    }
    // Single-meson marginals from the other side's complete basis.
    let other = |v: DichotomousValue| match v.basis {
        Basis::Flavor => Basis::Cp,
        _ => Basis::Flavor,
    };
    let single_ii = |v: DichotomousValue| -> Result<f64> {
        DichotomousValue::outcomes(other(v))
            .iter()
            .map(|&o| w(v, o))
            .sum()
    };
    let single_i = |v: DichotomousValue| -> Result<f64> {
        DichotomousValue::outcomes(other(v))
            .iter()
            .map(|&o| w(o, v))
            .sum()
    };
    Ok(EpistemicTables {
        triple,
        ab,
        cb,
        ac,
        a_ii: [single_ii(a[0])?, single_ii(a[1])?],
        c_ii: [single_ii(c[0])?, single_ii(c[1])?],
        b_i: [single_i(b[0])?, single_i(b[1])?],
        c_i: [single_i(c[0])?, single_i(c[1])?],
        nsit: Vec::new(),
    })
}

/// Outcome of checking many random classical models.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub models: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Largest `lhs - rhs` seen; never positive beyond `tolerance` for a sound model.
    pub max_excess: f64,
    pub violations: usize,
    pub max_nsc_residual: f64,
    pub max_ensc_residual: f64,
    pub max_nsit_residual: f64,
    pub passed: bool,
}

/// Model `index` of the stream for `seed`.
pub fn seeded_model(seed: u64, index: u64) -> ClassicalModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    ClassicalModel::random(&mut rng)
}

/// Draw `models` random classical models and check the inequality and the
/// marginalization identities on each.
pub fn verify_random_models(models: usize, seed: u64, tolerance: f64) -> VerificationSummary {
    let per_model: Vec<_> = (0..models as u64)
        .into_par_iter()
        .map(|i| {
            let model = seeded_model(seed, i);
            let (lhs, rhs) = classical_lhs_rhs(&model);
            let report = model.verify_identities();
            (
                lhs - rhs,
                report.max_residual(IdentityFamily::Nsc),
                report.max_residual(IdentityFamily::Ensc),
                report.max_residual(IdentityFamily::Nsit),
            )
        })
        .collect();

    let mut summary = VerificationSummary {
        models,
        seed,
        tolerance,
        max_excess: f64::NEG_INFINITY,
        violations: 0,
        max_nsc_residual: 0.0,
        max_ensc_residual: 0.0,
        max_nsit_residual: 0.0,
        passed: true,
    };
    for (excess, nsc, ensc, nsit) in per_model {
        summary.max_excess = summary.max_excess.max(excess);
        if excess > tolerance {
            summary.violations += 1;
        }
        summary.max_nsc_residual = summary.max_nsc_residual.max(nsc);
        summary.max_ensc_residual = summary.max_ensc_residual.max(ensc);
        summary.max_nsit_residual = summary.max_nsit_residual.max(nsit);
    }
    if models == 0 {
        summary.max_excess = 0.0;
    }
    summary.passed = summary.violations == 0
        && summary.max_nsc_residual <= tolerance
        && summary.max_ensc_residual <= tolerance
        && summary.max_nsit_residual <= tolerance;
    summary
}
