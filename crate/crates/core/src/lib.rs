//! Neutral meson pair dynamics and time-dependent Wigner inequalities.
//!
//! Units: hbar = c = 1, times are `c t` in millimetres, masses and widths in
//! inverse millimetres.

pub mod dynamics;
pub mod error;
pub mod inequalities;
pub mod oracle;
pub mod scan;
pub mod species;
pub mod twobody;

pub use dynamics::{Basis, DichotomousValue, EvolutionKernel, Sign};
pub use error::{ConfigError, Error, Result};
pub use inequalities::{
    assignment, r_n, r_n_tilde, static_wigner_check, werner_purity_threshold, InequalityAssignment,
    ProbabilityConvention, RnEvaluation, WignerEvaluator, ASSIGNMENTS,
};
pub use oracle::{classical_lhs_rhs, verify_marginalization_identities, ClassicalModel};
pub use scan::{run_rn_curve, run_static_report, run_werner_heatmap, ScanResult};
pub use species::{MesonSpecies, Parameterization, SpeciesRegistry};
pub use twobody::{joint_probability, TwoMesonState};
