//! Time-independent checks for one species.

use std::fmt;

use serde::Serialize;

use crate::dynamics::EvolutionKernel;
use crate::error::{Error, Result};
use crate::inequalities::{static_wigner_check, werner_purity_threshold, ASSIGNMENTS};
use crate::species::{MesonSpecies, Parameterization};
use crate::twobody::TwoMesonState;

/// A closed-form inequality in `eps` evaluated for the species.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonForm {
    pub statement: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticLine {
    #[serde(rename = "N")]
    pub n: usize,
    pub a_plus: String,
    pub b_plus: String,
    pub c_plus: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticReport {
    pub species: String,
    pub param: Parameterization,
    pub x: f64,
    /// `(Re, Im)` of `eps` when the species defines it.
    pub epsilon: Option<(f64, f64)>,
    /// Largest purity keeping the static inequality satisfied.
    pub threshold: Option<f64>,
    pub epsilon_forms: Vec<EpsilonForm>,
    pub checks: Vec<StaticLine>,
}

impl StaticReport {
    pub fn any_violated(&self) -> bool {
        self.checks.iter().any(|c| !c.satisfied) || self.epsilon_forms.iter().any(|f| !f.satisfied)
    }
}

/// Static inequalities for `species` at purity `x` (pure singlet when `None`).
///
/// `param` defaults to `eps` when the species defines it, otherwise to the
/// species' active parameterization.
pub fn run_static_report(
    species: &MesonSpecies,
    param: Option<Parameterization>,
    x: Option<f64>,
) -> Result<StaticReport> {
    let param = param.unwrap_or(if species.epsilon().is_some() {
        Parameterization::Epsilon
    } else {
        species.active_param()
    });
    let kernel = EvolutionKernel::new(species, param)?;
    let state = match x {
        Some(x) => TwoMesonState::werner(x)?,
        None => TwoMesonState::pure_singlet(),
    };
    let x = state.purity();

    let mut epsilon_forms = Vec::new();
    let mut threshold = None;
    if let Some(eps) = species.epsilon() {
        let e2 = eps.norm_sqr();
        epsilon_forms.push(EpsilonForm {
            statement: "Re(eps) <= |eps|^2".into(),
            lhs: eps.re,
            rhs: e2,
            satisfied: eps.re <= e2,
        });
        let lhs = x * (1.0 + 2.0 * eps.re - e2);
        epsilon_forms.push(EpsilonForm {
            statement: "x (1 + 2 Re(eps) - |eps|^2) <= 1 + |eps|^2".into(),
            lhs,
            rhs: 1.0 + e2,
            satisfied: lhs <= 1.0 + e2,
        });
        threshold = match werner_purity_threshold(eps) {
            Ok(t) => Some(t),
            Err(Error::UndefinedThreshold(_)) => None,
            Err(e) => return Err(e),
        };
    }

    let checks = ASSIGNMENTS
        .iter()
        .map(|asg| {
            let c = static_wigner_check(&kernel, asg, &state);
            StaticLine {
                n: asg.index,
                a_plus: asg.a_plus.to_string(),
                b_plus: asg.b_plus.to_string(),
                c_plus: asg.c_plus.to_string(),
                lhs: c.lhs,
                rhs: c.rhs,
                ratio: (c.lhs >= f64::MIN_POSITIVE).then(|| c.ratio()),
                satisfied: c.satisfied,
            }
        })
        .collect();

    Ok(StaticReport {
        species: species.name().to_string(),
        param,
        x,
        epsilon: species.epsilon().map(|e| (e.re, e.im)),
        threshold,
        epsilon_forms,
        checks,
    })
}

impl fmt::Display for StaticReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = |ok: bool| if ok { "satisfied" } else { "VIOLATED" };
        writeln!(
            f,
            "species {} ({}), x = {}",
            self.species, self.param, self.x
        )?;
        if let Some((re, im)) = self.epsilon {
            writeln!(f, "eps = {re} + {im}i")?;
        }
        match self.threshold {
            Some(t) => writeln!(f, "Werner purity threshold: {t}")?,
            None if self.epsilon.is_some() => writeln!(f, "Werner purity threshold: undefined")?,
            None => {}
        }
        for form in &self.epsilon_forms {
            writeln!(
                f,
                "{}: {} vs {} ({})",
                form.statement,
                form.lhs,
                form.rhs,
                status(form.satisfied)
            )?;
        }
        for c in &self.checks {
            writeln!(
                f,
                "N={} a+={} b+={} c+={}: lhs {} rhs {} ({})",
                c.n,
                c.a_plus,
                c.b_plus,
                c.c_plus,
                c.lhs,
                c.rhs,
                status(c.satisfied)
            )?;
        }
        Ok(())
    }
}
