//! Weisskopf-Wigner evolution of a single neutral meson.
//!
//! States are 2-component amplitudes in the flavor basis `(|M>, |Mbar>)`.
//! The propagator acts as `exp(-i lambda_L dt)` on `|M_L>` and
//! `exp(-i lambda_H dt)` on `|M_H>` with `lambda = m - i Gamma/2`. The mean
//! mass only contributes a global phase and is set to zero, so
//! `m_L = -dm/2` and `m_H = +dm/2`.
//!
//! Probabilities are left unnormalized: the norm of an evolved state decays.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::species::{MesonSpecies, MixingAmplitudes, Parameterization};

pub type Amplitude = Vector2<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    Flavor,
    Cp,
    Mass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One outcome of a two-valued measurement in one of the three bases.
///
/// `Plus` selects `M`, `M_1` or `M_L`; `Minus` selects `Mbar`, `M_2` or `M_H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DichotomousValue {
    pub basis: Basis,
    pub sign: Sign,
}

impl DichotomousValue {
    pub const M: Self = Self::new(Basis::Flavor, Sign::Plus);
    pub const MBAR: Self = Self::new(Basis::Flavor, Sign::Minus);
    pub const M1: Self = Self::new(Basis::Cp, Sign::Plus);
    pub const M2: Self = Self::new(Basis::Cp, Sign::Minus);
    pub const ML: Self = Self::new(Basis::Mass, Sign::Plus);
    pub const MH: Self = Self::new(Basis::Mass, Sign::Minus);

    pub const ALL: [Self; 6] = [Self::M, Self::MBAR, Self::M1, Self::M2, Self::ML, Self::MH];

    pub const fn new(basis: Basis, sign: Sign) -> Self {
        Self { basis, sign }
    }

    /// The other outcome of the same measurement.
    pub fn conjugate(self) -> Self {
        Self::new(self.basis, self.sign.flip())
    }

    /// Both outcomes of `basis`, `Plus` first.
    pub fn outcomes(basis: Basis) -> [Self; 2] {
        [Self::new(basis, Sign::Plus), Self::new(basis, Sign::Minus)]
    }
}

impl fmt::Display for DichotomousValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.basis, self.sign) {
            (Basis::Flavor, Sign::Plus) => "M",
            (Basis::Flavor, Sign::Minus) => "Mbar",
            (Basis::Cp, Sign::Plus) => "M1",
            (Basis::Cp, Sign::Minus) => "M2",
            (Basis::Mass, Sign::Plus) => "M_L",
            (Basis::Mass, Sign::Minus) => "M_H",
        };
        f.write_str(s)
    }
}

/// Closed-form propagator for one species under one CP parameterization.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionKernel {
    species: String,
    param: Option<Parameterization>,
    delta_m: f64,
    gamma_l: f64,
    gamma_h: f64,
    mixing: MixingAmplitudes,
}

impl EvolutionKernel {
    pub fn new(species: &MesonSpecies, param: Parameterization) -> Result<Self> {
        let mixing = species.mixing(param)?;
        log::debug!("{}: using {} parameterization", species.name(), param);
        Ok(Self {
            species: species.name().to_string(),
            param: Some(param),
            delta_m: species.delta_m(),
            gamma_l: species.gamma_l(),
            gamma_h: species.gamma_h(),
            mixing,
        })
    }

    /// Kernel from raw constants, for ad hoc systems.
    pub fn from_parts(delta_m: f64, gamma_l: f64, gamma_h: f64, mixing: MixingAmplitudes) -> Self {
        Self {
            species: "custom".to_string(),
            param: None,
            delta_m,
            gamma_l,
            gamma_h,
            mixing,
        }
    }

    pub fn species(&self) -> &str {
        &self.species
    }

    pub fn parameterization(&self) -> Option<Parameterization> {
        self.param
    }

    pub fn mixing(&self) -> MixingAmplitudes {
        self.mixing
    }

    pub fn delta_m(&self) -> f64 {
        self.delta_m
    }

    pub fn gamma_l(&self) -> f64 {
        self.gamma_l
    }

    pub fn gamma_h(&self) -> f64 {
        self.gamma_h
    }

    /// Complex eigenvalues `(lambda_L, lambda_H)` of the effective Hamiltonian.
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(-0.5 * self.delta_m, -0.5 * self.gamma_l),
            Complex64::new(0.5 * self.delta_m, -0.5 * self.gamma_h),
        )
    }

    fn phase_factors(&self, dt: f64) -> (Complex64, Complex64) {
        let l = Complex64::from_polar((-0.5 * self.gamma_l * dt).exp(), 0.5 * self.delta_m * dt);
        let h = Complex64::from_polar((-0.5 * self.gamma_h * dt).exp(), -0.5 * self.delta_m * dt);
        (l, h)
    }

    /// `g_+(dt)` and `g_-(dt)`.
    pub fn g(&self, dt: f64) -> (Complex64, Complex64) {
        let (l, h) = self.phase_factors(dt);
        (0.5 * (l + h), 0.5 * (l - h))
    }

    /// Flavor-basis propagator `U(dt)`; `dt` is not range-checked here.
    pub fn propagator(&self, dt: f64) -> Matrix2<Complex64> {
        let (gp, gm) = self.g(dt);
        let MixingAmplitudes { p, q } = self.mixing;
        // U|M> = g+ |M> + (q/p) g- |Mbar>,  U|Mbar> = (p/q) g- |M> + g+ |Mbar>
        Matrix2::new(gp, p / q * gm, q / p * gm, gp)
    }

    /// Flavor-basis amplitude of a basis state.
    pub fn state(&self, v: DichotomousValue) -> Amplitude {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let MixingAmplitudes { p, q } = self.mixing;
        match (v.basis, v.sign) {
            (Basis::Flavor, Sign::Plus) => Vector2::new(one, zero),
            (Basis::Flavor, Sign::Minus) => Vector2::new(zero, one),
            (Basis::Cp, Sign::Plus) => Vector2::new(s, s),
            (Basis::Cp, Sign::Minus) => Vector2::new(s, -s),
            (Basis::Mass, Sign::Plus) => Vector2::new(p, q),
            (Basis::Mass, Sign::Minus) => Vector2::new(p, -q),
        }
    }

    /// Coefficients `(c_L, c_H)` with `psi = c_L |M_L> + c_H |M_H>`.
    pub fn mass_components(&self, psi: &Amplitude) -> (Complex64, Complex64) {
        let MixingAmplitudes { p, q } = self.mixing;
        let a = psi[0] / p;
        let b = psi[1] / q;
        (0.5 * (a + b), 0.5 * (a - b))
    }

    /// `U(dt)|initial>` in the flavor basis.
    pub fn evolve(&self, initial: DichotomousValue, dt: f64) -> Result<Amplitude> {
        self.evolve_amplitude(&self.state(initial), dt)
    }

    pub fn evolve_amplitude(&self, psi: &Amplitude, dt: f64) -> Result<Amplitude> {
        check_elapsed(dt)?;
        Ok(self.propagator(dt) * psi)
    }

    /// `|<to| U(t - t0) |from>|^2`, not normalized over outcomes.
    pub fn transition_probability(
        &self,
        from: DichotomousValue,
        to: DichotomousValue,
        t0: f64,
        t: f64,
    ) -> Result<f64> {
        let dt = elapsed(t0, t)?;
        let evolved = self.propagator(dt) * self.state(from);
        Ok(self.state(to).dotc(&evolved).norm_sqr())
    }

    /// Squared norm of `U(dt)|from>`: the probability the meson has not decayed.
    pub fn survival(&self, from: DichotomousValue, dt: f64) -> Result<f64> {
        Ok(self.evolve(from, dt)?.norm_squared())
    }
}

pub(crate) fn check_elapsed(dt: f64) -> Result<()> {
    if dt.is_nan() || dt < 0.0 {
        Err(Error::NegativeTime(dt))
    } else {
        Ok(())
    }
}

pub(crate) fn elapsed(t0: f64, t: f64) -> Result<f64> {
    if t0.is_nan() || t0 < 0.0 {
        return Err(Error::NegativeTime(t0));
    }
    if t.is_nan() || t < t0 {
        return Err(Error::TimeOrder { t0, t });
    }
    Ok(t - t0)
}
