//! Meson species: mixing constants and CP-violation parameterizations.
//!
//! Units throughout are hbar = c = 1 with times measured as `c*t` in
//! millimetres, so mass splittings and widths are in mm^-1.
//!
//! A species may carry both a pure-phase parameter `zeta` (with
//! `q/p = exp(i zeta)`) and a complex `epsilon`. Only one is ever used for a
//! given computation, and the caller picks it explicitly through
//! [`Parameterization`]. No conversion between the two is attempted.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Error, Result};

const BUILTIN_CONFIG: &str = include_str!("../config/species.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameterization {
    /// `q/p = exp(i zeta)`, `|p| = |q| = 1/sqrt(2)`.
    Zeta,
    /// `p ~ 1 + eps`, `q ~ 1 - eps`.
    Epsilon,
}

impl Parameterization {
    pub fn as_str(self) -> &'static str {
        match self {
            Parameterization::Zeta => "zeta",
            Parameterization::Epsilon => "epsilon",
        }
    }
}

impl fmt::Display for Parameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Mass-eigenstate composition `|M_L> = p|M> + q|Mbar>`, `|M_H> = p|M> - q|Mbar>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingAmplitudes {
    pub p: Complex64,
    pub q: Complex64,
}

impl MixingAmplitudes {
    pub fn q_over_p(&self) -> Complex64 {
        self.q / self.p
    }

    pub fn norm_sqr(&self) -> f64 {
        self.p.norm_sqr() + self.q.norm_sqr()
    }
}

/// `p = 1/sqrt(2)`, `q = exp(i zeta)/sqrt(2)`.
pub fn p_q_from_zeta(zeta: f64) -> MixingAmplitudes {
    MixingAmplitudes {
        p: Complex64::new(FRAC_1_SQRT_2, 0.0),
        q: Complex64::from_polar(FRAC_1_SQRT_2, zeta),
    }
}

/// `p = (1 + eps)/N`, `q = (1 - eps)/N` with `N = sqrt(2 (1 + |eps|^2))`.
///
/// These reproduce `|K_L> = p|K> - q|Kbar> = (eps|K_1> + |K_2>)/sqrt(1 + |eps|^2)`
/// and `|K_S> = p|K> + q|Kbar>`. `eps = +-1` makes one amplitude vanish and
/// is rejected.
pub fn p_q_from_epsilon(epsilon: Complex64) -> Result<MixingAmplitudes> {
    if !(epsilon.re.is_finite() && epsilon.im.is_finite()) {
        return Err(Error::InvalidParameterization(format!(
            "non-finite epsilon {epsilon}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let p = one + epsilon;
    let q = one - epsilon;
    let (p2, q2) = (p.norm_sqr(), q.norm_sqr());
    if p2 == 0.0 || q2 == 0.0 {
        return Err(Error::InvalidParameterization(format!(
            "epsilon = {epsilon} makes a mass-state amplitude vanish"
        )));
    }
    let norm = (p2 + q2).sqrt();
    Ok(MixingAmplitudes {
        p: p / norm,
        q: q / norm,
    })
}

/// Mixing and decay constants for one neutral meson system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MesonSpecies {
    name: String,
    delta_m: f64,
    gamma_l: f64,
    gamma_h: f64,
    zeta: Option<f64>,
    epsilon: Option<Complex64>,
    active: Parameterization,
}

impl MesonSpecies {
    /// A species using the pure-phase parameterization, `zeta` in radians.
    pub fn with_zeta(
        name: impl Into<String>,
        delta_m: f64,
        gamma_l: f64,
        gamma_h: f64,
        zeta: f64,
    ) -> Result<Self> {
        let species = Self {
            name: name.into(),
            delta_m,
            gamma_l,
            gamma_h,
            zeta: Some(zeta),
            epsilon: None,
            active: Parameterization::Zeta,
        };
        species.validate()?;
        Ok(species)
    }

    /// A species using the epsilon parameterization.
    pub fn with_epsilon(
        name: impl Into<String>,
        delta_m: f64,
        gamma_l: f64,
        gamma_h: f64,
        epsilon: Complex64,
    ) -> Result<Self> {
        let species = Self {
            name: name.into(),
            delta_m,
            gamma_l,
            gamma_h,
            zeta: None,
            epsilon: Some(epsilon),
            active: Parameterization::Epsilon,
        };
        species.validate()?;
        Ok(species)
    }

    /// Attach an epsilon value without changing the active parameterization.
    pub fn and_epsilon(mut self, epsilon: Complex64) -> Result<Self> {
        p_q_from_epsilon(epsilon)?;
        self.epsilon = Some(epsilon);
        Ok(self)
    }

    /// Attach a zeta value (radians) without changing the active parameterization.
    pub fn and_zeta(mut self, zeta: f64) -> Result<Self> {
        if !zeta.is_finite() {
            return Err(Error::InvalidParameterization(format!("zeta = {zeta}")));
        }
        self.zeta = Some(zeta);
        Ok(self)
    }

    pub fn activate(mut self, param: Parameterization) -> Result<Self> {
        self.mixing(param)?;
        self.active = param;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameterization(msg));
        if self.name.trim().is_empty() {
            return bad("empty species name".into());
        }
        if !self.delta_m.is_finite() || self.delta_m < 0.0 {
            return bad(format!(
                "delta_m = {} must be finite and >= 0",
                self.delta_m
            ));
        }
        for (label, g) in [("gamma_L", self.gamma_l), ("gamma_H", self.gamma_h)] {
            if !g.is_finite() || g < 0.0 {
                return bad(format!("{label} = {g} must be finite and >= 0"));
            }
        }
        if let Some(z) = self.zeta {
            if !z.is_finite() {
                return bad(format!("zeta = {z}"));
            }
        }
        self.mixing(self.active)?;
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `m_H - m_L` in mm^-1.
    pub fn delta_m(&self) -> f64 {
        self.delta_m
    }

    pub fn gamma_l(&self) -> f64 {
        self.gamma_l
    }

    pub fn gamma_h(&self) -> f64 {
        self.gamma_h
    }

    /// Phase of `q/p` in radians, if this species carries one.
    pub fn zeta(&self) -> Option<f64> {
        self.zeta
    }

    pub fn epsilon(&self) -> Option<Complex64> {
        self.epsilon
    }

    pub fn active_param(&self) -> Parameterization {
        self.active
    }

    /// `(p, q)` under the requested parameterization.
    pub fn mixing(&self, param: Parameterization) -> Result<MixingAmplitudes> {
        match param {
            Parameterization::Zeta => {
                self.zeta
                    .map(p_q_from_zeta)
                    .ok_or_else(|| Error::MissingParameterization {
                        species: self.name.clone(),
                        param: "zeta",
                    })
            }
            Parameterization::Epsilon => match self.epsilon {
                Some(eps) => p_q_from_epsilon(eps),
                None => Err(Error::MissingParameterization {
                    species: self.name.clone(),
                    param: "epsilon",
                }),
            },
        }
    }
}

/// One species entry in the configuration file schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesEntry {
    pub name: String,
    pub delta_m_inv_mm: f64,
    #[serde(rename = "gamma_L_inv_mm")]
    pub gamma_l_inv_mm: f64,
    #[serde(rename = "gamma_H_inv_mm")]
    pub gamma_h_inv_mm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_im: Option<f64>,
    pub active_param: Parameterization,
}

impl SpeciesEntry {
    fn into_species(self) -> std::result::Result<MesonSpecies, String> {
        let epsilon = match (self.epsilon_re, self.epsilon_im) {
            (Some(re), Some(im)) => Some(Complex64::new(re, im)),
            (None, None) => None,
            _ => return Err("epsilon_re and epsilon_im must be given together".into()),
        };
        let zeta = self.zeta_deg.map(f64::to_radians);
        let species = MesonSpecies {
            name: self.name,
            delta_m: self.delta_m_inv_mm,
            gamma_l: self.gamma_l_inv_mm,
            gamma_h: self.gamma_h_inv_mm,
            zeta,
            epsilon,
            active: self.active_param,
        };
        species.validate().map_err(|e| e.to_string())?;
        if let Some(eps) = epsilon {
            p_q_from_epsilon(eps).map_err(|e| e.to_string())?;
        }
        Ok(species)
    }
}

impl From<&MesonSpecies> for SpeciesEntry {
    fn from(s: &MesonSpecies) -> Self {
        SpeciesEntry {
            name: s.name.clone(),
            delta_m_inv_mm: s.delta_m,
            gamma_l_inv_mm: s.gamma_l,
            gamma_h_inv_mm: s.gamma_h,
            zeta_deg: s.zeta.map(f64::to_degrees),
            epsilon_re: s.epsilon.map(|e| e.re),
            epsilon_im: s.epsilon.map(|e| e.im),
            active_param: s.active,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDocument {
    #[serde(default)]
    species: Vec<SpeciesEntry>,
}

/// Named species loaded from configuration. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesRegistry {
    entries: BTreeMap<String, MesonSpecies>,
    order: Vec<String>,
}

impl SpeciesRegistry {
    /// The shipped K0, D0 and Bs defaults.
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN_CONFIG).expect("built-in species config is valid")
    }

    /// Parse a whole configuration document. Any bad entry fails the load.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let doc: ConfigDocument =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let mut entries = BTreeMap::new();
        let mut order = Vec::with_capacity(doc.species.len());
        for (index, entry) in doc.species.into_iter().enumerate() {
            let name = entry.name.clone();
            let species = entry.into_species().map_err(|message| ConfigError::Entry {
                index,
                name: name.clone(),
                message,
            })?;
            if entries.insert(name.clone(), species).is_some() {
                return Err(ConfigError::Duplicate(name));
            }
            order.push(name);
        }
        Ok(Self { entries, order })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    pub fn get(&self, name: &str) -> Result<&MesonSpecies> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownSpecies(name.to_string()))
    }

    /// Species in file order.
    pub fn iter(&self) -> impl Iterator<Item = &MesonSpecies> {
        self.order.iter().map(|n| &self.entries[n])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}
