// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT_CM_PER_FS;
use crate::error::{Error, Result};

/// Registry shipped with the crate.
pub const BUILTIN_REGISTRY: &str = include_str!("../../data/species.toml");

/// Which rotational levels N exist for a species.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    All,
    Even,
    Odd,
}

impl Parity {
    pub fn allows(self, n: u32) -> bool {
        match self {
            Parity::All => true,
            Parity::Even => n.is_multiple_of(2),
            Parity::Odd => !n.is_multiple_of(2),
        }
    }

    /// Lowest allowed N.
    pub fn lowest(self) -> u32 {
        match self {
            Parity::All | Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// Spacing between consecutive allowed N.
    pub fn step(self) -> u32 {
        match self {
            Parity::All => 1,
            Parity::Even | Parity::Odd => 2,
        }
    }
}

/// Molecular constants of a linear rigid rotor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Species {
    pub name: String,
    /// Rotational constant, cm⁻¹.
    #[serde(rename = "B")]
    pub b: f64,
    /// Centrifugal distortion constant, cm⁻¹.
    #[serde(rename = "D")]
    pub d: f64,
    pub parity: Parity,
}

impl Species {
    pub fn new(name: impl Into<String>, b: f64, d: f64, parity: Parity) -> Result<Self> {
        let species = Species {
            name: name.into(),
            b,
            d,
            parity,
        };
        species.validate()?;
        Ok(species)
    }

    /// Ground-state O₂ from the built-in registry.
    pub fn oxygen() -> Self {
        SpeciesRegistry::builtin()
            .get("O2")
            .expect("built-in registry carries O2")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b.is_finite() && self.b > 0.0) {
            return Err(Error::invalid(format!(
                "species {}: B must be positive, got {}",
                self.name, self.b
            )));
        }
        if !(self.d.is_finite() && self.d >= 0.0) {
            return Err(Error::invalid(format!(
                "species {}: D must be non-negative, got {}",
                self.name, self.d
            )));
        }
        if self.d >= 1e-3 * self.b {
            return Err(Error::invalid(format!(
                "species {}: D = {} is not small against B = {} (need D < 1e-3 B)",
                self.name, self.d, self.b
            )));
        }
        Ok(())
    }

    pub(crate) fn check_allowed(&self, n: u32) -> Result<()> {
        if self.parity.allows(n) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "N = {n} is not an allowed level of {} ({:?} parity)",
                self.name, self.parity
            )))
        }
    }

    /// Energy of level N in cm⁻¹ without the parity check.
    pub(crate) fn energy_unchecked(&self, n: u32) -> f64 {
        let k = f64::from(n) * f64::from(n + 1);
        self.b * k - self.d * k * k
    }
}

/// Rotational energy B·N(N+1) − D·N²(N+1)² in cm⁻¹.
pub fn rotational_energy(species: &Species, n: u32) -> Result<f64> {
    species.check_allowed(n)?;
    Ok(species.energy_unchecked(n))
}

/// Evolution period 1/(c·(E_N − E_{N−2})) of the two-level wavepacket
/// {N−2, N}, in fs.
pub fn beat_period(species: &Species, n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid(format!("beat period needs N >= 2, got {n}")));
    }
    species.check_allowed(n)?;
    species.check_allowed(n - 2)?;
    let gap = species.energy_unchecked(n) - species.energy_unchecked(n - 2);
    Ok(1.0 / (SPEED_OF_LIGHT_CM_PER_FS * gap))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryEntry {
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "D", default)]
    d: f64,
    parity: Parity,
}

/// Named molecular constants loaded from a TOML table per species:
///
/// ```toml
/// [O2]
/// B = 1.43768       # cm⁻¹, > 0
/// D = 4.842e-6      # cm⁻¹, >= 0 and < 1e-3 B (optional, default 0)
/// parity = "odd"    # "all" | "even" | "odd"
/// ```
#[derive(Clone, Debug, Default)]
pub struct SpeciesRegistry {
    entries: BTreeMap<String, Species>,
}

impl SpeciesRegistry {
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN_REGISTRY).expect("built-in species registry is valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, RegistryEntry> =
            toml::from_str(text).map_err(|e| Error::Config(vec![format!("species registry: {e}")]))?;
        let mut problems = Vec::new();
        let mut entries = BTreeMap::new();
        for (name, entry) in raw {
            let species = Species {
                name: name.clone(),
                b: entry.b,
                d: entry.d,
                parity: entry.parity,
            };
            match species.validate() {
                Ok(()) => {
                    entries.insert(name, species);
                }
                Err(e) => problems.push(format!("species registry: {e}")),
            }
        }
        if !problems.is_empty() {
            return Err(Error::Config(problems));
        }
        Ok(SpeciesRegistry { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn get(&self, name: &str) -> Option<Species> {
        self.entries.get(name).cloned()
    }

    pub fn lookup(&self, name: &str) -> Result<Species> {
        self.get(name).ok_or_else(|| {
            Error::Config(vec![format!(
                "species: unknown species {name:?} (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            )])
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
