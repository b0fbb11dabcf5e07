//! Off-site water from electricity generation, and carbon emissions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cooling::{CoolingTower, WetBulbSource};
use crate::energy::{Basis, EnergyTrace};
use crate::error::{Error, Result, ValidationErrors};
use crate::quantities::{CarbonIntensity, Emissions, Energy, Water, Wue};

/// One generation source in the supply mix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuelShare {
    pub fuel: String,
    /// Relative amount of electricity from this fuel; any non-negative scale.
    pub share: f64,
    /// Energy water intensity factor, L/kWh.
    pub ewif: Wue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FuelMix(pub Vec<FuelShare>);

impl FuelMix {
    pub fn validate(&self, prefix: &str) -> ValidationErrors {
        let mut errors = ValidationErrors::new();
        if self.0.is_empty() {
            errors.push(format!("{prefix}fuel_mix"), "fuel mix needs at least one entry");
            return errors;
        }
        let mut total = 0.0;
        for (i, entry) in self.0.iter().enumerate() {
            if !entry.share.is_finite() || entry.share < 0.0 {
                errors.push(
                    format!("{prefix}fuel_mix[{i}].share"),
                    format!("share must be finite and non-negative, got {}", entry.share),
                );
            } else {
                total += entry.share;
            }
        }
        if errors.is_empty() && total <= 0.0 {
            errors.push(format!("{prefix}fuel_mix"), "fuel shares must sum to more than 0");
        }
        errors
    }
}

/// Share-weighted mean of the fuels' water intensity factors.
pub fn wue_off(mix: &FuelMix) -> Result<Wue> {
    mix.validate("").into_result(())?;
    let (weighted, total) = mix
        .0
        .iter()
        .fold((0.0, 0.0), |(w, t), e| (w + e.share * e.ewif.value(), t + e.share));
    Wue::new(weighted / total).map_err(|e| Error::invalid("fuel_mix", e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffSiteSource {
    FuelMix(FuelMix),
    WueOff(Wue),
}

/// Electricity supply: where off-site water comes from, and its carbon intensity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridProfile {
    pub source: OffSiteSource,
    pub carbon_intensity: CarbonIntensity,
}

impl GridProfile {
    pub fn direct(wue_off: Wue, carbon_intensity: CarbonIntensity) -> Self {
        Self {
            source: OffSiteSource::WueOff(wue_off),
            carbon_intensity,
        }
    }

    pub fn validate(&self, prefix: &str) -> ValidationErrors {
        match &self.source {
            OffSiteSource::FuelMix(mix) => mix.validate(prefix),
            OffSiteSource::WueOff(_) => ValidationErrors::new(),
        }
    }

    pub fn wue_off(&self) -> Result<Wue> {
        match &self.source {
            OffSiteSource::FuelMix(mix) => wue_off(mix),
            OffSiteSource::WueOff(w) => Ok(*w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataCenter {
    pub pue: f64,
    pub tower: CoolingTower,
    pub wet_bulb: WetBulbSource,
}

impl DataCenter {
    pub fn validate(&self, prefix: &str) -> ValidationErrors {
        let mut errors = ValidationErrors::new();
        if !self.pue.is_finite() || self.pue < 1.0 {
            errors.push(format!("{prefix}pue"), format!("PUE must be ≥ 1, got {}", self.pue));
        }
        errors.extend(self.tower.validate(&format!("{prefix}tower.")));
        errors.extend(self.wet_bulb.validate(&format!("{prefix}wet_bulb.")));
        errors
    }
}

/// Sum over intervals of server energy × PUE × off-site WUE.
pub fn off_site_water(trace: &EnergyTrace, dc: &DataCenter, grid: &GridProfile) -> Result<Water> {
    off_site_water_scheduled(trace, dc, grid, &BTreeMap::new())
}

/// Like [`off_site_water`], with per-interval grid overrides keyed by
/// interval index. Intervals without an override use `base`.
pub fn off_site_water_scheduled(
    trace: &EnergyTrace,
    dc: &DataCenter,
    base: &GridProfile,
    overrides: &BTreeMap<usize, GridProfile>,
) -> Result<Water> {
    if trace.basis() != Basis::Server {
        return Err(Error::invalid(
            "trace.basis",
            "off-site water requires server-basis energy",
        ));
    }
    dc.validate("dc.").into_result(())?;
    let base_wue = base.wue_off()?;
    let mut water = Water::ZERO;
    for (i, iv) in trace.intervals().iter().enumerate() {
        let wue = match overrides.get(&i) {
            Some(g) => g.wue_off()?,
            None => base_wue,
        };
        water += iv.energy.scaled(dc.pue) * wue;
    }
    Ok(water)
}

pub fn emissions(facility_energy: Energy, ci: CarbonIntensity) -> Emissions {
    facility_energy * ci
}
