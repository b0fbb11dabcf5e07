//! Data-center and grid context shared by every estimate.

use serde::{Deserialize, Serialize};

use crate::cooling::{CoolingTower, WetBulbSource};
use crate::error::ValidationErrors;
use crate::grid::{DataCenter, GridProfile, OffSiteSource};
use crate::quantities::{CarbonIntensity, TemperatureF, Wue};

/// Reference data center PUE.
pub const DEFAULT_PUE: f64 = 1.89;
/// Cycles of concentration of the reference cooling tower.
pub const DEFAULT_CYCLES: f64 = 2.25;
pub const DEFAULT_TOWER_LABEL: &str = "A";
/// Annual mean 3pm wet-bulb temperature in Brisbane, °F.
pub const DEFAULT_WET_BULB_F: f64 = 65.3;
/// Combined off-site WUE representative of Brisbane's supply, L/kWh.
pub const DEFAULT_WUE_OFF: f64 = 1.8;
/// Grid intensity fitted as the emissions/power ratio of published
/// experiment measurements, kgCO₂e/kWh.
pub const DEFAULT_CARBON_INTENSITY: f64 = 0.766;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub dc: DataCenter,
    pub grid: GridProfile,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            dc: DataCenter {
                pue: DEFAULT_PUE,
                tower: CoolingTower {
                    label: DEFAULT_TOWER_LABEL.into(),
                    cycles_of_concentration: DEFAULT_CYCLES,
                },
                wet_bulb: WetBulbSource::Constant(TemperatureF::new(DEFAULT_WET_BULB_F).unwrap()),
            },
            grid: GridProfile {
                source: OffSiteSource::WueOff(Wue::new(DEFAULT_WUE_OFF).unwrap()),
                carbon_intensity: CarbonIntensity::new(DEFAULT_CARBON_INTENSITY).unwrap(),
            },
        }
    }
}

impl Environment {
    pub fn with_wet_bulb(&self, wet_bulb: WetBulbSource) -> Self {
        let mut env = self.clone();
        env.dc.wet_bulb = wet_bulb;
        env
    }

    pub fn with_constant_wet_bulb(&self, t: TemperatureF) -> Self {
        self.with_wet_bulb(WetBulbSource::Constant(t))
    }
}

/// Checks every component invariant and reports all violations at once.
pub fn validate_environment(env: Environment) -> Result<Environment, ValidationErrors> {
    let mut errors = env.dc.validate("environment.dc.");
    errors.extend(env.grid.validate("environment.grid."));
    errors.into_result(env)
}
