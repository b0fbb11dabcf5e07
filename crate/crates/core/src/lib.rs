//! Energy, carbon and water footprint estimation for compute workloads.
//!
//! Water is split into on-site consumption (evaporative cooling at the data
//! center, driven by wet-bulb temperature and the cooling tower's cycles of
//! concentration) and off-site consumption (water embedded in the
//! electricity supply, scaled by PUE).
//!
//! ```
//! use aquameter_core::{pipeline_report, Basis, Environment, Pipeline, StageRecord};
//!
//! let p = Pipeline::new(
//!     "BM25",
//!     vec![StageRecord::new("BM25 Indexing", 0.0809, 0.0021, Basis::Facility).unwrap()],
//! )
//! .unwrap();
//! let report = pipeline_report(&p, &Environment::default()).unwrap();
//! assert!((report.cumulative.water_total_l.value() - 0.0108).abs() < 1e-4);
//! ```

pub mod bundled;
pub mod cooling;
pub mod energy;
pub mod environment;
pub mod error;
pub mod estimator;
pub mod grid;
pub mod quantities;
pub mod scenario;
pub mod service;

pub use cooling::{cooling_polynomial, on_site_water, wue_on, CoolingTower, OnSiteWater, WetBulbSource, WueOn};
pub use energy::{
    ingest_trace, read_trace_file, to_server_basis, trace_from_stage, write_trace, Basis, EnergyTrace, Interval,
    Pipeline, StageRecord,
};
pub use environment::{validate_environment, Environment};
pub use error::{Error, Result, ValidationError, ValidationErrors};
pub use estimator::{
    equivalents, monthly_sweep, on_off_breakdown, pipeline_report, project_production, time_of_day_compare,
    total_water, trace_report, wet_bulb_sweep, BreakdownRow, Diagnostic, EquivalenceRef, EquivalenceSet, Equivalent,
    FootprintReport, FootprintRow, Projection, SweepPoint, SweepResult, TimeOfDayComparison, WaterBreakdown,
};
pub use grid::{
    emissions, off_site_water, off_site_water_scheduled, wue_off, DataCenter, FuelMix, FuelShare, GridProfile,
    OffSiteSource,
};
pub use quantities::{
    celsius_from_fahrenheit, fahrenheit_from_celsius, CarbonIntensity, Emissions, Energy, QuantityError, TemperatureF,
    Water, Wue,
};
pub use scenario::{Overrides, Scenario, ScenarioDoc, Workload, SCENARIO_VERSION};
