//! Composes the cooling and grid models into footprint reports, sweeps and
//! production projections.

use serde::{Deserialize, Serialize};

use crate::cooling::on_site_water;
use crate::energy::{to_server_basis, trace_from_stage, Basis, EnergyTrace, Pipeline, StageRecord};
use crate::environment::{validate_environment, Environment};
use crate::error::{Error, Result, ValidationErrors};
use crate::grid::{emissions, off_site_water};
use crate::quantities::{Emissions, Energy, TemperatureF, Water};

pub const CUMULATIVE_ROW: &str = "Total";

pub const MONTHS: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

/// On-site, off-site and combined water for one workload.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterBreakdown {
    pub on: Water,
    pub off: Water,
    pub total: Water,
    pub clamped_intervals: Vec<usize>,
}

/// Water consumed by `trace` in `env`. Facility-basis traces are divided by
/// the PUE first.
pub fn total_water(trace: &EnergyTrace, env: &Environment) -> Result<WaterBreakdown> {
    let env = validate_environment(env.clone())?;
    let server = to_server_basis(trace, env.dc.pue)?;
    let on = on_site_water(&server, &env.dc.tower, &env.dc.wet_bulb)?;
    let off = off_site_water(&server, &env.dc, &env.grid)?;
    Ok(WaterBreakdown {
        on: on.water,
        off,
        total: on.water + off,
        clamped_intervals: on.clamped_intervals,
    })
}

fn facility_energy(trace: &EnergyTrace, pue: f64) -> Energy {
    match trace.basis() {
        Basis::Facility => trace.total_energy(),
        Basis::Server => trace.total_energy().scaled(pue),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    pub message: String,
}

impl Diagnostic {
    fn clamped(stage: &str, intervals: &[usize]) -> Self {
        Self {
            code: "wue_on_clamped".into(),
            stage: Some(stage.to_string()),
            message: format!(
                "wet-bulb temperature below the cooling polynomial's root in {} interval(s); on-site WUE floored at 0",
                intervals.len()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FootprintRow {
    pub name: String,
    pub running_time_h: f64,
    pub facility_energy_kwh: Energy,
    pub emissions_kgco2e: Emissions,
    pub water_total_l: Water,
    pub water_on_l: Water,
    pub water_off_l: Water,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FootprintReport {
    pub label: String,
    pub stages: Vec<FootprintRow>,
    pub cumulative: FootprintRow,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
}

impl FootprintReport {
    /// Stage rows followed by the cumulative row.
    pub fn rows(&self) -> impl Iterator<Item = &FootprintRow> {
        self.stages.iter().chain(std::iter::once(&self.cumulative))
    }
}

fn row_for_trace(name: &str, trace: &EnergyTrace, env: &Environment) -> Result<(FootprintRow, Option<Diagnostic>)> {
    let water = total_water(trace, env)?;
    let facility = facility_energy(trace, env.dc.pue);
    let row = FootprintRow {
        name: name.to_string(),
        running_time_h: trace.total_duration_s() / 3600.0,
        facility_energy_kwh: facility,
        emissions_kgco2e: emissions(facility, env.grid.carbon_intensity),
        water_total_l: water.total,
        water_on_l: water.on,
        water_off_l: water.off,
    };
    let diag = (!water.clamped_intervals.is_empty()).then(|| Diagnostic::clamped(name, &water.clamped_intervals));
    Ok((row, diag))
}

fn cumulative(rows: &[FootprintRow]) -> FootprintRow {
    let on: Water = rows.iter().map(|r| r.water_on_l).sum();
    let off: Water = rows.iter().map(|r| r.water_off_l).sum();
    FootprintRow {
        name: CUMULATIVE_ROW.into(),
        running_time_h: rows.iter().map(|r| r.running_time_h).sum(),
        facility_energy_kwh: rows.iter().map(|r| r.facility_energy_kwh).sum(),
        emissions_kgco2e: rows.iter().map(|r| r.emissions_kgco2e).sum(),
        water_total_l: on + off,
        water_on_l: on,
        water_off_l: off,
    }
}

/// Per-stage and cumulative footprint of a pipeline of aggregate stage records.
///
/// Emissions use the grid's carbon intensity on facility energy. The
/// cumulative row sums unrounded stage values.
pub fn pipeline_report(p: &Pipeline, env: &Environment) -> Result<FootprintReport> {
    p.validate("pipeline.").into_result(())?;
    let mut stages = Vec::with_capacity(p.stages.len());
    let mut diagnostics = Vec::new();
    for stage in &p.stages {
        let (row, diag) = row_for_trace(&stage.name, &trace_from_stage(stage), env)?;
        stages.push(row);
        diagnostics.extend(diag);
    }
    Ok(FootprintReport {
        label: p.label.clone(),
        cumulative: cumulative(&stages),
        stages,
        diagnostics,
    })
}

/// Single-row report for a measured trace.
pub fn trace_report(label: &str, trace: &EnergyTrace, env: &Environment) -> Result<FootprintReport> {
    if trace.is_empty() {
        return Err(Error::invalid("trace", "trace contains no intervals"));
    }
    let (row, diag) = row_for_trace(label, trace, env)?;
    let stages = vec![row];
    Ok(FootprintReport {
        label: label.to_string(),
        cumulative: cumulative(&stages),
        stages,
        diagnostics: diag.into_iter().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub name: String,
    /// `None` when the row consumed no water.
    pub on_fraction: Option<f64>,
    pub off_fraction: Option<f64>,
}

pub fn on_off_breakdown(report: &FootprintReport) -> Vec<BreakdownRow> {
    report
        .rows()
        .map(|r| {
            let total = r.water_total_l.value();
            let (on, off) = if total > 0.0 {
                (Some(r.water_on_l.value() / total), Some(r.water_off_l.value() / total))
            } else {
                (None, None)
            };
            BreakdownRow {
                name: r.name.clone(),
                on_fraction: on,
                off_fraction: off,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub tag: String,
    pub wet_bulb_f: TemperatureF,
    pub report: FootprintReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

/// Evaluates `p` once per tagged constant wet-bulb temperature.
pub fn wet_bulb_sweep(p: &Pipeline, env_base: &Environment, points: &[(String, TemperatureF)]) -> Result<SweepResult> {
    let points = points
        .iter()
        .map(|(tag, t)| {
            Ok(SweepPoint {
                tag: tag.clone(),
                wet_bulb_f: *t,
                report: pipeline_report(p, &env_base.with_constant_wet_bulb(*t))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { points })
}

/// One report per calendar month, each at that month's mean wet-bulb temperature.
pub fn monthly_sweep(p: &Pipeline, env_base: &Environment, monthly_temps: &[TemperatureF]) -> Result<SweepResult> {
    if monthly_temps.len() != 12 {
        return Err(Error::invalid(
            "sweep.monthly_f",
            format!("expected 12 monthly temperatures, got {}", monthly_temps.len()),
        ));
    }
    let points: Vec<_> = MONTHS
        .iter()
        .zip(monthly_temps)
        .map(|(m, t)| (m.to_string(), *t))
        .collect();
    wet_bulb_sweep(p, env_base, &points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeOfDayComparison {
    pub morning_on_l: Water,
    pub afternoon_on_l: Water,
    /// Afternoon minus morning; negative when the morning is warmer.
    pub delta_l: f64,
}

/// On-site water of the whole pipeline at two wet-bulb temperatures.
pub fn time_of_day_compare(
    p: &Pipeline,
    env_base: &Environment,
    t_morning: TemperatureF,
    t_afternoon: TemperatureF,
) -> Result<TimeOfDayComparison> {
    let on = |t| pipeline_report(p, &env_base.with_constant_wet_bulb(t)).map(|r| r.cumulative.water_on_l);
    let morning = on(t_morning)?;
    let afternoon = on(t_afternoon)?;
    Ok(TimeOfDayComparison {
        morning_on_l: morning,
        afternoon_on_l: afternoon,
        delta_l: afternoon.value() - morning.value(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub queries_per_hour: f64,
    pub energy_per_query_kwh: Energy,
    pub energy_per_hour_kwh: Energy,
    pub emissions_per_hour_kgco2e: Emissions,
    pub water_per_hour_l: Water,
    /// Development queries divided by the stage's running time.
    pub implied_single_machine_qph: Option<f64>,
    /// Set when the requested load exceeds what the measured machine
    /// sustained; the figures are then a lower bound.
    pub over_capacity: bool,
}

/// Scales the per-query energy of a measured search stage to a production
/// query rate.
pub fn project_production(
    search_stage: &StageRecord,
    dev_query_count: u64,
    queries_per_hour: f64,
    env: &Environment,
) -> Result<Projection> {
    let mut errors = ValidationErrors::new();
    if dev_query_count == 0 {
        errors.push("projection.dev_query_count", "dev query count must be positive");
    }
    if !queries_per_hour.is_finite() || queries_per_hour < 0.0 {
        errors.push(
            "projection.qph",
            format!("queries per hour must be finite and non-negative, got {queries_per_hour}"),
        );
    }
    errors.extend(search_stage.validate("projection.search_stage."));
    errors.into_result(())?;

    let per_query = search_stage.power_kwh.divided_by(dev_query_count as f64);
    let hourly = EnergyTrace::single(per_query.scaled(queries_per_hour), 3600.0, search_stage.basis);
    let water = total_water(&hourly, env)?;
    let facility = facility_energy(&hourly, env.dc.pue);
    let implied = (search_stage.running_time_h > 0.0).then(|| dev_query_count as f64 / search_stage.running_time_h);

    Ok(Projection {
        queries_per_hour,
        energy_per_query_kwh: per_query,
        energy_per_hour_kwh: facility,
        emissions_per_hour_kgco2e: emissions(facility, env.grid.carbon_intensity),
        water_per_hour_l: water.total,
        implied_single_machine_qph: implied,
        over_capacity: implied.is_some_and(|cap| queries_per_hour > cap),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceRef {
    pub label: String,
    pub kg_co2e_per_unit: f64,
    pub unit_name: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EquivalenceSet(pub Vec<EquivalenceRef>);

impl EquivalenceSet {
    pub fn validate(&self, prefix: &str) -> ValidationErrors {
        let mut errors = ValidationErrors::new();
        for (i, r) in self.0.iter().enumerate() {
            if !r.kg_co2e_per_unit.is_finite() || r.kg_co2e_per_unit <= 0.0 {
                errors.push(
                    format!("{prefix}[{i}].kg_co2e_per_unit"),
                    format!("rate must be positive, got {}", r.kg_co2e_per_unit),
                );
            }
        }
        errors
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equivalent {
    pub label: String,
    pub unit_name: String,
    pub units: f64,
}

/// Expresses `em` as a count of each user-supplied reference activity.
pub fn equivalents(em: Emissions, refs: &EquivalenceSet) -> Result<Vec<Equivalent>> {
    refs.validate("equivalents").into_result(())?;
    Ok(refs
        .0
        .iter()
        .map(|r| Equivalent {
            label: r.label.clone(),
            unit_name: r.unit_name.clone(),
            units: em.value() / r.kg_co2e_per_unit,
        })
        .collect())
}
