//! Request/response documents shared by the CLI's JSON output and the HTTP
//! service, so both front ends emit identical numbers.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bundled;
use crate::environment::{DEFAULT_CARBON_INTENSITY, DEFAULT_CYCLES, DEFAULT_PUE, DEFAULT_WET_BULB_F, DEFAULT_WUE_OFF};
use crate::error::{Error, Result};
use crate::estimator::{
    equivalents, monthly_sweep, on_off_breakdown, pipeline_report, project_production, time_of_day_compare,
    trace_report, wet_bulb_sweep, BreakdownRow, Equivalent, FootprintReport, Projection, SweepPoint,
    TimeOfDayComparison,
};
use crate::scenario::{Scenario, ScenarioDoc, Workload, SCENARIO_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResponse {
    /// The request with defaults filled in.
    pub parameters: ScenarioDoc,
    #[serde(flatten)]
    pub report: FootprintReport,
    pub breakdown: Vec<BreakdownRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equivalents: Vec<Equivalent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Monthly,
    Diurnal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub kind: SweepKind,
    #[serde(flatten)]
    pub scenario: ScenarioDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResponse {
    pub parameters: ScenarioDoc,
    pub kind: SweepKind,
    pub points: Vec<SweepPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<TimeOfDayComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectResponse {
    pub parameters: ScenarioDoc,
    pub search_stage: String,
    pub dev_query_count: u64,
    pub rows: Vec<Projection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defaults {
    pub version: String,
    pub pue: f64,
    pub cycles_of_concentration: f64,
    pub wet_bulb_f: f64,
    pub wue_off: f64,
    pub ci: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedScenario {
    pub name: String,
    pub scenario: ScenarioDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefaultsResponse {
    pub defaults: Defaults,
    pub scenarios: Vec<NamedScenario>,
}

fn resolved(doc: &ScenarioDoc, base_dir: Option<&Path>) -> Result<(ScenarioDoc, Scenario)> {
    let scenario = doc.resolve(base_dir)?;
    Ok((doc.normalized(), scenario))
}

pub fn estimate(doc: &ScenarioDoc, base_dir: Option<&Path>) -> Result<EstimateResponse> {
    let (parameters, scenario) = resolved(doc, base_dir)?;
    let report = match &scenario.workload {
        Workload::Pipeline(p) => pipeline_report(p, &scenario.environment)?,
        Workload::Trace { label, trace, .. } => trace_report(label, trace, &scenario.environment)?,
    };
    let equivalents = equivalents(report.cumulative.emissions_kgco2e, &scenario.equivalents)?;
    Ok(EstimateResponse {
        parameters,
        breakdown: on_off_breakdown(&report),
        report,
        equivalents,
    })
}

pub fn sweep(doc: &ScenarioDoc, base_dir: Option<&Path>, kind: SweepKind) -> Result<SweepResponse> {
    let (parameters, scenario) = resolved(doc, base_dir)?;
    let p = scenario.pipeline()?;
    let env = &scenario.environment;
    let spec = scenario.sweep.clone().unwrap_or_default();
    match kind {
        SweepKind::Monthly => {
            let temps = spec
                .monthly
                .ok_or_else(|| Error::invalid("sweep.monthly_f", "scenario has no monthly sweep temperatures"))?;
            Ok(SweepResponse {
                parameters,
                kind,
                points: monthly_sweep(p, env, &temps)?.points,
                comparison: None,
            })
        }
        SweepKind::Diurnal => {
            let d = spec
                .diurnal
                .ok_or_else(|| Error::invalid("sweep.diurnal", "scenario has no diurnal sweep temperatures"))?;
            let points = wet_bulb_sweep(
                p,
                env,
                &[
                    (d.morning_label.clone(), d.morning),
                    (d.afternoon_label.clone(), d.afternoon),
                ],
            )?
            .points;
            Ok(SweepResponse {
                parameters,
                kind,
                points,
                comparison: Some(time_of_day_compare(p, env, d.morning, d.afternoon)?),
            })
        }
    }
}

/// Production projection at each rate in `qph`, or the scenario's own list.
pub fn project(doc: &ScenarioDoc, base_dir: Option<&Path>, qph: Option<&[f64]>) -> Result<ProjectResponse> {
    let (parameters, scenario) = resolved(doc, base_dir)?;
    let p = scenario.pipeline()?;
    let spec = scenario
        .projection
        .as_ref()
        .ok_or_else(|| Error::invalid("projection", "scenario has no projection settings"))?;
    let stage = spec
        .resolve_stage(p)
        .map_err(|e| Error::invalid("projection.search_stage", e))?;
    let rates = qph.unwrap_or(&spec.qph);
    let rows = rates
        .iter()
        .map(|q| project_production(stage, spec.dev_query_count, *q, &scenario.environment))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectResponse {
        parameters,
        search_stage: stage.name.clone(),
        dev_query_count: spec.dev_query_count,
        rows,
    })
}

pub fn defaults() -> DefaultsResponse {
    DefaultsResponse {
        defaults: Defaults {
            version: SCENARIO_VERSION.into(),
            pue: DEFAULT_PUE,
            cycles_of_concentration: DEFAULT_CYCLES,
            wet_bulb_f: DEFAULT_WET_BULB_F,
            wue_off: DEFAULT_WUE_OFF,
            ci: DEFAULT_CARBON_INTENSITY,
        },
        scenarios: bundled::scenarios()
            .into_iter()
            .map(|(name, scenario)| NamedScenario {
                name: name.to_string(),
                scenario,
            })
            .collect(),
    }
}
