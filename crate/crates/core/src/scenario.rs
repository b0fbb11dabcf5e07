//! Scenario documents: one JSON file bundling environment, workload and
//! optional sweep/projection/equivalence settings.
//!
//! The document layer ([`ScenarioDoc`]) holds raw numbers so that resolving
//! it into domain types can report every invalid field at once.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cooling::{CoolingTower, WetBulbSource};
use crate::energy::{read_trace_file, Basis, EnergyTrace, Pipeline, StageRecord};
use crate::environment::{
    validate_environment, Environment, DEFAULT_CARBON_INTENSITY, DEFAULT_CYCLES, DEFAULT_PUE, DEFAULT_TOWER_LABEL,
    DEFAULT_WET_BULB_F, DEFAULT_WUE_OFF,
};
use crate::error::{Error, Result, ValidationError, ValidationErrors};
use crate::estimator::{EquivalenceRef, EquivalenceSet};
use crate::grid::{DataCenter, FuelMix, FuelShare, GridProfile, OffSiteSource};
use crate::quantities::{fahrenheit_from_celsius, CarbonIntensity, Energy, QuantityError, TemperatureF, Wue};

pub const SCENARIO_VERSION: &str = "aquameter/1";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(default)]
    pub environment: EnvironmentDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PipelineDoc>,
    /// Path to a trace CSV, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<ProjectionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivalents: Option<Vec<EquivalenceRef>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles_of_concentration: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wet_bulb: Option<WetBulbDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wue_off: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuel_mix: Option<Vec<FuelDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carbon_intensity: Option<f64>,
}

/// Exactly one field must be set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WetBulbDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monthly_f: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monthly_c: Option<Vec<f64>>,
    /// `[interval_index, °F]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_f: Option<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuelDoc {
    pub fuel: String,
    pub share: f64,
    pub ewif: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineDoc {
    pub label: String,
    pub stages: Vec<StageDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageDoc {
    pub name: String,
    pub running_time_h: f64,
    pub power_kwh: f64,
    /// Defaults to facility, the convention of published experiment tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Basis>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monthly_f: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diurnal: Option<DiurnalDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiurnalDoc {
    pub morning_f: f64,
    pub afternoon_f: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morning_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub afternoon_label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionDoc {
    /// Stage whose energy is scaled; defaults to the last search/rerank stage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_stage: Option<String>,
    pub dev_query_count: u64,
    #[serde(default)]
    pub qph: Vec<f64>,
}

/// Command-line style overrides; each one beats the document's value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub pue: Option<f64>,
    pub wue_off: Option<f64>,
    pub cycles: Option<f64>,
    pub wet_bulb_f: Option<f64>,
    pub ci: Option<f64>,
}

impl ScenarioDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario documents always serialize")
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        let env = &mut self.environment;
        if let Some(v) = o.pue {
            env.pue = Some(v);
        }
        if let Some(v) = o.cycles {
            env.cycles_of_concentration = Some(v);
        }
        if let Some(v) = o.wet_bulb_f {
            env.wet_bulb = Some(WetBulbDoc {
                constant_f: Some(v),
                ..Default::default()
            });
        }
        if let Some(v) = o.wue_off {
            env.wue_off = Some(v);
            env.fuel_mix = None;
        }
        if let Some(v) = o.ci {
            env.carbon_intensity = Some(v);
        }
    }

    /// Copy with every defaultable field filled in.
    pub fn normalized(&self) -> ScenarioDoc {
        let mut doc = self.clone();
        doc.version = Some(SCENARIO_VERSION.into());
        let env = &mut doc.environment;
        env.pue.get_or_insert(DEFAULT_PUE);
        env.tower_label.get_or_insert_with(|| DEFAULT_TOWER_LABEL.into());
        env.cycles_of_concentration.get_or_insert(DEFAULT_CYCLES);
        env.wet_bulb.get_or_insert_with(|| WetBulbDoc {
            constant_f: Some(DEFAULT_WET_BULB_F),
            ..Default::default()
        });
        if env.fuel_mix.is_none() {
            env.wue_off.get_or_insert(DEFAULT_WUE_OFF);
        }
        env.carbon_intensity.get_or_insert(DEFAULT_CARBON_INTENSITY);
        if let Some(p) = &mut doc.pipeline {
            for s in &mut p.stages {
                s.basis.get_or_insert(Basis::Facility);
            }
        }
        doc
    }

    /// Resolves the document into validated domain values.
    ///
    /// `base_dir` anchors relative trace paths; `None` means file references
    /// are not allowed (inline requests).
    pub fn resolve(&self, base_dir: Option<&Path>) -> Result<Scenario> {
        let mut errors = ValidationErrors::new();
        if let Some(v) = &self.version {
            if v != SCENARIO_VERSION {
                errors.push(
                    "version",
                    format!("unsupported scenario version {v:?}; this build reads {SCENARIO_VERSION:?}"),
                );
            }
        }

        let environment = resolve_environment(&self.environment, &mut errors);

        let workload = match (&self.pipeline, &self.trace) {
            (Some(_), Some(_)) => {
                errors.push("", "scenario must give either a pipeline or a trace, not both");
                None
            }
            (None, None) => {
                errors.push("pipeline", "scenario needs a pipeline or a trace");
                None
            }
            (Some(p), None) => resolve_pipeline(p, &mut errors).map(Workload::Pipeline),
            (None, Some(path)) => match base_dir {
                None => {
                    errors.push("trace", "file references are not accepted here; inline the pipeline");
                    None
                }
                Some(dir) => {
                    // I/O and trace-format problems abort immediately.
                    errors.clone().into_result(())?;
                    let full = dir.join(path);
                    let trace = read_trace_file(&full)?;
                    let label = full
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| path.clone());
                    Some(Workload::Trace {
                        path: full,
                        label,
                        trace,
                    })
                }
            },
        };

        let sweep = self.sweep.as_ref().map(|s| SweepSpec {
            monthly: s.monthly_f.as_ref().and_then(|temps| {
                if temps.len() != 12 {
                    errors.push(
                        "sweep.monthly_f",
                        format!("expected 12 monthly temperatures, got {}", temps.len()),
                    );
                    return None;
                }
                temps_f(temps, "sweep.monthly_f", &mut errors)
            }),
            diurnal: s.diurnal.as_ref().and_then(|d| {
                let morning = temp_f(d.morning_f, "sweep.diurnal.morning_f", &mut errors)?;
                let afternoon = temp_f(d.afternoon_f, "sweep.diurnal.afternoon_f", &mut errors)?;
                Some(DiurnalSpec {
                    morning,
                    afternoon,
                    morning_label: d.morning_label.clone().unwrap_or_else(|| "9am".into()),
                    afternoon_label: d.afternoon_label.clone().unwrap_or_else(|| "3pm".into()),
                })
            }),
        });

        let projection = self.projection.as_ref().map(|p| {
            if p.dev_query_count == 0 {
                errors.push("projection.dev_query_count", "dev query count must be positive");
            }
            for (i, q) in p.qph.iter().enumerate() {
                if !q.is_finite() || *q < 0.0 {
                    errors.push(
                        format!("projection.qph[{i}]"),
                        format!("queries per hour must be finite and non-negative, got {q}"),
                    );
                }
            }
            ProjectionSpec {
                search_stage: p.search_stage.clone(),
                dev_query_count: p.dev_query_count,
                qph: p.qph.clone(),
            }
        });

        let equivalents = EquivalenceSet(self.equivalents.clone().unwrap_or_default());
        errors.extend(equivalents.validate("equivalents"));

        if let (Some(Workload::Pipeline(p)), Some(proj)) = (&workload, &projection) {
            if let Err(e) = proj.resolve_stage(p) {
                errors.push("projection.search_stage", e);
            }
        }

        errors.into_result(())?;
        Ok(Scenario {
            environment: environment.expect("environment resolved when no errors"),
            workload: workload.expect("workload resolved when no errors"),
            sweep,
            projection,
            equivalents,
        })
    }
}

fn quantity<T>(
    value: f64,
    path: &str,
    errors: &mut ValidationErrors,
    make: fn(f64) -> Result<T, QuantityError>,
) -> Option<T> {
    match make(value) {
        Ok(q) => Some(q),
        Err(e) => {
            errors.0.push(ValidationError::from_quantity(path, e));
            None
        }
    }
}

fn temp_f(value: f64, path: &str, errors: &mut ValidationErrors) -> Option<TemperatureF> {
    quantity(value, path, errors, TemperatureF::new)
}

fn temps_f(values: &[f64], path: &str, errors: &mut ValidationErrors) -> Option<Vec<TemperatureF>> {
    let out: Vec<_> = values
        .iter()
        .enumerate()
        .map(|(i, v)| temp_f(*v, &format!("{path}[{i}]"), errors))
        .collect();
    out.into_iter().collect()
}

fn temps_c(values: &[f64], path: &str, errors: &mut ValidationErrors) -> Option<Vec<TemperatureF>> {
    let out: Vec<_> = values
        .iter()
        .enumerate()
        .map(|(i, v)| quantity(*v, &format!("{path}[{i}]"), errors, fahrenheit_from_celsius))
        .collect();
    out.into_iter().collect()
}

fn resolve_wet_bulb(doc: &WetBulbDoc, errors: &mut ValidationErrors) -> Option<WetBulbSource> {
    const P: &str = "environment.wet_bulb";
    let set = [
        doc.constant_f.is_some(),
        doc.constant_c.is_some(),
        doc.monthly_f.is_some(),
        doc.monthly_c.is_some(),
        doc.schedule_f.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if set != 1 {
        errors.push(
            P,
            "exactly one of constant_f, constant_c, monthly_f, monthly_c, schedule_f must be set",
        );
        return None;
    }
    let monthly = |temps: Option<Vec<TemperatureF>>, errors: &mut ValidationErrors| {
        let temps = temps?;
        if temps.len() != 12 {
            errors.push(
                format!("{P}.monthly"),
                format!("expected 12 monthly temperatures, got {}", temps.len()),
            );
            return None;
        }
        Some(WetBulbSource::Monthly(temps))
    };
    if let Some(t) = doc.constant_f {
        temp_f(t, &format!("{P}.constant_f"), errors).map(WetBulbSource::Constant)
    } else if let Some(t) = doc.constant_c {
        quantity(t, &format!("{P}.constant_c"), errors, fahrenheit_from_celsius).map(WetBulbSource::Constant)
    } else if let Some(ts) = &doc.monthly_f {
        let temps = temps_f(ts, &format!("{P}.monthly_f"), errors);
        monthly(temps, errors)
    } else if let Some(ts) = &doc.monthly_c {
        let temps = temps_c(ts, &format!("{P}.monthly_c"), errors);
        monthly(temps, errors)
    } else {
        let pairs = doc.schedule_f.as_ref()?;
        let mut map = BTreeMap::new();
        for (i, (idx, t)) in pairs.iter().enumerate() {
            if let Some(t) = temp_f(*t, &format!("{P}.schedule_f[{i}]"), errors) {
                if map.insert(*idx, t).is_some() {
                    errors.push(format!("{P}.schedule_f[{i}]"), format!("interval {idx} listed twice"));
                }
            }
        }
        Some(WetBulbSource::Schedule(map))
    }
}

fn resolve_environment(doc: &EnvironmentDoc, errors: &mut ValidationErrors) -> Option<Environment> {
    let wet_bulb = match &doc.wet_bulb {
        Some(w) => resolve_wet_bulb(w, errors),
        None => Some(WetBulbSource::Constant(TemperatureF::new(DEFAULT_WET_BULB_F).unwrap())),
    };
    let source = match (&doc.wue_off, &doc.fuel_mix) {
        (Some(_), Some(_)) => {
            errors.push("environment", "set either wue_off or fuel_mix, not both");
            None
        }
        (Some(w), None) => quantity(*w, "environment.wue_off", errors, Wue::new).map(OffSiteSource::WueOff),
        (None, None) => Some(OffSiteSource::WueOff(Wue::new(DEFAULT_WUE_OFF).unwrap())),
        (None, Some(mix)) => {
            let entries: Vec<_> = mix
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    quantity(f.ewif, &format!("environment.fuel_mix[{i}].ewif"), errors, Wue::new).map(|ewif| {
                        FuelShare {
                            fuel: f.fuel.clone(),
                            share: f.share,
                            ewif,
                        }
                    })
                })
                .collect();
            entries
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .map(|e| OffSiteSource::FuelMix(FuelMix(e)))
        }
    };
    let ci = quantity(
        doc.carbon_intensity.unwrap_or(DEFAULT_CARBON_INTENSITY),
        "environment.carbon_intensity",
        errors,
        CarbonIntensity::new,
    );

    let env = Environment {
        dc: DataCenter {
            pue: doc.pue.unwrap_or(DEFAULT_PUE),
            tower: CoolingTower {
                label: doc.tower_label.clone().unwrap_or_else(|| DEFAULT_TOWER_LABEL.into()),
                cycles_of_concentration: doc.cycles_of_concentration.unwrap_or(DEFAULT_CYCLES),
            },
            wet_bulb: wet_bulb.unwrap_or(WetBulbSource::Constant(TemperatureF::new(DEFAULT_WET_BULB_F).unwrap())),
        },
        grid: GridProfile {
            source: source.unwrap_or(OffSiteSource::WueOff(Wue::ZERO)),
            carbon_intensity: ci.unwrap_or(CarbonIntensity::ZERO),
        },
    };
    match validate_environment(env) {
        Ok(env) => Some(env),
        Err(e) => {
            errors.extend(e);
            None
        }
    }
}

fn resolve_pipeline(doc: &PipelineDoc, errors: &mut ValidationErrors) -> Option<Pipeline> {
    let mut ok = true;
    let stages: Vec<StageRecord> = doc
        .stages
        .iter()
        .enumerate()
        .filter_map(|(i, s)| {
            let power = quantity(
                s.power_kwh,
                &format!("pipeline.stages[{i}].power_kwh"),
                errors,
                Energy::new,
            );
            ok &= power.is_some();
            power.map(|power_kwh| StageRecord {
                name: s.name.clone(),
                running_time_h: s.running_time_h,
                power_kwh,
                basis: s.basis.unwrap_or(Basis::Facility),
            })
        })
        .collect();
    let pipeline = Pipeline {
        label: doc.label.clone(),
        stages,
    };
    let problems = pipeline.validate("pipeline.");
    let valid = problems.is_empty();
    errors.extend(problems);
    (ok && valid).then_some(pipeline)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Workload {
    Pipeline(Pipeline),
    Trace {
        path: PathBuf,
        label: String,
        trace: EnergyTrace,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiurnalSpec {
    pub morning: TemperatureF,
    pub afternoon: TemperatureF,
    pub morning_label: String,
    pub afternoon_label: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepSpec {
    pub monthly: Option<Vec<TemperatureF>>,
    pub diurnal: Option<DiurnalSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSpec {
    pub search_stage: Option<String>,
    pub dev_query_count: u64,
    pub qph: Vec<f64>,
}

impl ProjectionSpec {
    /// The named stage, or the last stage whose name mentions search or rerank.
    pub fn resolve_stage<'p>(&self, p: &'p Pipeline) -> Result<&'p StageRecord, String> {
        match &self.search_stage {
            Some(name) => p
                .stage(name)
                .ok_or_else(|| format!("no stage named {name:?} in pipeline {:?}", p.label)),
            None => p
                .stages
                .iter()
                .rev()
                .find(|s| {
                    let n = s.name.to_lowercase();
                    n.contains("search") || n.contains("rerank")
                })
                .ok_or_else(|| "no search or rerank stage found; set projection.search_stage".to_string()),
        }
    }
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub environment: Environment,
    pub workload: Workload,
    pub sweep: Option<SweepSpec>,
    pub projection: Option<ProjectionSpec>,
    pub equivalents: EquivalenceSet,
}

impl Scenario {
    pub fn pipeline(&self) -> Result<&Pipeline> {
        match &self.workload {
            Workload::Pipeline(p) => Ok(p),
            Workload::Trace { .. } => Err(Error::invalid(
                "pipeline",
                "this command needs a pipeline workload, not a trace",
            )),
        }
    }
}

pub fn load_scenario_doc(path: &Path) -> Result<ScenarioDoc> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioDoc::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ScenarioDoc {
        ScenarioDoc::from_json(
            r#"{"version":"aquameter/1","pipeline":{"label":"x","stages":[
                {"name":"Search","running_time_h":1.0,"power_kwh":2.0}]}}"#,
        )
        .unwrap()
    }

    #[test]
    fn defaults_fill_in() {
        let s = minimal().resolve(None).unwrap();
        assert_eq!(s.environment, Environment::default());
        let n = minimal().normalized();
        assert_eq!(n.environment.pue, Some(1.89));
        assert_eq!(n.pipeline.unwrap().stages[0].basis, Some(Basis::Facility));
    }

    #[test]
    fn normalizing_does_not_change_resolution() {
        let d = minimal();
        assert_eq!(d.resolve(None).unwrap(), d.normalized().resolve(None).unwrap());
    }

    #[test]
    fn rejects_future_versions() {
        let mut d = minimal();
        d.version = Some("aquameter/2".into());
        let err = d.resolve(None).unwrap_err().to_string();
        assert!(err.contains("unsupported scenario version"), "{err}");
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(ScenarioDoc::from_json(r#"{"pipelines": []}"#).is_err());
    }

    #[test]
    fn collects_all_errors() {
        let mut d = minimal();
        d.environment.pue = Some(0.8);
        d.environment.cycles_of_concentration = Some(1.0);
        d.environment.carbon_intensity = Some(-1.0);
        d.pipeline.as_mut().unwrap().stages[0].power_kwh = -3.0;
        let Error::Invalid(errs) = d.resolve(None).unwrap_err() else {
            panic!("expected validation errors")
        };
        let paths: Vec<_> = errs.iter().map(|e| e.path.as_str()).collect();
        assert!(paths.contains(&"environment.dc.pue"), "{paths:?}");
        assert!(
            paths.contains(&"environment.dc.tower.cycles_of_concentration"),
            "{paths:?}"
        );
        assert!(paths.contains(&"environment.carbon_intensity"), "{paths:?}");
        assert!(paths.contains(&"pipeline.stages[0].power_kwh"), "{paths:?}");
    }

    #[test]
    fn overrides_beat_file_values() {
        let mut d = minimal();
        d.environment.fuel_mix = Some(vec![FuelDoc {
            fuel: "coal".into(),
            share: 1.0,
            ewif: 1.7,
        }]);
        d.apply_overrides(&Overrides {
            pue: Some(1.2),
            wue_off: Some(0.5),
            cycles: Some(3.0),
            wet_bulb_f: Some(70.0),
            ci: Some(0.1),
        });
        let env = d.resolve(None).unwrap().environment;
        assert_eq!(env.dc.pue, 1.2);
        assert_eq!(env.dc.tower.cycles_of_concentration, 3.0);
        assert_eq!(
            env.dc.wet_bulb,
            WetBulbSource::Constant(TemperatureF::new(70.0).unwrap())
        );
        assert_eq!(env.grid.wue_off().unwrap(), Wue::new(0.5).unwrap());
        assert_eq!(env.grid.carbon_intensity.value(), 0.1);
    }

    #[test]
    fn celsius_inputs_convert() {
        let mut d = minimal();
        d.environment.wet_bulb = Some(WetBulbDoc {
            constant_c: Some(18.5),
            ..Default::default()
        });
        let env = d.resolve(None).unwrap().environment;
        let WetBulbSource::Constant(t) = env.dc.wet_bulb else {
            panic!()
        };
        assert!((t.value() - 65.3).abs() < 1e-12);
    }

    #[test]
    fn monthly_list_must_have_twelve() {
        let mut d = minimal();
        d.sweep = Some(SweepDoc {
            monthly_f: Some(vec![60.0; 11]),
            diurnal: None,
        });
        let err = d.resolve(None).unwrap_err().to_string();
        assert!(err.contains("expected 12 monthly temperatures"), "{err}");
    }

    #[test]
    fn trace_reference_needs_a_base_dir() {
        let d = ScenarioDoc {
            trace: Some("t.csv".into()),
            ..Default::default()
        };
        let err = d.resolve(None).unwrap_err().to_string();
        assert!(err.contains("file references are not accepted"), "{err}");
    }

    #[test]
    fn projection_stage_lookup() {
        let mut d = minimal();
        d.projection = Some(ProjectionDoc {
            search_stage: None,
            dev_query_count: 10,
            qph: vec![1.0],
        });
        let s = d.resolve(None).unwrap();
        let p = s.pipeline().unwrap();
        assert_eq!(s.projection.as_ref().unwrap().resolve_stage(p).unwrap().name, "Search");

        d.projection.as_mut().unwrap().search_stage = Some("Nope".into());
        assert!(d.resolve(None).is_err());
        d.projection.as_mut().unwrap().search_stage = None;
        d.projection.as_mut().unwrap().dev_query_count = 0;
        assert!(d
            .resolve(None)
            .unwrap_err()
            .to_string()
            .contains("dev query count must be positive"));
    }

    #[test]
    fn empty_pipeline_is_invalid() {
        let d = ScenarioDoc::from_json(r#"{"pipeline":{"label":"x","stages":[]}}"#).unwrap();
        let err = d.resolve(None).unwrap_err().to_string();
        assert!(err.contains("pipeline requires at least one stage"), "{err}");
    }
}
