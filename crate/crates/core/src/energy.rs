//! Workload energy data: timestamped traces and aggregate stage records.
//!
//! Every trace carries an explicit [`Basis`]. Water and emissions formulas
//! consume server-basis energy; the estimator normalises at the boundary
//! with [`to_server_basis`].

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, FixedOffset, SecondsFormat, TimeDelta};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationErrors};
use crate::quantities::Energy;

/// Where the energy was metered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// At the compute hardware (CPU, GPU, memory).
    Server,
    /// Whole data-center draw, i.e. server energy × PUE.
    Facility,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Server => "server",
            Basis::Facility => "facility",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "server" => Ok(Basis::Server),
            "facility" => Ok(Basis::Facility),
            other => Err(format!("unknown basis {other:?}, expected server or facility")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub start: DateTime<FixedOffset>,
    pub duration_s: f64,
    pub energy: Energy,
}

impl Interval {
    pub fn end(&self) -> DateTime<FixedOffset> {
        self.start + seconds(self.duration_s)
    }
}

fn seconds(s: f64) -> TimeDelta {
    TimeDelta::nanoseconds((s * 1e9).round() as i64)
}

/// Time-indexed energy consumption of a workload.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace {
    intervals: Vec<Interval>,
    basis: Basis,
}

impl EnergyTrace {
    /// Builds a trace, sorting intervals by start time and rejecting overlaps.
    pub fn new(mut intervals: Vec<Interval>, basis: Basis) -> Result<Self> {
        let mut errors = ValidationErrors::new();
        for (i, iv) in intervals.iter().enumerate() {
            if !iv.duration_s.is_finite() || iv.duration_s < 0.0 {
                errors.push(
                    format!("intervals[{i}].duration_s"),
                    format!("duration must be finite and non-negative, got {}", iv.duration_s),
                );
            }
        }
        errors.into_result(())?;
        intervals.sort_by_key(|iv| iv.start);
        for (i, pair) in intervals.windows(2).enumerate() {
            if pair[1].start < pair[0].end() {
                return Err(Error::invalid(
                    "intervals",
                    format!("interval {i} overlaps interval {}", i + 1),
                ));
            }
        }
        Ok(Self { intervals, basis })
    }

    /// A single interval holding `energy`, starting at the Unix epoch.
    pub fn single(energy: Energy, duration_s: f64, basis: Basis) -> Self {
        Self {
            intervals: vec![Interval {
                start: DateTime::UNIX_EPOCH.fixed_offset(),
                duration_s,
                energy,
            }],
            basis,
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_energy(&self) -> Energy {
        self.intervals.iter().map(|iv| iv.energy).sum()
    }

    pub fn total_duration_s(&self) -> f64 {
        self.intervals.iter().map(|iv| iv.duration_s).sum()
    }

    /// Same intervals with every energy scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|iv| Interval {
                    energy: iv.energy.scaled(factor),
                    ..iv.clone()
                })
                .collect(),
            basis: self.basis,
        }
    }

    /// Merges the intervals of both traces. They must share a basis and no
    /// interval of one may overlap an interval of the other.
    pub fn concat(&self, other: &EnergyTrace) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::invalid(
                "basis",
                "cannot concatenate traces with different bases",
            ));
        }
        let mut intervals = self.intervals.clone();
        intervals.extend(other.intervals.iter().cloned());
        Self::new(intervals, self.basis)
    }
}

/// One row of an aggregate experiment table: a pipeline stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub running_time_h: f64,
    pub power_kwh: Energy,
    pub basis: Basis,
}

impl StageRecord {
    pub fn new(name: impl Into<String>, running_time_h: f64, power_kwh: f64, basis: Basis) -> Result<Self> {
        let stage = Self {
            name: name.into(),
            running_time_h,
            power_kwh: Energy::new(power_kwh).map_err(|e| Error::invalid("power_kwh", e.to_string()))?,
            basis,
        };
        Ok(stage.validate("").into_result(stage)?)
    }

    pub fn validate(&self, prefix: &str) -> ValidationErrors {
        let mut errors = ValidationErrors::new();
        if !self.running_time_h.is_finite() || self.running_time_h < 0.0 {
            errors.push(
                format!("{prefix}running_time_h"),
                format!(
                    "running time must be finite and non-negative, got {}",
                    self.running_time_h
                ),
            );
        }
        if self.name.trim().is_empty() {
            errors.push(format!("{prefix}name"), "stage name must not be empty");
        }
        errors
    }
}

/// Named, ordered stages of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    pub label: String,
    pub stages: Vec<StageRecord>,
}

impl Pipeline {
    pub fn new(label: impl Into<String>, stages: Vec<StageRecord>) -> Result<Self> {
        let p = Self {
            label: label.into(),
            stages,
        };
        Ok(p.validate("").into_result(p)?)
    }

    pub fn validate(&self, prefix: &str) -> ValidationErrors {
        let mut errors = ValidationErrors::new();
        if self.stages.is_empty() {
            errors.push(format!("{prefix}stages"), "pipeline requires at least one stage");
        }
        let mut seen = HashSet::new();
        for (i, stage) in self.stages.iter().enumerate() {
            errors.extend(stage.validate(&format!("{prefix}stages[{i}].")));
            if !seen.insert(stage.name.as_str()) {
                errors.push(
                    format!("{prefix}stages[{i}].name"),
                    format!("duplicate stage name {:?}", stage.name),
                );
            }
        }
        errors
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// Copy with every stage power scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            label: self.label.clone(),
            stages: self
                .stages
                .iter()
                .map(|s| StageRecord {
                    power_kwh: s.power_kwh.scaled(factor),
                    ..s.clone()
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Pipeline = serde_json::from_str(text)?;
        Ok(p.validate("").into_result(p)?)
    }
}

/// Collapses a stage row into a single-interval trace.
pub fn trace_from_stage(stage: &StageRecord) -> EnergyTrace {
    EnergyTrace::single(stage.power_kwh, stage.running_time_h * 3600.0, stage.basis)
}

/// Divides facility-basis energies by `pue`; server-basis traces pass through.
pub fn to_server_basis(trace: &EnergyTrace, pue: f64) -> Result<EnergyTrace> {
    if !pue.is_finite() || pue < 1.0 {
        return Err(Error::invalid("pue", format!("PUE must be ≥ 1, got {pue}")));
    }
    match trace.basis {
        Basis::Server => Ok(trace.clone()),
        Basis::Facility => Ok(EnergyTrace {
            intervals: trace
                .intervals
                .iter()
                .map(|iv| Interval {
                    energy: iv.energy.divided_by(pue),
                    ..iv.clone()
                })
                .collect(),
            basis: Basis::Server,
        }),
    }
}

pub const TRACE_HEADER: [&str; 5] = ["start_iso8601", "duration_s", "energy_kwh", "avg_watts", "basis"];

/// Parses a trace CSV document.
///
/// Each row gives either `energy_kwh` or `avg_watts` (converted over the
/// row's duration). The basis column must be the same on every row.
pub fn ingest_trace<R: Read>(reader: R) -> Result<EnergyTrace> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers().map_err(|e| csv_error(e, 1))?.clone();
    if headers.iter().collect::<Vec<_>>() != TRACE_HEADER {
        return Err(Error::Trace {
            line: 1,
            message: format!("expected header {:?}", TRACE_HEADER.join(",")),
        });
    }

    let mut rows: Vec<(u64, Interval)> = Vec::new();
    let mut basis: Option<Basis> = None;
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let bad = |message: String| Error::Trace { line, message };

        let start = DateTime::parse_from_rfc3339(&record[0])
            .map_err(|e| bad(format!("invalid start_iso8601 {:?}: {e}", &record[0])))?;
        let duration_s: f64 = record[1]
            .parse()
            .map_err(|_| bad(format!("invalid duration_s {:?}", &record[1])))?;
        if !duration_s.is_finite() || duration_s <= 0.0 {
            return Err(bad(format!("duration_s must be positive, got {duration_s}")));
        }
        let kwh = match (record[2].is_empty(), record[3].is_empty()) {
            (false, true) => record[2]
                .parse::<f64>()
                .map_err(|_| bad(format!("invalid energy_kwh {:?}", &record[2])))?,
            (true, false) => {
                let watts: f64 = record[3]
                    .parse()
                    .map_err(|_| bad(format!("invalid avg_watts {:?}", &record[3])))?;
                watts * duration_s / 3.6e6
            }
            _ => return Err(bad("exactly one of energy_kwh and avg_watts must be set".into())),
        };
        let energy = Energy::new(kwh).map_err(|e| bad(format!("energy: {e}")))?;
        let row_basis: Basis = record[4].parse().map_err(bad)?;
        match basis {
            None => basis = Some(row_basis),
            Some(b) if b != row_basis => {
                return Err(bad(format!("basis {row_basis} differs from earlier rows ({b})")));
            }
            Some(_) => {}
        }
        rows.push((
            line,
            Interval {
                start,
                duration_s,
                energy,
            },
        ));
    }

    let Some(basis) = basis else {
        return Err(Error::invalid("trace", "trace contains no intervals"));
    };

    rows.sort_by_key(|(_, iv)| iv.start);
    for pair in rows.windows(2) {
        let ((l0, a), (l1, b)) = (&pair[0], &pair[1]);
        if b.start < a.end() {
            return Err(Error::Trace {
                line: *l1,
                message: format!(
                    "interval at line {l1} (start {}) overlaps interval at line {l0} ({} to {})",
                    b.start.to_rfc3339(),
                    a.start.to_rfc3339(),
                    a.end().to_rfc3339()
                ),
            });
        }
    }

    EnergyTrace::new(rows.into_iter().map(|(_, iv)| iv).collect(), basis)
}

fn csv_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(fallback_line);
    Error::Trace {
        line,
        message: e.to_string(),
    }
}

pub fn read_trace_file(path: &Path) -> Result<EnergyTrace> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ingest_trace(file)
}

/// Writes the canonical CSV form: every row carries `energy_kwh`.
pub fn write_trace<W: Write>(trace: &EnergyTrace, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let io_err = |e: csv::Error| Error::Io {
        path: "<trace>".into(),
        source: std::io::Error::other(e),
    };
    wtr.write_record(TRACE_HEADER).map_err(io_err)?;
    for iv in &trace.intervals {
        wtr.write_record([
            iv.start.to_rfc3339_opts(SecondsFormat::AutoSi, true),
            iv.duration_s.to_string(),
            iv.energy.value().to_string(),
            String::new(),
            trace.basis.to_string(),
        ])
        .map_err(io_err)?;
    }
    wtr.flush().map_err(|source| Error::Io {
        path: "<trace>".into(),
        source,
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kwh(v: f64) -> Energy {
        Energy::new(v).unwrap()
    }

    #[test]
    fn stage_trace_keeps_energy_and_basis() {
        let s = StageRecord::new("BM25 Indexing", 0.0809, 0.0021, Basis::Facility).unwrap();
        let t = trace_from_stage(&s);
        assert_eq!(t.len(), 1);
        assert_eq!(t.total_energy(), kwh(0.0021));
        assert_eq!(t.basis(), Basis::Facility);
        assert!((t.total_duration_s() - 0.0809 * 3600.0).abs() < 1e-9);

        let s = StageRecord::new("docTquery Expansion", 760.48, 169.06, Basis::Facility).unwrap();
        assert_eq!(trace_from_stage(&s).total_energy(), kwh(169.06));
    }

    #[test]
    fn zero_stage_gives_zero_interval() {
        let s = StageRecord::new("noop", 0.0, 0.0, Basis::Server).unwrap();
        let t = trace_from_stage(&s);
        assert_eq!(t.len(), 1);
        assert_eq!(t.total_energy(), Energy::ZERO);
    }

    #[test]
    fn facility_to_server() {
        let t = EnergyTrace::single(kwh(180.71), 3600.0, Basis::Facility);
        let s = to_server_basis(&t, 1.89).unwrap();
        assert_eq!(s.basis(), Basis::Server);
        assert!((s.total_energy().value() - 95.6138).abs() < 1e-4);

        let server = EnergyTrace::single(kwh(5.0), 3600.0, Basis::Server);
        assert_eq!(to_server_basis(&server, 1.89).unwrap(), server);

        let zero = EnergyTrace::single(Energy::ZERO, 1.0, Basis::Facility);
        assert_eq!(to_server_basis(&zero, 1.89).unwrap().total_energy(), Energy::ZERO);
    }

    #[test]
    fn server_basis_is_idempotent() {
        let t = EnergyTrace::single(kwh(12.0), 60.0, Basis::Facility);
        let once = to_server_basis(&t, 1.5).unwrap();
        assert_eq!(to_server_basis(&once, 1.5).unwrap(), once);
    }

    #[test]
    fn rejects_low_pue() {
        let t = EnergyTrace::single(kwh(1.0), 60.0, Basis::Facility);
        assert!(to_server_basis(&t, 0.8).is_err());
    }

    #[test]
    fn watts_rows_are_converted() {
        let csv = "start_iso8601,duration_s,energy_kwh,avg_watts,basis\n\
                   2023-07-01T09:00:00Z,900,,400,server\n\
                   2023-07-01T09:15:00Z,900,,400,server\n";
        let t = ingest_trace(csv.as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        for iv in t.intervals() {
            assert!((iv.energy.value() - 0.1).abs() < 1e-15);
        }
    }

    #[test]
    fn header_only_is_an_error() {
        let err = ingest_trace("start_iso8601,duration_s,energy_kwh,avg_watts,basis\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("trace contains no intervals"), "{err}");
    }

    #[test]
    fn negative_energy_names_the_line() {
        let csv = "start_iso8601,duration_s,energy_kwh,avg_watts,basis\n\
                   2023-07-01T09:00:00Z,900,0.5,,server\n\
                   2023-07-01T09:15:00Z,900,-0.5,,server\n";
        match ingest_trace(csv.as_bytes()).unwrap_err() {
            Error::Trace { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("non-negative"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn overlap_names_both_intervals() {
        let csv = "start_iso8601,duration_s,energy_kwh,avg_watts,basis\n\
                   2023-07-01T09:00:00Z,900,0.5,,server\n\
                   2023-07-01T09:10:00Z,900,0.5,,server\n";
        let err = ingest_trace(csv.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("line 2"), "{err}");
    }

    #[test]
    fn unknown_basis_and_mixed_basis() {
        let csv = "start_iso8601,duration_s,energy_kwh,avg_watts,basis\n\
                   2023-07-01T09:00:00Z,900,0.5,,rack\n";
        assert!(ingest_trace(csv.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("unknown basis"));

        let csv = "start_iso8601,duration_s,energy_kwh,avg_watts,basis\n\
                   2023-07-01T09:00:00Z,900,0.5,,server\n\
                   2023-07-01T09:15:00Z,900,0.5,,facility\n";
        assert!(ingest_trace(csv.as_bytes()).is_err());
    }

    #[test]
    fn both_or_neither_energy_columns() {
        for row in [
            "2023-07-01T09:00:00Z,900,0.5,400,server",
            "2023-07-01T09:00:00Z,900,,,server",
        ] {
            let csv = format!("start_iso8601,duration_s,energy_kwh,avg_watts,basis\n{row}\n");
            let err = ingest_trace(csv.as_bytes()).unwrap_err();
            assert!(matches!(err, Error::Trace { line: 2, .. }), "{err}");
        }
    }

    #[test]
    fn rows_are_sorted() {
        let csv = "start_iso8601,duration_s,energy_kwh,avg_watts,basis\n\
                   2023-07-01T09:15:00Z,900,0.2,,server\n\
                   2023-07-01T09:00:00Z,900,0.1,,server\n";
        let t = ingest_trace(csv.as_bytes()).unwrap();
        assert_eq!(t.intervals()[0].energy, kwh(0.1));
    }

    #[test]
    fn wrong_header() {
        let err = ingest_trace("start,duration\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Trace { line: 1, .. }));
    }

    #[test]
    fn pipeline_checks() {
        let err = Pipeline::new("empty", vec![]).unwrap_err();
        assert!(err.to_string().contains("pipeline requires at least one stage"));

        let a = StageRecord::new("Search", 1.0, 1.0, Basis::Facility).unwrap();
        let err = Pipeline::new("dup", vec![a.clone(), a]).unwrap_err();
        assert!(err.to_string().contains("duplicate stage name"));
    }

    #[test]
    fn pipeline_json_shape() {
        let text = r#"{"label":"BM25","stages":[
            {"name":"BM25 Indexing","running_time_h":0.0809,"power_kwh":0.0021,"basis":"facility"}]}"#;
        let p = Pipeline::from_json(text).unwrap();
        assert_eq!(p.stages[0].power_kwh, kwh(0.0021));
        let back = Pipeline::from_json(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
