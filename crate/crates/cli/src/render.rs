//! Table, CSV and JSON renderings. CSV and JSON carry unrounded values;
//! the table rounds for display only.

use std::fmt::Write;

use aquameter_core::service::{EstimateResponse, ProjectResponse, SweepKind, SweepResponse};
use aquameter_core::FootprintRow;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Energy, time and emissions: 4 decimals below 1, 2 otherwise.
pub fn display_amount(v: f64) -> String {
    if v.abs() < 1.0 {
        format!("{v:.4}")
    } else {
        format!("{v:.2}")
    }
}

/// Water is always shown with 4 decimals.
pub fn display_water(v: f64) -> String {
    format!("{v:.4}")
}

fn display_fraction(f: Option<f64>) -> String {
    match f {
        Some(f) => format!("{:.1}%", f * 100.0),
        None => "n/a".into(),
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self, color: bool) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(
                    |(i, (c, w))| {
                        if i == 0 {
                            format!("{c:<w$}")
                        } else {
                            format!("{c:>w$}")
                        }
                    },
                )
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = String::new();
        let head = line(&self.header);
        if color {
            writeln!(out, "\x1b[1m{head}\x1b[0m").unwrap();
        } else {
            writeln!(out, "{head}").unwrap();
        }
        let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
        writeln!(out, "{}", "-".repeat(total)).unwrap();
        for row in &self.rows {
            writeln!(out, "{}", line(row)).unwrap();
        }
        out
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("responses serialize");
    s.push('\n');
    s
}

fn csv_line(cells: &[String]) -> String {
    let escaped: Vec<String> = cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect();
    escaped.join(",") + "\n"
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn footprint_cells(r: &FootprintRow) -> [f64; 6] {
    [
        r.running_time_h,
        r.facility_energy_kwh.value(),
        r.emissions_kgco2e.value(),
        r.water_total_l.value(),
        r.water_on_l.value(),
        r.water_off_l.value(),
    ]
}

pub fn estimate(resp: &EstimateResponse, format: Format, color: bool) -> String {
    match format {
        Format::Json => to_json(resp),
        Format::Csv => {
            let mut out = csv_line(
                &[
                    "name",
                    "running_time_h",
                    "facility_energy_kwh",
                    "emissions_kgco2e",
                    "water_total_l",
                    "water_on_l",
                    "water_off_l",
                    "on_fraction",
                ]
                .map(String::from),
            );
            for (row, b) in resp.report.rows().zip(&resp.breakdown) {
                let mut cells = vec![row.name.clone()];
                cells.extend(footprint_cells(row).iter().map(|v| v.to_string()));
                cells.push(opt(b.on_fraction));
                out.push_str(&csv_line(&cells));
            }
            out
        }
        Format::Table => {
            let mut t = Table::new(&[
                "Stage",
                "Running time (h)",
                "Power (kWh)",
                "Emissions (kgCO2e)",
                "Water (L)",
                "On-site (L)",
                "Off-site (L)",
                "On-site share",
            ]);
            for (row, b) in resp.report.rows().zip(&resp.breakdown) {
                let [h, kwh, em, total, on, off] = footprint_cells(row);
                t.push(vec![
                    row.name.clone(),
                    display_amount(h),
                    display_amount(kwh),
                    display_amount(em),
                    display_water(total),
                    display_water(on),
                    display_water(off),
                    display_fraction(b.on_fraction),
                ]);
            }
            let mut out = format!("{}\n\n", resp.report.label);
            out.push_str(&t.render(color));
            for d in &resp.report.diagnostics {
                let stage = d.stage.as_deref().map(|s| format!(" [{s}]")).unwrap_or_default();
                writeln!(out, "warning{stage}: {}", d.message).unwrap();
            }
            if !resp.equivalents.is_empty() {
                out.push_str("\nEquivalent to:\n");
                for e in &resp.equivalents {
                    writeln!(out, "  {} {} ({})", display_amount(e.units), e.unit_name, e.label).unwrap();
                }
            }
            out
        }
    }
}

pub fn sweep(resp: &SweepResponse, format: Format, color: bool) -> String {
    let cells = |p: &aquameter_core::SweepPoint| {
        let c = &p.report.cumulative;
        [
            p.wet_bulb_f.value(),
            c.water_on_l.value(),
            c.water_off_l.value(),
            c.water_total_l.value(),
            c.emissions_kgco2e.value(),
        ]
    };
    match format {
        Format::Json => to_json(resp),
        Format::Csv => {
            let mut out = csv_line(
                &[
                    "tag",
                    "wet_bulb_f",
                    "water_on_l",
                    "water_off_l",
                    "water_total_l",
                    "emissions_kgco2e",
                ]
                .map(String::from),
            );
            for p in &resp.points {
                let mut row = vec![p.tag.clone()];
                row.extend(cells(p).iter().map(|v| v.to_string()));
                out.push_str(&csv_line(&row));
            }
            out
        }
        Format::Table => {
            let first = match resp.kind {
                SweepKind::Monthly => "Month",
                SweepKind::Diurnal => "Time",
            };
            let mut t = Table::new(&[
                first,
                "Wet-bulb (°F)",
                "On-site (L)",
                "Off-site (L)",
                "Water (L)",
                "Emissions (kgCO2e)",
            ]);
            for p in &resp.points {
                let [tw, on, off, total, em] = cells(p);
                t.push(vec![
                    p.tag.clone(),
                    format!("{tw:.2}"),
                    display_water(on),
                    display_water(off),
                    display_water(total),
                    display_amount(em),
                ]);
            }
            let label = resp.points.first().map(|p| p.report.label.as_str()).unwrap_or("");
            let mut out = format!("{label}\n\n");
            out.push_str(&t.render(color));
            if let Some(c) = &resp.comparison {
                writeln!(
                    out,
                    "\nOn-site difference (afternoon - morning): {} L",
                    display_water(c.delta_l)
                )
                .unwrap();
            }
            out
        }
    }
}

pub fn project(resp: &ProjectResponse, format: Format, color: bool) -> String {
    match format {
        Format::Json => to_json(resp),
        Format::Csv => {
            let mut out = csv_line(
                &[
                    "qph",
                    "energy_kwh_per_h",
                    "emissions_kgco2e_per_h",
                    "water_l_per_h",
                    "implied_single_machine_qph",
                    "over_capacity",
                ]
                .map(String::from),
            );
            for r in &resp.rows {
                out.push_str(&csv_line(&[
                    r.queries_per_hour.to_string(),
                    r.energy_per_hour_kwh.value().to_string(),
                    r.emissions_per_hour_kgco2e.value().to_string(),
                    r.water_per_hour_l.value().to_string(),
                    opt(r.implied_single_machine_qph),
                    r.over_capacity.to_string(),
                ]));
            }
            out
        }
        Format::Table => {
            let mut out = format!(
                "Search stage: {} ({} development queries)\n",
                resp.search_stage, resp.dev_query_count
            );
            if let Some(cap) = resp.rows.first().and_then(|r| r.implied_single_machine_qph) {
                writeln!(out, "Single-machine capacity: {cap:.0} queries/hour").unwrap();
            }
            out.push('\n');
            let mut t = Table::new(&[
                "Queries/hour",
                "Energy (kWh/h)",
                "Emissions (kgCO2e/h)",
                "Water (L/h)",
                "Over capacity",
            ]);
            for r in &resp.rows {
                t.push(vec![
                    format!("{}", r.queries_per_hour),
                    display_amount(r.energy_per_hour_kwh.value()),
                    display_amount(r.emissions_per_hour_kgco2e.value()),
                    display_water(r.water_per_hour_l.value()),
                    if r.over_capacity { "yes".into() } else { String::new() },
                ]);
            }
            out.push_str(&t.render(color));
            if resp.rows.iter().any(|r| r.over_capacity) {
                out.push_str(
                    "Rows marked over capacity exceed what one machine sustained; treat them as lower bounds.\n",
                );
            }
            out
        }
    }
}
