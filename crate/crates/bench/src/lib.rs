//! Fixtures shared by the criterion benches.

use std::fmt::Write;

use aquameter_core::{ingest_trace, EnergyTrace, TemperatureF};

/// Trace CSV of `n` back-to-back 15-minute intervals with a repeating load shape.
pub fn synthetic_trace_csv(n: usize) -> String {
    let mut out = String::from("start_iso8601,duration_s,energy_kwh,avg_watts,basis\n");
    for i in 0..n {
        let secs = i as i64 * 900;
        let (d, rem) = (secs / 86_400, secs % 86_400);
        let (h, m) = (rem / 3600, (rem % 3600) / 60);
        // 2023 is not a leap year; keep the days inside it.
        let day_of_year = d % 365;
        let (month, day) = month_day(day_of_year as u32);
        if i % 2 == 0 {
            writeln!(
                out,
                "2023-{month:02}-{day:02}T{h:02}:{m:02}:00Z,900,{},,server",
                0.05 + 0.01 * (i % 7) as f64
            )
            .unwrap();
        } else {
            writeln!(
                out,
                "2023-{month:02}-{day:02}T{h:02}:{m:02}:00Z,900,,{},server",
                200.0 + 40.0 * (i % 5) as f64
            )
            .unwrap();
        }
        if d >= 364 {
            break;
        }
    }
    out
}

fn month_day(mut doy: u32) -> (u32, u32) {
    const DAYS: [u32; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
    for (m, len) in DAYS.iter().enumerate() {
        if doy < *len {
            return (m as u32 + 1, doy + 1);
        }
        doy -= len;
    }
    (12, 31)
}

pub fn synthetic_trace(n: usize) -> EnergyTrace {
    ingest_trace(synthetic_trace_csv(n).as_bytes()).expect("synthetic trace is valid")
}

/// A smooth seasonal wet-bulb profile (°F), January first.
pub fn seasonal_profile() -> Vec<TemperatureF> {
    (0..12)
        .map(|m| {
            let phase = (m as f64) / 12.0 * std::f64::consts::TAU;
            TemperatureF::new(63.0 + 7.0 * phase.cos()).unwrap()
        })
        .collect()
}
