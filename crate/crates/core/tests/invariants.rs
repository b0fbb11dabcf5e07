use std::collections::BTreeMap;

use aquameter_core::{
    ingest_trace, monthly_sweep, off_site_water, off_site_water_scheduled, to_server_basis, total_water, trace_report,
    wet_bulb_sweep, Basis, CarbonIntensity, EnergyTrace, Environment, GridProfile, Pipeline, ScenarioDoc, StageRecord,
    TemperatureF, WetBulbSource, Wue,
};
use proptest::prelude::*;

/// Back-to-back intervals starting at `t0` (Unix seconds).
fn csv_trace_from(t0: i64, rows: &[(u32, f64)], watts: bool, basis: Basis) -> EnergyTrace {
    let mut csv = String::from("start_iso8601,duration_s,energy_kwh,avg_watts,basis\n");
    let mut t = t0;
    for (dur, v) in rows {
        let start = chrono::DateTime::from_timestamp(t, 0).unwrap().to_rfc3339();
        if watts {
            csv.push_str(&format!("{start},{dur},,{v},{basis}\n"));
        } else {
            csv.push_str(&format!("{start},{dur},{v},,{basis}\n"));
        }
        t += *dur as i64;
    }
    ingest_trace(csv.as_bytes()).unwrap()
}

/// Starts 2024-01-01T00:00:00Z; twenty rows of at most an hour stay in January.
fn csv_trace(rows: &[(u32, f64)], watts: bool, basis: Basis) -> EnergyTrace {
    csv_trace_from(1_704_067_200, rows, watts, basis)
}

fn rows() -> impl Strategy<Value = Vec<(u32, f64)>> {
    prop::collection::vec((1u32..3600, 0.0..5000.0f64), 1..20)
}

proptest! {
    #[test]
    fn watts_and_kwh_rows_agree(rows in rows()) {
        let by_watts = csv_trace(&rows, true, Basis::Server);
        let kwh: Vec<(u32, f64)> = rows.iter().map(|(d, w)| (*d, w * *d as f64 / 3.6e6)).collect();
        let by_energy = csv_trace(&kwh, false, Basis::Server);
        for (a, b) in by_watts.intervals().iter().zip(by_energy.intervals()) {
            prop_assert!((a.energy.value() - b.energy.value()).abs() <= 1e-12 * a.energy.value().max(1.0));
            prop_assert_eq!(a.start, b.start);
        }
    }

    #[test]
    fn server_basis_divides_by_pue(rows in rows(), pue in 1.0..4.0f64) {
        let facility = csv_trace(&rows, false, Basis::Facility);
        let server = to_server_basis(&facility, pue).unwrap();
        prop_assert_eq!(server.basis(), Basis::Server);
        let expect = facility.total_energy().value() / pue;
        prop_assert!((server.total_energy().value() - expect).abs() <= 1e-9 * expect.max(1.0));
        prop_assert_eq!(to_server_basis(&server, pue).unwrap(), server);
    }

    #[test]
    fn water_is_additive_over_trace_concatenation(a in rows(), b in rows(), pue in 1.0..3.0f64) {
        let ta = csv_trace(&a, false, Basis::Facility);
        let end = 1_704_067_200 + a.iter().map(|(d, _)| *d as i64).sum::<i64>();
        let tb = csv_trace_from(end, &b, false, Basis::Facility);
        let mut env = Environment::default();
        env.dc.pue = pue;
        let wa = total_water(&ta, &env).unwrap();
        let wb = total_water(&tb, &env).unwrap();
        let wab = total_water(&ta.concat(&tb).unwrap(), &env).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(y.abs()) + 1e-12;
        prop_assert!(close(wab.on.value(), wa.on.value() + wb.on.value()));
        prop_assert!(close(wab.off.value(), wa.off.value() + wb.off.value()));
        prop_assert_eq!(tb.concat(&ta).unwrap(), ta.concat(&tb).unwrap());
        prop_assert!(ta.concat(&ta).is_err(), "a trace overlaps itself");
    }

    #[test]
    fn empty_overrides_match_plain_off_site(rows in rows(), w in 0.0..5.0f64) {
        let trace = csv_trace(&rows, false, Basis::Server);
        let env = Environment::default();
        let grid = GridProfile::direct(Wue::new(w).unwrap(), CarbonIntensity::new(0.5).unwrap());
        let plain = off_site_water(&trace, &env.dc, &grid).unwrap();
        let scheduled = off_site_water_scheduled(&trace, &env.dc, &grid, &BTreeMap::new()).unwrap();
        prop_assert_eq!(plain, scheduled);
        let all: BTreeMap<usize, GridProfile> = (0..trace.len()).map(|i| (i, env.grid.clone())).collect();
        let moved = off_site_water_scheduled(&trace, &env.dc, &grid, &all).unwrap();
        prop_assert_eq!(moved, off_site_water(&trace, &env.dc, &env.grid).unwrap());
    }

    #[test]
    fn monthly_sweep_with_constant_temperature_is_flat(t in 30.0..100.0f64, kwh in 0.0..200.0f64) {
        let p = Pipeline::new("p", vec![StageRecord::new("a", 1.0, kwh, Basis::Facility).unwrap()]).unwrap();
        let t = TemperatureF::new(t).unwrap();
        let env = Environment::default();
        let months = monthly_sweep(&p, &env, &[t; 12]).unwrap();
        let single = wet_bulb_sweep(&p, &env, &[("x".into(), t)]).unwrap();
        for point in &months.points {
            prop_assert_eq!(&point.report, &single.points[0].report);
        }
    }

    #[test]
    fn monthly_source_matches_constant_within_one_month(rows in rows(), t in 30.0..100.0f64) {
        let trace = csv_trace(&rows, false, Basis::Server);
        let t = TemperatureF::new(t).unwrap();
        let mut months = vec![TemperatureF::new(50.0).unwrap(); 12];
        months[0] = t; // every interval starts in January
        let monthly = Environment::default().with_wet_bulb(WetBulbSource::Monthly(months));
        let constant = Environment::default().with_constant_wet_bulb(t);
        let a = trace_report("t", &trace, &monthly).unwrap();
        let b = trace_report("t", &trace, &constant).unwrap();
        prop_assert_eq!(a.cumulative, b.cumulative);
    }

    #[test]
    fn normalization_is_idempotent(pue in 1.0..3.0f64, s in 1.1..9.0f64, ci in 0.0..1.0f64, use_c in any::<bool>()) {
        let wet = if use_c { serde_json::json!({"constant_c": 18.5}) } else { serde_json::json!({"monthly_f": vec![60.0; 12]}) };
        let doc = ScenarioDoc::from_json(&serde_json::json!({
            "environment": {"pue": pue, "cycles_of_concentration": s, "carbon_intensity": ci, "wet_bulb": wet},
            "pipeline": {"label": "p", "stages": [{"name": "a", "running_time_h": 1.0, "power_kwh": 2.0}]}
        }).to_string()).unwrap();
        let once = doc.normalized();
        prop_assert_eq!(once.normalized(), once.clone());
        let a = doc.resolve(None).unwrap();
        let b = once.resolve(None).unwrap();
        prop_assert_eq!(a.environment, b.environment);
    }
}
