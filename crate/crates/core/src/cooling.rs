//! On-site water: cooling-tower water usage effectiveness and its
//! integration over an energy trace.

use std::collections::BTreeMap;

use chrono::Datelike;
use serde::{Deserialize, Serialize};

use crate::energy::{Basis, EnergyTrace};
use crate::error::{Error, Result, ValidationErrors};
use crate::quantities::{TemperatureF, Water, Wue};

/// An evaporative cooling tower, characterised by its cycles of concentration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolingTower {
    pub label: String,
    pub cycles_of_concentration: f64,
}

impl CoolingTower {
    pub fn new(label: impl Into<String>, cycles_of_concentration: f64) -> Result<Self> {
        let tower = Self {
            label: label.into(),
            cycles_of_concentration,
        };
        Ok(tower.validate("").into_result(tower)?)
    }

    pub fn validate(&self, prefix: &str) -> ValidationErrors {
        let mut errors = ValidationErrors::new();
        let s = self.cycles_of_concentration;
        if !s.is_finite() || s <= 1.0 {
            errors.push(
                format!("{prefix}cycles_of_concentration"),
                format!("cycles of concentration must exceed 1, got {s}"),
            );
        }
        errors
    }

    /// The blow-down multiplier S / (S - 1).
    pub fn concentration_factor(&self) -> f64 {
        let s = self.cycles_of_concentration;
        s / (s - 1.0)
    }
}

/// Wet-bulb temperature over time, sampled once per trace interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WetBulbSource {
    Constant(TemperatureF),
    /// January..December means, picked by the month of each interval's start.
    Monthly(Vec<TemperatureF>),
    /// Temperatures keyed by interval index.
    Schedule(BTreeMap<usize, TemperatureF>),
}

impl WetBulbSource {
    pub fn validate(&self, prefix: &str) -> ValidationErrors {
        let mut errors = ValidationErrors::new();
        if let WetBulbSource::Monthly(temps) = self {
            if temps.len() != 12 {
                errors.push(
                    format!("{prefix}monthly"),
                    format!("expected 12 monthly temperatures, got {}", temps.len()),
                );
            }
        }
        errors
    }

    /// Temperature applying to interval `index` of `trace`.
    pub fn temperature_at(&self, trace: &EnergyTrace, index: usize) -> Result<TemperatureF> {
        match self {
            WetBulbSource::Constant(t) => Ok(*t),
            WetBulbSource::Monthly(temps) => {
                let month = trace.intervals()[index].start.month0() as usize;
                temps
                    .get(month)
                    .copied()
                    .ok_or_else(|| Error::invalid("wet_bulb.monthly", "expected 12 monthly temperatures"))
            }
            WetBulbSource::Schedule(map) => map.get(&index).copied().ok_or(Error::ScheduleGap { interval: index }),
        }
    }
}

/// The cooling-tower polynomial in °F, before the concentration factor.
pub fn cooling_polynomial(t: TemperatureF) -> f64 {
    let t = t.value();
    6e-5 * t.powi(3) - 0.01 * t.powi(2) + 0.61 * t - 10.40
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WueOn {
    pub wue: Wue,
    /// Set when the polynomial went negative and the result was floored at 0.
    pub clamped: bool,
}

/// On-site water usage effectiveness at wet-bulb temperature `t_w`.
///
/// Cold enough temperatures drive the polynomial negative (below about
/// 27.2 °F); that regime is free cooling with no evaporative loss, so the
/// result is floored at zero and flagged.
pub fn wue_on(t_w: TemperatureF, tower: &CoolingTower) -> Result<WueOn> {
    tower.validate("tower.").into_result(())?;
    let poly = cooling_polynomial(t_w);
    if poly < 0.0 {
        return Ok(WueOn {
            wue: Wue::ZERO,
            clamped: true,
        });
    }
    let value = tower.concentration_factor() * poly;
    Ok(WueOn {
        wue: Wue::new(value).map_err(|e| Error::invalid("wue_on", e.to_string()))?,
        clamped: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnSiteWater {
    pub water: Water,
    /// Indices of intervals whose WUE was clamped to zero.
    pub clamped_intervals: Vec<usize>,
}

/// Sum over intervals of server energy × on-site WUE.
pub fn on_site_water(trace: &EnergyTrace, tower: &CoolingTower, wet_bulb: &WetBulbSource) -> Result<OnSiteWater> {
    if trace.basis() != Basis::Server {
        return Err(Error::invalid(
            "trace.basis",
            "on-site water requires server-basis energy",
        ));
    }
    let mut water = Water::ZERO;
    let mut clamped_intervals = Vec::new();
    for (i, iv) in trace.intervals().iter().enumerate() {
        let t = wet_bulb.temperature_at(trace, i)?;
        let w = wue_on(t, tower)?;
        if w.clamped {
            clamped_intervals.push(i);
        }
        water += iv.energy * w.wue;
    }
    Ok(OnSiteWater {
        water,
        clamped_intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::Interval;
    use crate::quantities::Energy;
    use chrono::DateTime;

    fn f(v: f64) -> TemperatureF {
        TemperatureF::new(v).unwrap()
    }

    fn tower(s: f64) -> CoolingTower {
        CoolingTower::new("t", s).unwrap()
    }

    // Oracle: the polynomial evaluated in exact decimal arithmetic (Python
    // `fractions.Fraction`), then multiplied by S/(S-1).
    //   65.3 °F -> 3.49880462 exactly, × 9/5 = 6.297848316
    //   53.6 °F -> 2.80583936 exactly, × 9/5 = 5.050510848
    //   20.0 °F -> -1.72
    #[test]
    fn polynomial_matches_exact_decimal_oracle() {
        assert!((cooling_polynomial(f(65.3)) - 3.49880462).abs() < 1e-12);
        assert!((cooling_polynomial(f(53.6)) - 2.80583936).abs() < 1e-12);
        assert!((cooling_polynomial(f(20.0)) + 1.72).abs() < 1e-12);
    }

    #[test]
    fn wue_on_reference_points() {
        let w = wue_on(f(65.3), &tower(2.25)).unwrap();
        assert!(!w.clamped);
        assert!((w.wue.value() - 6.297848316).abs() < 1e-9);
        assert!((wue_on(f(53.6), &tower(2.25)).unwrap().wue.value() - 5.050510848).abs() < 1e-9);
    }

    #[test]
    fn cold_temperatures_clamp_to_zero() {
        let w = wue_on(f(20.0), &tower(2.25)).unwrap();
        assert!(w.clamped);
        assert_eq!(w.wue, Wue::ZERO);
    }

    #[test]
    fn large_cycles_approach_the_bare_polynomial() {
        let w = wue_on(f(65.3), &tower(1e9)).unwrap();
        assert!((w.wue.value() - 3.4988).abs() < 1e-4);
    }

    #[test]
    fn tower_requires_s_above_one() {
        let err = CoolingTower::new("bad", 1.0).unwrap_err();
        assert!(err.to_string().contains("cycles of concentration must exceed 1"));
        let bad = CoolingTower {
            label: "bad".into(),
            cycles_of_concentration: 0.5,
        };
        assert!(wue_on(f(65.3), &bad).is_err());
    }

    fn server(kwh: f64) -> EnergyTrace {
        EnergyTrace::single(Energy::new(kwh).unwrap(), 3600.0, Basis::Server)
    }

    #[test]
    fn tildev2_doctquery_on_site() {
        let e = 180.71 / 1.89;
        let src = |t| WetBulbSource::Constant(f(t));
        let w = |t| on_site_water(&server(e), &tower(2.25), &src(t)).unwrap().water.value();
        assert!((w(65.3) - 602.1609).abs() < 0.01);
        assert!((w(53.6) - 482.90).abs() < 0.01);
        assert!((w(57.02) - 515.1).abs() < 0.1);
    }

    #[test]
    fn zero_energy_zero_water() {
        let out = on_site_water(&server(0.0), &tower(2.25), &WetBulbSource::Constant(f(90.0))).unwrap();
        assert_eq!(out.water, Water::ZERO);
    }

    #[test]
    fn facility_basis_is_refused() {
        let t = EnergyTrace::single(Energy::new(1.0).unwrap(), 1.0, Basis::Facility);
        assert!(on_site_water(&t, &tower(2.25), &WetBulbSource::Constant(f(60.0))).is_err());
    }

    fn two_interval_trace() -> EnergyTrace {
        let start = |s: &str| DateTime::parse_from_rfc3339(s).unwrap();
        EnergyTrace::new(
            vec![
                Interval {
                    start: start("2023-01-15T09:00:00+10:00"),
                    duration_s: 900.0,
                    energy: Energy::new(1.0).unwrap(),
                },
                Interval {
                    start: start("2023-07-15T09:00:00+10:00"),
                    duration_s: 900.0,
                    energy: Energy::new(2.0).unwrap(),
                },
            ],
            Basis::Server,
        )
        .unwrap()
    }

    #[test]
    fn schedule_gap_names_interval() {
        let src = WetBulbSource::Schedule(BTreeMap::from([(0, f(60.0))]));
        match on_site_water(&two_interval_trace(), &tower(2.25), &src) {
            Err(Error::ScheduleGap { interval }) => assert_eq!(interval, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schedule_and_monthly_sources_sample_per_interval() {
        let t = two_interval_trace();
        let tw = tower(2.25);
        let expected =
            1.0 * wue_on(f(60.0), &tw).unwrap().wue.value() + 2.0 * wue_on(f(20.0), &tw).unwrap().wue.value();

        let sched = WetBulbSource::Schedule(BTreeMap::from([(0, f(60.0)), (1, f(20.0))]));
        let out = on_site_water(&t, &tw, &sched).unwrap();
        assert!((out.water.value() - expected).abs() < 1e-12);
        assert_eq!(out.clamped_intervals, vec![1]);

        let mut months = vec![f(40.0); 12];
        months[0] = f(60.0);
        months[6] = f(20.0);
        let out = on_site_water(&t, &tw, &WetBulbSource::Monthly(months)).unwrap();
        assert!((out.water.value() - expected).abs() < 1e-12);
    }

    #[test]
    fn monthly_needs_twelve() {
        let src = WetBulbSource::Monthly(vec![f(60.0); 11]);
        let errs = src.validate("wet_bulb.");
        assert!(errs.to_string().contains("expected 12 monthly temperatures"));
    }
}
