//! Dimension-tagged scalar quantities.
//!
//! Each quantity is a finite, validated `f64` in a fixed unit. Only the
//! products that make physical sense are implemented (energy × intensity),
//! so mixing dimensions is a compile error rather than a runtime surprise.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Why a raw number was rejected as a quantity.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuantityError {
    #[error("value must be finite, got {0}")]
    NotFinite(f64),
    #[error("value must be non-negative, got {0}")]
    Negative(f64),
    #[error("value {value} is outside [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },
}

fn check_non_negative(value: f64) -> Result<f64, QuantityError> {
    if !value.is_finite() {
        Err(QuantityError::NotFinite(value))
    } else if value < 0.0 {
        Err(QuantityError::Negative(value))
    } else {
        // normalise -0.0
        Ok(value + 0.0)
    }
}

macro_rules! non_negative_quantity {
    ($(#[$meta:meta])* $name:ident, $unit:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
        #[serde(try_from = "f64", into = "f64")]
        pub struct $name(f64);

        impl $name {
            pub const ZERO: Self = Self(0.0);
            pub const UNIT: &'static str = $unit;

            pub fn new(value: f64) -> Result<Self, QuantityError> {
                check_non_negative(value).map(Self)
            }

            pub fn value(self) -> f64 {
                self.0
            }

            /// Multiplies by a non-negative finite factor.
            ///
            /// Panics if `factor` is negative or not finite.
            pub fn scaled(self, factor: f64) -> Self {
                assert!(
                    factor.is_finite() && factor >= 0.0,
                    "scale factor must be finite and non-negative, got {factor}"
                );
                Self(self.0 * factor)
            }

            /// Divides by a strictly positive finite divisor.
            pub fn divided_by(self, divisor: f64) -> Self {
                assert!(
                    divisor.is_finite() && divisor > 0.0,
                    "divisor must be finite and positive, got {divisor}"
                );
                Self(self.0 / divisor)
            }
        }

        impl TryFrom<f64> for $name {
            type Error = QuantityError;

            fn try_from(value: f64) -> Result<Self, Self::Error> {
                Self::new(value)
            }
        }

        impl From<$name> for f64 {
            fn from(q: $name) -> f64 {
                q.0
            }
        }

        impl Add for $name {
            type Output = Self;

            fn add(self, rhs: Self) -> Self {
                Self(self.0 + rhs.0)
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, rhs: Self) {
                self.0 += rhs.0;
            }
        }

        impl Sum for $name {
            fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
                iter.fold(Self::ZERO, Add::add)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if let Some(p) = f.precision() {
                    write!(f, "{:.*} {}", p, self.0, $unit)
                } else {
                    write!(f, "{} {}", self.0, $unit)
                }
            }
        }
    };
}

non_negative_quantity!(
    /// Electrical energy in kilowatt-hours.
    Energy,
    "kWh"
);
non_negative_quantity!(
    /// Water volume in litres.
    Water,
    "L"
);
non_negative_quantity!(
    /// Greenhouse-gas emissions in kilograms of CO₂-equivalent.
    Emissions,
    "kgCO2e"
);
non_negative_quantity!(
    /// Water usage effectiveness in litres per kilowatt-hour.
    Wue,
    "L/kWh"
);
non_negative_quantity!(
    /// Grid carbon intensity in kgCO₂e per kilowatt-hour.
    CarbonIntensity,
    "kgCO2e/kWh"
);

impl Mul<Wue> for Energy {
    type Output = Water;

    fn mul(self, rhs: Wue) -> Water {
        Water(self.0 * rhs.0)
    }
}

impl Mul<CarbonIntensity> for Energy {
    type Output = Emissions;

    fn mul(self, rhs: CarbonIntensity) -> Emissions {
        Emissions(self.0 * rhs.0)
    }
}

/// Sanity bounds for terrestrial wet-bulb readings, °F.
pub const MIN_TEMPERATURE_F: f64 = -60.0;
pub const MAX_TEMPERATURE_F: f64 = 150.0;

/// Accepted °C input range for [`fahrenheit_from_celsius`].
pub const MIN_TEMPERATURE_C: f64 = -51.0;
pub const MAX_TEMPERATURE_C: f64 = 66.0;

/// A temperature in degrees Fahrenheit.
///
/// All temperatures are held in °F internally because the cooling-tower
/// polynomial is calibrated in °F. Celsius only appears at input boundaries.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TemperatureF(f64);

impl TemperatureF {
    pub fn new(value: f64) -> Result<Self, QuantityError> {
        if !value.is_finite() {
            return Err(QuantityError::NotFinite(value));
        }
        if !(MIN_TEMPERATURE_F..=MAX_TEMPERATURE_F).contains(&value) {
            return Err(QuantityError::OutOfRange {
                value,
                min: MIN_TEMPERATURE_F,
                max: MAX_TEMPERATURE_F,
            });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_celsius(self) -> f64 {
        celsius_from_fahrenheit(self)
    }
}

impl TryFrom<f64> for TemperatureF {
    type Error = QuantityError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<TemperatureF> for f64 {
    fn from(t: TemperatureF) -> f64 {
        t.0
    }
}

impl fmt::Display for TemperatureF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} °F", self.0)
    }
}

pub fn fahrenheit_from_celsius(celsius: f64) -> Result<TemperatureF, QuantityError> {
    if !celsius.is_finite() {
        return Err(QuantityError::NotFinite(celsius));
    }
    if !(MIN_TEMPERATURE_C..=MAX_TEMPERATURE_C).contains(&celsius) {
        return Err(QuantityError::OutOfRange {
            value: celsius,
            min: MIN_TEMPERATURE_C,
            max: MAX_TEMPERATURE_C,
        });
    }
    TemperatureF::new(celsius * 9.0 / 5.0 + 32.0)
}

pub fn celsius_from_fahrenheit(t: TemperatureF) -> f64 {
    (t.0 - 32.0) * 5.0 / 9.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn freezing_point_and_out_of_range_boiling_point() {
        assert_eq!(fahrenheit_from_celsius(0.0).unwrap().value(), 32.0);
        assert_eq!(
            fahrenheit_from_celsius(100.0).unwrap_err(),
            QuantityError::OutOfRange {
                value: 100.0,
                min: MIN_TEMPERATURE_C,
                max: MAX_TEMPERATURE_C,
            }
        );
    }

    #[test]
    fn top_of_celsius_range_hits_fahrenheit_bound() {
        // 66 °C is 150.8 °F, just past the wet-bulb sanity bound.
        let err = fahrenheit_from_celsius(66.0).unwrap_err();
        assert!(matches!(err, QuantityError::OutOfRange { max, .. } if max == MAX_TEMPERATURE_F));
        assert!(fahrenheit_from_celsius(65.5).is_ok());
    }

    #[test]
    fn brisbane_afternoon_mean() {
        let t = fahrenheit_from_celsius(18.5).unwrap();
        assert!((t.value() - 65.3).abs() < 1e-12);
    }

    #[test]
    fn celsius_bounds_are_named() {
        let err = fahrenheit_from_celsius(-60.0).unwrap_err();
        assert!(err.to_string().contains("-51"), "{err}");
        assert!(fahrenheit_from_celsius(f64::NAN).is_err());
    }

    #[test]
    fn rejects_non_finite_and_negative() {
        assert_eq!(Energy::new(f64::INFINITY), Err(QuantityError::NotFinite(f64::INFINITY)));
        assert!(matches!(Water::new(f64::NAN), Err(QuantityError::NotFinite(_))));
        assert_eq!(Wue::new(-0.1), Err(QuantityError::Negative(-0.1)));
        assert!(TemperatureF::new(151.0).is_err());
        assert!(TemperatureF::new(-20.0).is_ok());
    }

    #[test]
    fn negative_zero_is_normalised() {
        let e = Energy::new(-0.0).unwrap();
        assert!(e.value().is_sign_positive());
    }

    #[test]
    fn products_carry_the_right_dimension() {
        let e = Energy::new(2.0).unwrap();
        let w: Water = e * Wue::new(1.5).unwrap();
        let c: Emissions = e * CarbonIntensity::new(0.5).unwrap();
        assert_eq!(w.value(), 3.0);
        assert_eq!(c.value(), 1.0);
    }

    #[test]
    fn serde_validates() {
        assert!(serde_json::from_str::<Energy>("-1.0").is_err());
        let e: Energy = serde_json::from_str("1.25").unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), "1.25");
    }

    proptest! {
        #[test]
        fn celsius_round_trip(c in MIN_TEMPERATURE_C..=65.5) {
            let f = fahrenheit_from_celsius(c).unwrap();
            prop_assert!((celsius_from_fahrenheit(f) - c).abs() < 1e-9);
        }

        #[test]
        fn sum_matches_fold(values in proptest::collection::vec(0.0f64..1e6, 0..20)) {
            let total: Energy = values.iter().map(|v| Energy::new(*v).unwrap()).sum();
            let expected: f64 = values.iter().sum();
            prop_assert_eq!(total.value(), expected);
        }
    }
}
