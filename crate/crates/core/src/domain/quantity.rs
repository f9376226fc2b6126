use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Relative tolerance used for every floating-point consistency check.
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor below which two values are always considered equal.
pub const ABS_TOL: f64 = 1e-12;

/// `|a - b| <= REL_TOL * max(|a|, |b|)`, with an absolute floor of `ABS_TOL`.
pub fn approx_eq(a: f64, b: f64) -> bool {
    approx_eq_scaled(a, b, a.abs().max(b.abs()))
}

/// Like [`approx_eq`], but relative to an explicit magnitude. Useful when the
/// compared values are differences of much larger terms.
pub fn approx_eq_scaled(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= (REL_TOL * scale).max(ABS_TOL)
}

/// Mass units accepted at the file boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum MassUnit {
    #[default]
    #[serde(rename = "kgCO2e")]
    Kilograms,
    #[serde(rename = "tCO2e")]
    Tonnes,
}

impl MassUnit {
    pub fn to_kg(self, value: f64) -> f64 {
        match self {
            MassUnit::Kilograms => value,
            MassUnit::Tonnes => value * 1000.0,
        }
    }

    pub fn from_kg(self, kg: f64) -> f64 {
        match self {
            MassUnit::Kilograms => kg,
            MassUnit::Tonnes => kg / 1000.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MassUnit::Kilograms => "kgCO2e",
            MassUnit::Tonnes => "tCO2e",
        }
    }
}

/// Greenhouse-gas emissions in kg CO2e over one assessment period.
///
/// Used both for footprints (never negative) and for effects (either sign).
/// The sign check for footprints happens where a footprint is consumed, not
/// here.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Co2e(f64);

impl Co2e {
    pub const ZERO: Co2e = Co2e(0.0);

    pub const fn kg(value: f64) -> Self {
        Co2e(value)
    }

    pub fn tonnes(value: f64) -> Self {
        Co2e(MassUnit::Tonnes.to_kg(value))
    }

    pub fn in_unit(value: f64, unit: MassUnit) -> Self {
        Co2e(unit.to_kg(value))
    }

    pub const fn as_kg(self) -> f64 {
        self.0
    }

    pub fn as_tonnes(self) -> f64 {
        MassUnit::Tonnes.from_kg(self.0)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn approx_eq(self, other: Co2e) -> bool {
        approx_eq(self.0, other.0)
    }
}

impl fmt::Display for Co2e {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(precision) = f.precision() {
            write!(f, "{:.*} kgCO2e", precision, self.0)
        } else {
            write!(f, "{} kgCO2e", self.0)
        }
    }
}

impl Add for Co2e {
    type Output = Co2e;
    fn add(self, rhs: Co2e) -> Co2e {
        Co2e(self.0 + rhs.0)
    }
}

impl AddAssign for Co2e {
    fn add_assign(&mut self, rhs: Co2e) {
        self.0 += rhs.0;
    }
}

impl Sub for Co2e {
    type Output = Co2e;
    fn sub(self, rhs: Co2e) -> Co2e {
        Co2e(self.0 - rhs.0)
    }
}

impl Neg for Co2e {
    type Output = Co2e;
    fn neg(self) -> Co2e {
        Co2e(-self.0)
    }
}

impl Mul<f64> for Co2e {
    type Output = Co2e;
    fn mul(self, rhs: f64) -> Co2e {
        Co2e(self.0 * rhs)
    }
}

impl Div<f64> for Co2e {
    type Output = Co2e;
    fn div(self, rhs: f64) -> Co2e {
        Co2e(self.0 / rhs)
    }
}

impl Sum for Co2e {
    fn sum<I: Iterator<Item = Co2e>>(iter: I) -> Co2e {
        Co2e(iter.map(|c| c.0).sum())
    }
}

#[derive(Serialize, Deserialize)]
struct QuantityRepr {
    value: f64,
    unit: MassUnit,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum QuantityInput {
    Bare(f64),
    Tagged(QuantityRepr),
}

/// Serialized as `{"unit": "kgCO2e", "value": ...}`. A bare number is read as
/// kilograms; `"tCO2e"` values are converted on the way in.
impl Serialize for Co2e {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QuantityRepr {
            value: self.0,
            unit: MassUnit::Kilograms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Co2e {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match QuantityInput::deserialize(deserializer) {
            Ok(QuantityInput::Bare(v)) => Ok(Co2e(v)),
            Ok(QuantityInput::Tagged(q)) => Ok(Co2e::in_unit(q.value, q.unit)),
            Err(_) => Err(serde::de::Error::custom(
                "expected an emission quantity: a number (kgCO2e) or {\"value\": .., \"unit\": \"kgCO2e\"|\"tCO2e\"}",
            )),
        }
    }
}

/// Length of one assessment period. All quantities in a scenario refer to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodUnit {
    Day,
    Month,
    Year,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssessmentPeriod {
    pub unit: PeriodUnit,
    pub label: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tonnes_are_converted_at_the_boundary() {
        let q: Co2e = serde_json::from_str(r#"{"value": 1.5, "unit": "tCO2e"}"#).unwrap();
        assert_eq!(q.as_kg(), 1500.0);
        assert_eq!(q.as_tonnes(), 1.5);
        let bare: Co2e = serde_json::from_str("12.5").unwrap();
        assert_eq!(bare, Co2e::kg(12.5));
        let out = serde_json::to_string(&q).unwrap();
        assert_eq!(out, r#"{"value":1500.0,"unit":"kgCO2e"}"#);
    }

    #[test]
    fn unknown_unit_is_rejected() {
        assert!(serde_json::from_str::<Co2e>(r#"{"value": 1, "unit": "MtCO2e"}"#).is_err());
    }

    #[test]
    fn tolerance_has_absolute_floor() {
        assert!(approx_eq(0.0, 1e-13));
        assert!(!approx_eq(0.0, 1e-11));
        assert!(approx_eq(1e9, 1e9 + 0.5));
        assert!(!approx_eq(1e9, 1e9 + 2.0));
    }
}
