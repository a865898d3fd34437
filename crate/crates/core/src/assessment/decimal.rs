use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A non-negative decimal with exactly two fractional digits, stored as an
/// integer count of hundredths so that aggregation is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Hundredths(pub u32);

/// `num / den` rounded to the nearest integer, halves rounded up.
pub fn div_round_half_up(num: u64, den: u64) -> u64 {
    assert!(den > 0, "division by zero");
    (2 * num + den) / (2 * den)
}

impl Hundredths {
    pub const fn from_units(units: u32) -> Self {
        Hundredths(units * 100)
    }

    /// Exact mean of `values`, rounded half-up to two decimals.
    pub fn mean_of(values: &[Hundredths]) -> Option<Hundredths> {
        if values.is_empty() {
            return None;
        }
        let sum: u64 = values.iter().map(|v| u64::from(v.0)).sum();
        Some(Hundredths(div_round_half_up(sum, values.len() as u64) as u32))
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 100.0
    }

    /// Nearest hundredth of a float; `None` for negative or non-finite input.
    pub fn from_f64(value: f64) -> Option<Hundredths> {
        if !value.is_finite() || value < 0.0 || value > f64::from(u32::MAX) / 100.0 {
            return None;
        }
        Some(Hundredths((value * 100.0).round() as u32))
    }
}

impl fmt::Display for Hundredths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a decimal with at most two fractional digits")]
pub struct ParseHundredthsError(String);

impl FromStr for Hundredths {
    type Err = ParseHundredthsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseHundredthsError(s.to_string());
        let s = s.trim();
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        if whole.is_empty() || frac.len() > 2 || !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let whole: u32 = whole.parse().map_err(|_| err())?;
        let frac: u32 = match frac.len() {
            0 => 0,
            1 => frac.parse::<u32>().map_err(|_| err())? * 10,
            _ => frac.parse().map_err(|_| err())?,
        };
        whole
            .checked_mul(100)
            .and_then(|w| w.checked_add(frac))
            .map(Hundredths)
            .ok_or_else(err)
    }
}

impl Serialize for Hundredths {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_f64())
    }
}

impl<'de> Deserialize<'de> for Hundredths {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(n) => Hundredths::from_f64(n)
                .ok_or_else(|| serde::de::Error::custom(format!("{n} is not a non-negative decimal"))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(div_round_half_up(5, 2), 3);
        assert_eq!(div_round_half_up(7, 2), 4);
        assert_eq!(div_round_half_up(1774, 5), 355); // 354.8
        assert_eq!(div_round_half_up(1812, 5), 362); // 362.4
        assert_eq!(div_round_half_up(0, 3), 0);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3.62".parse::<Hundredths>().unwrap(), Hundredths(362));
        assert_eq!("4".parse::<Hundredths>().unwrap(), Hundredths(400));
        assert_eq!("3.5".parse::<Hundredths>().unwrap(), Hundredths(350));
        assert_eq!(Hundredths(305).to_string(), "3.05");
        assert!("3.625".parse::<Hundredths>().is_err());
        assert!("-1".parse::<Hundredths>().is_err());
        assert!(".5".parse::<Hundredths>().is_err());
    }

    #[test]
    fn json_accepts_numbers_and_strings() {
        let v: Vec<Hundredths> = serde_json::from_str(r#"[3.47, "4.33", 5]"#).unwrap();
        assert_eq!(v, [Hundredths(347), Hundredths(433), Hundredths(500)]);
        assert_eq!(serde_json::to_string(&Hundredths(362)).unwrap(), "3.62");
    }
}
