use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::decimal::Hundredths;
use super::AssessmentError;

pub const SCALE_MIN: Hundredths = Hundredths(100);
pub const SCALE_MAX: Hundredths = Hundredths(500);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    /// Inclusive upper bound. The lower bound is the previous band's upper
    /// bound (exclusive), or 1.00 for the first band.
    pub upper: Hundredths,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpretationBands {
    bands: Vec<Band>,
    /// Optional second label keyed by primary label, e.g. "Agree" → "Effective".
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    secondary: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary: Option<String>,
}

const LIKERT_LABELS: [&str; 5] = ["Strongly Disagree", "Disagree", "Moderately Agree", "Agree", "Strongly Agree"];

impl InterpretationBands {
    pub fn new(bands: Vec<Band>, secondary: BTreeMap<String, String>) -> Result<Self, AssessmentError> {
        let Some(last) = bands.last() else {
            return Err(AssessmentError::Bands("at least one band is required".into()));
        };
        if last.upper != SCALE_MAX {
            return Err(AssessmentError::Bands(format!("final upper bound must be {SCALE_MAX}, got {}", last.upper)));
        }
        if bands[0].upper < SCALE_MIN {
            return Err(AssessmentError::Bands(format!("first upper bound must be at least {SCALE_MIN}")));
        }
        if bands.windows(2).any(|w| w[0].upper >= w[1].upper) {
            return Err(AssessmentError::Bands("upper bounds must be strictly increasing".into()));
        }
        if bands.iter().any(|b| b.label.trim().is_empty()) {
            return Err(AssessmentError::Bands("band labels must be non-empty".into()));
        }
        Ok(Self { bands, secondary })
    }

    fn likert(uppers: [u32; 5], secondary: &[(&str, &str)]) -> Self {
        let bands = uppers
            .iter()
            .zip(LIKERT_LABELS)
            .map(|(&upper, label)| Band { upper: Hundredths(upper), label: label.into() })
            .collect();
        let secondary = secondary.iter().map(|&(k, v)| (k.into(), v.into())).collect();
        Self::new(bands, secondary).expect("preset bands are valid")
    }

    /// Five equal-width bands of 0.80 over the 1–5 scale.
    pub fn equal_width() -> Self {
        Self::likert([180, 260, 340, 420, 500], &[])
    }

    /// Bands under which every row of the effectiveness table, including
    /// its 3.38 row, reads "Agree" / "Effective".
    pub fn effectiveness() -> Self {
        Self::likert(
            [180, 260, 320, 420, 500],
            &[
                ("Strongly Disagree", "Not Effective"),
                ("Disagree", "Slightly Effective"),
                ("Moderately Agree", "Moderately Effective"),
                ("Agree", "Effective"),
                ("Strongly Agree", "Highly Effective"),
            ],
        )
    }

    pub const PRESETS: [&'static str; 2] = ["equal-width", "effectiveness"];

    pub fn preset(name: &str) -> Result<Self, AssessmentError> {
        match name {
            "equal-width" => Ok(Self::equal_width()),
            "effectiveness" => Ok(Self::effectiveness()),
            other => Err(AssessmentError::Bands(format!(
                "unknown preset `{other}` (expected one of {:?})",
                Self::PRESETS
            ))),
        }
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }
}

pub fn interpret(mean: Hundredths, bands: &InterpretationBands) -> Result<Interpretation, AssessmentError> {
    if mean < SCALE_MIN || mean > SCALE_MAX {
        return Err(AssessmentError::Domain(format!("mean {mean} is outside [{SCALE_MIN}, {SCALE_MAX}]")));
    }
    let band = bands
        .bands
        .iter()
        .find(|b| b.upper >= mean)
        .expect("bands end at the top of the scale");
    Ok(Interpretation {
        label: band.label.clone(),
        secondary: bands.secondary.get(&band.label).cloned(),
    })
}
