//! Likert-scale evaluation indices.
//!
//! All aggregation happens on exact hundredths: an item mean is the mean of
//! its 1–5 responses, a group mean is the mean of its item means, and the
//! overall mean is the mean of the group means. Each level rounds half-up to
//! two decimals before feeding the next.

mod bands;
mod decimal;
mod report;

use serde::{Deserialize, Serialize};

pub use bands::{interpret, Band, Interpretation, InterpretationBands, SCALE_MAX, SCALE_MIN};
pub use decimal::{div_round_half_up, Hundredths, ParseHundredthsError};
pub use report::{
    build_report, build_report_with, parse_responses_csv, render_table, AssessmentInput, AssessmentReport,
    GroupInput, GroupReport, ItemInput, ItemReport, ItemSource,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssessmentError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("interpretation bands: {0}")]
    Bands(String),
    #[error("input: {0}")]
    Input(String),
}

/// The responses collected for one questionnaire item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawResponseSet")]
pub struct LikertResponseSet {
    item_id: String,
    responses: Vec<u8>,
}

#[derive(Deserialize)]
struct RawResponseSet {
    item_id: String,
    responses: Vec<u8>,
}

impl TryFrom<RawResponseSet> for LikertResponseSet {
    type Error = AssessmentError;

    fn try_from(raw: RawResponseSet) -> Result<Self, Self::Error> {
        LikertResponseSet::new(raw.item_id, raw.responses)
    }
}

impl LikertResponseSet {
    pub fn new(item_id: impl Into<String>, responses: Vec<u8>) -> Result<Self, AssessmentError> {
        let item_id = item_id.into();
        if responses.is_empty() {
            return Err(AssessmentError::Domain(format!("item `{item_id}` has no responses")));
        }
        if let Some(bad) = responses.iter().find(|r| !(1..=5).contains(*r)) {
            return Err(AssessmentError::Domain(format!("item `{item_id}`: response {bad} is outside 1..=5")));
        }
        Ok(Self { item_id, responses })
    }

    pub fn item_id(&self) -> &str {
        &self.item_id
    }

    pub fn responses(&self) -> &[u8] {
        &self.responses
    }
}

pub fn item_mean(set: &LikertResponseSet) -> Hundredths {
    let sum: u64 = set.responses.iter().map(|&r| u64::from(r)).sum();
    Hundredths(div_round_half_up(100 * sum, set.responses.len() as u64) as u32)
}

/// Unweighted mean of item means.
pub fn group_mean(item_means: &[Hundredths]) -> Result<Hundredths, AssessmentError> {
    Hundredths::mean_of(item_means).ok_or_else(|| AssessmentError::Domain("no item means to aggregate".into()))
}

/// Unweighted mean of group means.
pub fn overall_mean(group_means: &[Hundredths]) -> Result<Hundredths, AssessmentError> {
    Hundredths::mean_of(group_means).ok_or_else(|| AssessmentError::Domain("no group means to aggregate".into()))
}
