//! Learner identity and the per-topic score record.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::problem_gen::{Lesson, TopicId};

/// System-assigned learner identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LearnerId(pub u64);

impl fmt::Display for LearnerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for LearnerId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(LearnerId)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnerProfile {
    pub learner_id: LearnerId,
    pub display_name: String,
    pub grade_level: u8,
    pub registered_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Remark {
    Passed,
    Failed,
}

impl Remark {
    pub fn as_str(self) -> &'static str {
        match self {
            Remark::Passed => "Passed",
            Remark::Failed => "Failed",
        }
    }
}

impl fmt::Display for Remark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Remark {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Passed" => Ok(Remark::Passed),
            "Failed" => Ok(Remark::Failed),
            other => Err(format!("unknown remark `{other}`")),
        }
    }
}

/// One row of a learner's assessment sheet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub date: NaiveDate,
    pub learner_name: String,
    pub topic: TopicId,
    pub preparatory_percent: u8,
    pub developmental_percent: u8,
    pub evaluation_percent: u8,
    pub remark: Remark,
}

impl ScoreRecord {
    pub fn lesson(&self) -> Lesson {
        self.topic.lesson()
    }

    pub fn passed(&self) -> bool {
        self.remark == Remark::Passed
    }

    pub fn percents_in_range(&self) -> bool {
        [self.preparatory_percent, self.developmental_percent, self.evaluation_percent]
            .iter()
            .all(|&p| p <= 100)
    }
}
