//! CSV progress reports in the assessment score-sheet layout.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::StoreError;
use crate::problem_gen::TopicId;
use crate::record::ScoreRecord;

pub const REPORT_HEADER: [&str; 8] =
    ["Date", "Name", "Lesson", "Topic", "Preparatory", "Developmental", "Evaluation", "Remarks"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DateStyle {
    /// `2011-05-11`
    #[default]
    Iso,
    /// `5/11/2011`, as printed on the score sheets.
    MonthDayYear,
}

impl DateStyle {
    pub fn format(self, date: NaiveDate) -> String {
        match self {
            DateStyle::Iso => date.format("%Y-%m-%d").to_string(),
            DateStyle::MonthDayYear => date.format("%-m/%-d/%Y").to_string(),
        }
    }

    pub fn parse(self, text: &str) -> Option<NaiveDate> {
        let fmt = match self {
            DateStyle::Iso => "%Y-%m-%d",
            DateStyle::MonthDayYear => "%m/%d/%Y",
        };
        NaiveDate::parse_from_str(text, fmt).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "snake_case")]
pub enum ReportFormat {
    Csv { dates: DateStyle },
}

impl Default for ReportFormat {
    fn default() -> Self {
        ReportFormat::Csv { dates: DateStyle::MonthDayYear }
    }
}

fn percent(p: u8) -> String {
    format!("{p}%")
}

pub fn render_csv(records: &[ScoreRecord], dates: DateStyle) -> Result<String, StoreError> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let enc = |e: csv::Error| StoreError::Encode(e.to_string());
    writer.write_record(REPORT_HEADER).map_err(enc)?;
    for r in records {
        writer
            .write_record([
                dates.format(r.date),
                r.learner_name.clone(),
                r.lesson().name().to_string(),
                r.topic.name().to_string(),
                percent(r.preparatory_percent),
                percent(r.developmental_percent),
                percent(r.evaluation_percent),
                r.remark.to_string(),
            ])
            .map_err(enc)?;
    }
    let bytes = writer.into_inner().map_err(|e| StoreError::Encode(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| StoreError::Encode(e.to_string()))
}

/// Reads a report produced by [`render_csv`] back into records.
pub fn parse_csv(text: &str, dates: DateStyle) -> Result<Vec<ScoreRecord>, StoreError> {
    let bad = |row: usize, msg: String| StoreError::Validation(format!("report row {row}: {msg}"));
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| StoreError::Validation(e.to_string()))?;
    if header.iter().ne(REPORT_HEADER) {
        return Err(StoreError::Validation(format!("unexpected report header {header:?}")));
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| bad(i + 1, e.to_string()))?;
        let field = |k: usize| row.get(k).unwrap_or_default();
        let pct = |k: usize| -> Result<u8, StoreError> {
            field(k)
                .strip_suffix('%')
                .and_then(|n| n.parse::<u8>().ok())
                .filter(|&p| p <= 100)
                .ok_or_else(|| bad(i + 1, format!("bad percentage `{}`", field(k))))
        };
        let topic = TopicId::from_name(field(3)).ok_or_else(|| bad(i + 1, format!("unknown topic `{}`", field(3))))?;
        if topic.lesson().name() != field(2) {
            return Err(bad(i + 1, format!("lesson `{}` does not match topic", field(2))));
        }
        out.push(ScoreRecord {
            date: dates.parse(field(0)).ok_or_else(|| bad(i + 1, format!("bad date `{}`", field(0))))?,
            learner_name: field(1).to_string(),
            topic,
            preparatory_percent: pct(4)?,
            developmental_percent: pct(5)?,
            evaluation_percent: pct(6)?,
            remark: field(7).parse().map_err(|e| bad(i + 1, e))?,
        });
    }
    Ok(out)
}
