use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::bands::{interpret, Interpretation, InterpretationBands};
use super::decimal::Hundredths;
use super::{group_mean, item_mean, overall_mean, AssessmentError, LikertResponseSet};
use crate::exec::Exec;

/// Raw responses or an already-computed item mean.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ItemSource {
    Responses { responses: Vec<u8> },
    Mean { mean: Hundredths },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemInput {
    pub item_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(flatten)]
    pub source: ItemSource,
}

impl ItemInput {
    pub fn with_mean(item_id: impl Into<String>, mean: Hundredths) -> Self {
        Self { item_id: item_id.into(), description: None, source: ItemSource::Mean { mean } }
    }

    pub fn with_responses(item_id: impl Into<String>, responses: Vec<u8>) -> Self {
        Self { item_id: item_id.into(), description: None, source: ItemSource::Responses { responses } }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInput {
    pub name: String,
    pub items: Vec<ItemInput>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssessmentInput {
    pub groups: Vec<GroupInput>,
    /// Caption of the bottom row; "Overall Mean" when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overall_label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemReport {
    pub item_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub mean: Hundredths,
    pub interpretation: Interpretation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub name: String,
    pub items: Vec<ItemReport>,
    pub mean: Hundredths,
    pub interpretation: Interpretation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssessmentReport {
    pub groups: Vec<GroupReport>,
    pub overall_label: String,
    pub overall_mean: Hundredths,
    pub overall_interpretation: Interpretation,
}

fn item_report(item: &ItemInput, bands: &InterpretationBands) -> Result<ItemReport, AssessmentError> {
    let mean = match &item.source {
        ItemSource::Responses { responses } => {
            item_mean(&LikertResponseSet::new(item.item_id.clone(), responses.clone())?)
        }
        ItemSource::Mean { mean } => *mean,
    };
    Ok(ItemReport {
        item_id: item.item_id.clone(),
        description: item.description.clone(),
        mean,
        interpretation: interpret(mean, bands)?,
    })
}

fn group_report(group: &GroupInput, bands: &InterpretationBands) -> Result<GroupReport, AssessmentError> {
    if group.items.is_empty() {
        return Err(AssessmentError::Domain(format!("group `{}` has no items", group.name)));
    }
    let items = group
        .items
        .iter()
        .map(|item| item_report(item, bands))
        .collect::<Result<Vec<_>, _>>()?;
    let means: Vec<Hundredths> = items.iter().map(|i| i.mean).collect();
    let mean = group_mean(&means)?;
    Ok(GroupReport { name: group.name.clone(), items, mean, interpretation: interpret(mean, bands)? })
}

pub fn build_report(input: &AssessmentInput, bands: &InterpretationBands) -> Result<AssessmentReport, AssessmentError> {
    build_report_with(input, bands, Exec::default())
}

/// Groups are independent, so `exec` may evaluate them concurrently.
pub fn build_report_with(
    input: &AssessmentInput,
    bands: &InterpretationBands,
    exec: Exec,
) -> Result<AssessmentReport, AssessmentError> {
    if input.groups.is_empty() {
        return Err(AssessmentError::Domain("at least one group is required".into()));
    }
    let groups = exec
        .map(input.groups.iter().collect(), |g| group_report(g, bands))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let means: Vec<Hundredths> = groups.iter().map(|g| g.mean).collect();
    let overall = overall_mean(&means)?;
    Ok(AssessmentReport {
        groups,
        overall_label: input.overall_label.clone().unwrap_or_else(|| "Overall Mean".into()),
        overall_mean: overall,
        overall_interpretation: interpret(overall, bands)?,
    })
}

/// Reads `item_id,response` rows, with an optional leading `group` column.
/// Groups and items keep the order of their first appearance; without a
/// group column everything lands in a single group named "Responses".
pub fn parse_responses_csv(csv_text: &str) -> Result<AssessmentInput, AssessmentError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(csv_text.as_bytes());
    let headers = reader.headers().map_err(|e| AssessmentError::Input(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let item_col = col("item_id").ok_or_else(|| AssessmentError::Input("missing `item_id` column".into()))?;
    let resp_col = col("response").ok_or_else(|| AssessmentError::Input("missing `response` column".into()))?;
    let group_col = col("group");

    let mut groups: Vec<GroupInput> = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| AssessmentError::Input(e.to_string()))?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let group_name = group_col.map_or("Responses", field);
        let item_id = field(item_col);
        let response: u8 = field(resp_col).parse().map_err(|_| {
            AssessmentError::Input(format!("row {}: `{}` is not a response value", line + 2, field(resp_col)))
        })?;

        let group = match groups.iter_mut().position(|g| g.name == group_name) {
            Some(i) => &mut groups[i],
            None => {
                groups.push(GroupInput { name: group_name.to_string(), items: Vec::new() });
                groups.last_mut().expect("just pushed")
            }
        };
        match group.items.iter_mut().find(|i| i.item_id == item_id) {
            Some(ItemInput { source: ItemSource::Responses { responses }, .. }) => responses.push(response),
            Some(_) => unreachable!("csv items always carry responses"),
            None => group.items.push(ItemInput::with_responses(item_id, vec![response])),
        }
    }
    if groups.is_empty() {
        return Err(AssessmentError::Input("no response rows".into()));
    }
    Ok(AssessmentInput { groups, overall_label: None })
}

fn label(i: &Interpretation) -> String {
    match &i.secondary {
        Some(second) => format!("{}  {}", i.label, second),
        None => i.label.clone(),
    }
}

/// Plain-text table: one row per item, a "Mean" row closing each group and
/// the overall row at the bottom.
pub fn render_table(report: &AssessmentReport) -> String {
    let group_w = report
        .groups
        .iter()
        .map(|g| g.name.chars().count())
        .chain([report.overall_label.chars().count(), "Attribute".len()])
        .max()
        .unwrap_or(0);
    let item_text = |i: &ItemReport| i.description.clone().unwrap_or_else(|| i.item_id.clone());
    let item_w = report
        .groups
        .iter()
        .flat_map(|g| g.items.iter().map(|i| item_text(i).chars().count()))
        .chain(["Description".len()])
        .max()
        .unwrap_or(0);

    let mut out = String::new();
    let mut row = |a: &str, b: &str, mean: &str, interp: &str| {
        let line = format!("{a:<group_w$}  {b:<item_w$}  {mean:>4}  {interp}");
        let _ = writeln!(out, "{}", line.trim_end());
    };
    row("Attribute", "Description", "Mean", "Interpretation");
    for g in &report.groups {
        for (k, item) in g.items.iter().enumerate() {
            let name = if k == 0 { g.name.as_str() } else { "" };
            row(name, &item_text(item), &item.mean.to_string(), &label(&item.interpretation));
        }
        if g.items.len() > 1 {
            row("", "Mean", &g.mean.to_string(), &label(&g.interpretation));
        }
    }
    row(
        &report.overall_label,
        "",
        &report.overall_mean.to_string(),
        &label(&report.overall_interpretation),
    );
    out
}
