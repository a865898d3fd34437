//! Display structures for the different ways a problem can be shown.

use serde::{Deserialize, Serialize};

use super::problem::{Presentation, Problem, SentenceParts};
use super::topic::{Operator, TopicId};
use super::ProblemError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Rendering {
    NumericSentence { expression: String },
    /// `groups.len()` groups; each entry is the icon count of one group.
    SetsOfObjects { groups: Vec<u32>, total: u32 },
    /// Positions visited on the number line, starting at 0.
    NumberLine { jump: u32, stops: Vec<u32>, end: u32 },
    SentenceParts { parts: SentenceParts },
    WordProblem { text: String },
}

impl Rendering {
    /// What the rendering adds up to, for the forms that show a total.
    pub fn total(&self) -> Option<u32> {
        match self {
            Rendering::SetsOfObjects { total, .. } => Some(*total),
            Rendering::NumberLine { end, .. } => Some(*end),
            _ => None,
        }
    }
}

fn supports_repeated_addition(topic: TopicId) -> bool {
    matches!(
        topic,
        TopicId::MulRepeatedAdditionSets | TopicId::MulRepeatedAdditionNumberLine | TopicId::MulZeroProperty
    )
}

pub fn render_presentation(p: &Problem, form: Presentation) -> Result<Rendering, ProblemError> {
    let incompatible = || {
        Err(ProblemError::Domain(format!(
            "{form:?} cannot present a {} problem",
            p.topic
        )))
    };
    let Some([x, y]) = p.pair() else {
        return Err(ProblemError::Domain("expected two operands".into()));
    };
    match form {
        Presentation::NumericSentence => Ok(Rendering::NumericSentence {
            expression: format!("{x} {} {y} = ?", p.operator.symbol()),
        }),
        Presentation::SetsOfObjects => {
            if p.operator != Operator::Multiply || !supports_repeated_addition(p.topic) {
                return incompatible();
            }
            let groups = vec![y; x as usize];
            Ok(Rendering::SetsOfObjects { total: groups.iter().sum(), groups })
        }
        Presentation::NumberLine => {
            if p.operator != Operator::Multiply || !supports_repeated_addition(p.topic) {
                return incompatible();
            }
            let stops: Vec<u32> = (0..=x).map(|k| k * y).collect();
            let end = *stops.last().expect("at least the origin");
            Ok(Rendering::NumberLine { jump: y, stops, end })
        }
        Presentation::SentencePartsQuery => Ok(Rendering::SentenceParts { parts: parts_of_sentence(p)? }),
        Presentation::WordProblem => {
            if !p.topic.is_word_problem() {
                return incompatible();
            }
            Ok(Rendering::WordProblem { text: p.prompt_text.clone() })
        }
    }
}

pub fn parts_of_sentence(p: &Problem) -> Result<SentenceParts, ProblemError> {
    let Some([x, y]) = p.pair() else {
        return Err(ProblemError::Domain("expected two operands".into()));
    };
    match p.operator {
        Operator::Multiply => Ok(SentenceParts::Multiplication { multiplicand: x, multiplier: y, product: p.answer }),
        Operator::Divide => Ok(SentenceParts::Division { dividend: x, divisor: y, quotient: p.answer }),
        op => Err(ProblemError::Domain(format!(
            "a {} sentence has no named parts",
            op.symbol()
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisionMode {
    Partition,
    Distribution,
    RepeatedSubtraction,
    InverseMultiplication,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DivisionIllustration {
    /// `divisor` groups, each holding `quotient` items.
    Partition { groups: Vec<u32> },
    /// After round `r` (1-based), every one of the `divisor` groups holds
    /// `r` items; `rounds[r - 1]` is that snapshot.
    Distribution { rounds: Vec<Vec<u32>> },
    RepeatedSubtraction { sequence: Vec<u32>, steps: u32 },
    InverseMultiplication { sentence: String },
}

pub fn illustrate_division(p: &Problem, mode: DivisionMode) -> Result<DivisionIllustration, ProblemError> {
    let SentenceParts::Division { dividend, divisor, quotient } = parts_of_sentence(p)? else {
        return Err(ProblemError::Domain(format!("{} is not a division problem", p.topic)));
    };
    Ok(match mode {
        DivisionMode::Partition => DivisionIllustration::Partition {
            groups: vec![quotient; divisor as usize],
        },
        DivisionMode::Distribution => DivisionIllustration::Distribution {
            rounds: (1..=quotient).map(|r| vec![r; divisor as usize]).collect(),
        },
        DivisionMode::RepeatedSubtraction => {
            let sequence: Vec<u32> = (0..=quotient).map(|k| dividend - k * divisor).collect();
            DivisionIllustration::RepeatedSubtraction { steps: quotient, sequence }
        }
        DivisionMode::InverseMultiplication => DivisionIllustration::InverseMultiplication {
            sentence: format!("{divisor} × {quotient} = {dividend}"),
        },
    })
}
