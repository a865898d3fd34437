use serde::{Deserialize, Serialize};

use super::space::{admits, MAX_DIVIDEND, MAX_PRODUCT, MAX_SUM};
use super::templates::Instantiation;
use super::topic::{Operator, TopicId};
use super::ProblemError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Presentation {
    NumericSentence,
    SetsOfObjects,
    NumberLine,
    SentencePartsQuery,
    WordProblem,
}

/// The named parts of a multiplication or division sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SentenceParts {
    Multiplication { multiplicand: u32, multiplier: u32, product: u32 },
    Division { dividend: u32, divisor: u32, quotient: u32 },
}

impl SentenceParts {
    /// `(role, value)` pairs in sentence order.
    pub fn labeled(&self) -> [(&'static str, u32); 3] {
        match *self {
            SentenceParts::Multiplication { multiplicand, multiplier, product } => [
                ("multiplicand", multiplicand),
                ("multiplier", multiplier),
                ("product", product),
            ],
            SentenceParts::Division { dividend, divisor, quotient } => [
                ("dividend", dividend),
                ("divisor", divisor),
                ("quotient", quotient),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Problem {
    pub topic: TopicId,
    pub operands: Vec<u32>,
    pub operator: Operator,
    pub answer: u32,
    pub presentation: Presentation,
    pub prompt_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence_parts: Option<SentenceParts>,
}

fn default_presentation(topic: TopicId) -> Presentation {
    match topic {
        TopicId::MulRepeatedAdditionSets => Presentation::SetsOfObjects,
        TopicId::MulRepeatedAdditionNumberLine => Presentation::NumberLine,
        TopicId::MulSentenceParts | TopicId::DivSentenceParts => Presentation::SentencePartsQuery,
        t if t.is_word_problem() => Presentation::WordProblem,
        _ => Presentation::NumericSentence,
    }
}

fn sentence_parts_for(operator: Operator, [x, y]: [u32; 2], answer: u32) -> Option<SentenceParts> {
    match operator {
        Operator::Multiply => Some(SentenceParts::Multiplication {
            multiplicand: x,
            multiplier: y,
            product: answer,
        }),
        Operator::Divide => Some(SentenceParts::Division {
            dividend: x,
            divisor: y,
            quotient: answer,
        }),
        _ => None,
    }
}

impl Problem {
    /// Builds a problem for a numeric topic from an admitted operand pair.
    pub fn from_operands(topic: TopicId, operands: [u32; 2]) -> Result<Problem, ProblemError> {
        if topic.is_word_problem() {
            return Err(ProblemError::Domain(format!(
                "{topic} problems are built from templates"
            )));
        }
        if !admits(topic, operands) {
            return Err(ProblemError::Domain(format!(
                "operands {operands:?} violate the constraints of {topic}"
            )));
        }
        let operator = topic.operator();
        let answer = operator
            .apply(operands[0], operands[1])
            .expect("admitted operands have an exact result");
        let presentation = default_presentation(topic);
        let [x, y] = operands;
        let sentence = format!("{x} {} {y} = ?", operator.symbol());
        let prompt_text = match presentation {
            Presentation::SetsOfObjects => format!("{x} groups of {y}. How many in all? {sentence}"),
            Presentation::NumberLine => {
                format!("Start at 0 and jump by {y}, {x} times. Where do you land? {sentence}")
            }
            Presentation::SentencePartsQuery if operator == Operator::Multiply => {
                format!("What is the product? {sentence}")
            }
            Presentation::SentencePartsQuery => format!("What is the quotient? {sentence}"),
            _ => sentence,
        };
        Ok(Problem {
            topic,
            operands: operands.to_vec(),
            operator,
            answer,
            presentation,
            prompt_text,
            sentence_parts: sentence_parts_for(operator, operands, answer),
        })
    }

    /// Wraps a filled-in template as a problem of a word-problem topic.
    pub fn from_instantiation(topic: TopicId, inst: Instantiation) -> Result<Problem, ProblemError> {
        if !topic.is_word_problem() {
            return Err(ProblemError::Domain(format!("{topic} is not a word-problem topic")));
        }
        let operator = topic.operator();
        let problem = Problem {
            topic,
            operands: inst.operands.to_vec(),
            operator,
            answer: inst.answer,
            presentation: Presentation::WordProblem,
            prompt_text: inst.text,
            sentence_parts: sentence_parts_for(operator, inst.operands, inst.answer),
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Operand pair, for the binary problems this crate produces.
    pub fn pair(&self) -> Option<[u32; 2]> {
        match self.operands.as_slice() {
            &[x, y] => Some([x, y]),
            _ => None,
        }
    }

    /// Checks the invariants every problem must hold, regardless of how it
    /// was built.
    pub fn validate(&self) -> Result<(), ProblemError> {
        let err = |msg: String| Err(ProblemError::Domain(msg));
        let Some([x, y]) = self.pair() else {
            return err(format!("expected two operands, found {}", self.operands.len()));
        };
        if self.operator != self.topic.operator() {
            return err(format!("operator {:?} does not belong to {}", self.operator, self.topic));
        }
        match self.operator.apply(x, y) {
            Some(exact) if exact == self.answer => {}
            Some(exact) => return err(format!("answer {} but {x} {} {y} = {exact}", self.answer, self.operator.symbol())),
            None => return err(format!("{x} {} {y} has no exact whole-number result", self.operator.symbol())),
        }
        let over = match self.operator {
            Operator::Add => self.answer > MAX_SUM,
            Operator::Multiply => self.answer > MAX_PRODUCT,
            Operator::Divide => x > MAX_DIVIDEND,
            Operator::Subtract => false,
        };
        if over {
            return err(format!("{x} {} {y} exceeds the lesson bound", self.operator.symbol()));
        }
        if !admits(self.topic, [x, y]) {
            return err(format!("operands {:?} violate the constraints of {}", self.operands, self.topic));
        }
        Ok(())
    }
}
