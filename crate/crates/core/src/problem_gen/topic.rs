use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The four lessons, in teaching order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Lesson {
    Addition,
    Subtraction,
    Multiplication,
    Division,
}

impl Lesson {
    pub const ALL: [Lesson; 4] = [
        Lesson::Addition,
        Lesson::Subtraction,
        Lesson::Multiplication,
        Lesson::Division,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lesson::Addition => "Addition",
            Lesson::Subtraction => "Subtraction",
            Lesson::Multiplication => "Multiplication",
            Lesson::Division => "Division",
        }
    }

    pub fn operator(self) -> Operator {
        match self {
            Lesson::Addition => Operator::Add,
            Lesson::Subtraction => Operator::Subtract,
            Lesson::Multiplication => Operator::Multiply,
            Lesson::Division => Operator::Divide,
        }
    }

    pub fn from_name(name: &str) -> Option<Lesson> {
        Lesson::ALL.into_iter().find(|l| l.name() == name)
    }
}

impl fmt::Display for Lesson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Subtract,
    #[serde(rename = "*")]
    Multiply,
    #[serde(rename = "/")]
    Divide,
}

impl Operator {
    pub fn symbol(self) -> char {
        match self {
            Operator::Add => '+',
            Operator::Subtract => '−',
            Operator::Multiply => '×',
            Operator::Divide => '÷',
        }
    }

    /// Exact result, or `None` when the result is negative, fractional or
    /// undefined.
    pub fn apply(self, lhs: u32, rhs: u32) -> Option<u32> {
        match self {
            Operator::Add => lhs.checked_add(rhs),
            Operator::Subtract => lhs.checked_sub(rhs),
            Operator::Multiply => lhs.checked_mul(rhs),
            Operator::Divide => {
                if rhs == 0 || !lhs.is_multiple_of(rhs) {
                    None
                } else {
                    Some(lhs / rhs)
                }
            }
        }
    }
}

/// One curriculum topic. Discriminants are the curriculum ordinals; the
/// wire form is [`TopicId::code`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TopicId {
    AddWithoutRegrouping = 0,
    AddWithRegrouping,
    AddZeroWithoutRegrouping,
    AddZeroWithRegrouping,
    AddWordProblems,
    SubWithoutRegrouping,
    SubRegroupTens,
    SubRegroupHundredsZero,
    SubRegroupTensHundredsZero,
    SubWordProblems,
    MulRepeatedAdditionSets,
    MulRepeatedAdditionNumberLine,
    MulSentenceParts,
    MulZeroProperty,
    MulProductsTo81,
    MulWordProblems,
    DivSentenceParts,
    DivIllustrating,
    DivDividendsTo81,
    DivWordProblems,
}

const CURRICULUM: [TopicId; 20] = [
    TopicId::AddWithoutRegrouping,
    TopicId::AddWithRegrouping,
    TopicId::AddZeroWithoutRegrouping,
    TopicId::AddZeroWithRegrouping,
    TopicId::AddWordProblems,
    TopicId::SubWithoutRegrouping,
    TopicId::SubRegroupTens,
    TopicId::SubRegroupHundredsZero,
    TopicId::SubRegroupTensHundredsZero,
    TopicId::SubWordProblems,
    TopicId::MulRepeatedAdditionSets,
    TopicId::MulRepeatedAdditionNumberLine,
    TopicId::MulSentenceParts,
    TopicId::MulZeroProperty,
    TopicId::MulProductsTo81,
    TopicId::MulWordProblems,
    TopicId::DivSentenceParts,
    TopicId::DivIllustrating,
    TopicId::DivDividendsTo81,
    TopicId::DivWordProblems,
];

/// All topics in teaching order; `curriculum()[i].ordinal() == i`.
pub fn curriculum() -> &'static [TopicId] {
    &CURRICULUM
}

impl TopicId {
    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn from_ordinal(ordinal: usize) -> Option<TopicId> {
        CURRICULUM.get(ordinal).copied()
    }

    pub fn lesson(self) -> Lesson {
        use TopicId::*;
        match self {
            AddWithoutRegrouping
            | AddWithRegrouping
            | AddZeroWithoutRegrouping
            | AddZeroWithRegrouping
            | AddWordProblems => Lesson::Addition,
            SubWithoutRegrouping
            | SubRegroupTens
            | SubRegroupHundredsZero
            | SubRegroupTensHundredsZero
            | SubWordProblems => Lesson::Subtraction,
            MulRepeatedAdditionSets
            | MulRepeatedAdditionNumberLine
            | MulSentenceParts
            | MulZeroProperty
            | MulProductsTo81
            | MulWordProblems => Lesson::Multiplication,
            DivSentenceParts | DivIllustrating | DivDividendsTo81 | DivWordProblems => {
                Lesson::Division
            }
        }
    }

    pub fn operator(self) -> Operator {
        self.lesson().operator()
    }

    pub fn is_word_problem(self) -> bool {
        matches!(
            self,
            TopicId::AddWordProblems
                | TopicId::SubWordProblems
                | TopicId::MulWordProblems
                | TopicId::DivWordProblems
        )
    }

    /// Stable snake_case code used on the wire and in file names.
    pub fn code(self) -> &'static str {
        use TopicId::*;
        match self {
            AddWithoutRegrouping => "add_without_regrouping",
            AddWithRegrouping => "add_with_regrouping",
            AddZeroWithoutRegrouping => "add_zero_without_regrouping",
            AddZeroWithRegrouping => "add_zero_with_regrouping",
            AddWordProblems => "add_word_problems",
            SubWithoutRegrouping => "sub_without_regrouping",
            SubRegroupTens => "sub_regroup_tens",
            SubRegroupHundredsZero => "sub_regroup_hundreds_zero",
            SubRegroupTensHundredsZero => "sub_regroup_tens_hundreds_zero",
            SubWordProblems => "sub_word_problems",
            MulRepeatedAdditionSets => "mul_repeated_addition_sets",
            MulRepeatedAdditionNumberLine => "mul_repeated_addition_number_line",
            MulSentenceParts => "mul_sentence_parts",
            MulZeroProperty => "mul_zero_property",
            MulProductsTo81 => "mul_products_to_81",
            MulWordProblems => "mul_word_problems",
            DivSentenceParts => "div_sentence_parts",
            DivIllustrating => "div_illustrating",
            DivDividendsTo81 => "div_dividends_to_81",
            DivWordProblems => "div_word_problems",
        }
    }

    /// Display name as it appears on assessment score sheets.
    pub fn name(self) -> &'static str {
        use TopicId::*;
        match self {
            AddWithoutRegrouping => "Add 2-to-3-digit numbers with sums up to 999 without Regrouping",
            AddWithRegrouping => "Add 2-to-3-digit numbers with sums up to 999 with Regrouping",
            AddZeroWithoutRegrouping => {
                "Add 2-to-3-digit numbers with sums up to 999 with Zero in any of the Addends without Regrouping"
            }
            AddZeroWithRegrouping => {
                "Add 2-to-3-digit numbers with sums up to 999 with Zero in any of the Addends with Regrouping"
            }
            AddWordProblems => "Analyzing Word Problems in Addition",
            SubWithoutRegrouping => "Subtracting 2-to-3-Digit Numbers without Regrouping",
            SubRegroupTens => "Subtracting 2-to-3-Digit Numbers with Regrouping in the Tens Place",
            SubRegroupHundredsZero => {
                "Subtracting 2-to-3-Digit Numbers with Regrouping in the Hundreds Place and with Zero Difficulty"
            }
            SubRegroupTensHundredsZero => {
                "Subtracting 2-to-3-Digit Numbers with Regrouping in the Tens and Hundreds Place and with Zero Difficulty"
            }
            SubWordProblems => "Analyzing Word Problems in Subtraction",
            MulRepeatedAdditionSets => "Multiplication as Repeated Addition using Sets",
            MulRepeatedAdditionNumberLine => "Multiplication as Repeated Addition using Number Line",
            MulSentenceParts => "Identifying Parts of a Multiplication Sentence",
            MulZeroProperty => "Showing that Zero Multiplied by a Number is Zero",
            MulProductsTo81 => "Multiplying 1-to-2 Digit Numbers with Products up to 81",
            MulWordProblems => "Analyzing Word Problems in Multiplication",
            DivSentenceParts => "Parts of a Division Sentence",
            DivIllustrating => "Illustrating Division",
            DivDividendsTo81 => {
                "Dividing 1-to-2 Digit Numbers by 1-Digit Number with Dividends through 81"
            }
            DivWordProblems => "Analyzing Word Problems in Division",
        }
    }

    pub fn from_name(name: &str) -> Option<TopicId> {
        CURRICULUM.into_iter().find(|t| t.name() == name)
    }

    /// The topics whose problems come from word-problem templates are excluded.
    pub fn enumerable() -> impl Iterator<Item = TopicId> {
        CURRICULUM.into_iter().filter(|t| !t.is_word_problem())
    }
}

impl fmt::Display for TopicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown topic code `{0}`")]
pub struct UnknownTopic(pub String);

impl FromStr for TopicId {
    type Err = UnknownTopic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CURRICULUM
            .into_iter()
            .find(|t| t.code() == s)
            .ok_or_else(|| UnknownTopic(s.to_string()))
    }
}

impl Serialize for TopicId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for TopicId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let code = std::borrow::Cow::<str>::deserialize(deserializer)?;
        code.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curriculum_starts_with_addition_and_ends_with_division() {
        let topics = curriculum();
        assert_eq!(topics.len(), 20);
        assert_eq!(topics[0], TopicId::AddWithoutRegrouping);
        assert_eq!(topics.last().unwrap().lesson(), Lesson::Division);
    }

    #[test]
    fn ordinals_are_dense() {
        for (i, t) in curriculum().iter().enumerate() {
            assert_eq!(t.ordinal(), i);
            assert_eq!(TopicId::from_ordinal(i), Some(*t));
        }
        assert_eq!(TopicId::from_ordinal(20), None);
    }

    #[test]
    fn lessons_are_contiguous_and_ordered() {
        let lessons: Vec<Lesson> = curriculum().iter().map(|t| t.lesson()).collect();
        assert!(lessons.windows(2).all(|w| w[0] <= w[1]));
        for lesson in Lesson::ALL {
            assert!(lessons.contains(&lesson));
        }
    }

    #[test]
    fn codes_and_names_round_trip() {
        for t in curriculum() {
            assert_eq!(t.code().parse::<TopicId>().unwrap(), *t);
            assert_eq!(TopicId::from_name(t.name()), Some(*t));
            let json = serde_json::to_string(t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.code()));
        }
        assert!("nope".parse::<TopicId>().is_err());
    }

    #[test]
    fn sixteen_topics_are_enumerable() {
        assert_eq!(TopicId::enumerable().count(), 16);
    }
}
