//! Operand constraint sets for each topic, and exhaustive enumeration of them.

use std::ops::RangeInclusive;
use std::sync::OnceLock;

use rand::Rng;

use super::classify::{addition_class_unchecked, subtraction_class_unchecked, MAX_MULTI_DIGIT, MIN_MULTI_DIGIT};
use super::topic::{curriculum, TopicId};
use super::ProblemError;
use crate::exec::Exec;

pub const MAX_SUM: u32 = 999;
pub const MAX_PRODUCT: u32 = 81;
pub const MAX_DIVIDEND: u32 = 81;
pub const MAX_DIVISOR: u32 = 9;
pub const MAX_MULTIPLICAND: u32 = 99;

/// An operand pair in sentence order: addends, minuend/subtrahend,
/// factors, or dividend/divisor.
pub type Operands = [u32; 2];

const MULTI_DIGIT: RangeInclusive<u32> = MIN_MULTI_DIGIT..=MAX_MULTI_DIGIT;

fn tens_digit(n: u32) -> u32 {
    (n / 10) % 10
}

/// Whether `operands` belong to the constraint set of `topic`.
///
/// Word-problem topics only carry the lesson-wide bounds (sum, product and
/// dividend caps, exact division, no negative differences).
pub fn admits(topic: TopicId, operands: Operands) -> bool {
    use TopicId::*;
    let [x, y] = operands;
    let both_multi_digit = MULTI_DIGIT.contains(&x) && MULTI_DIGIT.contains(&y);
    match topic {
        AddWithoutRegrouping | AddWithRegrouping | AddZeroWithoutRegrouping | AddZeroWithRegrouping => {
            if !both_multi_digit || x + y > MAX_SUM {
                return false;
            }
            let class = addition_class_unchecked(x, y);
            let (want_regroup, want_zero) = match topic {
                AddWithoutRegrouping => (false, false),
                AddWithRegrouping => (true, false),
                AddZeroWithoutRegrouping => (false, true),
                _ => (true, true),
            };
            class.regrouping == want_regroup && class.zero_in_addend == want_zero
        }
        SubWithoutRegrouping | SubRegroupTens | SubRegroupHundredsZero | SubRegroupTensHundredsZero => {
            if !both_multi_digit || y > x {
                return false;
            }
            let class = subtraction_class_unchecked(x, y);
            match topic {
                SubWithoutRegrouping => !class.borrow_tens && !class.borrow_hundreds,
                SubRegroupTens => class.borrow_tens && !class.borrow_hundreds,
                // The borrow for the tens column has to come out of the
                // hundreds and land on a 0 tens digit.
                SubRegroupHundredsZero => {
                    !class.borrow_tens && class.borrow_hundreds && tens_digit(x) == 0
                }
                _ => class.borrow_tens && class.borrow_hundreds && class.zero_difficulty,
            }
        }
        MulRepeatedAdditionSets | MulRepeatedAdditionNumberLine | MulSentenceParts => {
            (1..=9).contains(&x) && (1..=9).contains(&y)
        }
        MulZeroProperty => {
            (x == 0 && (1..=MAX_MULTIPLICAND).contains(&y))
                || (y == 0 && (1..=MAX_MULTIPLICAND).contains(&x))
        }
        MulProductsTo81 => {
            (1..=MAX_MULTIPLICAND).contains(&x) && (1..=MAX_DIVISOR).contains(&y) && x * y <= MAX_PRODUCT
        }
        DivSentenceParts | DivIllustrating | DivDividendsTo81 | DivWordProblems => {
            (1..=MAX_DIVISOR).contains(&y) && x <= MAX_DIVIDEND && x % y == 0
        }
        AddWordProblems => x.checked_add(y).is_some_and(|s| s <= MAX_SUM),
        SubWordProblems => y <= x && x <= MAX_SUM,
        MulWordProblems => x.checked_mul(y).is_some_and(|p| p <= MAX_PRODUCT),
    }
}

/// Rectangle of candidate operands that contains the whole constraint set.
fn bounding_box(topic: TopicId) -> Option<(RangeInclusive<u32>, RangeInclusive<u32>)> {
    use TopicId::*;
    if topic.is_word_problem() {
        return None;
    }
    Some(match topic {
        AddWithoutRegrouping | AddWithRegrouping | AddZeroWithoutRegrouping | AddZeroWithRegrouping
        | SubWithoutRegrouping | SubRegroupTens | SubRegroupHundredsZero | SubRegroupTensHundredsZero => {
            (MULTI_DIGIT, MULTI_DIGIT)
        }
        MulRepeatedAdditionSets | MulRepeatedAdditionNumberLine | MulSentenceParts => (1..=9, 1..=9),
        MulZeroProperty => (0..=MAX_MULTIPLICAND, 0..=MAX_MULTIPLICAND),
        MulProductsTo81 => (1..=MAX_MULTIPLICAND, 1..=MAX_DIVISOR),
        _ => (0..=MAX_DIVIDEND, 1..=MAX_DIVISOR),
    })
}

/// Every operand pair admitted by a topic, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperandSpace {
    topic: TopicId,
    tuples: Vec<Operands>,
}

impl OperandSpace {
    pub fn topic(&self) -> TopicId {
        self.topic
    }

    pub fn count(&self) -> usize {
        self.tuples.len()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &Operands> + '_ {
        self.tuples.iter()
    }

    pub fn as_slice(&self) -> &[Operands] {
        &self.tuples
    }

    /// Binary search; tuples are sorted.
    pub fn contains(&self, operands: Operands) -> bool {
        self.tuples.binary_search(&operands).is_ok()
    }
}

impl<'a> IntoIterator for &'a OperandSpace {
    type Item = &'a Operands;
    type IntoIter = std::slice::Iter<'a, Operands>;

    fn into_iter(self) -> Self::IntoIter {
        self.tuples.iter()
    }
}

pub fn enumerate_space(topic: TopicId) -> Result<OperandSpace, ProblemError> {
    enumerate_space_with(topic, Exec::default())
}

pub fn enumerate_space_with(topic: TopicId, exec: Exec) -> Result<OperandSpace, ProblemError> {
    let (outer, inner) = bounding_box(topic).ok_or(ProblemError::Unsupported(topic))?;
    let rows: Vec<Vec<Operands>> = exec.map(outer.collect::<Vec<_>>(), |x| {
        inner
            .clone()
            .map(|y| [x, y])
            .filter(|&pair| admits(topic, pair))
            .collect()
    });
    Ok(OperandSpace {
        topic,
        tuples: rows.into_iter().flatten().collect(),
    })
}

/// Process-wide cache used by the enumeration fallback in generation.
pub(crate) fn cached_space(topic: TopicId) -> Option<&'static OperandSpace> {
    static SPACES: OnceLock<Vec<Option<OperandSpace>>> = OnceLock::new();
    SPACES
        .get_or_init(|| {
            curriculum()
                .iter()
                .map(|&t| enumerate_space(t).ok())
                .collect()
        })
        .get(topic.ordinal())
        .and_then(Option::as_ref)
}

/// Draws one candidate pair from a distribution that covers the topic's
/// constraint set. Candidates still have to pass [`admits`].
pub(crate) fn sample_candidate<R: Rng + ?Sized>(topic: TopicId, rng: &mut R) -> Operands {
    use TopicId::*;
    match topic {
        AddWithoutRegrouping | AddWithRegrouping | AddZeroWithoutRegrouping | AddZeroWithRegrouping => {
            [rng.random_range(MULTI_DIGIT), rng.random_range(MULTI_DIGIT)]
        }
        SubWithoutRegrouping | SubRegroupTens | SubRegroupHundredsZero | SubRegroupTensHundredsZero => {
            let minuend = rng.random_range(MULTI_DIGIT);
            [minuend, rng.random_range(MIN_MULTI_DIGIT..=minuend)]
        }
        MulZeroProperty => {
            let other = rng.random_range(1..=MAX_MULTIPLICAND);
            if rng.random_bool(0.5) {
                [0, other]
            } else {
                [other, 0]
            }
        }
        MulProductsTo81 => {
            let multiplier = rng.random_range(1..=MAX_DIVISOR);
            [rng.random_range(1..=MAX_PRODUCT / multiplier), multiplier]
        }
        DivSentenceParts | DivIllustrating | DivDividendsTo81 | DivWordProblems => {
            let divisor = rng.random_range(1..=MAX_DIVISOR);
            let quotient = rng.random_range(0..=MAX_DIVIDEND / divisor);
            [divisor * quotient, divisor]
        }
        _ => [rng.random_range(1..=9), rng.random_range(1..=9)],
    }
}
