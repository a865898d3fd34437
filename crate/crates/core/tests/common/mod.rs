//! Brute-force oracles shared by the integration suites. They deliberately
//! avoid the library's own digit helpers: carries and borrows are computed
//! from decimal strings or from modular prefix comparisons.

#![allow(dead_code)]

use mathworld::problem_gen::TopicId;

/// Decimal digits of `n`, least significant first, from its string form.
fn digits(n: u32) -> Vec<u32> {
    n.to_string().bytes().rev().map(|b| u32::from(b - b'0')).collect()
}

fn digit_at(n: u32, col: usize) -> u32 {
    digits(n).get(col).copied().unwrap_or(0)
}

fn has_zero(n: u32) -> bool {
    n.to_string().contains('0')
}

fn digit_sum(n: u32) -> u32 {
    digits(n).iter().sum()
}

/// Column addition on written digits. Returns `(any carry, zero digit written)`.
pub fn addition_oracle(a: u32, b: u32) -> (bool, bool) {
    let (da, db) = (digits(a), digits(b));
    let width = da.len().max(db.len());
    let mut carry = 0;
    let mut any = false;
    for col in 0..width {
        let s = da.get(col).unwrap_or(&0) + db.get(col).unwrap_or(&0) + carry;
        carry = s / 10;
        any |= carry > 0;
    }
    (any, has_zero(a) || has_zero(b))
}

/// A sum regroups iff digit sums are not additive: every carry loses 9.
pub fn carry_count_by_digit_sums(a: u32, b: u32) -> u32 {
    (digit_sum(a) + digit_sum(b) - digit_sum(a + b)) / 9
}

/// Borrow out of column `c` happens iff the minuend's low `c + 1` digits are
/// smaller than the subtrahend's.
pub fn borrows_out_of(m: u32, s: u32, col: u32) -> bool {
    let p = 10u32.pow(col + 1);
    m % p < s % p
}

/// `(borrow_tens, borrow_hundreds, zero_difficulty)`.
pub fn subtraction_oracle(m: u32, s: u32) -> (bool, bool, bool) {
    let b0 = borrows_out_of(m, s, 0);
    let b1 = borrows_out_of(m, s, 1);
    // a borrow arriving at a column whose minuend digit is 0
    let zero = (b0 && digit_at(m, 1) == 0) || (b1 && digit_at(m, 2) == 0 && m >= 100);
    (b0, b1, zero)
}

fn multi_digit(n: u32) -> bool {
    let len = n.to_string().len();
    len == 2 || len == 3
}

/// Topic constraint sets restated from the curriculum.
pub fn topic_oracle(topic: TopicId, x: u32, y: u32) -> bool {
    use TopicId::*;
    match topic {
        AddWithoutRegrouping | AddWithRegrouping | AddZeroWithoutRegrouping | AddZeroWithRegrouping => {
            if !(multi_digit(x) && multi_digit(y) && x + y <= 999) {
                return false;
            }
            let (carry, zero) = addition_oracle(x, y);
            match topic {
                AddWithoutRegrouping => !carry && !zero,
                AddWithRegrouping => carry && !zero,
                AddZeroWithoutRegrouping => !carry && zero,
                _ => carry && zero,
            }
        }
        SubWithoutRegrouping | SubRegroupTens | SubRegroupHundredsZero | SubRegroupTensHundredsZero => {
            if !(multi_digit(x) && multi_digit(y) && y <= x) {
                return false;
            }
            let (b0, b1, zero) = subtraction_oracle(x, y);
            match topic {
                SubWithoutRegrouping => !b0 && !b1,
                SubRegroupTens => b0 && !b1,
                SubRegroupHundredsZero => !b0 && b1 && digit_at(x, 1) == 0,
                _ => b0 && b1 && zero,
            }
        }
        MulRepeatedAdditionSets | MulRepeatedAdditionNumberLine | MulSentenceParts => {
            (1..10).contains(&x) && (1..10).contains(&y)
        }
        MulZeroProperty => (x == 0) != (y == 0) && x.max(y) < 100,
        MulProductsTo81 => x >= 1 && x.to_string().len() <= 2 && (1..10).contains(&y) && x * y <= 81,
        DivSentenceParts | DivIllustrating | DivDividendsTo81 => {
            (1..10).contains(&y) && x <= 81 && x.is_multiple_of(y)
        }
        _ => unreachable!("word-problem topics have no finite constraint set"),
    }
}

/// Candidate rectangle searched by [`brute_force_space`].
pub fn oracle_box(topic: TopicId) -> (std::ops::RangeInclusive<u32>, std::ops::RangeInclusive<u32>) {
    match topic.lesson() {
        mathworld::problem_gen::Lesson::Addition | mathworld::problem_gen::Lesson::Subtraction => (0..=999, 0..=999),
        _ => (0..=120, 0..=120),
    }
}

pub fn brute_force_space(topic: TopicId) -> Vec<[u32; 2]> {
    let (xs, ys) = oracle_box(topic);
    let mut out = Vec::new();
    for x in xs {
        for y in ys.clone() {
            if topic_oracle(topic, x, y) {
                out.push([x, y]);
            }
        }
    }
    out
}

/// Exact result of `x op y` for the operator of `topic`, or `None`.
pub fn expected_answer(topic: TopicId, x: u32, y: u32) -> Option<u32> {
    use mathworld::problem_gen::Lesson::*;
    match topic.lesson() {
        Addition => Some(x + y),
        Subtraction => x.checked_sub(y),
        Multiplication => Some(x * y),
        Division => (y != 0 && x.is_multiple_of(y)).then(|| x / y),
    }
}
