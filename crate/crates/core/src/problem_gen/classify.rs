use serde::{Deserialize, Serialize};

use super::ProblemError;

/// Smallest and largest operand of the 2-to-3-digit addition and subtraction topics.
pub const MIN_MULTI_DIGIT: u32 = 10;
pub const MAX_MULTI_DIGIT: u32 = 999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdditionClass {
    pub regrouping: bool,
    pub zero_in_addend: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubtractionClass {
    pub borrow_tens: bool,
    pub borrow_hundreds: bool,
    pub zero_difficulty: bool,
}

/// Decimal digits, least significant first, padded to three columns.
fn columns(n: u32) -> [u32; 3] {
    [n % 10, (n / 10) % 10, (n / 100) % 10]
}

fn has_zero_digit(mut n: u32) -> bool {
    if n == 0 {
        return true;
    }
    while n > 0 {
        if n.is_multiple_of(10) {
            return true;
        }
        n /= 10;
    }
    false
}

fn check_operand(name: &str, value: u32) -> Result<(), ProblemError> {
    if (MIN_MULTI_DIGIT..=MAX_MULTI_DIGIT).contains(&value) {
        Ok(())
    } else {
        Err(ProblemError::Domain(format!(
            "{name} {value} is outside the 2-to-3-digit range [{MIN_MULTI_DIGIT}, {MAX_MULTI_DIGIT}]"
        )))
    }
}

/// Column-by-column carry simulation. Leading zeros of a shorter addend are
/// padding, not digits, so `zero_in_addend` only looks at written digits.
pub fn classify_addition(a: u32, b: u32) -> Result<AdditionClass, ProblemError> {
    check_operand("addend", a)?;
    check_operand("addend", b)?;
    Ok(addition_class_unchecked(a, b))
}

pub(crate) fn addition_class_unchecked(a: u32, b: u32) -> AdditionClass {
    let (da, db) = (columns(a), columns(b));
    let mut carry = 0;
    let mut regrouping = false;
    for col in 0..3 {
        let sum = da[col] + db[col] + carry;
        if sum > 9 {
            regrouping = true;
            carry = 1;
        } else {
            carry = 0;
        }
    }
    AdditionClass {
        regrouping,
        zero_in_addend: has_zero_digit(a) || has_zero_digit(b),
    }
}

/// Column-by-column borrow simulation.
///
/// A borrow request that lands on a minuend digit of 0 has to travel one
/// more column to the left; that is what `zero_difficulty` records.
pub fn classify_subtraction(minuend: u32, subtrahend: u32) -> Result<SubtractionClass, ProblemError> {
    check_operand("minuend", minuend)?;
    check_operand("subtrahend", subtrahend)?;
    if subtrahend > minuend {
        return Err(ProblemError::Domain(format!(
            "subtrahend {subtrahend} exceeds minuend {minuend}; negative differences are out of scope"
        )));
    }
    Ok(subtraction_class_unchecked(minuend, subtrahend))
}

pub(crate) fn subtraction_class_unchecked(minuend: u32, subtrahend: u32) -> SubtractionClass {
    let (m, s) = (columns(minuend), columns(subtrahend));
    let mut needs_borrow = [false; 3];
    let mut zero_difficulty = false;
    let mut owed = 0i32;
    for col in 0..3 {
        if owed == 1 && m[col] == 0 && col > 0 {
            zero_difficulty = true;
        }
        let top = m[col] as i32 - owed;
        if top < s[col] as i32 {
            needs_borrow[col] = true;
            owed = 1;
        } else {
            owed = 0;
        }
    }
    SubtractionClass {
        borrow_tens: needs_borrow[0],
        borrow_hundreds: needs_borrow[1],
        zero_difficulty,
    }
}
