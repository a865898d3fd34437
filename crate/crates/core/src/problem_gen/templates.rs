//! Word-problem templates loaded from JSON.
//!
//! For `+`, `−` and `×` the two slots are the operands in sentence order.
//! For `÷` the slots are named `divisor` and `quotient`; the dividend is
//! their product and the text refers to it as `{dividend}`, which keeps
//! every instantiation exact.

use std::collections::HashSet;
use std::path::Path;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::space::{MAX_DIVIDEND, MAX_DIVISOR, MAX_PRODUCT, MAX_SUM};
use super::topic::{Lesson, Operator};
use super::ProblemError;

const BUILTIN: &str = include_str!("../../data/word_problems.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub name: String,
    pub min: u32,
    pub max: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordProblemTemplate {
    pub template_id: String,
    pub lesson: Lesson,
    pub text: String,
    pub slots: Vec<Slot>,
    pub operator: Operator,
}

/// A filled-in template: display text, operands in sentence order, answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instantiation {
    pub text: String,
    pub operands: [u32; 2],
    pub answer: u32,
}

fn placeholders(text: &str) -> Result<Vec<&str>, String> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find('{') {
        let after = &rest[open + 1..];
        let close = after
            .find('}')
            .ok_or_else(|| "unterminated `{` in template text".to_string())?;
        out.push(&after[..close]);
        rest = &after[close + 1..];
    }
    if rest.contains('}') {
        return Err("stray `}` in template text".into());
    }
    Ok(out)
}

impl WordProblemTemplate {
    pub fn validate(&self) -> Result<(), ProblemError> {
        let fail = |msg: String| Err(ProblemError::Template { id: self.template_id.clone(), msg });

        if self.template_id.trim().is_empty() {
            return fail("empty template_id".into());
        }
        if self.operator != self.lesson.operator() {
            return fail(format!("operator {:?} does not match lesson {}", self.operator, self.lesson));
        }
        let [a, b] = match self.slots.as_slice() {
            [a, b] => [a, b],
            _ => return fail(format!("expected exactly 2 slots, found {}", self.slots.len())),
        };
        if a.name == b.name {
            return fail(format!("duplicate slot name `{}`", a.name));
        }
        for slot in [a, b] {
            if slot.min > slot.max {
                return fail(format!("slot `{}` has min {} > max {}", slot.name, slot.min, slot.max));
            }
        }

        match self.operator {
            Operator::Add if a.max + b.max > MAX_SUM => {
                return fail(format!("largest sum {} exceeds {MAX_SUM}", a.max + b.max));
            }
            Operator::Subtract if b.max > a.min => {
                return fail("subtrahend range can exceed the minuend range".into());
            }
            Operator::Subtract if a.max > MAX_SUM => {
                return fail(format!("minuend can exceed {MAX_SUM}"));
            }
            Operator::Multiply if a.max * b.max > MAX_PRODUCT => {
                return fail(format!("largest product {} exceeds {MAX_PRODUCT}", a.max * b.max));
            }
            Operator::Divide => {
                if a.name != "divisor" || b.name != "quotient" {
                    return fail("division slots must be `divisor` then `quotient`".into());
                }
                if a.min < 1 || a.max > MAX_DIVISOR {
                    return fail(format!("divisor range must lie in [1, {MAX_DIVISOR}]"));
                }
                if a.max * b.max > MAX_DIVIDEND {
                    return fail(format!("largest dividend {} exceeds {MAX_DIVIDEND}", a.max * b.max));
                }
            }
            _ => {}
        }

        let names = match placeholders(&self.text) {
            Ok(names) => names,
            Err(msg) => return fail(msg),
        };
        for name in names {
            let known = self.slots.iter().any(|s| s.name == name)
                || (self.operator == Operator::Divide && name == "dividend");
            if !known {
                return fail(format!("text refers to unknown slot `{{{name}}}`"));
            }
            if self.operator == Operator::Divide && name == "quotient" {
                return fail("text must not reveal the quotient".into());
            }
        }
        Ok(())
    }

    /// Fills the slots with explicit values; values must be in range.
    pub fn instantiate_with(&self, values: [u32; 2]) -> Result<Instantiation, ProblemError> {
        for (slot, value) in self.slots.iter().zip(values) {
            if !(slot.min..=slot.max).contains(&value) {
                return Err(ProblemError::Template {
                    id: self.template_id.clone(),
                    msg: format!("value {value} outside slot `{}` range", slot.name),
                });
            }
        }
        let (operands, answer) = match self.operator {
            Operator::Divide => {
                let [divisor, quotient] = values;
                ([divisor * quotient, divisor], quotient)
            }
            op => {
                let answer = op.apply(values[0], values[1]).ok_or_else(|| ProblemError::Template {
                    id: self.template_id.clone(),
                    msg: "slot values give no exact result".into(),
                })?;
                (values, answer)
            }
        };
        let mut text = self.text.clone();
        for (slot, value) in self.slots.iter().zip(values) {
            text = text.replace(&format!("{{{}}}", slot.name), &value.to_string());
        }
        if self.operator == Operator::Divide {
            text = text.replace("{dividend}", &operands[0].to_string());
        }
        Ok(Instantiation { text, operands, answer })
    }

    pub fn instantiate<R: Rng + ?Sized>(&self, rng: &mut R) -> Instantiation {
        let values = [
            rng.random_range(self.slots[0].min..=self.slots[0].max),
            rng.random_range(self.slots[1].min..=self.slots[1].max),
        ];
        self.instantiate_with(values)
            .expect("validated template accepts in-range values")
    }
}

/// A validated collection of templates with at least one per lesson.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSet {
    templates: Vec<WordProblemTemplate>,
}

impl TemplateSet {
    pub fn new(templates: Vec<WordProblemTemplate>) -> Result<Self, ProblemError> {
        let mut seen = HashSet::new();
        for t in &templates {
            t.validate()?;
            if !seen.insert(t.template_id.as_str()) {
                return Err(ProblemError::Template {
                    id: t.template_id.clone(),
                    msg: "duplicate template_id".into(),
                });
            }
        }
        for lesson in Lesson::ALL {
            if !templates.iter().any(|t| t.lesson == lesson) {
                return Err(ProblemError::Config(format!("no word-problem template for {lesson}")));
            }
        }
        Ok(Self { templates })
    }

    pub fn from_json(json: &str) -> Result<Self, ProblemError> {
        let templates: Vec<WordProblemTemplate> =
            serde_json::from_str(json).map_err(|e| ProblemError::Config(format!("template file: {e}")))?;
        Self::new(templates)
    }

    pub fn load(path: &Path) -> Result<Self, ProblemError> {
        let json = std::fs::read_to_string(path)
            .map_err(|e| ProblemError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&json).map_err(|e| match e {
            ProblemError::Config(msg) => ProblemError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// The template set shipped with the crate.
    pub fn builtin() -> &'static TemplateSet {
        static SET: OnceLock<TemplateSet> = OnceLock::new();
        SET.get_or_init(|| TemplateSet::from_json(BUILTIN).expect("built-in templates are valid"))
    }

    pub fn for_lesson(&self, lesson: Lesson) -> impl Iterator<Item = &WordProblemTemplate> {
        self.templates.iter().filter(move |t| t.lesson == lesson)
    }

    pub fn iter(&self) -> impl Iterator<Item = &WordProblemTemplate> {
        self.templates.iter()
    }
}
