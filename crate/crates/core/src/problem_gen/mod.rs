//! Arithmetic problems for every curriculum topic.
//!
//! Each numeric topic is a constraint set over operand pairs ([`admits`]).
//! Generation draws candidates with a seeded RNG and keeps the first one the
//! constraint set admits, falling back to a uniform pick from the enumerated
//! space after [`REJECTION_BUDGET`] misses. Word-problem topics instantiate
//! templates instead.

mod classify;
mod generate;
mod problem;
mod render;
mod space;
mod templates;
mod topic;

pub use classify::{classify_addition, classify_subtraction, AdditionClass, SubtractionClass};
pub use generate::{generate_problem, Generator, REJECTION_BUDGET};
pub use problem::{Presentation, Problem, SentenceParts};
pub use render::{
    illustrate_division, parts_of_sentence, render_presentation, DivisionIllustration, DivisionMode,
    Rendering,
};
pub use space::{
    admits, enumerate_space, enumerate_space_with, OperandSpace, Operands, MAX_DIVIDEND, MAX_DIVISOR,
    MAX_MULTIPLICAND, MAX_PRODUCT, MAX_SUM,
};
pub use templates::{Instantiation, Slot, TemplateSet, WordProblemTemplate};
pub use topic::{curriculum, Lesson, Operator, TopicId, UnknownTopic};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProblemError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} has no finite operand space")]
    Unsupported(TopicId),
    #[error("template `{id}`: {msg}")]
    Template { id: String, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
}
