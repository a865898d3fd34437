//! Game-based arithmetic practice for second graders.
//!
//! - [`problem_gen`]: curriculum topics, problem generation and classification
//! - [`lesson`]: the preparatory → developmental → evaluation session engine
//! - [`rewards`]: tickets earned per topic and spent in the store
//! - [`store`]: durable learner profiles, score history and wallets
//! - [`assessment`]: Likert-scale evaluation indices
//!
//! Batch sweeps take an [`Exec`] strategy; with the default `parallel`
//! feature they run on rayon.

pub mod assessment;
pub mod exec;
pub mod lesson;
pub mod problem_gen;
pub mod record;
pub mod rewards;
pub mod store;

pub use exec::Exec;
pub use record::{LearnerId, LearnerProfile, Remark, ScoreRecord};
