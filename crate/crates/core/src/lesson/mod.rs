//! Three-stage lesson sessions: preparatory, developmental, evaluation.

mod messages;

use std::collections::{BTreeSet, VecDeque};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::problem_gen::{curriculum, Generator, Problem, TopicId};
use crate::record::{LearnerId, LearnerProfile, Remark, ScoreRecord};

pub use messages::{MessageCatalog, MessageKey};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LessonError {
    #[error("topic {topic} is locked until every earlier topic is passed")]
    Locked { topic: TopicId },
    #[error("invalid session state: {0}")]
    State(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Preparatory,
    Developmental,
    Evaluation,
}

impl Stage {
    pub const ALL: [Stage; 3] = [Stage::Preparatory, Stage::Developmental, Stage::Evaluation];

    pub fn next(self) -> Option<Stage> {
        match self {
            Stage::Preparatory => Some(Stage::Developmental),
            Stage::Developmental => Some(Stage::Evaluation),
            Stage::Evaluation => None,
        }
    }
}

/// One value per stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PerStage<T> {
    pub preparatory: T,
    pub developmental: T,
    pub evaluation: T,
}

impl<T> PerStage<T> {
    pub fn get(&self, stage: Stage) -> &T {
        match stage {
            Stage::Preparatory => &self.preparatory,
            Stage::Developmental => &self.developmental,
            Stage::Evaluation => &self.evaluation,
        }
    }

    pub fn get_mut(&mut self, stage: Stage) -> &mut T {
        match stage {
            Stage::Preparatory => &mut self.preparatory,
            Stage::Developmental => &mut self.developmental,
            Stage::Evaluation => &mut self.evaluation,
        }
    }
}

/// Missing fields take their defaults when deserializing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionConfig {
    pub questions_per_stage: PerStage<u32>,
    pub time_limit_seconds: u32,
    pub pass_threshold_percent: u8,
}

pub const MIN_TIME_LIMIT_SECONDS: u32 = 5;

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            questions_per_stage: PerStage { preparatory: 4, developmental: 5, evaluation: 10 },
            time_limit_seconds: 60,
            pass_threshold_percent: 75,
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), LessonError> {
        for stage in Stage::ALL {
            if *self.questions_per_stage.get(stage) == 0 {
                return Err(LessonError::Config(format!("{stage:?} needs at least one question")));
            }
        }
        if self.time_limit_seconds < MIN_TIME_LIMIT_SECONDS {
            return Err(LessonError::Config(format!(
                "time limit {}s is below the {MIN_TIME_LIMIT_SECONDS}s minimum",
                self.time_limit_seconds
            )));
        }
        if self.pass_threshold_percent > 100 {
            return Err(LessonError::Config("pass threshold must be within 0..=100".into()));
        }
        Ok(())
    }
}

/// What kind of activity a queued question belongs to. Drill and review
/// both run in the preparatory stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activity {
    Drill,
    Review,
    Practice,
    Quiz,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueuedProblem {
    pub activity: Activity,
    pub problem: Problem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub asked: u32,
    pub correct: u32,
}

impl Tally {
    /// `round(100 × correct / asked)`, halves rounded up. `None` before the
    /// first answer.
    pub fn percent(&self) -> Option<u8> {
        if self.asked == 0 {
            return None;
        }
        let (c, a) = (u64::from(self.correct), u64::from(self.asked));
        Some(((200 * c + a) / (2 * a)) as u8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageScore {
    pub stage: Stage,
    pub percent: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackEvent {
    Correct,
    Incorrect,
    Timeout,
}

impl FeedbackEvent {
    pub fn message_key(self) -> MessageKey {
        match self {
            FeedbackEvent::Correct => MessageKey::Correct,
            FeedbackEvent::Incorrect => MessageKey::Incorrect,
            FeedbackEvent::Timeout => MessageKey::Timeout,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feedback {
    pub event: FeedbackEvent,
    pub correct_answer: u32,
    /// The answer emptied the current stage's queue.
    pub stage_complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionState {
    pub learner_id: LearnerId,
    pub learner_name: String,
    pub topic: TopicId,
    pub config: SessionConfig,
    pub stage: Stage,
    pub queue: VecDeque<QueuedProblem>,
    pub tally: PerStage<Tally>,
    pub started_at: DateTime<Utc>,
    pub finished: bool,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn question_seed(seed: u64, stage: Stage, index: u32) -> u64 {
    splitmix64(splitmix64(seed ^ ((stage as u64 + 1) << 56)) ^ u64::from(index))
}

/// Topics a learner may start: every topic up to and including the first
/// one without a Passed record.
pub fn unlocked_topics(history: &[ScoreRecord]) -> BTreeSet<TopicId> {
    let passed: BTreeSet<TopicId> = history.iter().filter(|r| r.passed()).map(|r| r.topic).collect();
    let mut unlocked = BTreeSet::new();
    for &topic in curriculum() {
        unlocked.insert(topic);
        if !passed.contains(&topic) {
            break;
        }
    }
    unlocked
}

/// Builds session states; holds the generator and session configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct LessonEngine<'a> {
    generator: Generator<'a>,
    config: SessionConfig,
}

impl<'a> LessonEngine<'a> {
    pub fn new(generator: Generator<'a>, config: SessionConfig) -> Result<Self, LessonError> {
        config.validate()?;
        Ok(Self { generator, config })
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    fn stage_queue(&self, topic: TopicId, stage: Stage, count: u32, seed: u64) -> VecDeque<QueuedProblem> {
        let drills = count.div_ceil(2);
        (0..count)
            .map(|i| {
                let activity = match stage {
                    Stage::Preparatory if i < drills => Activity::Drill,
                    Stage::Preparatory => Activity::Review,
                    Stage::Developmental => Activity::Practice,
                    Stage::Evaluation => Activity::Quiz,
                };
                QueuedProblem { activity, problem: self.generator.generate(topic, question_seed(seed, stage, i)) }
            })
            .collect()
    }

    pub fn start_session(
        &self,
        learner: &LearnerProfile,
        topic: TopicId,
        seed: u64,
        history: &[ScoreRecord],
        started_at: DateTime<Utc>,
    ) -> Result<SessionState, LessonError> {
        if !unlocked_topics(history).contains(&topic) {
            return Err(LessonError::Locked { topic });
        }
        Ok(SessionState {
            learner_id: learner.learner_id,
            learner_name: learner.display_name.clone(),
            topic,
            config: self.config,
            stage: Stage::Preparatory,
            queue: self.stage_queue(topic, Stage::Preparatory, self.config.questions_per_stage.preparatory, seed),
            tally: PerStage::default(),
            started_at,
            finished: false,
        })
    }

    /// Moves an emptied stage forward and fills the next queue from `seed`.
    /// Leaving the evaluation stage finishes the session.
    pub fn advance_stage(&self, state: &mut SessionState, seed: u64) -> Result<(), LessonError> {
        if state.finished {
            return Err(LessonError::State("session already finished".into()));
        }
        if !state.queue.is_empty() {
            return Err(LessonError::State(format!(
                "{} question(s) left in the {:?} stage",
                state.queue.len(),
                state.stage
            )));
        }
        match state.stage.next() {
            Some(next) => {
                // the session keeps the config it was started with
                let count = *state.config.questions_per_stage.get(next);
                state.queue = self.stage_queue(state.topic, next, count, seed);
                state.stage = next;
            }
            None => state.finished = true,
        }
        Ok(())
    }
}

impl SessionState {
    pub fn current(&self) -> Option<&QueuedProblem> {
        self.queue.front()
    }

    pub fn submit_answer(&mut self, answer: u32, elapsed_seconds: u32) -> Result<Feedback, LessonError> {
        if self.finished {
            return Err(LessonError::State("session already finished".into()));
        }
        let Some(item) = self.queue.pop_front() else {
            return Err(LessonError::State(format!(
                "no question pending in the {:?} stage; advance first",
                self.stage
            )));
        };
        let expected = item.problem.answer;
        let event = if elapsed_seconds > self.config.time_limit_seconds {
            FeedbackEvent::Timeout
        } else if answer == expected {
            FeedbackEvent::Correct
        } else {
            FeedbackEvent::Incorrect
        };
        let tally = self.tally.get_mut(self.stage);
        tally.asked += 1;
        if event == FeedbackEvent::Correct {
            tally.correct += 1;
        }
        Ok(Feedback { event, correct_answer: expected, stage_complete: self.queue.is_empty() })
    }

    pub fn stage_scores(&self) -> Option<[StageScore; 3]> {
        let mut out = [StageScore { stage: Stage::Preparatory, percent: 0 }; 3];
        for (slot, stage) in out.iter_mut().zip(Stage::ALL) {
            *slot = StageScore { stage, percent: self.tally.get(stage).percent()? };
        }
        Some(out)
    }

    pub fn finalize(&self) -> Result<ScoreRecord, LessonError> {
        if !self.finished {
            return Err(LessonError::State("session is not finished".into()));
        }
        let [prep, dev, eval] = self
            .stage_scores()
            .ok_or_else(|| LessonError::State("a stage has no answers".into()))?;
        let remark = if eval.percent >= self.config.pass_threshold_percent {
            Remark::Passed
        } else {
            Remark::Failed
        };
        Ok(ScoreRecord {
            date: self.started_at.date_naive(),
            learner_name: self.learner_name.clone(),
            topic: self.topic,
            preparatory_percent: prep.percent,
            developmental_percent: dev.percent,
            evaluation_percent: eval.percent,
            remark,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn john() -> LearnerProfile {
        LearnerProfile {
            learner_id: LearnerId(1),
            display_name: "John".into(),
            grade_level: 2,
            registered_at: Utc.with_ymd_and_hms(2011, 5, 11, 8, 0, 0).unwrap(),
        }
    }

    fn at() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2011, 5, 11, 9, 0, 0).unwrap()
    }

    fn passed(topic: TopicId) -> ScoreRecord {
        ScoreRecord {
            date: at().date_naive(),
            learner_name: "John".into(),
            topic,
            preparatory_percent: 100,
            developmental_percent: 100,
            evaluation_percent: 100,
            remark: Remark::Passed,
        }
    }

    /// Answers the stage with `correct` right answers first, then wrong ones.
    fn play_stage(state: &mut SessionState, correct: u32) {
        let mut i = 0;
        while let Some(q) = state.current() {
            let answer = q.problem.answer;
            let given = if i < correct { answer } else { answer + 1 };
            state.submit_answer(given, 3).unwrap();
            i += 1;
        }
    }

    #[test]
    fn starts_at_preparatory_with_full_queue() {
        let engine = LessonEngine::default();
        let s = engine.start_session(&john(), TopicId::AddWithoutRegrouping, 1, &[], at()).unwrap();
        assert_eq!(s.stage, Stage::Preparatory);
        assert_eq!(s.queue.len(), 4);
        let kinds: Vec<_> = s.queue.iter().map(|q| q.activity).collect();
        assert_eq!(kinds, [Activity::Drill, Activity::Drill, Activity::Review, Activity::Review]);
        assert!(!s.finished);
    }

    #[test]
    fn locked_topic_is_rejected() {
        let engine = LessonEngine::default();
        let err = engine.start_session(&john(), TopicId::SubWithoutRegrouping, 1, &[], at()).unwrap_err();
        assert_eq!(err, LessonError::Locked { topic: TopicId::SubWithoutRegrouping });
    }

    #[test]
    fn replay_is_deterministic() {
        let engine = LessonEngine::default();
        let a = engine.start_session(&john(), TopicId::AddWithoutRegrouping, 7, &[], at()).unwrap();
        let b = engine.start_session(&john(), TopicId::AddWithoutRegrouping, 7, &[], at()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn submit_outcomes() {
        let engine = LessonEngine::default();
        let mut s = engine.start_session(&john(), TopicId::AddWithoutRegrouping, 1, &[], at()).unwrap();
        let answer = s.current().unwrap().problem.answer;
        let fb = s.submit_answer(answer, 10).unwrap();
        assert_eq!(fb.event, FeedbackEvent::Correct);
        assert_eq!(s.tally.preparatory, Tally { asked: 1, correct: 1 });

        let answer = s.current().unwrap().problem.answer;
        let fb = s.submit_answer(answer, 999).unwrap();
        assert_eq!(fb.event, FeedbackEvent::Timeout);
        assert_eq!(s.tally.preparatory, Tally { asked: 2, correct: 1 });

        let answer = s.current().unwrap().problem.answer;
        let fb = s.submit_answer(answer + 1, 60).unwrap();
        assert_eq!(fb.event, FeedbackEvent::Incorrect);
        assert_eq!(s.tally.preparatory, Tally { asked: 3, correct: 1 });
        assert!(!fb.stage_complete);

        let answer = s.current().unwrap().problem.answer;
        assert!(s.submit_answer(answer, 0).unwrap().stage_complete);
        assert!(s.submit_answer(answer, 0).is_err());
    }

    #[test]
    fn stages_advance_in_order_and_finish() {
        let engine = LessonEngine::default();
        let mut s = engine.start_session(&john(), TopicId::AddWithoutRegrouping, 1, &[], at()).unwrap();
        play_stage(&mut s, 4);
        engine.advance_stage(&mut s, 2).unwrap();
        assert_eq!(s.stage, Stage::Developmental);
        assert_eq!(s.queue.len(), 5);

        s.submit_answer(0, 1).unwrap();
        s.submit_answer(0, 1).unwrap();
        s.submit_answer(0, 1).unwrap();
        s.submit_answer(0, 1).unwrap();
        assert!(matches!(engine.advance_stage(&mut s, 3), Err(LessonError::State(_))));
        s.submit_answer(0, 1).unwrap();
        engine.advance_stage(&mut s, 3).unwrap();
        assert_eq!(s.stage, Stage::Evaluation);
        assert!(s.finalize().is_err());
        play_stage(&mut s, 10);
        engine.advance_stage(&mut s, 4).unwrap();
        assert!(s.finished);
        assert!(engine.advance_stage(&mut s, 5).is_err());
        assert!(s.submit_answer(1, 1).is_err());
    }

    fn play_full(engine: &LessonEngine, correct: [u32; 3]) -> ScoreRecord {
        let mut s = engine.start_session(&john(), TopicId::AddWithoutRegrouping, 1, &[], at()).unwrap();
        for (i, c) in correct.into_iter().enumerate() {
            play_stage(&mut s, c);
            engine.advance_stage(&mut s, 10 + i as u64).unwrap();
        }
        s.finalize().unwrap()
    }

    #[test]
    fn finalize_reproduces_score_sheet_row() {
        let record = play_full(&LessonEngine::default(), [3, 4, 9]);
        assert_eq!(
            (record.preparatory_percent, record.developmental_percent, record.evaluation_percent),
            (75, 80, 90)
        );
        assert_eq!(record.remark, Remark::Passed);
        assert_eq!(record.learner_name, "John");
    }

    #[test]
    fn low_evaluation_fails() {
        let record = play_full(&LessonEngine::default(), [4, 5, 5]);
        assert_eq!(record.evaluation_percent, 50);
        assert_eq!(record.remark, Remark::Failed);
        let perfect = play_full(&LessonEngine::default(), [4, 5, 10]);
        assert_eq!(perfect.remark, Remark::Passed);
    }

    #[test]
    fn percent_rounds_half_up() {
        assert_eq!(Tally { asked: 8, correct: 5 }.percent(), Some(63)); // 62.5
        assert_eq!(Tally { asked: 3, correct: 1 }.percent(), Some(33));
        assert_eq!(Tally { asked: 3, correct: 2 }.percent(), Some(67));
        assert_eq!(Tally { asked: 0, correct: 0 }.percent(), None);
    }

    #[test]
    fn unlocking_follows_the_curriculum() {
        assert_eq!(unlocked_topics(&[]), BTreeSet::from([TopicId::AddWithoutRegrouping]));

        let additions: Vec<_> = curriculum()
            .iter()
            .filter(|t| t.lesson() == crate::problem_gen::Lesson::Addition)
            .map(|&t| passed(t))
            .collect();
        let unlocked = unlocked_topics(&additions);
        assert!(unlocked.contains(&TopicId::SubWithoutRegrouping));
        assert!(!unlocked.contains(&TopicId::SubRegroupTens));

        let mut failed = passed(TopicId::AddWithoutRegrouping);
        failed.remark = Remark::Failed;
        assert_eq!(unlocked_topics(&[failed]), BTreeSet::from([TopicId::AddWithoutRegrouping]));
    }

    #[test]
    fn config_validation() {
        let mut c = SessionConfig::default();
        c.validate().unwrap();
        c.time_limit_seconds = 4;
        assert!(c.validate().is_err());
        let mut c = SessionConfig::default();
        c.questions_per_stage.developmental = 0;
        assert!(c.validate().is_err());
        let c = SessionConfig { pass_threshold_percent: 101, ..SessionConfig::default() };
        assert!(LessonEngine::new(Generator::default(), c).is_err());
    }
}
