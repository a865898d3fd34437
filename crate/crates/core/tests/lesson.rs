use chrono::{TimeZone, Utc};
use mathworld::lesson::{
    unlocked_topics, FeedbackEvent, LessonEngine, LessonError, SessionConfig, SessionState, Stage,
};
use mathworld::problem_gen::{curriculum, TopicId};
use mathworld::{LearnerId, LearnerProfile, Remark, ScoreRecord};
use proptest::prelude::*;

fn learner() -> LearnerProfile {
    LearnerProfile {
        learner_id: LearnerId(7),
        display_name: "Ana".into(),
        grade_level: 2,
        registered_at: Utc.with_ymd_and_hms(2011, 5, 11, 8, 0, 0).unwrap(),
    }
}

fn start(topic: TopicId, seed: u64, history: &[ScoreRecord]) -> Result<SessionState, LessonError> {
    let at = Utc.with_ymd_and_hms(2011, 5, 11, 9, 0, 0).unwrap();
    LessonEngine::default().start_session(&learner(), topic, seed, history, at)
}

fn passed(topic: TopicId) -> ScoreRecord {
    ScoreRecord {
        date: chrono::NaiveDate::from_ymd_opt(2011, 5, 11).unwrap(),
        learner_name: "Ana".into(),
        topic,
        preparatory_percent: 90,
        developmental_percent: 90,
        evaluation_percent: 90,
        remark: Remark::Passed,
    }
}

/// Plays a session to the end. `correct(stage, index)` decides each answer.
fn play(mut state: SessionState, correct: impl Fn(Stage, u32) -> bool) -> SessionState {
    let engine = LessonEngine::default();
    for (n, stage) in Stage::ALL.into_iter().enumerate() {
        let mut i = 0;
        while let Some(q) = state.current() {
            let a = q.problem.answer;
            state.submit_answer(if correct(stage, i) { a } else { a + 1 }, 3).unwrap();
            i += 1;
        }
        engine.advance_stage(&mut state, 50 + n as u64).unwrap();
    }
    state
}

#[test]
fn sessions_start_at_preparatory_with_a_full_queue() {
    let s = start(TopicId::AddWithoutRegrouping, 1, &[]).unwrap();
    assert_eq!(s.stage, Stage::Preparatory);
    assert_eq!(s.queue.len() as u32, SessionConfig::default().questions_per_stage.preparatory);
    assert!(!s.finished);
}

#[test]
fn later_lessons_are_locked_without_addition_passes() {
    for topic in [TopicId::SubWithoutRegrouping, TopicId::SubRegroupTens, TopicId::DivDividendsTo81] {
        assert!(matches!(start(topic, 1, &[]), Err(LessonError::Locked { topic: t }) if t == topic));
    }
    let additions: Vec<ScoreRecord> = curriculum()[..5].iter().map(|&t| passed(t)).collect();
    assert!(start(TopicId::SubWithoutRegrouping, 1, &additions).is_ok());
}

#[test]
fn timeout_counts_as_incorrect_even_with_the_right_answer() {
    let mut s = start(TopicId::AddWithoutRegrouping, 3, &[]).unwrap();
    let answer = s.current().unwrap().problem.answer;
    let fb = s.submit_answer(answer, 999).unwrap();
    assert_eq!(fb.event, FeedbackEvent::Timeout);
    assert_eq!(s.tally.preparatory.asked, 1);
    assert_eq!(s.tally.preparatory.correct, 0);
    // exactly at the limit is still in time
    let answer = s.current().unwrap().problem.answer;
    assert_eq!(s.submit_answer(answer, 60).unwrap().event, FeedbackEvent::Correct);
}

#[test]
fn advancing_early_is_a_state_error() {
    let engine = LessonEngine::default();
    let mut s = start(TopicId::AddWithoutRegrouping, 3, &[]).unwrap();
    while s.current().is_some() {
        let a = s.current().unwrap().problem.answer;
        s.submit_answer(a, 1).unwrap();
    }
    engine.advance_stage(&mut s, 9).unwrap();
    assert_eq!(s.stage, Stage::Developmental);
    let a = s.current().unwrap().problem.answer;
    for _ in 0..s.queue.len() - 1 {
        s.submit_answer(a, 1).unwrap();
    }
    assert_eq!(s.queue.len(), 1);
    assert!(matches!(engine.advance_stage(&mut s, 9), Err(LessonError::State(_))));
}

#[test]
fn finalize_thresholds() {
    let s = start(TopicId::AddWithoutRegrouping, 5, &[]).unwrap();
    let done = play(s.clone(), |stage, i| stage != Stage::Evaluation || i % 2 == 0);
    let rec = done.finalize().unwrap();
    assert_eq!(rec.evaluation_percent, 50);
    assert_eq!(rec.remark, Remark::Failed);

    let rec = play(s.clone(), |_, _| true).finalize().unwrap();
    assert_eq!((rec.preparatory_percent, rec.developmental_percent, rec.evaluation_percent), (100, 100, 100));
    assert_eq!(rec.remark, Remark::Passed);

    assert!(matches!(s.finalize(), Err(LessonError::State(_))));
    let mut finished = play(s, |_, _| true);
    assert!(matches!(finished.submit_answer(1, 1), Err(LessonError::State(_))));
}

#[test]
fn sessions_survive_serialization() {
    let s = start(TopicId::MulSentenceParts, 11, &curriculum()[..12].iter().map(|&t| passed(t)).collect::<Vec<_>>())
        .unwrap();
    let json = serde_json::to_string(&s).unwrap();
    let back: SessionState = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
}

#[test]
fn failed_record_keeps_later_topics_locked() {
    let mut history: Vec<ScoreRecord> = curriculum()[..3].iter().map(|&t| passed(t)).collect();
    let mut failed = passed(curriculum()[3]);
    failed.remark = Remark::Failed;
    history.push(failed);
    let unlocked = unlocked_topics(&history);
    assert_eq!(unlocked.len(), 4);
    assert!(unlocked.iter().all(|t| t.ordinal() <= 3));
}

proptest! {
    #[test]
    fn same_seed_same_questions(ord in 0usize..5, seed in any::<u64>()) {
        let topic = curriculum()[ord];
        let a = start(topic, seed, &[]).ok();
        let b = start(topic, seed, &[]).ok();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn stages_only_move_forward(script in proptest::collection::vec(any::<bool>(), 19)) {
        let engine = LessonEngine::default();
        let mut s = start(TopicId::AddWithoutRegrouping, 77, &[]).unwrap();
        let mut seen = vec![s.stage];
        let mut k = 0;
        while !s.finished {
            while let Some(q) = s.current() {
                let a = q.problem.answer;
                s.submit_answer(if script[k] { a } else { a + 1 }, 1).unwrap();
                k += 1;
            }
            engine.advance_stage(&mut s, k as u64).unwrap();
            seen.push(s.stage);
        }
        prop_assert!(seen.windows(2).all(|w| w[0] <= w[1]));
        let rec = s.finalize().unwrap();
        let eval_correct = script[9..].iter().filter(|&&c| c).count() as u32;
        prop_assert_eq!(u32::from(rec.evaluation_percent), (eval_correct * 100 + 5) / 10);
    }

    #[test]
    fn unlocked_set_is_downward_closed(passes in proptest::collection::vec(0usize..20, 0..30)) {
        let history: Vec<ScoreRecord> = passes.iter().map(|&o| passed(curriculum()[o])).collect();
        let unlocked = unlocked_topics(&history);
        let max = unlocked.iter().map(|t| t.ordinal()).max().unwrap();
        prop_assert_eq!(unlocked.len(), max + 1);
    }
}
