//! Durable learner records: profiles, score history and ticket wallets.
//!
//! ```text
//! <root>/learners.journal        registrations, one entry per learner
//! <root>/learners/<id>.journal   that learner's commits
//! ```
//!
//! Every mutation is one journal entry (a [`Commit`] of one or more events)
//! that is synced before the call returns. State is rebuilt by replay on
//! open. Writers for one learner are serialized by a per-learner lock;
//! readers clone a snapshot under a read lock and never wait on the disk.

mod journal;
mod report;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::record::{LearnerId, LearnerProfile, ScoreRecord};
use crate::rewards::{award_tickets, RewardError, StoreItem, TicketWallet};

pub use journal::{Journal, MAGIC as JOURNAL_MAGIC};
pub use report::{parse_csv as parse_report, render_csv, DateStyle, ReportFormat, REPORT_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("learner {0} not found")]
    NotFound(LearnerId),
    #[error("validation error: {0}")]
    Validation(String),
    #[error(transparent)]
    Rejected(#[from] RewardError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: corrupt journal: {msg}")]
    Corrupt { path: PathBuf, msg: String },
    #[error("encoding error: {0}")]
    Encode(String),
}

impl StoreError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        StoreError::Io { path: path.to_path_buf(), source }
    }

    /// Storage faults, as opposed to errors caused by the request.
    pub fn is_storage_fault(&self) -> bool {
        matches!(self, StoreError::Io { .. } | StoreError::Corrupt { .. } | StoreError::Encode(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum LearnerEvent {
    Record { record: ScoreRecord },
    Credit { tickets: u32 },
    Purchase { item_id: String, price: u32 },
}

/// One atomic, durable unit of change for a learner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commit {
    pub seq: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub request_id: Option<String>,
    pub events: Vec<LearnerEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Registration {
    profile: LearnerProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    request_id: Option<String>,
}

/// Everything known about one learner at a point in time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnerSnapshot {
    pub profile: LearnerProfile,
    pub history: Vec<ScoreRecord>,
    pub wallet: TicketWallet,
}

/// Result of a mutating call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applied {
    /// The commit that carries the effect (the earlier one for a replay).
    pub commit: Commit,
    /// The request id had already been committed; nothing new was written.
    pub replayed: bool,
    pub snapshot: LearnerSnapshot,
}

#[derive(Debug)]
struct LearnerState {
    snapshot: LearnerSnapshot,
    commits_by_request: HashMap<String, Commit>,
    next_seq: u64,
}

impl LearnerState {
    fn new(profile: LearnerProfile) -> Self {
        let wallet = TicketWallet::new(profile.learner_id);
        Self {
            snapshot: LearnerSnapshot { profile, history: Vec::new(), wallet },
            commits_by_request: HashMap::new(),
            next_seq: 0,
        }
    }

    fn apply(&mut self, commit: &Commit) {
        for event in &commit.events {
            let snap = &mut self.snapshot;
            match event {
                LearnerEvent::Record { record } => snap.history.push(record.clone()),
                LearnerEvent::Credit { tickets } => snap.wallet = snap.wallet.credit(*tickets),
                LearnerEvent::Purchase { price, .. } => snap.wallet.spent += price,
            }
        }
        if let Some(id) = &commit.request_id {
            self.commits_by_request.insert(id.clone(), commit.clone());
        }
        self.next_seq = commit.seq + 1;
    }
}

#[derive(Debug)]
struct LearnerSlot {
    state: RwLock<LearnerState>,
    journal: Mutex<Journal>,
}

#[derive(Debug)]
struct Index {
    journal: Journal,
    by_request: HashMap<String, LearnerId>,
    next_id: u64,
}

#[derive(Debug)]
pub struct LearnerStore {
    root: PathBuf,
    index: Mutex<Index>,
    learners: RwLock<BTreeMap<LearnerId, Arc<LearnerSlot>>>,
}

fn learner_path(root: &Path, id: LearnerId) -> PathBuf {
    root.join("learners").join(format!("{}.journal", id.0))
}

fn open_slot(root: &Path, profile: LearnerProfile) -> Result<LearnerSlot, StoreError> {
    let path = learner_path(root, profile.learner_id);
    let (journal, commits) = Journal::open::<Commit>(&path)?;
    let mut state = LearnerState::new(profile);
    for commit in &commits {
        if commit.seq != state.next_seq {
            return Err(StoreError::Corrupt {
                path,
                msg: format!("commit sequence jumps from {} to {}", state.next_seq, commit.seq),
            });
        }
        state.apply(commit);
    }
    Ok(LearnerSlot { state: RwLock::new(state), journal: Mutex::new(journal) })
}

impl LearnerStore {
    /// Opens the store rooted at `root`, creating it if needed, and replays
    /// every journal.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        let learners_dir = root.join("learners");
        fs::create_dir_all(&learners_dir).map_err(|e| StoreError::io(&learners_dir, e))?;
        journal::sync_dir(&root);

        let (index_journal, registrations) = Journal::open::<Registration>(&root.join("learners.journal"))?;
        let mut learners = BTreeMap::new();
        let mut by_request = HashMap::new();
        let mut next_id = 1;
        for reg in registrations {
            let id = reg.profile.learner_id;
            next_id = next_id.max(id.0 + 1);
            if let Some(req) = reg.request_id {
                by_request.insert(req, id);
            }
            learners.insert(id, Arc::new(open_slot(&root, reg.profile)?));
        }
        Ok(Self {
            root,
            index: Mutex::new(Index { journal: index_journal, by_request, next_id }),
            learners: RwLock::new(learners),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn slot(&self, id: LearnerId) -> Result<Arc<LearnerSlot>, StoreError> {
        self.learners
            .read()
            .expect("learner map lock poisoned")
            .get(&id)
            .cloned()
            .ok_or(StoreError::NotFound(id))
    }

    /// Registers a new learner. A repeated `request_id` returns the profile
    /// created by the first call.
    pub fn register(
        &self,
        display_name: &str,
        grade_level: u8,
        registered_at: DateTime<Utc>,
        request_id: Option<&str>,
    ) -> Result<LearnerProfile, StoreError> {
        let display_name = display_name.trim();
        if display_name.is_empty() {
            return Err(StoreError::Validation("display name must not be empty".into()));
        }
        let mut index = self.index.lock().expect("index lock poisoned");
        if let Some(existing) = request_id.and_then(|r| index.by_request.get(r)).copied() {
            return Ok(self.slot(existing)?.state.read().expect("state lock poisoned").snapshot.profile.clone());
        }
        let profile = LearnerProfile {
            learner_id: LearnerId(index.next_id),
            display_name: display_name.to_string(),
            grade_level,
            registered_at,
        };
        // Create the learner's journal before acknowledging the registration.
        let slot = open_slot(&self.root, profile.clone())?;
        index.journal.append(&Registration { profile: profile.clone(), request_id: request_id.map(str::to_string) })?;
        index.next_id += 1;
        if let Some(r) = request_id {
            index.by_request.insert(r.to_string(), profile.learner_id);
        }
        self.learners
            .write()
            .expect("learner map lock poisoned")
            .insert(profile.learner_id, Arc::new(slot));
        Ok(profile)
    }

    pub fn learner_ids(&self) -> Vec<LearnerId> {
        self.learners.read().expect("learner map lock poisoned").keys().copied().collect()
    }

    pub fn load_state(&self, id: LearnerId) -> Result<LearnerSnapshot, StoreError> {
        Ok(self.slot(id)?.state.read().expect("state lock poisoned").snapshot.clone())
    }

    /// Runs `plan` against the current state and durably commits the events
    /// it returns. The learner's journal lock is held throughout, so `plan`
    /// sees exactly the state the commit is applied to.
    pub fn commit<F>(&self, id: LearnerId, request_id: Option<&str>, plan: F) -> Result<Applied, StoreError>
    where
        F: FnOnce(&LearnerSnapshot) -> Result<Vec<LearnerEvent>, StoreError>,
    {
        let slot = self.slot(id)?;
        let mut journal = slot.journal.lock().expect("journal lock poisoned");
        let (commit, replayed) = {
            let state = slot.state.read().expect("state lock poisoned");
            if let Some(done) = request_id.and_then(|r| state.commits_by_request.get(r)) {
                (done.clone(), true)
            } else {
                let events = plan(&state.snapshot)?;
                let commit = Commit { seq: state.next_seq, request_id: request_id.map(str::to_string), events };
                (commit, false)
            }
        };
        if !replayed {
            journal.append(&commit)?;
            slot.state.write().expect("state lock poisoned").apply(&commit);
        }
        drop(journal);
        let snapshot = slot.state.read().expect("state lock poisoned").snapshot.clone();
        Ok(Applied { commit, replayed, snapshot })
    }

    /// Appends a score record; history is never rewritten.
    pub fn append_record(&self, id: LearnerId, record: ScoreRecord) -> Result<(), StoreError> {
        validate_record(&record)?;
        self.commit(id, None, |_| Ok(vec![LearnerEvent::Record { record }])).map(|_| ())
    }

    /// Records a finished topic together with the tickets it earns, as one
    /// commit.
    pub fn complete_topic(
        &self,
        id: LearnerId,
        record: ScoreRecord,
        request_id: Option<&str>,
    ) -> Result<Applied, StoreError> {
        validate_record(&record)?;
        let tickets = award_tickets(&record);
        self.commit(id, request_id, |_| {
            let mut events = vec![LearnerEvent::Record { record }];
            if tickets > 0 {
                events.push(LearnerEvent::Credit { tickets });
            }
            Ok(events)
        })
    }

    pub fn credit(&self, id: LearnerId, tickets: u32, request_id: Option<&str>) -> Result<Applied, StoreError> {
        self.commit(id, request_id, |_| Ok(vec![LearnerEvent::Credit { tickets }]))
    }

    /// Buys `item` if the balance covers it. A rejected purchase writes
    /// nothing.
    pub fn purchase(&self, id: LearnerId, item: &StoreItem, request_id: Option<&str>) -> Result<Applied, StoreError> {
        self.commit(id, request_id, |snap| {
            snap.wallet.purchase(item)?;
            Ok(vec![LearnerEvent::Purchase { item_id: item.item_id.clone(), price: item.price_tickets }])
        })
    }

    pub fn export_report(&self, id: LearnerId, format: ReportFormat) -> Result<String, StoreError> {
        let snapshot = self.load_state(id)?;
        match format {
            ReportFormat::Csv { dates } => render_csv(&snapshot.history, dates),
        }
    }
}

fn validate_record(record: &ScoreRecord) -> Result<(), StoreError> {
    if !record.percents_in_range() {
        return Err(StoreError::Validation("percentages must lie within 0..=100".into()));
    }
    if record.learner_name.trim().is_empty() {
        return Err(StoreError::Validation("record has no learner name".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem_gen::TopicId;
    use crate::record::Remark;
    use chrono::{NaiveDate, TimeZone};

    fn now() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2011, 5, 11, 8, 0, 0).unwrap()
    }

    fn record(topic: TopicId, eval: u8) -> ScoreRecord {
        ScoreRecord {
            date: NaiveDate::from_ymd_opt(2011, 5, 11).unwrap(),
            learner_name: "John".into(),
            topic,
            preparatory_percent: 75,
            developmental_percent: 80,
            evaluation_percent: eval,
            remark: if eval >= 75 { Remark::Passed } else { Remark::Failed },
        }
    }

    fn sheets() -> StoreItem {
        StoreItem { item_id: "coloring-sheets".into(), name: "coloring sheets".into(), price_tickets: 20 }
    }

    #[test]
    fn register_assigns_fresh_ids() {
        let dir = tempfile::tempdir().unwrap();
        let store = LearnerStore::open(dir.path()).unwrap();
        let a = store.register("John", 2, now(), None).unwrap();
        let b = store.register("John", 2, now(), None).unwrap();
        assert_eq!(a.display_name, "John");
        assert_ne!(a.learner_id, b.learner_id);
        assert!(matches!(store.register("  ", 2, now(), None), Err(StoreError::Validation(_))));

        let snap = store.load_state(a.learner_id).unwrap();
        assert!(snap.history.is_empty());
        assert_eq!(snap.wallet.balance(), 0);
    }

    #[test]
    fn register_is_idempotent_per_request_id() {
        let dir = tempfile::tempdir().unwrap();
        let store = LearnerStore::open(dir.path()).unwrap();
        let a = store.register("Ana", 2, now(), Some("req-1")).unwrap();
        let again = store.register("Ana", 2, now(), Some("req-1")).unwrap();
        assert_eq!(a, again);
        drop(store);
        let store = LearnerStore::open(dir.path()).unwrap();
        assert_eq!(store.register("Ana", 2, now(), Some("req-1")).unwrap(), a);
        assert_eq!(store.learner_ids().len(), 1);
    }

    #[test]
    fn history_is_append_only_and_ordered() {
        let dir = tempfile::tempdir().unwrap();
        let store = LearnerStore::open(dir.path()).unwrap();
        let id = store.register("John", 2, now(), None).unwrap().learner_id;
        let first = record(TopicId::AddWithoutRegrouping, 60);
        let second = record(TopicId::AddWithoutRegrouping, 90);
        store.append_record(id, first.clone()).unwrap();
        store.append_record(id, second.clone()).unwrap();
        assert_eq!(store.load_state(id).unwrap().history, [first, second]);
        assert!(matches!(store.append_record(LearnerId(99), record(TopicId::AddWithoutRegrouping, 1)), Err(StoreError::NotFound(_))));
        assert!(matches!(store.load_state(LearnerId(99)), Err(StoreError::NotFound(_))));
        assert!(matches!(store.export_report(LearnerId(99), ReportFormat::default()), Err(StoreError::NotFound(_))));
    }

    #[test]
    fn wallet_flow_and_rejections() {
        let dir = tempfile::tempdir().unwrap();
        let store = LearnerStore::open(dir.path()).unwrap();
        let id = store.register("John", 2, now(), None).unwrap().learner_id;
        let applied = store.complete_topic(id, record(TopicId::AddWithoutRegrouping, 90), None).unwrap();
        assert_eq!(applied.snapshot.wallet.balance(), 11);
        let err = store.purchase(id, &sheets(), None).unwrap_err();
        assert!(matches!(err, StoreError::Rejected(RewardError::InsufficientBalance { balance: 11, price: 20 })));
        store.credit(id, 14, None).unwrap();
        let bought = store.purchase(id, &sheets(), Some("buy-1")).unwrap();
        assert_eq!(bought.snapshot.wallet.balance(), 5);
        let replay = store.purchase(id, &sheets(), Some("buy-1")).unwrap();
        assert!(replay.replayed);
        assert_eq!(replay.snapshot.wallet.balance(), 5);
        assert_eq!(replay.commit, bought.commit);
    }

    #[test]
    fn state_survives_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let id;
        let before;
        {
            let store = LearnerStore::open(dir.path()).unwrap();
            id = store.register("John", 2, now(), None).unwrap().learner_id;
            store.complete_topic(id, record(TopicId::AddWithoutRegrouping, 100), Some("fin")).unwrap();
            store.purchase(id, &StoreItem { price_tickets: 3, ..sheets() }, Some("p")).unwrap();
            before = store.load_state(id).unwrap();
        }
        let store = LearnerStore::open(dir.path()).unwrap();
        assert_eq!(store.load_state(id).unwrap(), before);
        assert!(store.purchase(id, &sheets(), Some("p")).unwrap().replayed);
        let next = store.register("Mia", 2, now(), None).unwrap();
        assert_eq!(next.learner_id, LearnerId(id.0 + 1));
    }

    #[test]
    fn export_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let store = LearnerStore::open(dir.path()).unwrap();
        let id = store.register("John", 2, now(), None).unwrap().learner_id;
        let empty = store.export_report(id, ReportFormat::default()).unwrap();
        assert_eq!(empty.lines().count(), 1);
        store.append_record(id, record(TopicId::AddWithoutRegrouping, 90)).unwrap();
        let a = store.export_report(id, ReportFormat::default()).unwrap();
        let b = store.export_report(id, ReportFormat::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_report(&a, DateStyle::MonthDayYear).unwrap(), store.load_state(id).unwrap().history);
    }

    #[test]
    fn invalid_records_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let store = LearnerStore::open(dir.path()).unwrap();
        let id = store.register("John", 2, now(), None).unwrap().learner_id;
        let mut bad = record(TopicId::AddWithoutRegrouping, 90);
        bad.developmental_percent = 101;
        assert!(matches!(store.append_record(id, bad), Err(StoreError::Validation(_))));
        assert!(store.load_state(id).unwrap().history.is_empty());
    }
}
