//! Active lesson sessions, one JSON snapshot file each.
//!
//! A snapshot is written to a temporary file, synced and renamed over the
//! old one before the response goes out, so a restart always sees the last
//! acknowledged state.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use mathworld::lesson::SessionState;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::StartupError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub session_id: String,
    /// Base seed; stage `k` is filled from `seed + k`.
    pub seed: u64,
    pub state: SessionState,
    /// Responses already sent, keyed by the client's request id.
    #[serde(default)]
    pub replies: BTreeMap<String, Value>,
    /// The finalize response, once the score has been recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Value>,
}

#[derive(Debug)]
pub struct SessionRegistry {
    dir: PathBuf,
    sessions: Mutex<HashMap<String, SessionRecord>>,
}

fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-')
}

impl SessionRegistry {
    pub fn open(dir: PathBuf) -> Result<Self, StartupError> {
        let fault = |path: &Path, msg: String| StartupError::Config { path: path.to_path_buf(), msg };
        fs::create_dir_all(&dir).map_err(|e| fault(&dir, e.to_string()))?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir).map_err(|e| fault(&dir, e.to_string()))? {
            let path = entry.map_err(|e| fault(&dir, e.to_string()))?.path();
            match path.extension().and_then(|e| e.to_str()) {
                Some("json") => {
                    let text = fs::read_to_string(&path).map_err(|e| fault(&path, e.to_string()))?;
                    let record: SessionRecord =
                        serde_json::from_str(&text).map_err(|e| fault(&path, format!("unreadable session: {e}")))?;
                    sessions.insert(record.session_id.clone(), record);
                }
                // left behind by a crash before the rename
                Some("tmp") => {
                    let _ = fs::remove_file(&path);
                }
                _ => {}
            }
        }
        Ok(Self { dir, sessions: Mutex::new(sessions) })
    }

    pub fn get(&self, id: &str) -> Option<SessionRecord> {
        self.sessions.lock().expect("session map lock poisoned").get(id).cloned()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.sessions.lock().expect("session map lock poisoned").contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("session map lock poisoned").len()
    }

    /// Durably stores `record`, then makes it visible.
    pub fn save(&self, record: SessionRecord) -> std::io::Result<()> {
        assert!(is_valid_id(&record.session_id), "session ids are generated by the service");
        let path = self.dir.join(format!("{}.json", record.session_id));
        let tmp = self.dir.join(format!("{}.json.tmp", record.session_id));
        let bytes = serde_json::to_vec(&record).map_err(std::io::Error::other)?;
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        if let Ok(d) = fs::File::open(&self.dir) {
            let _ = d.sync_all();
        }
        self.sessions
            .lock()
            .expect("session map lock poisoned")
            .insert(record.session_id.clone(), record);
        Ok(())
    }
}
