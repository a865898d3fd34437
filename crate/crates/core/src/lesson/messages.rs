use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::LessonError;

const BUILTIN_EN: &str = include_str!("../../data/messages.en.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKey {
    Correct,
    Incorrect,
    Timeout,
    StageComplete,
    Passed,
    Failed,
}

impl MessageKey {
    pub const ALL: [MessageKey; 6] = [
        MessageKey::Correct,
        MessageKey::Incorrect,
        MessageKey::Timeout,
        MessageKey::StageComplete,
        MessageKey::Passed,
        MessageKey::Failed,
    ];
}

/// Learner-facing strings keyed by engine event. One file per locale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageCatalog {
    correct: String,
    incorrect: String,
    timeout: String,
    stage_complete: String,
    passed: String,
    failed: String,
    #[serde(default)]
    tips: Vec<String>,
}

impl MessageCatalog {
    pub fn from_json(json: &str) -> Result<Self, LessonError> {
        let catalog: MessageCatalog =
            serde_json::from_str(json).map_err(|e| LessonError::Config(format!("message catalog: {e}")))?;
        for key in MessageKey::ALL {
            if catalog.get(key).trim().is_empty() {
                return Err(LessonError::Config(format!("message catalog: `{key:?}` is empty")));
            }
        }
        Ok(catalog)
    }

    pub fn load(path: &Path) -> Result<Self, LessonError> {
        let json = std::fs::read_to_string(path)
            .map_err(|e| LessonError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&json)
    }

    pub fn builtin() -> &'static MessageCatalog {
        static CATALOG: OnceLock<MessageCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| MessageCatalog::from_json(BUILTIN_EN).expect("built-in catalog is valid"))
    }

    pub fn get(&self, key: MessageKey) -> &str {
        match key {
            MessageKey::Correct => &self.correct,
            MessageKey::Incorrect => &self.incorrect,
            MessageKey::Timeout => &self.timeout,
            MessageKey::StageComplete => &self.stage_complete,
            MessageKey::Passed => &self.passed,
            MessageKey::Failed => &self.failed,
        }
    }

    pub fn tips(&self) -> &[String] {
        &self.tips
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_covers_every_key() {
        let catalog = MessageCatalog::builtin();
        for key in MessageKey::ALL {
            assert!(!catalog.get(key).is_empty());
        }
    }

    #[test]
    fn missing_or_empty_keys_are_rejected() {
        let missing = r#"{"correct":"a","incorrect":"b","timeout":"c","stage_complete":"d","passed":"e"}"#;
        assert!(MessageCatalog::from_json(missing).is_err());
        let empty = r#"{"correct":"a","incorrect":"b","timeout":" ","stage_complete":"d","passed":"e","failed":"f"}"#;
        assert!(MessageCatalog::from_json(empty).is_err());
        let ok = r#"{"correct":"a","incorrect":"b","timeout":"c","stage_complete":"d","passed":"e","failed":"f"}"#;
        assert!(MessageCatalog::from_json(ok).is_ok());
    }
}
