//! Ticket economy: tickets are earned for finished topics and spent in the
//! store.

use std::collections::HashSet;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::record::{LearnerId, Remark, ScoreRecord};

const BUILTIN_CATALOG: &str = include_str!("../data/catalog.json");

/// Tickets added on top of the score-based amount when a topic is passed.
pub const PASS_BONUS: u32 = 2;

/// The item every catalog has to offer.
pub const REQUIRED_ITEM_NAME: &str = "coloring sheets";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewardError {
    #[error("insufficient tickets: balance {balance}, price {price}")]
    InsufficientBalance { balance: u32, price: u32 },
    #[error("catalog: {0}")]
    Config(String),
    #[error("unknown store item `{0}`")]
    UnknownItem(String),
}

/// `floor(evaluation% / 10)`, plus [`PASS_BONUS`] for a pass.
pub fn award_tickets(record: &ScoreRecord) -> u32 {
    let base = u32::from(record.evaluation_percent) / 10;
    match record.remark {
        Remark::Passed => base + PASS_BONUS,
        Remark::Failed => base,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StoreItem {
    pub item_id: String,
    pub name: String,
    pub price_tickets: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TicketWallet {
    pub learner_id: LearnerId,
    pub earned: u32,
    pub spent: u32,
}

impl TicketWallet {
    pub fn new(learner_id: LearnerId) -> Self {
        Self { learner_id, earned: 0, spent: 0 }
    }

    pub fn balance(&self) -> u32 {
        self.earned - self.spent
    }

    #[must_use]
    pub fn credit(self, tickets: u32) -> TicketWallet {
        TicketWallet { earned: self.earned + tickets, ..self }
    }

    /// Returns the wallet after paying for `item`; the original is untouched
    /// on rejection.
    pub fn purchase(&self, item: &StoreItem) -> Result<TicketWallet, RewardError> {
        let balance = self.balance();
        if balance < item.price_tickets {
            return Err(RewardError::InsufficientBalance { balance, price: item.price_tickets });
        }
        Ok(TicketWallet { spent: self.spent + item.price_tickets, ..*self })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    items: Vec<StoreItem>,
}

impl Catalog {
    pub fn new(items: Vec<StoreItem>) -> Result<Self, RewardError> {
        if items.is_empty() {
            return Err(RewardError::Config("catalog has no items".into()));
        }
        let mut ids = HashSet::new();
        for item in &items {
            if item.item_id.trim().is_empty() || item.name.trim().is_empty() {
                return Err(RewardError::Config("item id and name must be non-empty".into()));
            }
            if item.price_tickets == 0 {
                return Err(RewardError::Config(format!("item `{}` must cost at least 1 ticket", item.item_id)));
            }
            if !ids.insert(item.item_id.as_str()) {
                return Err(RewardError::Config(format!("duplicate item_id `{}`", item.item_id)));
            }
        }
        if !items.iter().any(|i| i.name.eq_ignore_ascii_case(REQUIRED_ITEM_NAME)) {
            return Err(RewardError::Config(format!("catalog must offer \"{REQUIRED_ITEM_NAME}\"")));
        }
        Ok(Self { items })
    }

    pub fn from_json(json: &str) -> Result<Self, RewardError> {
        let items: Vec<StoreItem> = serde_json::from_str(json).map_err(|e| RewardError::Config(e.to_string()))?;
        Self::new(items)
    }

    pub fn load(path: &Path) -> Result<Self, RewardError> {
        let json = std::fs::read_to_string(path)
            .map_err(|e| RewardError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&json).map_err(|e| match e {
            RewardError::Config(msg) => RewardError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_json(BUILTIN_CATALOG).expect("built-in catalog is valid"))
    }

    pub fn items(&self) -> &[StoreItem] {
        &self.items
    }

    pub fn get(&self, item_id: &str) -> Result<&StoreItem, RewardError> {
        self.items
            .iter()
            .find(|i| i.item_id == item_id)
            .ok_or_else(|| RewardError::UnknownItem(item_id.to_string()))
    }
}
