//! Self-contained solve output: everything `verify` needs in one file.

use std::path::Path;

use mmwave_assoc::{PriceState, RunRecord, Scenario};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunFile {
    pub record: RunRecord,
    pub scenario: Scenario,
    /// Assigned (access point, client) pairs.
    pub assignment: Vec<(usize, usize)>,
    /// Terminal prices and profits; present only for auction runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prices: Option<PriceState>,
}

impl RunFile {
    pub fn save(&self, path: &Path) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)?;
        let run: RunFile = serde_json::from_str(&text)?;
        Ok(run)
    }
}
