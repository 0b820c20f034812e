//! Machine-readable suite reports.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use supcone::Backend;

use crate::error::{VerifyError, VerifyResult};
use crate::model::ModelSpec;
use crate::mutation::Mutation;
use crate::suite::{Failure, RunConfig, Suite};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
}

/// A failing trial with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: String,
    pub trial: usize,
    pub trial_seed: u64,
    pub backend: Backend,
    pub mutation: Option<Mutation>,
    pub inputs: Vec<(String, String)>,
    pub failure: Failure,
    pub model: ModelSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub backend: Backend,
    pub mutation: Option<Mutation>,
    /// The fixed model, when one was given.
    pub model: Option<ModelSpec>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
    pub passed: bool,
    pub properties: BTreeMap<String, Counts>,
    pub counterexamples: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn new(cfg: &RunConfig, properties: BTreeMap<String, Counts>, counterexamples: Vec<Counterexample>) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            suite: cfg.suite,
            trials: cfg.trials,
            seed: cfg.seed,
            backend: cfg.backend,
            mutation: cfg.mutation,
            model: cfg.model.clone(),
            timestamp,
            passed: properties.values().all(|c| c.failed == 0),
            properties,
            counterexamples,
        }
    }

    pub fn failures(&self) -> u64 {
        self.properties.values().map(|c| c.failed).sum()
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> VerifyResult<Self> {
        serde_json::from_str(text).map_err(|e| VerifyError::Validation {
            field: "report".into(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> VerifyResult<()> {
        std::fs::write(path, self.to_json()).map_err(|e| VerifyError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> VerifyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| VerifyError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// One line per property.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "suite {} | trials {} | seed {} | backend {}{}\n",
            self.suite,
            self.trials,
            self.seed,
            self.backend,
            self.mutation.map(|m| format!(" | mutation {m}")).unwrap_or_default()
        );
        for (name, c) in &self.properties {
            let status = if c.failed == 0 { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "{status} {name}: {} passed, {} failed, {} skipped\n",
                c.passed, c.failed, c.skipped
            ));
        }
        for cx in &self.counterexamples {
            out.push_str(&format!(
                "counterexample {} (trial {}, seed {}): {}\n  lhs = {}\n  rhs = {}\n",
                cx.property, cx.trial, cx.trial_seed, cx.failure.identity, cx.failure.lhs, cx.failure.rhs
            ));
        }
        out
    }
}
