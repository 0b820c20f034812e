//! Outcome of a theorem check: status, the bands involved and a witness.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::band::Band;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The hypothesis of the statement does not hold for the input.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    /// Named bands, as sorted atom lists.
    pub bands: BTreeMap<String, Vec<usize>>,
    /// An atom (or index, per check) where the claimed equality fails.
    pub witness: Option<usize>,
    pub metrics: BTreeMap<String, String>,
    pub detail: String,
}

impl Report {
    pub fn new(check: &str, status: Status) -> Self {
        Self {
            check: check.to_string(),
            status,
            bands: BTreeMap::new(),
            witness: None,
            metrics: BTreeMap::new(),
            detail: String::new(),
        }
    }

    pub fn with_band(mut self, name: &str, band: &Band) -> Self {
        self.bands.insert(name.to_string(), band.atoms());
        self
    }

    pub fn with_metric(mut self, name: &str, value: impl Display) -> Self {
        self.metrics.insert(name.to_string(), value.to_string());
        self
    }

    pub fn with_witness(mut self, witness: Option<usize>) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Pass or vacuous: nothing contradicts the statement.
    pub fn holds(&self) -> bool {
        self.status != Status::Fail
    }
}

/// First atom on which two bands differ.
pub fn band_witness(a: &Band, b: &Band) -> Option<usize> {
    (0..a.len().min(b.len())).find(|&i| a.contains(i) != b.contains(i))
}
