//! Findings: notable instances persisted as one JSON file each, named by
//! the digest of their content.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::payload::InstancePayload;
use super::HarnessError;
use crate::inequalities::InequalityReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Violation,
    EqualityWitness,
    NearEquality,
    HypothesisFailure,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Violation => "violation",
            Category::EqualityWitness => "equality-witness",
            Category::NearEquality => "near-equality",
            Category::HypothesisFailure => "hypothesis-failure",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Category::Violation, Category::EqualityWitness, Category::NearEquality, Category::HypothesisFailure]
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown finding category `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Finding {
    pub campaign_id: String,
    pub fingerprint: String,
    pub category: Category,
    pub report: InequalityReport,
    pub payload: InstancePayload,
}

impl Finding {
    /// Digest of everything except the campaign id, so the same instance
    /// found by two campaigns maps to one file.
    pub fn content_id(&self) -> String {
        let body = serde_json::json!({
            "category": self.category,
            "report": self.report,
            "payload": self.payload,
        });
        let mut h = Sha256::new();
        h.update(body.to_string().as_bytes());
        hex::encode(&h.finalize()[..16])
    }

    pub fn file_name(&self) -> String {
        format!("{}.json", self.content_id())
    }

    /// Writes the finding under `dir` unless a file with the same content id
    /// already exists. Returns the path.
    pub fn write_to(&self, dir: &Path) -> Result<PathBuf, HarnessError> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(self.file_name());
        if !path.exists() {
            let text = serde_json::to_string_pretty(self).expect("serializable");
            std::fs::write(&path, text + "\n")?;
        }
        Ok(path)
    }

    pub fn read_from(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    /// Recomputes the stored report from the payload.
    pub fn reevaluate(&self) -> Result<InequalityReport, HarnessError> {
        let reports = self.payload.evaluate()?;
        reports
            .into_iter()
            .find(|r| r.name == self.report.name && r.k == self.report.k)
            .map(|r| match self.report.seed {
                Some(s) => r.with_seed(s),
                None => r,
            })
            .ok_or_else(|| HarnessError::Evaluation(format!("payload has no `{}` report", self.report.name)))
    }
}
