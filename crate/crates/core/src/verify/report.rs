use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{fmt_ratio, parse_ratio};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        })
    }
}

mod ratio_text {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(fmt_ratio).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        text.map(|t| {
            parse_ratio(&t).ok_or_else(|| serde::de::Error::custom(format!("bad rational '{t}'")))
        })
        .transpose()
    }
}

/// One decided claim about one instance (or one parameter grid).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CheckRecord {
    /// Check family, e.g. `double_bound`.
    pub check: String,
    /// Specific claim within the family, e.g. `local_below_twice_global`.
    pub claim: String,
    /// Canonical code (hex) of the instance, empty for grid checks.
    pub instance: String,
    pub k: usize,
    pub n: usize,
    pub outcome: Outcome,
    /// Exact slack of the claim where one is meaningful; negative on failure.
    #[serde(with = "ratio_text", default)]
    pub margin: Option<BigRational>,
    /// Argmax cliques, centroid block, failing clique or `.ktc` text.
    pub witness: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: u64,
    pub fail: u64,
    pub skip: u64,
}

impl Tally {
    fn bump(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::Pass => self.pass += 1,
            Outcome::Fail => self.fail += 1,
            Outcome::Skip => self.skip += 1,
        }
    }

    fn add(&mut self, other: &Tally) {
        self.pass += other.pass;
        self.fail += other.fail;
        self.skip += other.skip;
    }
}

/// Records plus per-claim counters. Merging is order independent: records
/// are kept sorted and counters add.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
    /// Keyed by `check/claim`.
    pub tally: BTreeMap<String, Tally>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.tally
            .entry(format!("{}/{}", record.check, record.claim))
            .or_default()
            .bump(record.outcome);
        let at = self.records.partition_point(|r| r <= &record);
        self.records.insert(at, record);
    }

    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        for (key, t) in &other.tally {
            self.tally.entry(key.clone()).or_default().add(t);
        }
        self.records.extend(other.records);
        self.records.sort();
        self
    }

    pub fn totals(&self) -> Tally {
        let mut t = Tally::default();
        for v in self.tally.values() {
            t.add(v);
        }
        t
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.outcome == Outcome::Fail)
    }

    pub fn has_failures(&self) -> bool {
        self.tally.values().any(|t| t.fail > 0)
    }

    /// Counters restricted to claims of one check family.
    pub fn tally_of(&self, check: &str) -> Tally {
        let mut t = Tally::default();
        let prefix = format!("{check}/");
        for (key, v) in &self.tally {
            if key.starts_with(&prefix) {
                t.add(v);
            }
        }
        t
    }

    /// Drops passing and skipped records, keeping their counters.
    pub fn retain_failures(&mut self) {
        self.records.retain(|r| r.outcome == Outcome::Fail);
    }
}
