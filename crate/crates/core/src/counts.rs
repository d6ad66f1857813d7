//! Joint outcome counts per setting pair, and the versioned counts file that
//! both the simulator and real-hardware ingestion produce.
//!
//! Outcome order everywhere is `[n(++), n(+−), n(−+), n(−−)]` with the first
//! sign for A and `+` the readout of |0⟩.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plan::{setting_index, Setting, TestKind, SETTINGS};

/// Counts for one (pair, job): four settings × four joint outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountsTable {
    pub test: TestKind,
    /// Qubit ids along the A…B path (A first, B last).
    pub pair: Vec<u32>,
    pub job: Option<u32>,
    counts: [[u64; 4]; 4],
}

impl CountsTable {
    pub fn new(test: TestKind, pair: Vec<u32>, job: Option<u32>) -> Self {
        CountsTable {
            test,
            pair,
            job,
            counts: [[0; 4]; 4],
        }
    }

    pub fn a_id(&self) -> u32 {
        *self.pair.first().unwrap_or(&0)
    }

    pub fn b_id(&self) -> u32 {
        *self.pair.last().unwrap_or(&0)
    }

    /// Dash-joined path label, e.g. `55-68-67`.
    pub fn pair_label(&self) -> String {
        self.pair
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }

    pub fn add(&mut self, setting: Setting, outcome_counts: [u64; 4]) {
        let idx = setting_index(setting);
        for (slot, c) in self.counts[idx].iter_mut().zip(outcome_counts) {
            *slot += c;
        }
    }

    /// Outcome counts for one setting.
    pub fn counts(&self, setting: Setting) -> [u64; 4] {
        self.counts[setting_index(setting)]
    }

    /// Total trials for one setting.
    pub fn total(&self, setting: Setting) -> u64 {
        self.counts(setting).iter().sum()
    }

    /// Element-wise sum of several tables (e.g. all jobs of one pair).
    pub fn sum(tables: &[&CountsTable]) -> Result<CountsTable> {
        let first = tables
            .first()
            .ok_or_else(|| Error::InvalidCounts("cannot sum zero tables".into()))?;
        let mut out = CountsTable::new(first.test, first.pair.clone(), None);
        for t in tables {
            if t.test != first.test || t.pair != first.pair {
                return Err(Error::InvalidCounts(
                    "cannot aggregate tables with mixed test kinds or pairs".into(),
                ));
            }
            for s in SETTINGS {
                out.add(s, t.counts(s));
            }
        }
        Ok(out)
    }
}

pub const COUNTS_SCHEMA: &str = "counts/1";

/// One record of a counts file: the aggregate over a job's repetitions of a
/// single setting.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CountsRecord {
    pub pair: Vec<u32>,
    pub job: u32,
    pub setting: Setting,
    pub counts: [u64; 4],
    pub shots: u32,
}

/// Versioned counts file shared by `simulate` output and hardware ingestion.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CountsFile {
    pub schema: String,
    pub device: String,
    pub test: TestKind,
    pub records: Vec<CountsRecord>,
}

impl CountsFile {
    pub fn new(device: &str, test: TestKind, records: Vec<CountsRecord>) -> Self {
        CountsFile {
            schema: COUNTS_SCHEMA.into(),
            device: device.into(),
            test,
            records,
        }
    }

    /// Flatten per-job tables into records (setting-index order per table).
    pub fn from_tables(device: &str, test: TestKind, shots: u32, tables: &[CountsTable]) -> Result<Self> {
        let mut records = Vec::with_capacity(tables.len() * 4);
        for t in tables {
            let job = t.job.ok_or_else(|| {
                Error::InvalidCounts("tables written to a counts file need a job id".into())
            })?;
            if t.test != test {
                return Err(Error::InvalidCounts("table test kind mismatch".into()));
            }
            for s in SETTINGS {
                records.push(CountsRecord {
                    pair: t.pair.clone(),
                    job,
                    setting: s,
                    counts: t.counts(s),
                    shots,
                });
            }
        }
        Ok(CountsFile::new(device, test, records))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("counts serialize")
    }

    /// Parse and validate, returning tables grouped by (pair, job) in
    /// first-appearance order.
    pub fn parse(json: &str) -> Result<(CountsFile, Vec<CountsTable>)> {
        let file: CountsFile = serde_json::from_str(json)?;
        let tables = file.validate_into_tables()?;
        Ok((file, tables))
    }

    pub fn load(path: &Path) -> Result<(CountsFile, Vec<CountsTable>)> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Validation: schema recognized; settings in range; counts sum to
    /// shots × repetitions with one uniform repetition count; no duplicate
    /// (pair, job, setting); every (pair, job) group carries all 4 settings.
    pub fn validate_into_tables(&self) -> Result<Vec<CountsTable>> {
        if self.schema != COUNTS_SCHEMA {
            return Err(Error::SchemaMismatch {
                expected: COUNTS_SCHEMA.into(),
                found: self.schema.clone(),
            });
        }
        type GroupKey = (Vec<u32>, u32);
        let mut reps: Option<u64> = None;
        let mut groups: BTreeMap<GroupKey, (usize, [bool; 4], CountsTable)> = BTreeMap::new();
        let mut order: Vec<GroupKey> = Vec::new();
        for (i, rec) in self.records.iter().enumerate() {
            if rec.pair.len() < 2 {
                return Err(Error::InvalidCounts(format!(
                    "record {i}: pair must list at least the A and B ids"
                )));
            }
            if rec.setting[0] > 1 || rec.setting[1] > 1 {
                return Err(Error::InvalidCounts(format!(
                    "record {i}: setting {:?} out of range",
                    rec.setting
                )));
            }
            if rec.shots == 0 {
                return Err(Error::InvalidCounts(format!("record {i}: zero shots")));
            }
            let total: u64 = rec.counts.iter().sum();
            if total == 0 || !total.is_multiple_of(rec.shots as u64) {
                return Err(Error::InvalidCounts(format!(
                    "record {i}: counts sum to {total}, not a positive multiple of {} shots",
                    rec.shots
                )));
            }
            let r = total / rec.shots as u64;
            match reps {
                None => reps = Some(r),
                Some(prev) if prev != r => {
                    return Err(Error::InvalidCounts(format!(
                        "record {i}: implies {r} repetitions but earlier records had {prev}"
                    )));
                }
                _ => {}
            }
            let key = (rec.pair.clone(), rec.job);
            let entry = groups.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                (
                    i,
                    [false; 4],
                    CountsTable::new(self.test, rec.pair.clone(), Some(rec.job)),
                )
            });
            let sidx = setting_index(rec.setting);
            if entry.1[sidx] {
                return Err(Error::InvalidCounts(format!(
                    "record {i}: duplicate (pair {}, job {}, setting {:?})",
                    rec.pair
                        .iter()
                        .map(|q| q.to_string())
                        .collect::<Vec<_>>()
                        .join("-"),
                    rec.job,
                    rec.setting
                )));
            }
            entry.1[sidx] = true;
            entry.2.add(rec.setting, rec.counts);
        }
        for (key, (first_idx, present, _)) in &groups {
            if present.iter().any(|p| !p) {
                return Err(Error::InvalidCounts(format!(
                    "group (pair {:?}, job {}) starting at record {first_idx} is missing settings",
                    key.0, key.1
                )));
            }
        }
        Ok(order
            .into_iter()
            .map(|key| groups.remove(&key).unwrap().2)
            .collect())
    }
}
