//! Append-only JSONL persistence for census records.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{Context, Result};
use doubling_core::census::CensusRecord;
use sha2::{Digest, Sha256};

/// Resolves the store path: explicit flag first, then $DOUBLING_STORE.
pub fn resolve_path(flag: Option<&str>) -> Option<String> {
    flag.map(str::to_string)
        .or_else(|| std::env::var("DOUBLING_STORE").ok())
}

/// Hash of the canonical config string, embedded in each record.
pub fn config_hash(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(parts.join("\x1f").as_bytes());
    let digest = hasher.finalize();
    hex_prefix(&digest, 12)
}

fn hex_prefix(bytes: &[u8], chars: usize) -> String {
    let mut s = String::new();
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
        if s.len() >= chars {
            break;
        }
    }
    s.truncate(chars);
    s
}

pub fn persist(path: &str, record: &CensusRecord) -> Result<()> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening store {path}"))?;
    let line = serde_json::to_string(record)?;
    writeln!(file, "{line}").with_context(|| format!("appending to store {path}"))?;
    Ok(())
}

#[derive(Debug, Default, Clone)]
pub struct RecordFilter {
    pub n: Option<u64>,
    pub s: Option<u64>,
    pub k: Option<String>,
}

impl RecordFilter {
    fn matches(&self, rec: &CensusRecord) -> bool {
        self.n.is_none_or(|n| rec.n == n)
            && self.s.is_none_or(|s| rec.s == s)
            && self.k.as_ref().is_none_or(|k| &rec.k == k)
    }
}

/// Loads matching records; corrupt lines are skipped with a warning.
pub fn load(path: &Path, filter: &RecordFilter) -> Result<Vec<CensusRecord>> {
    let file = std::fs::File::open(path).with_context(|| format!("opening store {path:?}"))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CensusRecord>(&line) {
            Ok(rec) => {
                if filter.matches(&rec) {
                    out.push(rec);
                }
            }
            Err(e) => eprintln!("warning: skipping corrupt record at line {}: {e}", idx + 1),
        }
    }
    Ok(out)
}
