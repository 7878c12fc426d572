//! Shared memo of exact correlation values, with a line-oriented file form.
//!
//! File layout: a header line `tmcorr-cache v1`, then one record per line,
//! `n;lag,lag,...;num/den`, all decimal integers.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use dashmap::DashMap;
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lags::LagTuple;
use crate::rational::{format_exact, Rational};

pub const CACHE_HEADER: &str = "tmcorr-cache v1";

/// Concurrent map from canonical lag tuples to exact values.
///
/// Readers never block each other; inserting a key that is already present
/// keeps the stored value, so racing writers of the same (identical) value
/// are harmless.
#[derive(Debug, Default)]
pub struct MemoStore {
    map: DashMap<LagTuple, Rational>,
}

impl MemoStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &LagTuple) -> Option<Rational> {
        self.map.get(key).map(|v| v.value().clone())
    }

    pub fn contains(&self, key: &LagTuple) -> bool {
        self.map.contains_key(key)
    }

    pub fn insert(&self, key: LagTuple, value: Rational) {
        self.map.entry(key).or_insert(value);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn clear(&self) {
        self.map.clear();
    }

    /// All records, sorted by order then lags.
    pub fn entries(&self) -> Vec<(LagTuple, Rational)> {
        let mut out: Vec<_> = self
            .map
            .iter()
            .map(|e| (e.key().clone(), e.value().clone()))
            .collect();
        out.sort_by(|a, b| (a.0.order(), &a.0).cmp(&(b.0.order(), &b.0)));
        out
    }

    /// Reads a cache file and merges its records; returns how many were read.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let file = fs::File::open(path)?;
        let mut count = 0;
        let mut saw_header = false;
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let fail = |reason: &str| Error::CacheFormat {
                path: path.to_path_buf(),
                line: lineno,
                reason: reason.to_string(),
            };
            if idx == 0 {
                if line.trim_end() != CACHE_HEADER {
                    return Err(fail("missing `tmcorr-cache v1` header"));
                }
                saw_header = true;
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = parse_record(&line).map_err(|r| fail(&r))?;
            self.insert(key, value);
            count += 1;
        }
        if !saw_header {
            return Err(Error::CacheFormat {
                path: path.to_path_buf(),
                line: 1,
                reason: "empty file".into(),
            });
        }
        Ok(count)
    }

    /// Writes every record to `path` through a temporary file in the same
    /// directory followed by a rename.
    pub fn save(&self, path: &Path) -> Result<usize> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let tmp = tempfile::NamedTempFile::new_in(dir)?;
        let entries = self.entries();
        {
            let mut out = BufWriter::new(tmp.as_file());
            writeln!(out, "{CACHE_HEADER}")?;
            for (key, value) in &entries {
                writeln!(out, "{}", format_record(key, value))?;
            }
            out.flush()?;
        }
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(entries.len())
    }
}

pub fn format_record(key: &LagTuple, value: &Rational) -> String {
    format!("{};{};{}", key.order(), key, format_exact(value))
}

pub fn parse_record(line: &str) -> std::result::Result<(LagTuple, Rational), String> {
    let mut fields = line.trim().split(';');
    let (Some(order), Some(lags), Some(value), None) =
        (fields.next(), fields.next(), fields.next(), fields.next())
    else {
        return Err("expected three `;`-separated fields".into());
    };
    let order: usize = order.parse().map_err(|_| format!("bad order {order:?}"))?;
    let lags: Vec<u64> = lags
        .split(',')
        .map(|l| l.parse().map_err(|_| format!("bad lag {l:?}")))
        .collect::<std::result::Result<_, _>>()?;
    if lags.len() + 1 != order {
        return Err(format!("order {order} does not match {} lags", lags.len()));
    }
    if !lags.windows(2).all(|w| w[0] <= w[1]) {
        return Err("lags are not in canonical (ascending) order".into());
    }
    let (num, den) = value
        .split_once('/')
        .ok_or_else(|| format!("value {value:?} is not num/den"))?;
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator {num:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator {den:?}"))?;
    if den <= BigInt::from(0) {
        return Err("denominator must be positive".into());
    }
    Ok((LagTuple::from_sorted(lags), Rational::new(num, den)))
}
