//! Parsers for list arguments and the `key=value` parameter strings taken
//! by `means`.

use std::collections::BTreeMap;

use tmcorr::rational::parse_rational;
use tmcorr::{Error, Rational, Result};

/// `"3,-1,7"` into integers.
pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| Error::InvalidArgument(format!("cannot parse {s:?} in list {text:?}")))
        })
        .collect()
}

/// `"k=2,N=1024,alpha=4/5"` as a key-value map. Keys are case-sensitive:
/// `n` is an order and `N` a length.
#[derive(Debug, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("expected key=value, got {part:?}"))
            })?;
            if values
                .insert(key.trim().to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(Error::InvalidArgument(format!(
                    "parameter {key:?} given twice"
                )));
            }
        }
        Ok(Params { values })
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn integer<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let raw = self
            .raw(key)
            .ok_or_else(|| Error::InvalidArgument(format!("missing parameter {key}")))?;
        raw.parse().map_err(|_| {
            Error::InvalidArgument(format!("parameter {key}={raw} is not a valid integer"))
        })
    }

    pub fn rational(&self, key: &str) -> Result<Option<Rational>> {
        self.raw(key).map(parse_rational).transpose()
    }

    /// Rejects keys outside `allowed`, so typos do not pass silently.
    pub fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidArgument(format!(
                "unknown parameter {k:?}; expected one of {allowed:?}"
            ))),
            None => Ok(()),
        }
    }

    /// Canonical `key=value` rendering for the `args` column.
    pub fn render(&self) -> String {
        self.values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
