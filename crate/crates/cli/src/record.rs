//! Output records and their CSV / JSON renderings.

use std::io::Write;

use serde::Serialize;
use tmcorr::rational::{format_exact, to_decimal};
use tmcorr::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One emitted result. `exact` is the `num/den` string for rational
/// results and empty for real-valued ones; `decimal` is always derived.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub query: String,
    pub args: String,
    pub exact: String,
    pub decimal: String,
}

impl Record {
    pub fn rational(query: &str, args: String, value: &Rational, digits: usize) -> Self {
        Record {
            query: query.to_string(),
            args,
            exact: format_exact(value),
            decimal: to_decimal(value, digits),
        }
    }

    pub fn real(query: &str, args: String, value: f64, digits: usize) -> Self {
        Record {
            query: query.to_string(),
            args,
            exact: String::new(),
            // Every finite f64 is a dyadic rational, so the shared decimal
            // renderer applies unchanged.
            decimal: match Rational::from_float(value) {
                Some(r) => to_decimal(&r, digits),
                None => value.to_string(),
            },
        }
    }
}

/// Writes all records through a single writer.
pub fn emit(records: &[Record], format: Format, out: impl Write) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if records.is_empty() {
                w.write_record(["query", "args", "exact", "decimal"])?;
            }
            for r in records {
                w.serialize(r)?;
            }
            w.flush()
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)
        }
    }
}
