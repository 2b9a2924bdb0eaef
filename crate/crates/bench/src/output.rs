//! CSV and JSON emission with a fixed column order.

use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

pub trait Row: Serialize {
    /// Field names in serialization order; always written as the header.
    const COLUMNS: &'static [&'static str];

    /// Copy with timing fields zeroed, for reproducibility comparisons.
    fn without_timing(&self) -> Self;
}

pub fn write_rows<T: Row, W: Write>(rows: &[T], format: Format, mut out: W) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(T::COLUMNS)?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Serializes `x` with three decimals.
pub fn three_decimals<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64((x * 1000.0).round() / 1000.0)
}

pub fn three_decimals_opt<S: serde::Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => three_decimals(x, s),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuckoo_run::CuckooRunRecord;
    use crate::orient_run::RunRecord;
    use crate::scaling::ScalingRow;

    fn header_of<T: Row + Default>() -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(T::default()).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        text.lines().next().unwrap().to_string()
    }

    #[test]
    fn columns_match_serialization() {
        assert_eq!(header_of::<RunRecord>(), RunRecord::COLUMNS.join(","));
        assert_eq!(header_of::<CuckooRunRecord>(), CuckooRunRecord::COLUMNS.join(","));
        assert_eq!(header_of::<ScalingRow>(), ScalingRow::COLUMNS.join(","));
    }

    #[test]
    fn header_even_when_empty() {
        let mut buf = Vec::new();
        write_rows::<RunRecord, _>(&[], Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), RunRecord::COLUMNS.join(","));
        let mut buf = Vec::new();
        write_rows::<RunRecord, _>(&[], Format::Json, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), "[]");
    }
}
