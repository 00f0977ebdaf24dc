//! Diagnostic time series as comma-separated tables with a header row.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::record::DiagnosticRecord;
use crate::error::{Error, Result};

pub fn write_series_to<W: Write>(out: W, records: &[DiagnosticRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Series(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record(HEADER).map_err(|e| Error::Series(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Series(e.to_string()))
}

pub fn read_series_from<R: Read>(input: R) -> Result<Vec<DiagnosticRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| Error::Series(e.to_string()))?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(Error::Series(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Series(e.to_string())))
        .collect()
}

pub fn write_series(path: &Path, records: &[DiagnosticRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_series_to(file, records)
}

pub fn read_series(path: &Path) -> Result<Vec<DiagnosticRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_series_from(file)
}

/// Column names, in order.
pub const HEADER: [&str; 15] = [
    "t",
    "energy",
    "diss_u",
    "X",
    "Y_s",
    "gamma_norm",
    "grad_u_inf",
    "split_low",
    "split_high",
    "cum_diss",
    "diss_grad_u",
    "cum_diss_grad",
    "diss_b",
    "cum_diss_b",
    "divergence",
];
