//! Dataset parsers (LIBSVM, MovieLens `u.data`), trace CSV I/O and a
//! synthetic low-rank generator for matrix completion fixtures.

mod libsvm;
mod movielens;
mod synthetic;
mod trace_csv;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

pub use libsvm::{parse_libsvm, read_libsvm, write_libsvm, LabelMapping, LabeledDataset};
pub use movielens::{parse_movielens, read_movielens, write_movielens, RatingsDataset};
pub use synthetic::{synthetic_low_rank, LowRankInstance};
pub use trace_csv::{read_trace, sidecar_path, trace_header, write_trace, write_trace_csv};

use crate::error::DataError;

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), DataError> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn malformed(line: usize, text: &str, reason: impl Into<String>) -> DataError {
    DataError::MalformedLine { line, text: text.to_string(), reason: reason.into() }
}
