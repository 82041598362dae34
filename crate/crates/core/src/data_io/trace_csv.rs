use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::DataError;
use crate::solvers::{EsColumns, SolverTrace, TraceMetadata, TraceRow};

const BASE_COLUMNS: [&str; 5] = ["k", "f_value", "fw_gap", "step_delta", "wall_time_ns"];
const ES_COLUMNS: [&str; 3] = ["phi_star", "xi", "lambda"];

/// Metadata sidecar next to a trace CSV: `run.csv` → `run.meta.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

pub fn trace_header(meta: &TraceMetadata) -> Vec<String> {
    let mut h: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    if meta.diagnostics {
        h.extend(ES_COLUMNS.iter().map(|s| s.to_string()));
    }
    h.extend(meta.extra_columns.iter().cloned());
    h
}

// 17 significant digits: lossless for f64
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the CSV body only (no sidecar).
pub fn write_trace_csv(trace: &SolverTrace, out: impl Write) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trace_header(&trace.meta)).map_err(csv_err)?;
    for row in &trace.rows {
        let mut rec =
            vec![row.k.to_string(), fmt(row.f_value), fmt(row.fw_gap), fmt(row.step_delta), row.wall_time_ns.to_string()];
        if trace.meta.diagnostics {
            let es = row.es.unwrap_or(EsColumns { phi_star: f64::NAN, xi: f64::NAN, lambda: f64::NAN });
            rec.extend([fmt(es.phi_star), fmt(es.xi), fmt(es.lambda)]);
        }
        rec.extend(row.extra.iter().map(|&v| fmt(v)));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `path` (CSV) and its JSON metadata sidecar.
pub fn write_trace(trace: &SolverTrace, path: &Path) -> Result<(), DataError> {
    write_trace_csv(trace, File::create(path)?)?;
    super::write_json(&sidecar_path(path), &trace.meta)
}

pub fn read_trace(path: &Path) -> Result<SolverTrace, DataError> {
    let meta: TraceMetadata = serde_json::from_reader(BufReader::new(File::open(sidecar_path(path))?))?;
    read_trace_csv(meta, File::open(path)?)
}

fn read_trace_csv(meta: TraceMetadata, input: impl Read) -> Result<SolverTrace, DataError> {
    let mut r = csv::Reader::from_reader(input);
    let expected = trace_header(&meta);
    let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header != expected {
        return Err(DataError::SchemaMismatch(format!("header {header:?}, metadata implies {expected:?}")));
    }
    let mut trace = SolverTrace::new(meta);
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(csv_err)?;
        let float = |j: usize| -> Result<f64, DataError> {
            rec[j].parse().map_err(|_| DataError::SchemaMismatch(format!("line {line}: bad number {:?}", &rec[j])))
        };
        let int = |j: usize| -> Result<u64, DataError> {
            rec[j].parse().map_err(|_| DataError::SchemaMismatch(format!("line {line}: bad integer {:?}", &rec[j])))
        };
        let mut j = BASE_COLUMNS.len();
        let es = if trace.meta.diagnostics {
            j += 3;
            Some(EsColumns { phi_star: float(5)?, xi: float(6)?, lambda: float(7)? })
        } else {
            None
        };
        let extra = (j..rec.len()).map(float).collect::<Result<Vec<_>, _>>()?;
        trace.rows.push(TraceRow {
            k: int(0)? as usize,
            f_value: float(1)?,
            fw_gap: float(2)?,
            step_delta: float(3)?,
            wall_time_ns: int(4)?,
            es,
            extra,
        });
    }
    Ok(trace)
}

fn csv_err(e: csv::Error) -> DataError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => DataError::Io(io),
            _ => unreachable!(),
        }
    } else {
        DataError::SchemaMismatch(e.to_string())
    }
}
