use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::malformed;
use crate::error::DataError;
use crate::linalg::SparseMatrix;

/// Raw label values that were mapped to −1 and +1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelMapping {
    pub negative: f64,
    pub positive: f64,
}

impl LabelMapping {
    pub const IDENTITY: LabelMapping = LabelMapping { negative: -1.0, positive: 1.0 };

    fn infer(values: &[f64]) -> LabelMapping {
        match *values {
            [a, b] => LabelMapping { negative: a.min(b), positive: a.max(b) },
            // a single class: ≤ 0 is the negative class, anything else positive
            [v] if v <= 0.0 => LabelMapping { negative: v, positive: 1.0 },
            [v] => LabelMapping { negative: -1.0, positive: v },
            _ => LabelMapping::IDENTITY,
        }
    }

    fn map(&self, raw: f64) -> f64 {
        if raw == self.positive {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct LabeledDataset {
    /// n × d, 0-based feature indices.
    pub features: SparseMatrix,
    /// Entries in {−1, +1}.
    pub labels: Vec<f64>,
    pub mapping: LabelMapping,
    pub source_path: String,
}

impl LabeledDataset {
    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.features.n_cols()
    }
}

/// Parses LIBSVM text: `label idx:val idx:val ...` with 1-based, strictly
/// increasing indices. Two-valued labels are mapped to {−1, +1} (the smaller
/// value becomes −1). `dim` overrides the inferred feature dimension, which is
/// otherwise the largest index seen. Blank lines are ignored.
pub fn parse_libsvm(reader: impl BufRead, dim: Option<usize>) -> Result<LabeledDataset, DataError> {
    let mut raw_labels = Vec::new();
    let mut triplets = Vec::new();
    let mut max_index = 0usize;
    let mut distinct: Vec<f64> = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let mut tokens = text.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line has a token");
        let label: f64 = label_tok
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| malformed(line_no, &line, format!("bad label {label_tok:?}")))?;
        if !distinct.contains(&label) {
            distinct.push(label);
            if distinct.len() > 2 {
                distinct.sort_by(f64::total_cmp);
                return Err(DataError::NonBinaryLabels { values: distinct });
            }
        }
        let row = raw_labels.len();
        raw_labels.push(label);

        let mut prev = 0usize;
        for tok in tokens {
            let (idx, val) =
                tok.split_once(':').ok_or_else(|| malformed(line_no, &line, format!("expected index:value, got {tok:?}")))?;
            let idx: usize = idx.parse().map_err(|_| malformed(line_no, &line, format!("bad index {idx:?}")))?;
            if idx == 0 {
                return Err(malformed(line_no, &line, "indices are 1-based"));
            }
            if idx <= prev {
                return Err(malformed(line_no, &line, "indices must be strictly increasing"));
            }
            if let Some(d) = dim {
                if idx > d {
                    return Err(malformed(line_no, &line, format!("index {idx} exceeds dimension {d}")));
                }
            }
            let val: f64 = val
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| malformed(line_no, &line, format!("bad value {val:?}")))?;
            prev = idx;
            max_index = max_index.max(idx);
            triplets.push((row, idx - 1, val));
        }
    }

    distinct.sort_by(f64::total_cmp);
    let mapping = LabelMapping::infer(&distinct);
    let labels = raw_labels.iter().map(|&v| mapping.map(v)).collect::<Vec<_>>();
    let n_cols = dim.unwrap_or(max_index);
    let features = SparseMatrix::from_triplets(labels.len(), n_cols, triplets)?;
    Ok(LabeledDataset { features, labels, mapping, source_path: String::new() })
}

pub fn read_libsvm(path: &Path, dim: Option<usize>) -> Result<LabeledDataset, DataError> {
    let mut ds = parse_libsvm(BufReader::new(File::open(path)?), dim)?;
    ds.source_path = path.display().to_string();
    Ok(ds)
}

/// Writes the normalized form: labels as `+1` / `-1`, 1-based indices,
/// values in shortest round-trip notation.
pub fn write_libsvm(ds: &LabeledDataset, mut out: impl Write) -> Result<(), DataError> {
    for (r, &label) in ds.labels.iter().enumerate() {
        write!(out, "{}", if label > 0.0 { "+1" } else { "-1" })?;
        for (c, v) in ds.features.row(r) {
            write!(out, " {}:{}", c + 1, v)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
