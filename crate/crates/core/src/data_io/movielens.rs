use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::malformed;
use crate::error::DataError;
use crate::linalg::SparseMatrix;

#[derive(Debug, Clone)]
pub struct RatingsDataset {
    /// users × items, 0-based.
    pub ratings: SparseMatrix,
    pub n_users: usize,
    pub n_items: usize,
    /// Repeated (user, item) pairs overwritten by a later line.
    pub duplicates: usize,
    pub source_path: String,
}

impl RatingsDataset {
    pub fn density(&self) -> f64 {
        self.ratings.nnz() as f64 / (self.n_users as f64 * self.n_items as f64)
    }
}

/// Parses MovieLens `u.data`: `user \t item \t rating [\t timestamp]` with
/// 1-based ids. Repeated pairs keep the last rating and bump `duplicates`.
/// When `scale` is given, ratings outside `[lo, hi]` are rejected.
pub fn parse_movielens(reader: impl BufRead, scale: Option<(f64, f64)>) -> Result<RatingsDataset, DataError> {
    let mut entries: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut duplicates = 0;
    let (mut n_users, mut n_items) = (0, 0);
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split('\t').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(malformed(line_no, &line, format!("expected 4 tab-separated fields, got {}", fields.len())));
        }
        let id = |s: &str, what: &str| -> Result<usize, DataError> {
            match s.trim().parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(malformed(line_no, &line, format!("bad {what} id {s:?}"))),
            }
        };
        let user = id(fields[0], "user")?;
        let item = id(fields[1], "item")?;
        let rating: f64 = fields[2]
            .trim()
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| malformed(line_no, &line, format!("bad rating {:?}", fields[2])))?;
        if let Some((lo, hi)) = scale {
            if rating < lo || rating > hi {
                return Err(malformed(line_no, &line, format!("rating {rating} outside [{lo}, {hi}]")));
            }
        }
        if let Some(ts) = fields.get(3) {
            if ts.trim().parse::<i64>().is_err() {
                return Err(malformed(line_no, &line, format!("bad timestamp {ts:?}")));
            }
        }
        if entries.insert((user - 1, item - 1), rating).is_some() {
            duplicates += 1;
        }
        n_users = n_users.max(user);
        n_items = n_items.max(item);
    }
    let triplets = entries.into_iter().map(|((u, i), r)| (u, i, r)).collect();
    let ratings = SparseMatrix::from_triplets(n_users, n_items, triplets)?;
    Ok(RatingsDataset { ratings, n_users, n_items, duplicates, source_path: String::new() })
}

pub fn read_movielens(path: &Path, scale: Option<(f64, f64)>) -> Result<RatingsDataset, DataError> {
    let mut ds = parse_movielens(BufReader::new(File::open(path)?), scale)?;
    ds.source_path = path.display().to_string();
    Ok(ds)
}

/// Writes the normalized form, row-major, with a zero timestamp.
pub fn write_movielens(ds: &RatingsDataset, mut out: impl Write) -> Result<(), DataError> {
    for (u, i, r) in ds.ratings.iter() {
        writeln!(out, "{}\t{}\t{}\t0", u + 1, i + 1, r)?;
    }
    Ok(())
}
