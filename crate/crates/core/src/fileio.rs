//! On-disk formats: the distribution file schema shared by every subcommand,
//! trajectory tables (CSV or JSON), and the sweep report.
//!
//! Numbers in CSV output are written in scientific notation with 17
//! significant digits, which round-trips `f64` exactly and keeps regression
//! diffs byte-stable. Output files are written atomically
//! (write-temp-then-rename).

use crate::dist::{Dist, DistError};
use crate::dynamics::TrajectoryRecord;
use crate::verifier::SweepReport;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: probs has length {len}, expected trunc + 1 = {expected}")]
    LengthMismatch {
        path: String,
        len: usize,
        expected: usize,
    },
    #[error("{path}: {source}")]
    InvalidDist {
        path: String,
        #[source]
        source: DistError,
    },
}

/// Distribution file schema: `{"trunc": N, "probs": [p_0, .., p_N]}`.
#[derive(Serialize, Deserialize)]
struct DistFile {
    trunc: usize,
    probs: Vec<f64>,
}

fn io_err(path: &Path, source: std::io::Error) -> FileError {
    FileError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Reads and validates a distribution file. Rejects files whose `probs`
/// length does not equal `trunc + 1`.
pub fn read_dist(path: &Path) -> Result<Dist, FileError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let file: DistFile = serde_json::from_str(&text).map_err(|e| FileError::Json {
        path: path.display().to_string(),
        source: e,
    })?;
    if file.probs.len() != file.trunc + 1 {
        return Err(FileError::LengthMismatch {
            path: path.display().to_string(),
            len: file.probs.len(),
            expected: file.trunc + 1,
        });
    }
    Dist::new(file.probs).map_err(|e| FileError::InvalidDist {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn dist_to_json(d: &Dist) -> String {
    let file = DistFile {
        trunc: d.trunc(),
        probs: d.probs().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("DistFile serializes");
    s.push('\n');
    s
}

pub fn write_dist(path: &Path, d: &Dist) -> Result<(), FileError> {
    write_atomic(path, dist_to_json(d).as_bytes())
}

/// Writes `contents` to a temporary file in the destination directory, then
/// renames it into place, so a failed run never leaves a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), FileError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(contents).map_err(|e| io_err(path, e))?;
    tmp.persist(path)
        .map_err(|e| io_err(path, e.error))?;
    Ok(())
}

/// Scientific notation with 17 significant digits (round-trip exact for f64).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Trajectory table as CSV: one row per recorded step, bound-report columns
/// appended per enabled check. A check whose precondition did not apply at a
/// step writes `NaN` sides and `true`.
pub fn trajectory_csv(record: &TrajectoryRecord) -> String {
    let mut out = String::new();
    out.push_str("t,mass,mean,gini,w1_equil,l1_dirac0,tail_mass");
    for name in &record.check_names {
        let _ = write!(out, ",{name}_lhs,{name}_rhs,{name}_slack,{name}_pass");
    }
    out.push('\n');
    for row in &record.rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(row.t),
            fmt_f64(row.mass),
            fmt_f64(row.mean),
            fmt_f64(row.gini),
            fmt_f64(row.w1_equil),
            fmt_f64(row.l1_dirac0),
            fmt_f64(row.tail_mass),
        );
        for bound in &row.bounds {
            match bound {
                Some(r) => {
                    let _ = write!(
                        out,
                        ",{},{},{},{}",
                        fmt_f64(r.lhs),
                        fmt_f64(r.rhs),
                        fmt_f64(r.slack),
                        r.pass
                    );
                }
                None => out.push_str(",NaN,NaN,NaN,true"),
            }
        }
        out.push('\n');
    }
    out
}

/// Trajectory as a JSON document with the same information as the CSV.
pub fn trajectory_json(record: &TrajectoryRecord) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("TrajectoryRecord serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CheckAggregateFile {
    count: u64,
    failures: u64,
    min_slack: Option<f64>,
    witnesses: Vec<String>,
}

/// Writes the sweep report as JSON keyed by inequality name, plus one
/// distribution file per tightness witness next to the report. Returns the
/// serialized report text.
pub fn write_sweep_report(path: &Path, report: &SweepReport) -> Result<String, FileError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => Path::new(".").to_path_buf(),
    };
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".to_string());

    let mut on_disk: BTreeMap<&str, CheckAggregateFile> = BTreeMap::new();
    for (name, agg) in &report.checks {
        let mut witnesses = Vec::with_capacity(agg.witnesses.len());
        for (idx, witness) in agg.witnesses.iter().enumerate() {
            let fname = format!("{stem}.witness.{name}.{idx}.json");
            write_dist(&dir.join(&fname), &witness.dist)?;
            witnesses.push(fname);
        }
        on_disk.insert(
            name,
            CheckAggregateFile {
                count: agg.count,
                failures: agg.failures,
                min_slack: agg.min_slack,
                witnesses,
            },
        );
    }
    let mut text = serde_json::to_string_pretty(&on_disk).expect("report serializes");
    text.push('\n');
    write_atomic(path, text.as_bytes())?;
    Ok(text)
}
