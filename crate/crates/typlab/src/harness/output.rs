// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! `stats.csv` and `trajectories.csv`: writers and strict readers.
//!
//! Numbers are written as the shortest decimal string that parses back to
//! the same `f64`.

use std::path::Path;

use crate::error::{Result, TyplabError};
use crate::propagate::TrajectoryRecord;
use crate::stats::EnsembleStats;

pub const STATS_HEADER: [&str; 4] = ["t", "mean", "variance", "bound"];

/// Shortest round-trip representation.
pub fn format_f64(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

pub fn write_stats_csv(path: &Path, stats: &EnsembleStats, bound: f64) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_io)?;
    w.write_record(STATS_HEADER).map_err(csv_io)?;
    let bound = format_f64(bound);
    for k in 0..stats.time_grid.len() {
        w.write_record([
            format_f64(stats.time_grid[k]),
            format_f64(stats.mean[k]),
            format_f64(stats.variance[k]),
            bound.clone(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectories_csv(path: &Path, records: &[TrajectoryRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_io)?;
    let mut header = vec!["t".to_string()];
    header.extend((0..records.len()).map(|m| format!("traj_{m}")));
    w.write_record(&header).map_err(csv_io)?;
    let times = records.first().map(|r| r.grid.times()).unwrap_or(&[]);
    for (k, &t) in times.iter().enumerate() {
        let mut row = vec![format_f64(t)];
        row.extend(records.iter().map(|r| format_f64(r.values[k])));
        w.write_record(&row).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> TyplabError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => TyplabError::Io(io),
        other => TyplabError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Columns of a `stats.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct StatsTable {
    pub t: Vec<f64>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub bound: Vec<f64>,
}

/// Columns of a `trajectories.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryTable {
    pub t: Vec<f64>,
    /// One series per `traj_m` column.
    pub series: Vec<Vec<f64>>,
}

/// Read a numeric CSV whose header must equal `expected` (or, with
/// `expected = None`, be `t,traj_0,...,traj_{M-1}`). Row numbers in errors
/// are 1-based file lines.
fn read_numeric_csv(path: &Path, expected: Option<&[&str]>) -> Result<Vec<Vec<f64>>> {
    let fail = |row: usize, message: String| TyplabError::CsvFormat {
        path: path.to_path_buf(),
        row,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| fail(0, e.to_string()))?;
    let mut records = reader.records();
    let header = match records.next() {
        None => return Err(fail(1, "file is empty".into())),
        Some(r) => r.map_err(|e| fail(1, e.to_string()))?,
    };
    let names: Vec<&str> = header.iter().collect();
    match expected {
        Some(exp) => {
            if names != exp {
                return Err(fail(1, format!("expected header {}, got {}", exp.join(","), names.join(","))));
            }
        }
        None => {
            let ok = names.len() >= 2
                && names[0] == "t"
                && names[1..]
                    .iter()
                    .enumerate()
                    .all(|(m, name)| *name == format!("traj_{m}"));
            if !ok {
                return Err(fail(1, format!("expected header t,traj_0,..., got {}", names.join(","))));
            }
        }
    }
    let width = names.len();
    let mut rows = Vec::new();
    for (i, record) in records.enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| fail(line, e.to_string()))?;
        if record.len() != width {
            return Err(fail(line, format!("expected {width} fields, got {}", record.len())));
        }
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| fail(line, format!("not a number: {field:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(fail(2, "no data rows".into()));
    }
    Ok(rows)
}

pub fn read_stats_csv(path: &Path) -> Result<StatsTable> {
    let rows = read_numeric_csv(path, Some(&STATS_HEADER))?;
    let col = |c: usize| rows.iter().map(|r| r[c]).collect::<Vec<_>>();
    Ok(StatsTable {
        t: col(0),
        mean: col(1),
        variance: col(2),
        bound: col(3),
    })
}

pub fn read_trajectories_csv(path: &Path) -> Result<TrajectoryTable> {
    let rows = read_numeric_csv(path, None)?;
    let m = rows[0].len() - 1;
    Ok(TrajectoryTable {
        t: rows.iter().map(|r| r[0]).collect(),
        series: (1..=m).map(|c| rows.iter().map(|r| r[c]).collect()).collect(),
    })
}
