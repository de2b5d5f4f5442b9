//! Trajectory files: CSV (one row per time, `t` then `(re, im)` per label)
//! and a JSON equivalent.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Trajectory, C64};

/// Header line for `n` particles, without the newline.
pub fn csv_header(n: usize) -> String {
    let mut h = String::from("t");
    for k in 1..=n {
        write!(h, ",z{k}_re,z{k}_im").unwrap();
    }
    h
}

/// CSV text with 17 significant digits per float.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(csv_header(traj.n()).split(','))
        .expect("in-memory write");
    for (t, row) in traj.times.iter().zip(&traj.samples) {
        let mut record = vec![format!("{t:.16e}")];
        for z in row {
            record.push(format!("{:.16e}", z.re));
            record.push(format!("{:.16e}", z.im));
        }
        w.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

pub fn trajectory_from_csv(text: &str) -> Result<Trajectory> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if header.is_empty() {
        return Err(Error::Parse("empty trajectory file".into()));
    }
    let columns = header.len();
    let n = (columns - 1) / 2;
    if columns < 3 || columns % 2 == 0 || header.iter().collect::<Vec<_>>().join(",") != csv_header(n) {
        return Err(Error::Parse(format!(
            "unexpected CSV header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))?;
        let values = record
            .iter()
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))?;
        times.push(values[0]);
        samples.push(values[1..].chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect());
    }
    if times.is_empty() {
        return Err(Error::Parse("trajectory has no rows".into()));
    }
    Trajectory::new(times, samples)
}

#[derive(Serialize, Deserialize)]
struct WireTrajectory {
    t: Vec<f64>,
    z: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closure_permutation: Option<Vec<usize>>,
}

/// JSON object `{"t": [...], "z": [[[re, im], ...], ...]}`; the closure
/// permutation, when known, is included 0-based.
pub fn trajectory_to_json(traj: &Trajectory) -> String {
    let wire = WireTrajectory {
        t: traj.times.clone(),
        z: traj
            .samples
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
        closure_permutation: traj.closure_permutation.as_ref().map(|p| p.as_slice().to_vec()),
    };
    serde_json::to_string(&wire).expect("trajectory serializes")
}

pub fn trajectory_from_json(text: &str) -> Result<Trajectory> {
    let wire: WireTrajectory = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if wire.t.is_empty() {
        return Err(Error::Parse("trajectory has no samples".into()));
    }
    let samples = wire
        .z
        .iter()
        .map(|row| row.iter().map(|p| C64::new(p[0], p[1])).collect())
        .collect();
    let mut traj = Trajectory::new(wire.t, samples)?;
    traj.closure_permutation = wire.closure_permutation.and_then(crate::model::Permutation::from_vec);
    Ok(traj)
}
