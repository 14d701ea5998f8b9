//! File formats.
//!
//! * Edge lists: one `i<TAB>j[<TAB>count]` line per nonzero, 0-indexed,
//!   preceded by a `# n m` header line so isolated nodes survive a round trip.
//! * Labels: one 0-indexed integer per line.
//! * Everything else is JSON.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BiAdjacency;
use crate::labels::HardLabels;
use crate::model::Connectivity;

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<fs::File>> {
    fs::File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn write_edges(path: impl AsRef<Path>, a: &BiAdjacency) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "# {} {}", a.nrows(), a.ncols()).map_err(io)?;
    for (i, j, v) in a.triplets() {
        if v == 1 {
            writeln!(w, "{i}\t{j}").map_err(io)?;
        } else {
            writeln!(w, "{i}\t{j}\t{v}").map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

/// Reads an edge list. Without a `# n m` header the shape is `shape`, or
/// inferred from the largest indices.
pub fn read_edges(path: impl AsRef<Path>, shape: Option<(usize, usize)>) -> Result<BiAdjacency> {
    let path = path.as_ref();
    let mut header = None;
    let mut triplets = Vec::new();
    for (ln, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let nums: Vec<&str> = rest.split_whitespace().collect();
            if header.is_none() && triplets.is_empty() && nums.len() == 2 {
                let n = nums[0].parse().map_err(|_| parse_err(path, ln + 1, "bad header"))?;
                let m = nums[1].parse().map_err(|_| parse_err(path, ln + 1, "bad header"))?;
                header = Some((n, m));
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_err(path, ln + 1, "expected `i j` or `i j count`"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err(path, ln + 1, format!("not a nonnegative integer: {s}")));
        let (i, j) = (num(fields[0])?, num(fields[1])?);
        let v = match fields.get(2) {
            Some(s) => u32::try_from(num(s)?).map_err(|_| parse_err(path, ln + 1, "count too large"))?,
            None => 1,
        };
        triplets.push((i, j, v));
    }
    let (n, m) = header.or(shape).unwrap_or_else(|| {
        let n = triplets.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        let m = triplets.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        (n, m)
    });
    BiAdjacency::from_triplets(n, m, triplets)
}

pub fn write_labels(path: impl AsRef<Path>, labels: &HardLabels) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    for &c in labels.as_slice() {
        writeln!(w, "{c}").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads labels; the class count is `num_classes` or `max + 1`.
pub fn read_labels(path: impl AsRef<Path>, num_classes: Option<usize>) -> Result<HardLabels> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for (ln, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(
            line.parse::<usize>()
                .map_err(|_| parse_err(path, ln + 1, format!("not a label: {line}")))?,
        );
    }
    match num_classes {
        Some(k) => HardLabels::new(out, k),
        None => HardLabels::from_vec(out),
    }
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// `{"K": .., "L": .., "P": [[..]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
}

impl ModelParams {
    pub fn from_connectivity(p: &Connectivity) -> Self {
        Self {
            k: p.k(),
            l: p.l(),
            p: p.to_rows(),
        }
    }

    pub fn connectivity(&self) -> Result<Connectivity> {
        let p = Connectivity::from_rows(&self.p)?;
        Error::check_dim("params: K", self.k, p.k())?;
        Error::check_dim("params: L", self.l, p.l())?;
        Ok(p)
    }
}
