//! Snapshot files: one CSV per field per time, with a `#` header line.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::grid::{FieldGrid, FIELD_NAMES};

#[derive(Debug, thiserror::Error)]
pub enum SnapshotIoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {reason}")]
    Parse { path: PathBuf, line: usize, reason: String },
    #[error("snapshot set for `{run}` is incomplete: {reason}")]
    Incomplete { run: String, reason: String },
}

/// One field of one snapshot as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub field: char,
    pub time: f64,
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub values: Vec<f64>,
}

/// `<run>_<field>_t<time>.csv`
pub fn snapshot_file_name(run: &str, field: char, time: f64) -> String {
    format!("{run}_{field}_t{time}.csv")
}

pub fn write_field<W: Write>(out: &mut W, field: char, grid: &FieldGrid, h: f64) -> io::Result<()> {
    let values = grid
        .field(field)
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, format!("no field `{field}`")))?;
    writeln!(out, "# field={field} t={} nx={} ny={} h={h}", grid.time, grid.nx, grid.ny)?;
    for row in values.chunks(grid.nx) {
        let mut first = true;
        for x in row {
            if !first {
                out.write_all(b",")?;
            }
            first = false;
            write!(out, "{x:e}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes all three fields of `grid` into `dir`; returns the paths.
pub fn write_snapshot(dir: &Path, run: &str, grid: &FieldGrid, h: f64) -> Result<Vec<PathBuf>, SnapshotIoError> {
    let mut paths = Vec::with_capacity(3);
    for field in FIELD_NAMES {
        let path = dir.join(snapshot_file_name(run, field, grid.time));
        let io_err = |source| SnapshotIoError::Io { path: path.clone(), source };
        let file = fs::File::create(&path).map_err(io_err)?;
        let mut out = BufWriter::new(file);
        write_field(&mut out, field, grid, h).map_err(io_err)?;
        out.flush().map_err(io_err)?;
        paths.push(path);
    }
    Ok(paths)
}

fn parse_header(line: &str) -> Result<(char, f64, usize, usize, f64), String> {
    let body = line.strip_prefix('#').ok_or("missing `#` header")?;
    let mut kv = BTreeMap::new();
    for item in body.split_whitespace() {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("bad header item `{item}`"))?;
        kv.insert(k, v);
    }
    let get = |k: &str| kv.get(k).copied().ok_or_else(|| format!("header lacks `{k}`"));
    let num = |k: &str| -> Result<f64, String> {
        get(k)?.parse::<f64>().map_err(|e| format!("header `{k}`: {e}"))
    };
    let count = |k: &str| -> Result<usize, String> {
        get(k)?.parse::<usize>().map_err(|e| format!("header `{k}`: {e}"))
    };
    let field = get("field")?;
    let field = match field {
        "u" | "v" | "w" => field.chars().next().unwrap_or('u'),
        other => return Err(format!("unknown field `{other}`")),
    };
    Ok((field, num("t")?, count("nx")?, count("ny")?, num("h")?))
}

pub fn read_field(path: &Path) -> Result<FieldSnapshot, SnapshotIoError> {
    let file = fs::File::open(path).map_err(|source| SnapshotIoError::Io { path: path.into(), source })?;
    let parse = |line: usize, reason: String| SnapshotIoError::Parse { path: path.into(), line, reason };
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| parse(1, "empty file".into()))?
        .map_err(|source| SnapshotIoError::Io { path: path.into(), source })?;
    let (field, time, nx, ny, h) = parse_header(&header).map_err(|r| parse(1, r))?;
    let mut values = Vec::with_capacity(nx * ny);
    for (n, line) in lines.enumerate() {
        let line = line.map_err(|source| SnapshotIoError::Io { path: path.into(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let before = values.len();
        for cell in line.split(',') {
            let x = cell.trim().parse::<f64>().map_err(|e| parse(n + 2, format!("`{cell}`: {e}")))?;
            values.push(x);
        }
        if values.len() - before != nx {
            return Err(parse(n + 2, format!("expected {nx} values, found {}", values.len() - before)));
        }
    }
    if values.len() != nx * ny {
        return Err(parse(0, format!("expected {ny} rows, found {}", values.len() / nx.max(1))));
    }
    Ok(FieldSnapshot { field, time, nx, ny, h, values })
}

/// Reassembles every complete (u, v, w) snapshot of `run` found in `dir`,
/// ordered by time.
pub fn load_snapshots(dir: &Path, run: &str) -> Result<Vec<FieldGrid>, SnapshotIoError> {
    let entries = fs::read_dir(dir).map_err(|source| SnapshotIoError::Io { path: dir.into(), source })?;
    let prefix = format!("{run}_");
    let mut by_time: BTreeMap<u64, [Option<FieldSnapshot>; 3]> = BTreeMap::new();
    for entry in entries {
        let entry = entry.map_err(|source| SnapshotIoError::Io { path: dir.into(), source })?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let Some(rest) = name.strip_prefix(&prefix) else { continue };
        if !rest.ends_with(".csv") || !FIELD_NAMES.iter().any(|f| rest.starts_with(&format!("{f}_t"))) {
            continue;
        }
        let snap = read_field(&entry.path())?;
        let slot = FIELD_NAMES.iter().position(|&f| f == snap.field).unwrap_or(0);
        // f64 times are non-negative, so their bit patterns order correctly
        let key = snap.time.to_bits();
        by_time.entry(key).or_default()[slot] = Some(snap);
    }
    let mut out = Vec::with_capacity(by_time.len());
    for (_, parts) in by_time {
        let [Some(u), Some(v), Some(w)] = parts else {
            let t = parts.iter().flatten().next().map_or(f64::NAN, |s| s.time);
            return Err(SnapshotIoError::Incomplete {
                run: run.into(),
                reason: format!("t={t} lacks one of u, v, w"),
            });
        };
        if (u.nx, u.ny) != (v.nx, v.ny) || (u.nx, u.ny) != (w.nx, w.ny) {
            return Err(SnapshotIoError::Incomplete {
                run: run.into(),
                reason: format!("t={} has fields of different sizes", u.time),
            });
        }
        out.push(FieldGrid { nx: u.nx, ny: u.ny, time: u.time, u: u.values, v: v.values, w: w.values });
    }
    if out.is_empty() {
        return Err(SnapshotIoError::Incomplete { run: run.into(), reason: "no snapshot files found".into() });
    }
    Ok(out)
}
