//! Edge-list ingestion and serialization.
//!
//! Two layouts are supported:
//!
//! * long CSV with header `time,from,to[,weight]`, one row per edge;
//! * a directory holding one `from,to[,weight]` CSV per snapshot, where the
//!   lexicographic order of file names defines time.
//!
//! Weights are accepted and ignored.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{StaticGraph, TemporalNetworkSequence, TimeLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    /// Decide from the path: directories use [`InputFormat::Dir`].
    #[default]
    Auto,
    Long,
    Dir,
}

/// How node indices are assigned per snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeUniverse {
    /// Only ids seen in a snapshot are nodes of that snapshot.
    #[default]
    Observed,
    /// Every id seen anywhere is a node of every snapshot.
    Fixed,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    pub format: InputFormat,
    pub universe: NodeUniverse,
    pub directed: bool,
}

struct RawSnapshot {
    label: String,
    edges: Vec<(String, String)>,
}

/// Loads a temporal network sequence from a long CSV file or a directory of
/// per-snapshot CSV files.
pub fn load_sequence(source: &Path, opts: &LoadOptions) -> Result<TemporalNetworkSequence> {
    let format = match opts.format {
        InputFormat::Auto if source.is_dir() => InputFormat::Dir,
        InputFormat::Auto => InputFormat::Long,
        f => f,
    };
    let (raw, labels) = match format {
        InputFormat::Dir => {
            let raw = read_dir_snapshots(source)?;
            let labels = raw.iter().map(|s| TimeLabel::Text(s.label.clone())).collect();
            (raw, labels)
        }
        _ => {
            let raw = read_long(source)?;
            let labels = TimeLabel::parse_all(&raw.iter().map(|s| s.label.as_str()).collect::<Vec<_>>());
            // Re-sort under the natural order of the parsed labels.
            let mut paired: Vec<_> = labels.into_iter().zip(raw).collect();
            paired.sort_by(|a, b| a.0.cmp(&b.0));
            let (labels, raw): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
            (raw, labels)
        }
    };
    if raw.is_empty() {
        return Err(Error::NoSnapshots(source.to_path_buf()));
    }

    let global_index = match opts.universe {
        NodeUniverse::Fixed => Some(index_ids(raw.iter().flat_map(|s| s.edges.iter()))),
        NodeUniverse::Observed => None,
    };
    let mut snapshots = Vec::with_capacity(raw.len());
    for snap in &raw {
        let local;
        let index = match &global_index {
            Some(idx) => idx,
            None => {
                local = index_ids(snap.edges.iter());
                &local
            }
        };
        let edges = snap.edges.iter().map(|(a, b)| (index[a.as_str()], index[b.as_str()]));
        snapshots.push(StaticGraph::new(index.len(), edges, opts.directed)?);
    }
    TemporalNetworkSequence::new(snapshots, labels)
}

/// Assigns indices to ids in natural order: numeric if every id is an
/// integer, lexicographic otherwise.
fn index_ids<'a, I>(edges: I) -> HashMap<&'a str, usize>
where
    I: Iterator<Item = &'a (String, String)>,
{
    let mut ids: Vec<&str> = edges.flat_map(|(a, b)| [a.as_str(), b.as_str()]).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.iter().all(|s| s.parse::<i64>().is_ok()) {
        ids.sort_by_key(|s| s.parse::<i64>().unwrap());
    }
    ids.into_iter().enumerate().map(|(i, s)| (s, i)).collect()
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?)
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn check_header(path: &Path, headers: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    let ok = headers.len() >= expected.len()
        && headers.len() <= expected.len() + 1
        && expected
            .iter()
            .zip(headers.iter())
            .all(|(e, h)| h.eq_ignore_ascii_case(e));
    if ok {
        Ok(())
    } else {
        Err(parse_error(
            path,
            1,
            format!("expected header `{}[,weight]`", expected.join(",")),
        ))
    }
}

fn read_edge_fields(
    path: &Path,
    record: &csv::StringRecord,
    fields: usize,
) -> Result<Vec<String>> {
    let line = record.position().map_or(0, |p| p.line());
    if record.len() < fields || record.len() > fields + 1 {
        return Err(parse_error(
            path,
            line,
            format!("expected {} or {} fields, found {}", fields, fields + 1, record.len()),
        ));
    }
    let values: Vec<String> = record.iter().take(fields).map(str::to_string).collect();
    if values.iter().any(String::is_empty) {
        return Err(parse_error(path, line, "empty field"));
    }
    if let Some(w) = record.get(fields) {
        if !w.is_empty() && w.parse::<f64>().is_err() {
            return Err(parse_error(path, line, format!("weight `{w}` is not a number")));
        }
    }
    Ok(values)
}

fn read_long(path: &Path) -> Result<Vec<RawSnapshot>> {
    let mut reader = csv_reader(path)?;
    check_header(path, reader.headers()?, &["time", "from", "to"])?;
    let mut groups: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, line, e.to_string())
        })?;
        let mut f = read_edge_fields(path, &record, 3)?.into_iter();
        let (time, from, to) = (f.next().unwrap(), f.next().unwrap(), f.next().unwrap());
        groups.entry(time).or_default().push((from, to));
    }
    Ok(groups
        .into_iter()
        .map(|(label, edges)| RawSnapshot { label, edges })
        .collect())
}

fn read_dir_snapshots(dir: &Path) -> Result<Vec<RawSnapshot>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")))
        .collect();
    files.sort();
    let mut out = Vec::with_capacity(files.len());
    for file in files {
        let mut reader = csv_reader(&file)?;
        check_header(&file, reader.headers()?, &["from", "to"])?;
        let mut edges = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                parse_error(&file, line, e.to_string())
            })?;
            let mut f = read_edge_fields(&file, &record, 2)?.into_iter();
            edges.push((f.next().unwrap(), f.next().unwrap()));
        }
        let label = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        out.push(RawSnapshot { label, edges });
    }
    Ok(out)
}

/// Writes a sequence as long CSV, naming nodes by their index.
///
/// Nodes without edges are not representable in this layout; loading the
/// output with [`NodeUniverse::Fixed`] restores them only if they carry an
/// edge in some snapshot.
pub fn write_long_csv<W: Write>(seq: &TemporalNetworkSequence, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["time", "from", "to"])?;
    for (label, g) in seq.time_labels().iter().zip(seq.snapshots()) {
        let label = label.to_string();
        for &(u, v) in g.edges() {
            writer.write_record([label.as_str(), &u.to_string(), &v.to_string()])?;
        }
    }
    writer.flush()?;
    Ok(())
}
