//! Text and CSV formats.
//!
//! * Edge list: one edge per line as two whitespace-separated tokens; blank
//!   lines and lines starting with `#` are skipped.
//! * Partition: CSV `internal_id,community`; community `-1` marks a node that
//!   forms its own singleton community.
//! * Labels: CSV `node,label` keyed by external node id.
//! * Features: CSV `node,<feature>...` keyed by external node id.
//! * Mapping: CSV `external_id,internal_id`.
//!
//! Every CSV has a header and uses `\n` line terminators.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use commaware_core::{CleanReport, FeatureMatrix, Graph, NodeId, Partition};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}: {message}")]
    Content { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> FormatError + '_ {
    move |source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> FormatError + '_ {
    move |source| FormatError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn content(path: &Path, message: impl Into<String>) -> FormatError {
    FormatError::Content {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Parses an edge list.
///
/// Tokens become dense ids in ascending numeric order when every token is a
/// non-negative integer, and in lexicographic order otherwise. The original
/// tokens are kept as node labels unless they are exactly `0..n`.
pub fn parse_edge_list<R: Read>(reader: R, path: &Path) -> Result<(Graph, CleanReport)> {
    let mut raw: Vec<(String, String)> = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(FormatError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("expected 2 tokens, found {}", tokens.len()),
            });
        }
        raw.push((tokens[0].to_string(), tokens[1].to_string()));
    }
    if raw.is_empty() {
        return Err(content(path, "no edges"));
    }
    let numeric: Option<Vec<(u64, u64)>> = raw
        .iter()
        .map(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)))
        .collect();
    let (edges, labels, identity) = match numeric {
        Some(pairs) => {
            let ids: BTreeSet<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            let ids: Vec<u64> = ids.into_iter().collect();
            let index: HashMap<u64, NodeId> = ids.iter().enumerate().map(|(i, &x)| (x, i as NodeId)).collect();
            let edges = pairs.iter().map(|(a, b)| (index[a], index[b])).collect::<Vec<_>>();
            let identity = ids.iter().enumerate().all(|(i, &x)| i as u64 == x);
            (edges, ids.iter().map(u64::to_string).collect::<Vec<_>>(), identity)
        }
        None => {
            let ids: BTreeSet<&str> = raw.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()]).collect();
            let ids: Vec<String> = ids.into_iter().map(String::from).collect();
            let index: HashMap<&str, NodeId> = ids.iter().enumerate().map(|(i, x)| (x.as_str(), i as NodeId)).collect();
            let edges = raw.iter().map(|(a, b)| (index[a.as_str()], index[b.as_str()])).collect();
            (edges, ids, false)
        }
    };
    let n = labels.len();
    let labels = (!identity).then_some(labels);
    Graph::build(n, &edges, labels).map_err(|e| content(path, e.to_string()))
}

pub fn read_edge_list(path: &Path) -> Result<(Graph, CleanReport)> {
    let file = File::open(path).map_err(io_err(path))?;
    parse_edge_list(file, path)
}

/// Writes one `u v` line per edge using external labels.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v))?;
    }
    out.flush()
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(io_err(path))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file)))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn check_header(path: &Path, reader: &mut csv::Reader<File>, expected: &[&str]) -> Result<()> {
    let header = reader.headers().map_err(csv_err(path))?;
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(content(
            path,
            format!("expected header `{}`, found `{}`", expected.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, field: &str, what: &str) -> Result<T> {
    field.parse().map_err(|_| FormatError::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("invalid {what} `{field}`"),
    })
}

/// Reads a partition file; every internal id of `g` must appear once.
pub fn read_partition(path: &Path, g: &Graph) -> Result<Partition> {
    let mut reader = csv_reader(path)?;
    check_header(path, &mut reader, &["internal_id", "community"])?;
    let n = g.num_nodes();
    let mut labels: Vec<Option<Option<u32>>> = vec![None; n];
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err(path))?;
        let line = i + 2;
        let v: usize = parse_field(path, line, &record[0], "internal id")?;
        let c: i64 = parse_field(path, line, &record[1], "community")?;
        if v >= n {
            return Err(FormatError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("internal id {v} out of range for {n} nodes"),
            });
        }
        let c = match c {
            -1 => None,
            c if (0..=u32::MAX as i64).contains(&c) => Some(c as u32),
            _ => {
                return Err(FormatError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("community {c} must be -1 or a non-negative 32-bit integer"),
                })
            }
        };
        if labels[v].replace(c).is_some() {
            return Err(FormatError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("internal id {v} listed twice"),
            });
        }
    }
    if let Some(missing) = labels.iter().position(Option::is_none) {
        return Err(content(path, format!("internal id {missing} has no community")));
    }
    let labels: Vec<Option<u32>> = labels.into_iter().map(Option::unwrap).collect();
    Partition::from_optional(g, &labels).map_err(|e| content(path, e.to_string()))
}

/// Writes `internal_id,community`; `outliers` marks nodes written as `-1`.
pub fn write_partition(path: &Path, p: &Partition, outliers: Option<&[bool]>) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["internal_id", "community"]).map_err(csv_err(path))?;
    for (v, &c) in p.assignment().iter().enumerate() {
        let c = if outliers.is_some_and(|o| o[v]) { "-1".to_string() } else { c.to_string() };
        w.write_record([v.to_string(), c]).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes planted communities, `-1` for outliers.
pub fn write_planted(path: &Path, planted: &[Option<u32>]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["internal_id", "community"]).map_err(csv_err(path))?;
    for (v, c) in planted.iter().enumerate() {
        let c = c.map_or_else(|| "-1".to_string(), |c| c.to_string());
        w.write_record([v.to_string(), c]).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_mapping(path: &Path, g: &Graph) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["external_id", "internal_id"]).map_err(csv_err(path))?;
    for v in g.nodes() {
        w.write_record([g.label(v), v.to_string()]).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_labels(path: &Path, g: &Graph, labels: &[u8]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["node", "label"]).map_err(csv_err(path))?;
    for v in g.nodes() {
        w.write_record([g.label(v), labels[v as usize].to_string()]).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads binary labels for every node of `g`, matched by external id.
/// Rows for nodes absent from `g` are ignored.
pub fn read_labels(path: &Path, g: &Graph) -> Result<Vec<u8>> {
    let mut reader = csv_reader(path)?;
    check_header(path, &mut reader, &["node", "label"])?;
    let mut by_id: HashMap<String, u8> = HashMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err(path))?;
        let label: u8 = parse_field(path, i + 2, &record[1], "label")?;
        if label > 1 {
            return Err(FormatError::Parse {
                path: path.to_path_buf(),
                line: i + 2,
                message: format!("label must be 0 or 1, found {label}"),
            });
        }
        by_id.insert(record[0].to_string(), label);
    }
    g.nodes()
        .map(|v| {
            let id = g.label(v);
            by_id
                .get(&id)
                .copied()
                .ok_or_else(|| content(path, format!("no label for node {id}")))
        })
        .collect()
}

/// Writes `node` followed by the matrix columns, one row per node.
pub fn write_features(path: &Path, g: &Graph, m: &FeatureMatrix) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["node".to_string()];
    header.extend(m.names().iter().cloned());
    w.write_record(&header).map_err(csv_err(path))?;
    for v in g.nodes() {
        let mut row = vec![g.label(v)];
        row.extend(m.row(v as usize).iter().map(|x| format!("{x:?}")));
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads a features file back as external ids plus a matrix.
pub fn read_features(path: &Path) -> Result<(Vec<String>, FeatureMatrix)> {
    let mut reader = csv_reader(path)?;
    let header = reader.headers().map_err(csv_err(path))?.clone();
    if header.get(0) != Some("node") {
        return Err(content(path, "first column must be `node`"));
    }
    let names: Vec<String> = header.iter().skip(1).map(String::from).collect();
    let mut ids = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err(path))?;
        ids.push(record[0].to_string());
        for (j, col) in columns.iter_mut().enumerate() {
            col.push(parse_field(path, i + 2, &record[j + 1], "number")?);
        }
    }
    let m = FeatureMatrix::from_columns(names.into_iter().zip(columns).collect()).map_err(|e| content(path, e.to_string()))?;
    Ok((ids, m))
}
