//! File formats: edge lists, raw/aggregate CSVs, params snapshots (JSON
//! lines), graphlet dumps, PCA output, and the run manifest.
//!
//! Edge lists are UTF-8 text with one `u v` pair per line; lines starting
//! with '#' are comments and blank lines are skipped. The writer emits a
//! `# nodes N` header so graphs with trailing isolated nodes survive a
//! write/read round trip, and lists each undirected edge once as `u < v`,
//! sorted.

use crate::graph::Graph;
use crate::harness::{
    AggregateStats, ChainRecord, GraphSummary, Mode, PcaReport, PhaseTimings,
};
use crate::metrics::{MetricId, GRAPHLET_NAMES};
use crate::models::ModelParams;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

impl IoError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn csv(path: &Path, source: csv::Error) -> Self {
        IoError::Csv {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Read an edge-list file. A `# nodes N` header (as written by
/// [`write_edge_list`]) pins the node count and takes ids literally; without
/// it, ids are compacted in order of first appearance.
pub fn read_edge_list(path: &Path) -> Result<Graph, IoError> {
    let file = fs::File::open(path).map_err(|e| IoError::io(path, e))?;
    let reader = BufReader::new(file);
    let mut declared_nodes: Option<usize> = None;
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| IoError::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("nodes") {
                if let Some(n) = words.next().and_then(|w| w.parse::<usize>().ok()) {
                    declared_nodes = Some(n);
                }
            }
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let parse = |field: Option<&str>| -> Result<u64, IoError> {
            field
                .ok_or(())
                .and_then(|f| f.parse::<u64>().map_err(|_| ()))
                .map_err(|()| IoError::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: format!("expected two non-negative integers, got '{trimmed}'"),
                })
        };
        let u = parse(fields.next())?;
        let v = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(IoError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: format!("expected two fields, got more: '{trimmed}'"),
            });
        }
        pairs.push((u, v));
    }
    match declared_nodes {
        Some(n) => {
            for &(u, v) in &pairs {
                if u as usize >= n || v as usize >= n {
                    return Err(IoError::Parse {
                        path: path.to_path_buf(),
                        line: 0,
                        message: format!("edge ({u},{v}) out of declared node range {n}"),
                    });
                }
            }
            Ok(Graph::from_pairs(
                n,
                pairs.iter().map(|&(u, v)| (u as usize, v as usize)),
            ))
        }
        None => Ok(Graph::from_edge_list(pairs)),
    }
}

/// Write an edge list with a `# nodes N` header and one sorted `u v` line
/// per undirected edge.
pub fn write_edge_list(path: &Path, g: &Graph) -> Result<(), IoError> {
    let mut out = String::new();
    out.push_str(&format!("# nodes {}\n", g.node_count()));
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    fs::write(path, out).map_err(|e| IoError::io(path, e))
}

/// One row of the raw results CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub model: String,
    pub dataset: String,
    pub trial: usize,
    pub iteration: usize,
    pub metric: String,
    pub mode: String,
    pub value: f64,
    pub truncated: bool,
}

/// Flatten chain records into raw CSV rows: one row per
/// (iteration, metric, mode), ordered by trial, iteration, metric list
/// order, then cumulative before iterative.
pub fn raw_rows(model: &str, dataset: &str, records: &[ChainRecord]) -> Vec<RawRow> {
    let mut rows = Vec::new();
    for record in records {
        let truncated = record.truncated();
        for iter in &record.iterations {
            for (mode, values) in [
                (Mode::Cumulative, &iter.cumulative),
                (Mode::Iterative, &iter.iterative),
            ] {
                for &(metric, value) in values {
                    rows.push(RawRow {
                        model: model.to_string(),
                        dataset: dataset.to_string(),
                        trial: record.trial,
                        iteration: iter.iteration,
                        metric: metric.to_string(),
                        mode: mode.to_string(),
                        value,
                        truncated,
                    });
                }
            }
        }
    }
    rows
}

pub fn write_raw_csv(
    path: &Path,
    model: &str,
    dataset: &str,
    records: &[ChainRecord],
) -> Result<(), IoError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| IoError::csv(path, e))?;
    for row in raw_rows(model, dataset, records) {
        writer.serialize(row).map_err(|e| IoError::csv(path, e))?;
    }
    writer.flush().map_err(|e| IoError::io(path, e))
}

pub fn read_raw_csv(path: &Path) -> Result<Vec<RawRow>, IoError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| IoError::csv(path, e))?;
    reader
        .deserialize()
        .map(|row| row.map_err(|e| IoError::csv(path, e)))
        .collect()
}

/// One row of the aggregate CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggCsvRow {
    pub model: String,
    pub dataset: String,
    pub metric: String,
    pub mode: String,
    pub iteration: usize,
    pub mean: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub n: usize,
}

pub fn agg_rows(model: &str, dataset: &str, stats: &AggregateStats) -> Vec<AggCsvRow> {
    stats
        .rows
        .iter()
        .map(|row| AggCsvRow {
            model: model.to_string(),
            dataset: dataset.to_string(),
            metric: row.metric.to_string(),
            mode: row.mode.to_string(),
            iteration: row.iteration,
            mean: row.mean,
            ci95_lo: row.ci95_lo,
            ci95_hi: row.ci95_hi,
            n: row.samples,
        })
        .collect()
}

pub fn write_agg_csv(path: &Path, rows: &[AggCsvRow]) -> Result<(), IoError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| IoError::csv(path, e))?;
    for row in rows {
        writer.serialize(row).map_err(|e| IoError::csv(path, e))?;
    }
    writer.flush().map_err(|e| IoError::io(path, e))
}

/// Re-aggregate raw rows, grouped by (model, dataset); ordering matches the
/// chain command's own aggregate output.
pub fn aggregate_raw_rows(rows: &[RawRow]) -> Result<Vec<AggCsvRow>, String> {
    use std::collections::BTreeMap;
    let mut cells: BTreeMap<(String, String, MetricId, Mode, usize), Vec<f64>> = BTreeMap::new();
    for row in rows {
        let metric: MetricId = row.metric.parse().map_err(|e| format!("{e}"))?;
        let mode = match row.mode.as_str() {
            "cumulative" => Mode::Cumulative,
            "iterative" => Mode::Iterative,
            other => return Err(format!("unknown mode '{other}'")),
        };
        if row.value.is_finite() {
            cells
                .entry((
                    row.model.clone(),
                    row.dataset.clone(),
                    metric,
                    mode,
                    row.iteration,
                ))
                .or_default()
                .push(row.value);
        }
    }
    Ok(cells
        .into_iter()
        .map(|((model, dataset, metric, mode, iteration), values)| {
            let (mean, lo, hi, _) = crate::harness::mean_ci95(&values);
            AggCsvRow {
                model,
                dataset,
                metric: metric.to_string(),
                mode: mode.to_string(),
                iteration,
                mean,
                ci95_lo: lo,
                ci95_hi: hi,
                n: values.len(),
            }
        })
        .collect())
}

#[derive(Debug, Serialize)]
struct ParamsLine<'a> {
    trial: usize,
    iteration: usize,
    summary: &'a GraphSummary,
    params: &'a ModelParams,
}

/// One JSON document per line: trial, iteration, graph summary, and the
/// fitted parameter snapshot.
pub fn write_params_jsonl(path: &Path, records: &[ChainRecord]) -> Result<(), IoError> {
    let mut out = fs::File::create(path).map_err(|e| IoError::io(path, e))?;
    for record in records {
        for iter in &record.iterations {
            let line = ParamsLine {
                trial: record.trial,
                iteration: iter.iteration,
                summary: &iter.summary,
                params: &iter.params,
            };
            let json = serde_json::to_string(&line).map_err(|e| IoError::Json {
                path: path.to_path_buf(),
                source: e,
            })?;
            writeln!(out, "{json}").map_err(|e| IoError::io(path, e))?;
        }
    }
    Ok(())
}

/// One row of the graphlet-vector CSV; the source graph appears with an
/// empty trial field and iteration 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphletRow {
    pub model: String,
    pub dataset: String,
    pub trial: Option<usize>,
    pub iteration: usize,
    pub edge: u64,
    pub wedge: u64,
    pub triangle: u64,
    pub path4: u64,
    pub star3: u64,
    pub cycle4: u64,
    pub tailed_triangle: u64,
    pub diamond: u64,
    pub clique4: u64,
}

impl GraphletRow {
    pub fn counts(&self) -> [u64; 9] {
        [
            self.edge,
            self.wedge,
            self.triangle,
            self.path4,
            self.star3,
            self.cycle4,
            self.tailed_triangle,
            self.diamond,
            self.clique4,
        ]
    }
}

pub fn write_graphlets_csv(
    path: &Path,
    model: &str,
    dataset: &str,
    records: &[ChainRecord],
    source: &Graph,
) -> Result<(), IoError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| IoError::csv(path, e))?;
    let mut push = |trial: Option<usize>, iteration: usize, counts: [u64; 9]| {
        writer.serialize(GraphletRow {
            model: model.to_string(),
            dataset: dataset.to_string(),
            trial,
            iteration,
            edge: counts[0],
            wedge: counts[1],
            triangle: counts[2],
            path4: counts[3],
            star3: counts[4],
            cycle4: counts[5],
            tailed_triangle: counts[6],
            diamond: counts[7],
            clique4: counts[8],
        })
    };
    push(None, 0, crate::metrics::graphlet_counts(source).as_array())
        .map_err(|e| IoError::csv(path, e))?;
    for record in records {
        for iter in &record.iterations {
            if let Some(gv) = &iter.graphlets {
                push(Some(record.trial), iter.iteration, gv.as_array())
                    .map_err(|e| IoError::csv(path, e))?;
            }
        }
    }
    writer.flush().map_err(|e| IoError::io(path, e))
}

pub fn read_graphlets_csv(path: &Path) -> Result<Vec<GraphletRow>, IoError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| IoError::csv(path, e))?;
    reader
        .deserialize()
        .map(|row| row.map_err(|e| IoError::csv(path, e)))
        .collect()
}

/// PCA output: nine `weight-<graphlet>` rows carrying the component
/// loadings in the x/y columns, a `source` row, and one `mean` row per
/// iteration.
pub fn write_pca_csv(path: &Path, report: &PcaReport) -> Result<(), IoError> {
    #[derive(Serialize)]
    struct PcaCsvRow {
        record: String,
        iteration: Option<usize>,
        n: Option<usize>,
        x: f64,
        y: f64,
    }
    let mut writer = csv::Writer::from_path(path).map_err(|e| IoError::csv(path, e))?;
    for (i, name) in GRAPHLET_NAMES.iter().enumerate() {
        writer
            .serialize(PcaCsvRow {
                record: format!("weight-{name}"),
                iteration: None,
                n: None,
                x: report.weights[0][i],
                y: report.weights[1][i],
            })
            .map_err(|e| IoError::csv(path, e))?;
    }
    writer
        .serialize(PcaCsvRow {
            record: "source".into(),
            iteration: Some(0),
            n: Some(1),
            x: report.source.0,
            y: report.source.1,
        })
        .map_err(|e| IoError::csv(path, e))?;
    for &(iteration, x, y, n) in &report.per_iteration {
        writer
            .serialize(PcaCsvRow {
                record: "mean".into(),
                iteration: Some(iteration),
                n: Some(n),
                x,
                y,
            })
            .map_err(|e| IoError::csv(path, e))?;
    }
    writer.flush().map_err(|e| IoError::io(path, e))
}

/// Echo of a chain run: enough to replay it byte-identically, plus digests
/// and timing.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ManifestConfig,
    pub source_digest: String,
    pub duration_seconds: f64,
    pub timings: PhaseTimings,
    pub ci_method: String,
}

#[derive(Debug, Serialize)]
pub struct ManifestConfig {
    pub model: String,
    pub dataset: String,
    pub source: String,
    pub length: usize,
    pub trials: usize,
    pub seed: u64,
    pub metrics: Vec<String>,
    pub jobs: usize,
}

pub fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<(), IoError> {
    let json = serde_json::to_string_pretty(manifest).map_err(|e| IoError::Json {
        path: path.to_path_buf(),
        source: e,
    })?;
    fs::write(path, json + "\n").map_err(|e| IoError::io(path, e))
}

/// Hex-encoded SHA-256 of the file bytes.
pub fn sha256_hex(path: &Path) -> Result<String, IoError> {
    use sha2::{Digest, Sha256};
    let bytes = fs::read(path).map_err(|e| IoError::io(path, e))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip_preserves_isolates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        // node 4 is isolated and must survive the round trip
        let g = Graph::from_pairs(5, vec![(0, 2), (1, 3), (0, 1)]);
        write_edge_list(&path, &g).unwrap();
        let back = read_edge_list(&path).unwrap();
        assert_eq!(back.node_count(), 5);
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            back.edges().collect::<Vec<_>>()
        );
    }

    #[test]
    fn edge_list_reader_skips_comments_and_blanks() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        fs::write(&path, "# a comment\n\n0 1\n # another\n1\t2\n").unwrap();
        let g = read_edge_list(&path).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn edge_list_reader_rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        fs::write(&path, "0 1\n2 x\n").unwrap();
        assert!(matches!(
            read_edge_list(&path),
            Err(IoError::Parse { line: 2, .. })
        ));
        fs::write(&path, "0 1 2\n").unwrap();
        assert!(read_edge_list(&path).is_err());
    }

    #[test]
    fn foreign_edge_list_compacts_ids() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        fs::write(&path, "100 200\n200 300\n").unwrap();
        let g = read_edge_list(&path).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn raw_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("raw.csv");
        let rows = vec![RawRow {
            model: "er".into(),
            dataset: "toy".into(),
            trial: 0,
            iteration: 1,
            metric: "degree-js".into(),
            mode: "cumulative".into(),
            value: 0.25,
            truncated: false,
        }];
        let mut writer = csv::Writer::from_path(&path).unwrap();
        for row in &rows {
            writer.serialize(row).unwrap();
        }
        writer.flush().unwrap();
        let back = read_raw_csv(&path).unwrap();
        assert_eq!(back, rows);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("model,dataset,trial,iteration,metric,mode,value,truncated\n"));
    }

    #[test]
    fn nan_values_survive_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("raw.csv");
        let rows = vec![RawRow {
            model: "kron".into(),
            dataset: "toy".into(),
            trial: 1,
            iteration: 2,
            metric: "netlsd".into(),
            mode: "iterative".into(),
            value: f64::NAN,
            truncated: true,
        }];
        let mut writer = csv::Writer::from_path(&path).unwrap();
        for row in &rows {
            writer.serialize(row).unwrap();
        }
        writer.flush().unwrap();
        let back = read_raw_csv(&path).unwrap();
        assert!(back[0].value.is_nan());
    }

    #[test]
    fn sha256_of_known_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        fs::write(&path, "abc").unwrap();
        assert_eq!(
            sha256_hex(&path).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
