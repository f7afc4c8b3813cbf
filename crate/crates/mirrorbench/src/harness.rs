//! Chain orchestration: per-trial fit/generate loops, metric evaluation in
//! cumulative and iterative modes, failure truncation, and aggregation with
//! Student-t confidence intervals.

use crate::graph::Graph;
use crate::metrics::{evaluate, pca_2d, CachedGraph, GraphletVector, MetricId, Pca2d, PcaError};
use crate::models::{derive_seed, fit, generate, ModelKind, ModelParams};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::path::PathBuf;
use std::time::Instant;

/// Configuration of one chain experiment.
#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub model: ModelKind,
    pub chain_length: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub metrics: Vec<MetricId>,
    /// Worker threads for trial execution; 0 or 1 runs serially. The output
    /// is identical at every parallelism degree.
    pub jobs: usize,
    /// Record the graphlet vector of every generated graph (implied by the
    /// rgfd metrics).
    pub record_graphlets: bool,
    /// Dump each generated graph as an edge list into this directory
    /// (which must already exist).
    pub dump_graphs: Option<PathBuf>,
}

impl ChainConfig {
    pub fn new(model: ModelKind, master_seed: u64, metrics: Vec<MetricId>) -> Self {
        let record_graphlets = metrics
            .iter()
            .any(|m| matches!(m, MetricId::RgfdL1 | MetricId::RgfdL2));
        ChainConfig {
            model,
            chain_length: 10,
            trials: 50,
            master_seed,
            metrics,
            jobs: 1,
            record_graphlets,
            dump_graphs: None,
        }
    }

    fn validate(&self) {
        assert!(self.chain_length >= 1, "chain length must be >= 1");
        assert!(self.trials >= 1, "trial count must be >= 1");
    }
}

/// Structural summary of one generated graph.
#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub triangles: u64,
    pub avg_clustering: f64,
    pub avg_path_length: f64,
    pub path_length_sampled: bool,
}

impl GraphSummary {
    fn of(cached: &CachedGraph) -> Self {
        let g = cached.graph();
        GraphSummary {
            nodes: g.node_count(),
            edges: g.edge_count(),
            triangles: g.count_triangles(),
            avg_clustering: cached.avg_clustering(),
            avg_path_length: cached.avg_path_length(),
            path_length_sampled: cached.path_length_sampled(),
        }
    }
}

/// Whether a metric value compares against the source (cumulative) or the
/// previous iteration (iterative).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Cumulative,
    Iterative,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Cumulative => "cumulative",
            Mode::Iterative => "iterative",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One completed iteration of a trial. Metric evaluation failures are
/// recorded as NaN rather than truncating the chain.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub iteration: usize,
    pub summary: GraphSummary,
    pub params: ModelParams,
    pub cumulative: Vec<(MetricId, f64)>,
    pub iterative: Vec<(MetricId, f64)>,
    pub graphlets: Option<GraphletVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Termination {
    Completed,
    /// The model could not be refit on (or regenerate from) its own output.
    Truncated { at: usize, reason: String },
}

/// One trial's full chain history.
#[derive(Debug, Clone)]
pub struct ChainRecord {
    pub trial: usize,
    pub iterations: Vec<IterationRecord>,
    pub termination: Termination,
}

impl ChainRecord {
    pub fn truncated(&self) -> bool {
        matches!(self.termination, Termination::Truncated { .. })
    }
}

/// Wall-clock totals per phase, summed over trials.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct PhaseTimings {
    pub fit_seconds: f64,
    pub generate_seconds: f64,
    pub metrics_seconds: f64,
}

impl PhaseTimings {
    fn add(&mut self, other: &PhaseTimings) {
        self.fit_seconds += other.fit_seconds;
        self.generate_seconds += other.generate_seconds;
        self.metrics_seconds += other.metrics_seconds;
    }
}

/// All trials of a run plus the accumulated phase timings.
#[derive(Debug)]
pub struct RunOutcome {
    pub records: Vec<ChainRecord>,
    pub timings: PhaseTimings,
}

/// Run one fit-and-generate chain: at each iteration, fit the model to the
/// previous graph, generate a fresh graph from the fitted parameters, and
/// evaluate every configured metric against both the source and the
/// previous graph. Fit or generation failure truncates the chain with the
/// completed iterations intact. Deterministic given
/// (master_seed, trial_id).
pub fn run_chain(config: &ChainConfig, trial_id: usize, source: &CachedGraph) -> ChainRecord {
    run_chain_timed(config, trial_id, source).0
}

fn run_chain_timed(
    config: &ChainConfig,
    trial_id: usize,
    source: &CachedGraph,
) -> (ChainRecord, PhaseTimings) {
    config.validate();
    let trial_seed = derive_seed(config.master_seed, trial_id as u64);
    let mut timings = PhaseTimings::default();
    let mut iterations: Vec<IterationRecord> = Vec::new();
    let mut termination = Termination::Completed;
    let mut previous: Option<CachedGraph> = None;

    for i in 1..=config.chain_length {
        let prev_ref: &CachedGraph = previous.as_ref().unwrap_or(source);

        let fit_start = Instant::now();
        let params = match fit(config.model, prev_ref.graph()) {
            Ok(p) => p,
            Err(err) => {
                termination = Termination::Truncated {
                    at: i,
                    reason: err.to_string(),
                };
                break;
            }
        };
        timings.fit_seconds += fit_start.elapsed().as_secs_f64();

        let gen_start = Instant::now();
        let gen_seed = derive_seed(trial_seed, i as u64);
        let generated = match generate(&params, gen_seed) {
            Ok(g) => g,
            Err(err) => {
                termination = Termination::Truncated {
                    at: i,
                    reason: err.to_string(),
                };
                break;
            }
        };
        timings.generate_seconds += gen_start.elapsed().as_secs_f64();

        if let Some(dir) = &config.dump_graphs {
            let path = dir.join(format!(
                "{}-trial{:03}-iter{:02}.txt",
                config.model, trial_id, i
            ));
            // dump failures are not an experiment failure
            let _ = crate::io::write_edge_list(&path, &generated);
        }

        let metrics_start = Instant::now();
        let cached = CachedGraph::new(generated);
        let cumulative = eval_all(&config.metrics, source, &cached);
        let iterative = eval_all(&config.metrics, prev_ref, &cached);
        let graphlets = config.record_graphlets.then(|| *cached.graphlets());
        let summary = GraphSummary::of(&cached);
        timings.metrics_seconds += metrics_start.elapsed().as_secs_f64();

        iterations.push(IterationRecord {
            iteration: i,
            summary,
            params,
            cumulative,
            iterative,
            graphlets,
        });
        previous = Some(cached);
    }

    (
        ChainRecord {
            trial: trial_id,
            iterations,
            termination,
        },
        timings,
    )
}

fn eval_all(metrics: &[MetricId], a: &CachedGraph, b: &CachedGraph) -> Vec<(MetricId, f64)> {
    metrics
        .iter()
        .map(|&m| (m, evaluate(m, a, b).unwrap_or(f64::NAN)))
        .collect()
}

/// Run all configured trials. Trials are embarrassingly parallel: results
/// are merged by trial id, so the output is independent of the worker count
/// and schedule.
pub fn run_trials(config: &ChainConfig, source: &Graph) -> RunOutcome {
    config.validate();
    let cached_source = CachedGraph::new(source.clone());
    let results: Vec<(ChainRecord, PhaseTimings)> = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .expect("failed to build worker pool");
        pool.install(|| {
            use rayon::prelude::*;
            (0..config.trials)
                .into_par_iter()
                .map(|t| run_chain_timed(config, t, &cached_source))
                .collect()
        })
    } else {
        (0..config.trials)
            .map(|t| run_chain_timed(config, t, &cached_source))
            .collect()
    };
    let mut timings = PhaseTimings::default();
    let mut records = Vec::with_capacity(results.len());
    for (record, t) in results {
        timings.add(&t);
        records.push(record);
    }
    RunOutcome { records, timings }
}

/// Mean and 95% Student-t confidence interval for one
/// (metric, mode, iteration) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AggRow {
    pub metric: MetricId,
    pub mode: Mode,
    pub iteration: usize,
    pub mean: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub samples: usize,
    /// Single-sample cells get a zero-width interval.
    pub degenerate_ci: bool,
}

#[derive(Debug, Clone, Default)]
pub struct AggregateStats {
    pub rows: Vec<AggRow>,
}

/// Aggregate raw per-trial values: mean over the trials that reached each
/// iteration, with CI = mean +- t_{0.975, n-1} * s / sqrt(n). Truncated
/// trials contribute every iteration they completed; NaN values (failed
/// metric evaluations) are excluded from their cell.
pub fn aggregate(records: &[ChainRecord]) -> AggregateStats {
    use std::collections::BTreeMap;
    let mut cells: BTreeMap<(MetricId, Mode, usize), Vec<f64>> = BTreeMap::new();
    for record in records {
        for iter in &record.iterations {
            for &(metric, value) in &iter.cumulative {
                if value.is_finite() {
                    cells
                        .entry((metric, Mode::Cumulative, iter.iteration))
                        .or_default()
                        .push(value);
                }
            }
            for &(metric, value) in &iter.iterative {
                if value.is_finite() {
                    cells
                        .entry((metric, Mode::Iterative, iter.iteration))
                        .or_default()
                        .push(value);
                }
            }
        }
    }
    let rows = cells
        .into_iter()
        .map(|((metric, mode, iteration), values)| {
            let (mean, lo, hi, degenerate) = mean_ci95(&values);
            AggRow {
                metric,
                mode,
                iteration,
                mean,
                ci95_lo: lo,
                ci95_hi: hi,
                samples: values.len(),
                degenerate_ci: degenerate,
            }
        })
        .collect();
    AggregateStats { rows }
}

/// Sample mean and 95% Student-t interval; a single observation yields a
/// degenerate interval equal to the mean.
pub fn mean_ci95(values: &[f64]) -> (f64, f64, f64, bool) {
    assert!(!values.is_empty(), "need at least one sample");
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, mean, mean, true);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("valid t distribution")
        .inverse_cdf(0.975);
    let half = t * sd / (n as f64).sqrt();
    (mean, mean - half, mean + half, false)
}

/// Per-iteration mean 2-D PCA coordinates of the pooled normalized graphlet
/// vectors (source plus every recorded generated graph).
#[derive(Debug, Clone)]
pub struct PcaReport {
    pub weights: [Vec<f64>; 2],
    pub source: (f64, f64),
    /// (iteration, mean x, mean y, contributing trials)
    pub per_iteration: Vec<(usize, f64, f64, usize)>,
    pub degenerate: bool,
}

/// Pool the normalized graphlet vectors of the source and all generated
/// graphs, project with 2-D PCA, and report per-iteration trial means.
/// Requires records produced with graphlet recording enabled.
pub fn graphlet_pca_report(records: &[ChainRecord], source: &Graph) -> Result<PcaReport, PcaError> {
    let source_vec = crate::metrics::graphlet_counts(source);
    let mut vectors: Vec<Vec<f64>> = vec![source_vec.relative_frequencies().to_vec()];
    let mut owners: Vec<usize> = vec![0]; // iteration 0 = source
    for record in records {
        for iter in &record.iterations {
            if let Some(gv) = &iter.graphlets {
                vectors.push(gv.relative_frequencies().to_vec());
                owners.push(iter.iteration);
            }
        }
    }
    let pca = pca_2d(&vectors)?;
    Ok(build_pca_report(&pca, &owners))
}

/// Assemble a [`PcaReport`] from raw projections and the iteration that
/// owns each projected vector (0 marks the source).
pub fn build_pca_report(pca: &Pca2d, owners: &[usize]) -> PcaReport {
    use std::collections::BTreeMap;
    let mut sums: BTreeMap<usize, (f64, f64, usize)> = BTreeMap::new();
    let mut source = (0.0, 0.0);
    for (&iteration, &(x, y)) in owners.iter().zip(pca.coords.iter()) {
        if iteration == 0 {
            source = (x, y);
        } else {
            let cell = sums.entry(iteration).or_insert((0.0, 0.0, 0));
            cell.0 += x;
            cell.1 += y;
            cell.2 += 1;
        }
    }
    let per_iteration = sums
        .into_iter()
        .map(|(iter, (sx, sy, n))| (iter, sx / n as f64, sy / n as f64, n))
        .collect();
    PcaReport {
        weights: pca.weights.clone(),
        source,
        per_iteration,
        degenerate: pca.degenerate,
    }
}
