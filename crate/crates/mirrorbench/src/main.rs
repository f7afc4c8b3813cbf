//! Command-line surface: synthesize reference graphs, fit and generate
//! models, compare graphs, run chains, and post-process results.

use clap::{Args, Parser, Subcommand};
use mirrorbench::harness::{aggregate, run_trials, ChainConfig};
use mirrorbench::io::{self, IoError, ManifestConfig, RunManifest};
use mirrorbench::metrics::{evaluate, pca_2d, CachedGraph, MetricId};
use mirrorbench::models::{fit, generate, ModelKind, ModelParams};
use mirrorbench::synth;
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "mirrorbench", version, about = "Stress-test graph generative models by refitting them on their own output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a synthetic source graph and write it as an edge list
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
    /// Fit a model to a graph and write the parameters as JSON
    Fit {
        /// Input edge list
        input: PathBuf,
        #[arg(long, value_parser = parse_model)]
        model: ModelKind,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate a graph from fitted parameters
    Generate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Evaluate comparison metrics on a pair of graphs
    Compare {
        graph1: PathBuf,
        graph2: PathBuf,
        /// Metric id; repeat for several (degree-js, pagerank-js, portrait,
        /// lambda, rgfd-l1, rgfd-l2, netlsd, avg-cc, avg-pl)
        #[arg(long = "metric", required = true, value_parser = parse_metric)]
        metrics: Vec<MetricId>,
    },
    /// Run fit-and-generate chains and write raw + aggregate CSVs
    Chain(Box<ChainArgs>),
    /// Re-aggregate a raw results CSV
    Stats {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Project a graphlet-vector CSV to 2-D principal components
    Pca {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum SynthKind {
    /// Ring of cliques
    CliqueRing {
        #[arg(long)]
        cliques: usize,
        #[arg(long)]
        size: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Random tree with 2-4 children per node
    Tree {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Erdos-Renyi graph with the given expected edge count
    Er {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args, Clone, Default)]
struct ChainArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    source: Option<PathBuf>,
    /// Chain length (default 10)
    #[arg(long)]
    length: Option<usize>,
    /// Independent trials (default 50)
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated metric ids
    #[arg(long)]
    metrics: Option<String>,
    /// Worker threads (default: MIRRORBENCH_JOBS or 1)
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long = "out-raw")]
    out_raw: Option<PathBuf>,
    #[arg(long = "out-agg")]
    out_agg: Option<PathBuf>,
    /// Dump every generated graph into this directory
    #[arg(long = "dump-graphs")]
    dump_graphs: Option<PathBuf>,
    /// Write per-iteration parameter snapshots as JSON lines
    #[arg(long = "dump-params")]
    dump_params: Option<PathBuf>,
    /// Write per-iteration graphlet vectors (input for `pca`)
    #[arg(long = "dump-graphlets")]
    dump_graphlets: Option<PathBuf>,
    /// key=value file mirroring these flags; flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Io(String),
    Model(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Model(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Model(_) => "model",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Model(m) => m,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Parse { .. } => CliError::Usage(e.to_string()),
            other => CliError::Io(other.to_string()),
        }
    }
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_metric(s: &str) -> Result<MetricId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            report(&CliError::Usage(err.to_string()));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report(&err);
            ExitCode::from(err.exit_code())
        }
    }
}

/// Single machine-readable error line on stderr.
fn report(err: &CliError) {
    let line = serde_json::json!({
        "error": err.kind(),
        "message": err.message(),
    });
    eprintln!("{line}");
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Synth { kind } => run_synth(kind),
        Command::Fit {
            input,
            model,
            output,
        } => run_fit(&input, model, &output),
        Command::Generate {
            params,
            seed,
            output,
        } => run_generate(&params, seed, &output),
        Command::Compare {
            graph1,
            graph2,
            metrics,
        } => run_compare(&graph1, &graph2, &metrics),
        Command::Chain(args) => run_chain_command(*args),
        Command::Stats { input, output } => run_stats(&input, &output),
        Command::Pca { input, output } => run_pca(&input, &output),
    }
}

fn run_synth(kind: SynthKind) -> Result<(), CliError> {
    let (graph, output) = match kind {
        SynthKind::CliqueRing {
            cliques,
            size,
            output,
        } => (
            synth::make_clique_ring(cliques, size).map_err(|e| CliError::Usage(e.to_string()))?,
            output,
        ),
        SynthKind::Tree {
            nodes,
            seed,
            output,
        } => (
            synth::make_random_tree(nodes, seed).map_err(|e| CliError::Usage(e.to_string()))?,
            output,
        ),
        SynthKind::Er {
            nodes,
            edges,
            seed,
            output,
        } => {
            let max = nodes * nodes.saturating_sub(1) / 2;
            if edges > max {
                return Err(CliError::Usage(format!(
                    "er: {edges} edges exceeds the {max} possible for {nodes} nodes"
                )));
            }
            (synth::make_er(nodes, edges, seed), output)
        }
    };
    io::write_edge_list(&output, &graph)?;
    println!(
        "wrote {} ({} nodes, {} edges)",
        output.display(),
        graph.node_count(),
        graph.edge_count()
    );
    Ok(())
}

fn run_fit(input: &Path, model: ModelKind, output: &Path) -> Result<(), CliError> {
    let graph = io::read_edge_list(input)?;
    let params = fit(model, &graph).map_err(|e| CliError::Model(e.to_string()))?;
    let json =
        serde_json::to_string_pretty(&params).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(output, json + "\n").map_err(|e| CliError::Io(format!("{}: {e}", output.display())))?;
    Ok(())
}

fn run_generate(params_path: &Path, seed: u64, output: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(params_path)
        .map_err(|e| CliError::Io(format!("{}: {e}", params_path.display())))?;
    let params: ModelParams =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad params: {e}")))?;
    params
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let graph = generate(&params, seed).map_err(|e| CliError::Model(e.to_string()))?;
    io::write_edge_list(output, &graph)?;
    Ok(())
}

fn run_compare(g1: &Path, g2: &Path, metrics: &[MetricId]) -> Result<(), CliError> {
    let a = CachedGraph::new(io::read_edge_list(g1)?);
    let b = CachedGraph::new(io::read_edge_list(g2)?);
    for &metric in metrics {
        let value = evaluate(metric, &a, &b).unwrap_or(f64::NAN);
        println!("{metric}={value}");
    }
    Ok(())
}

/// Resolved chain invocation: config plus the source path and output paths
/// (raw CSV, aggregate CSV, params JSONL, graphlets CSV).
struct ChainInvocation {
    config: ChainConfig,
    source: PathBuf,
    out_raw: Option<PathBuf>,
    out_agg: Option<PathBuf>,
    dump_params: Option<PathBuf>,
    dump_graphlets: Option<PathBuf>,
}

/// Merge precedence: flag > config file > default.
fn chain_config_from(args: ChainArgs) -> Result<ChainInvocation, CliError> {
    let mut file: HashMap<String, String> = HashMap::new();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected key=value, got '{line}'",
                    path.display(),
                    idx + 1
                )));
            };
            file.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    let from_file = |key: &str| file.get(key).cloned();

    let model_str = args
        .model
        .or_else(|| from_file("model"))
        .ok_or_else(|| CliError::Usage("chain: --model is required".into()))?;
    let model: ModelKind = model_str
        .parse()
        .map_err(|e| CliError::Usage(format!("{e}")))?;
    let source = args
        .source
        .or_else(|| from_file("source").map(PathBuf::from))
        .ok_or_else(|| CliError::Usage("chain: --source is required".into()))?;
    let parse_num = |name: &str, raw: Option<String>| -> Result<Option<u64>, CliError> {
        raw.map(|s| {
            s.parse::<u64>()
                .map_err(|_| CliError::Usage(format!("chain: bad {name} '{s}'")))
        })
        .transpose()
    };
    let length = args
        .length
        .or(parse_num("length", from_file("length"))?.map(|v| v as usize))
        .unwrap_or(10);
    let trials = args
        .trials
        .or(parse_num("trials", from_file("trials"))?.map(|v| v as usize))
        .unwrap_or(50);
    let seed = args.seed.or(parse_num("seed", from_file("seed"))?).unwrap_or(0);
    if length < 1 || trials < 1 {
        return Err(CliError::Usage(
            "chain: --length and --trials must be >= 1".into(),
        ));
    }

    let metrics_str = args
        .metrics
        .or_else(|| from_file("metrics"))
        .unwrap_or_else(|| "degree-js".to_string());
    let mut metrics = Vec::new();
    for token in metrics_str.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        metrics.push(
            token
                .parse::<MetricId>()
                .map_err(|e| CliError::Usage(format!("{e}")))?,
        );
    }
    if metrics.is_empty() {
        return Err(CliError::Usage("chain: --metrics list is empty".into()));
    }

    let jobs = args
        .jobs
        .or(parse_num("jobs", from_file("jobs"))?.map(|v| v as usize))
        .or_else(|| {
            std::env::var("MIRRORBENCH_JOBS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1);

    let mut config = ChainConfig::new(model, seed, metrics);
    config.chain_length = length;
    config.trials = trials;
    config.jobs = jobs;
    let dump_graphs = args
        .dump_graphs
        .or_else(|| from_file("dump-graphs").map(PathBuf::from));
    config.dump_graphs = dump_graphs.clone();
    let dump_params = args
        .dump_params
        .or_else(|| from_file("dump-params").map(PathBuf::from));
    let dump_graphlets = args
        .dump_graphlets
        .or_else(|| from_file("dump-graphlets").map(PathBuf::from));
    if dump_graphlets.is_some() {
        config.record_graphlets = true;
    }
    let out_raw = args
        .out_raw
        .or_else(|| from_file("out-raw").map(PathBuf::from));
    let out_agg = args
        .out_agg
        .or_else(|| from_file("out-agg").map(PathBuf::from));
    Ok(ChainInvocation {
        config,
        source,
        out_raw,
        out_agg,
        dump_params,
        dump_graphlets,
    })
}

fn run_chain_command(args: ChainArgs) -> Result<(), CliError> {
    let ChainInvocation {
        config,
        source: source_path,
        out_raw,
        out_agg,
        dump_params,
        dump_graphlets,
    } = chain_config_from(args)?;
    let source = io::read_edge_list(&source_path)?;
    let dataset = source_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    if let Some(dir) = &config.dump_graphs {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }

    let started = Instant::now();
    let outcome = run_trials(&config, &source);
    let duration = started.elapsed().as_secs_f64();

    // every trial dead before producing a single graph: model failure
    if outcome
        .records
        .iter()
        .all(|r| r.iterations.is_empty())
    {
        let reason = outcome
            .records
            .first()
            .and_then(|r| match &r.termination {
                mirrorbench::harness::Termination::Truncated { reason, .. } => {
                    Some(reason.clone())
                }
                _ => None,
            })
            .unwrap_or_else(|| "model failed before iteration 1".into());
        return Err(CliError::Model(reason));
    }

    let model_name = config.model.to_string();
    if let Some(path) = &out_raw {
        io::write_raw_csv(path, &model_name, &dataset, &outcome.records)?;
        let manifest = RunManifest {
            tool: "mirrorbench".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: "chain".into(),
            config: ManifestConfig {
                model: model_name.clone(),
                dataset: dataset.clone(),
                source: source_path.display().to_string(),
                length: config.chain_length,
                trials: config.trials,
                seed: config.master_seed,
                metrics: config.metrics.iter().map(|m| m.to_string()).collect(),
                jobs: config.jobs,
            },
            source_digest: format!("sha256:{}", io::sha256_hex(&source_path)?),
            duration_seconds: duration,
            timings: outcome.timings,
            ci_method: "student-t 95%".into(),
        };
        let manifest_path = path.with_extension("manifest.json");
        io::write_manifest(&manifest_path, &manifest)?;
    }
    if let Some(path) = &out_agg {
        let stats = aggregate(&outcome.records);
        io::write_agg_csv(path, &io::agg_rows(&model_name, &dataset, &stats))?;
    }
    if let Some(path) = &dump_params {
        io::write_params_jsonl(path, &outcome.records)?;
    }
    if let Some(path) = &dump_graphlets {
        io::write_graphlets_csv(path, &model_name, &dataset, &outcome.records, &source)?;
    }

    let truncated = outcome.records.iter().filter(|r| r.truncated()).count();
    println!(
        "{} trials ({} truncated) x {} iterations in {:.2}s",
        config.trials, truncated, config.chain_length, duration
    );
    Ok(())
}

fn run_stats(input: &Path, output: &Path) -> Result<(), CliError> {
    let rows = io::read_raw_csv(input)?;
    if rows.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no raw rows to aggregate",
            input.display()
        )));
    }
    let agg = io::aggregate_raw_rows(&rows).map_err(CliError::Usage)?;
    io::write_agg_csv(output, &agg)?;
    Ok(())
}

fn run_pca(input: &Path, output: &Path) -> Result<(), CliError> {
    let rows = io::read_graphlets_csv(input)?;
    if rows.len() < 2 {
        return Err(CliError::Usage(format!(
            "{}: need at least 2 graphlet rows for PCA",
            input.display()
        )));
    }
    let vectors: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| {
            let counts = row.counts();
            let total: u64 = counts.iter().sum();
            counts
                .iter()
                .map(|&c| {
                    if total == 0 {
                        0.0
                    } else {
                        c as f64 / total as f64
                    }
                })
                .collect()
        })
        .collect();
    let owners: Vec<usize> = rows.iter().map(|row| row.iteration).collect();
    let pca = pca_2d(&vectors).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = mirrorbench::harness::build_pca_report(&pca, &owners);
    io::write_pca_csv(output, &report)?;
    Ok(())
}
