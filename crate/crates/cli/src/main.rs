use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tempoodd_core::arima::ArimaConfig;
use tempoodd_core::experiment::preset;
use tempoodd_core::io::{load_sequence, write_long_csv, InputFormat, LoadOptions, NodeUniverse};
use tempoodd_core::netgen::{example_dense_anomaly, example_star_anomaly};
use tempoodd_core::report::{
    probability_chart_svg, read_features_csv, write_diagnostics_csv, write_embedding_csv, write_experiment_csv,
    write_experiment_summary_csv, write_features_csv, write_report_csv, write_report_json,
};
use tempoodd_core::{detect_from_features, run_experiment, AnomalyMode, FeatureMatrix, PipelineConfig};

mod config;

use config::{pick, FileConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] tempoodd_core::Error),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_usage() => 2,
            CliError::Core(_) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Anomaly detection for sequences of temporal networks.
#[derive(Debug, Parser)]
#[command(name = "tempoodd", version)]
struct Cli {
    /// JSON file with flat keys named after the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the 20 graph features per snapshot.
    Features(InputArgs),
    /// Run the full detection pipeline.
    Detect(DetectArgs),
    /// Generate a synthetic sequence with one anomalous snapshot.
    Simulate(SimulateArgs),
    /// Run a synthetic experiment and report AUCs.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Long,
    Dir,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NodesArg {
    Fixed,
    Observed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Absolute,
    Additive,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Long CSV file or directory of per-snapshot CSV files.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Node universe per snapshot.
    #[arg(long, value_enum)]
    nodes: Option<NodesArg>,
    #[arg(long)]
    directed: bool,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Start from a saved feature CSV instead of an edge list.
    #[arg(long, conflicts_with = "input")]
    from_features: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of robust principal components.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    bandwidth_quantile: Option<f64>,
    #[arg(long)]
    threshold_quantile: Option<f64>,
    #[arg(long)]
    max_p: Option<usize>,
    #[arg(long)]
    max_q: Option<usize>,
    #[arg(long)]
    max_d: Option<usize>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// exp1..exp4, or example1 (dense snapshot) / example2 (star snapshot).
    name: String,
    /// Anomaly offset; defaults to the largest offset of the experiment.
    #[arg(long)]
    p_star: Option<f64>,
    #[arg(long, value_enum)]
    anomaly_mode: Option<ModeArg>,
    /// Sequence length, for example1 and example2.
    #[arg(long, default_value_t = 20)]
    steps: usize,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    name: String,
    /// Replications per offset.
    #[arg(long)]
    reps: Option<usize>,
    /// Comma-separated offsets replacing the experiment's own.
    #[arg(long, value_delimiter = ',')]
    p_star: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    anomaly_mode: Option<ModeArg>,
}

const DEFAULT_SEED: u64 = 1;

fn create_out_dir(cli_out: Option<PathBuf>, file: &FileConfig) -> CliResult<PathBuf> {
    let dir = pick(cli_out, file.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn create_file(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_mode(flag: Option<ModeArg>, file: Option<&str>) -> CliResult<Option<AnomalyMode>> {
    match (flag, file) {
        (Some(ModeArg::Absolute), _) | (None, Some("absolute")) => Ok(Some(AnomalyMode::Absolute)),
        (Some(ModeArg::Additive), _) | (None, Some("additive")) => Ok(Some(AnomalyMode::Additive)),
        (None, None) => Ok(None),
        (None, Some(other)) => Err(CliError::usage(format!("anomaly_mode must be absolute or additive, got '{other}'"))),
    }
}

fn load_input(args: &InputArgs, file: &FileConfig) -> CliResult<tempoodd_core::TemporalNetworkSequence> {
    let input = pick(args.input.clone(), file.input.clone()).ok_or_else(|| CliError::usage("--input is required"))?;
    if !input.exists() {
        return Err(CliError::usage(format!("input path {} does not exist", input.display())));
    }
    let format = match (args.format, file.format.as_deref()) {
        (Some(FormatArg::Long), _) | (None, Some("long")) => InputFormat::Long,
        (Some(FormatArg::Dir), _) | (None, Some("dir")) => InputFormat::Dir,
        (None, None) => InputFormat::Auto,
        (None, Some(other)) => return Err(CliError::usage(format!("format must be long or dir, got '{other}'"))),
    };
    let universe = match (args.nodes, file.nodes.as_deref()) {
        (Some(NodesArg::Fixed), _) | (None, Some("fixed")) => NodeUniverse::Fixed,
        (Some(NodesArg::Observed), _) | (None, Some("observed")) | (None, None) => NodeUniverse::Observed,
        (None, Some(other)) => return Err(CliError::usage(format!("nodes must be fixed or observed, got '{other}'"))),
    };
    let opts = LoadOptions {
        format,
        universe,
        directed: args.directed || file.directed.unwrap_or(false),
    };
    Ok(load_sequence(&input, &opts)?)
}

fn pipeline_config(args: &DetectArgs, seed: Option<u64>, file: &FileConfig) -> PipelineConfig {
    let base = PipelineConfig::default();
    let arima = ArimaConfig::default();
    PipelineConfig {
        alpha: pick(args.alpha, file.alpha).unwrap_or(base.alpha),
        k: pick(args.k, file.k).unwrap_or(base.k),
        bandwidth_quantile: pick(args.bandwidth_quantile, file.bandwidth_quantile).unwrap_or(base.bandwidth_quantile),
        threshold_quantile: pick(args.threshold_quantile, file.threshold_quantile).unwrap_or(base.threshold_quantile),
        arima: ArimaConfig {
            max_p: pick(args.max_p, file.max_p).unwrap_or(arima.max_p),
            max_q: pick(args.max_q, file.max_q).unwrap_or(arima.max_q),
            max_d: pick(args.max_d, file.max_d).unwrap_or(arima.max_d),
            ..arima
        },
        seed: pick(seed, file.seed).unwrap_or(base.seed),
    }
}

fn cmd_features(args: InputArgs, out: Option<PathBuf>, file: &FileConfig) -> CliResult<()> {
    let seq = load_input(&args, file)?;
    let dir = create_out_dir(out, file)?;
    let fm = FeatureMatrix::from_sequence(&seq);
    write_features_csv(&fm, create_file(&dir, "features.csv")?)?;
    println!("{} snapshots -> {}", fm.len(), dir.join("features.csv").display());
    Ok(())
}

fn cmd_detect(args: DetectArgs, out: Option<PathBuf>, seed: Option<u64>, file: &FileConfig) -> CliResult<()> {
    let cfg = pipeline_config(&args, seed, file);
    cfg.validate()?;
    let features = match pick(args.from_features.clone(), file.from_features.clone()) {
        Some(path) => {
            let f = File::open(&path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            read_features_csv(f, &path.display().to_string())?
        }
        None => FeatureMatrix::from_sequence(&load_input(&args.input, file)?),
    };
    let dir = create_out_dir(out, file)?;
    let d = detect_from_features(features, &cfg)?;
    write_report_csv(&d.report, create_file(&dir, "report.csv")?)?;
    write_report_json(&d.report, create_file(&dir, "report.json")?)?;
    write_features_csv(&d.features, create_file(&dir, "features.csv")?)?;
    write_embedding_csv(&d.embedding, d.features.time_labels(), create_file(&dir, "embedding.csv")?)?;
    write_diagnostics_csv(&d.residuals, create_file(&dir, "diagnostics.csv")?)?;
    let mut svg = create_file(&dir, "probabilities.svg")?;
    svg.write_all(probability_chart_svg(&d.report).as_bytes())
        .and_then(|_| svg.flush())
        .map_err(tempoodd_core::Error::from)?;

    let flagged: Vec<String> = d.report.flagged().iter().map(|&i| d.report.time_labels[i].to_string()).collect();
    if flagged.is_empty() {
        println!("no anomalies at alpha = {}", cfg.alpha);
    } else {
        println!("anomalies at alpha = {}: {}", cfg.alpha, flagged.join(", "));
    }
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    name: &'a str,
    seed: u64,
    steps: usize,
    node_count: Option<usize>,
    /// 1-based time of the anomalous snapshot.
    anomaly_time: usize,
    p_star: Option<f64>,
    anomaly_mode: Option<AnomalyMode>,
    spec: Option<&'a tempoodd_core::GeneratorSpec>,
    /// Generator parameter per time point, anomaly included.
    schedule: Vec<f64>,
}

fn cmd_simulate(args: SimulateArgs, out: Option<PathBuf>, seed: Option<u64>, file: &FileConfig) -> CliResult<()> {
    let seed = pick(seed, file.seed).unwrap_or(DEFAULT_SEED);
    let mode = parse_mode(args.anomaly_mode, file.anomaly_mode.as_deref())?;
    let name = args.name.as_str();
    let (seq, manifest_fields) = match name {
        "example1" | "example2" => {
            if args.steps < 2 {
                return Err(CliError::usage("--steps must be at least 2"));
            }
            let anomaly = args.steps - 1;
            let seq = if name == "example1" {
                example_dense_anomaly(seed, args.steps, anomaly)?
            } else {
                example_star_anomaly(seed, args.steps, 100, anomaly)?
            };
            (seq, None)
        }
        _ => {
            let p = preset(name)?;
            let p_star = pick(args.p_star, file.p_star.as_ref().and_then(|v| v.last().copied()))
                .unwrap_or_else(|| *p.p_stars.last().expect("presets list offsets"));
            let mut spec = p.with_p_star(p_star);
            if let Some(m) = mode {
                spec.mode = m;
            }
            let seq = spec.generate(seed)?;
            (seq, Some(spec))
        }
    };
    let dir = create_out_dir(out, file)?;
    write_long_csv(&seq, create_file(&dir, "sequence.csv")?)?;
    let manifest = match &manifest_fields {
        Some(spec) => Manifest {
            name,
            seed,
            steps: spec.steps,
            node_count: Some(spec.node_count),
            anomaly_time: spec.anomaly_time,
            p_star: Some(spec.p_star),
            anomaly_mode: Some(spec.mode),
            spec: Some(spec),
            schedule: (1..=spec.steps).map(|t| spec.parameter_at(t)).collect(),
        },
        None => Manifest {
            name,
            seed,
            steps: seq.len(),
            node_count: None,
            anomaly_time: seq.len(),
            p_star: None,
            anomaly_mode: None,
            spec: None,
            schedule: Vec::new(),
        },
    };
    let mut w = create_file(&dir, "manifest.json")?;
    serde_json::to_writer_pretty(&mut w, &manifest).map_err(tempoodd_core::Error::from)?;
    writeln!(w).and_then(|_| w.flush()).map_err(tempoodd_core::Error::from)?;
    println!("{} snapshots, anomaly at t = {} -> {}", seq.len(), manifest.anomaly_time, dir.display());
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs, out: Option<PathBuf>, seed: Option<u64>, file: &FileConfig) -> CliResult<()> {
    let p = preset(&args.name)?;
    let reps = pick(args.reps, file.reps).unwrap_or(10);
    if reps == 0 {
        return Err(CliError::usage("--reps must be at least 1"));
    }
    let p_stars = pick(args.p_star, file.p_star.clone()).unwrap_or_else(|| p.p_stars.clone());
    let mode = parse_mode(args.anomaly_mode, file.anomaly_mode.as_deref())?;
    let master = pick(seed, file.seed).unwrap_or(DEFAULT_SEED);
    let pipeline = PipelineConfig::default();
    let dir = create_out_dir(out, file)?;

    let mut results = Vec::with_capacity(p_stars.len());
    for &p_star in &p_stars {
        let mut spec = p.with_p_star(p_star);
        if let Some(m) = mode {
            spec.mode = m;
        }
        log::info!("{} p* = {p_star}: {reps} replications", p.name);
        let res = run_experiment(&spec, reps, master, &pipeline)?;
        let aucs = res.auc_values();
        let med = tempoodd_core::stats::median(&aucs).map_or("NA".to_string(), |m| format!("{m:.4}"));
        println!("{} p* = {p_star}: median AUC {med} over {} reps", p.name, aucs.len());
        results.push(res);
    }
    write_experiment_csv(p.name, &results, create_file(&dir, &format!("{}_auc.csv", p.name))?)?;
    write_experiment_summary_csv(p.name, &results, create_file(&dir, &format!("{}_summary.csv", p.name))?)?;
    Ok(())
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("TEMPOODD_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("TEMPOODD_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Features(args) => cmd_features(args, cli.out, &file),
        Command::Detect(args) => cmd_detect(args, cli.out, cli.seed, &file),
        Command::Simulate(args) => cmd_simulate(args, cli.out, cli.seed, &file),
        Command::Experiment(args) => cmd_experiment(args, cli.out, cli.seed, &file),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
