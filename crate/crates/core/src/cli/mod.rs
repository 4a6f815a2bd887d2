//! The `sigstream` command line.
//!
//! Exit codes: 0 on success, 1 on runtime failures, 2 on usage, parse and
//! configuration errors. Relative `--out` paths resolve against
//! `$SIGSTREAM_OUTPUT_DIR` when it is set, and `run` writes its artifacts
//! there when `--out` is omitted.

pub mod dataset;
pub mod json;
pub mod manifest;
pub mod stream;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::embeddings::{EmbeddingConfig, EmbeddingKind};
use crate::error::{Error, Result};
use crate::ml::{ClassifierKind, OversampleConfig, Strategy};
use crate::pipeline::{self, PipelineConfig, SynthConfig};
use crate::sig::{signature, MAX_DEPTH};

use manifest::{Artifact, ManifestRecord, RunManifest};

/// Directory for output artifacts.
pub const OUTPUT_DIR_ENV: &str = "SIGSTREAM_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "sigstream", version, about = "Signatures of data streams and a seeded classification pipeline")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the truncated signature of one stream.
    Sig(SigArgs),
    /// Generate a synthetic two-group delay dataset.
    Synth(SynthArgs),
    /// Run the classification experiment on a dataset.
    Run(RunArgs),
    /// Write the standardized signature features of a dataset.
    Featurize(FeaturizeArgs),
}

#[derive(Debug, Args)]
pub struct EmbeddingArgs {
    /// axis, linear, lead-lag, missing-lift, delay or delay-axis.
    #[arg(long, value_name = "KIND")]
    pub embedding: Option<EmbeddingKind>,
    /// Stairstep variant of the delay embedding (same as `--embedding delay-axis`).
    #[arg(long)]
    pub axis: bool,
    /// Add a time coordinate to `lead-lag`.
    #[arg(long)]
    pub time_augment: bool,
}

impl EmbeddingArgs {
    fn resolve(&self, base: EmbeddingConfig) -> Result<EmbeddingConfig> {
        let mut config = match self.embedding {
            Some(kind) => EmbeddingConfig::of_kind(kind),
            None => base,
        };
        if self.axis {
            match config.kind {
                EmbeddingKind::Delay | EmbeddingKind::DelayAxis => config.kind = EmbeddingKind::DelayAxis,
                other => return Err(Error::config(format!("--axis applies to the delay embedding, not {other}"))),
            }
        }
        if self.time_augment {
            config.time_augment = true;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
pub struct SigArgs {
    /// Stream file, or `-` for standard input.
    pub input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_DEPTH as i64))]
    pub depth: u32,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    /// Also print the embedded path points.
    #[arg(long)]
    pub path: bool,
    /// Emit a single JSON object.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// JSON file with generator settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n0: Option<usize>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub weeks: Option<usize>,
    #[arg(long)]
    pub mean0: Option<f64>,
    #[arg(long)]
    pub mean1: Option<f64>,
    #[arg(long)]
    pub dispersion: Option<f64>,
    #[arg(long)]
    pub missing_prob: Option<f64>,
    /// Output CSV; standard output when omitted. A manifest is written
    /// next to it as `<out>.manifest.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Dataset CSV.
    pub dataset: PathBuf,
    /// JSON file with experiment settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Signature depths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub depth: Option<Vec<usize>>,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Outer cross-validation folds.
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub inner_folds: Option<usize>,
    /// Comma separated subset of logistic, svm, knn.
    #[arg(long, value_delimiter = ',')]
    pub classifiers: Option<Vec<ClassifierKind>>,
    /// Oversampling scheme: adasyn, smote or none.
    #[arg(long, value_name = "SCHEME")]
    pub oversample: Option<String>,
    /// Standardize and oversample the whole data set before splitting.
    #[arg(long)]
    pub paper_mode: bool,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
    /// Directory for report.txt, report.json and manifest.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    /// Dataset CSV.
    pub dataset: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_DEPTH as i64))]
    pub depth: u32,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    /// Keep raw signature values instead of standardizing.
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub json: bool,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors are reported on standard error.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_env("SIGSTREAM_LOG")
        .try_init();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(&cli.command, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

/// Runs `command`, writing its primary output to `out`.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Sig(a) => cmd_sig(a, out),
        Command::Synth(a) => cmd_synth(a, out),
        Command::Run(a) => cmd_run(a, out),
        Command::Featurize(a) => cmd_featurize(a, out),
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_input(path)?).map_err(|_| Error::Parse {
        line: 0,
        reason: format!("{} is not UTF-8", path.display()),
    })
}

fn output_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct SigOutput<'a> {
    format: u32,
    embedding: &'a EmbeddingConfig,
    depth: usize,
    dimension: usize,
    points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<Vec<Vec<f64>>>,
    terms: Vec<(String, f64)>,
}

fn cmd_sig(args: &SigArgs, out: &mut dyn Write) -> Result<()> {
    let embedding = args.embedding.resolve(EmbeddingConfig::delay())?;
    let depth = args.depth as usize;
    let record = stream::parse_stream(&read_text(&args.input)?, &args.input.display().to_string())?;
    let path = crate::embeddings::embed(&record, &embedding)?;
    let sig = signature(&path, depth)?;
    if args.json {
        let output = SigOutput {
            format: 1,
            embedding: &embedding,
            depth,
            dimension: path.dimension(),
            points: path.len(),
            path: args.path.then(|| path.to_points()),
            terms: sig.iter().map(|(i, v)| (i.to_string(), v)).collect(),
        };
        out.write_all(json::to_string(&output)?.as_bytes())?;
    } else {
        writeln!(
            out,
            "# embedding={} depth={depth} dimension={} points={}",
            embedding.kind,
            path.dimension(),
            path.len()
        )?;
        if args.path {
            for p in path.points() {
                let coords: Vec<String> = p.iter().map(ToString::to_string).collect();
                writeln!(out, "# point ({})", coords.join(","))?;
            }
        }
        for (index, value) in sig.iter() {
            writeln!(out, "{index} {value}")?;
        }
    }
    Ok(())
}

fn synth_config(args: &SynthArgs) -> Result<SynthConfig> {
    let mut c: SynthConfig = match &args.config {
        Some(p) => json::from_str(&read_text(p)?, &p.display().to_string())?,
        None => SynthConfig::default(),
    };
    macro_rules! apply {
        ($($f:ident),*) => { $( if let Some(v) = args.$f { c.$f = v; } )* };
    }
    apply!(seed, n0, n1, weeks, mean0, mean1, dispersion, missing_prob);
    c.validate()?;
    Ok(c)
}

fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let started = manifest::now();
    let config = synth_config(args)?;
    let records = pipeline::synth_generate(&config)?;
    let mut csv = Vec::new();
    dataset::write_dataset(&mut csv, &records)?;
    match &args.out {
        None => out.write_all(&csv)?,
        Some(p) => {
            let path = output_path(p);
            write_file(&path, &csv)?;
            let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
            let record = ManifestRecord {
                manifest: RunManifest::new("synth", config.seed, &config, None),
                started_at: started,
                finished_at: manifest::now(),
                artifacts: vec![Artifact {
                    file: file.clone(),
                    sha256: manifest::sha256_hex(&csv),
                }],
            };
            let mut sidecar = path.clone().into_os_string();
            sidecar.push(".manifest.json");
            write_file(Path::new(&sidecar), json::to_string(&record)?.as_bytes())?;
            log::info!("wrote {} subjects to {}", records.len(), path.display());
        }
    }
    Ok(())
}

fn pipeline_config(args: &RunArgs) -> Result<PipelineConfig> {
    let mut c: PipelineConfig = match &args.config {
        Some(p) => json::from_str(&read_text(p)?, &p.display().to_string())?,
        None => PipelineConfig::default(),
    };
    if let Some(d) = &args.depth {
        c.depths = d.clone();
    }
    c.embedding = args.embedding.resolve(c.embedding)?;
    if let Some(s) = args.seed {
        c.seed = s;
    }
    if let Some(f) = args.folds {
        c.cv.outer_folds = f;
    }
    if let Some(f) = args.inner_folds {
        c.cv.inner_folds = f;
    }
    if let Some(k) = &args.classifiers {
        c.classifiers = k.clone();
    }
    if let Some(o) = &args.oversample {
        let k = c.cv.oversample.map_or(OversampleConfig::default().k, |o| o.k);
        c.cv.oversample = match o.as_str() {
            "none" => None,
            "smote" => Some(OversampleConfig { k, strategy: Strategy::Smote }),
            "adasyn" => Some(OversampleConfig { k, strategy: Strategy::Adasyn }),
            other => return Err(Error::config(format!("unknown oversampling scheme `{other}`"))),
        };
    }
    if args.paper_mode {
        c.cv.smote_inside_folds = false;
    }
    c.validate()?;
    Ok(c)
}

#[derive(Serialize)]
struct ReportFile<'a> {
    manifest: &'a RunManifest,
    report: &'a pipeline::ExperimentReport,
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let started = manifest::now();
    let config = pipeline_config(args)?;
    let input = read_input(&args.dataset)?;
    let records = dataset::read_dataset(input.as_slice())?;
    let report = pipeline::run_experiment(&records, &config)?;
    let manifest = RunManifest::new("run", config.seed, &config, Some(&input));
    let report_json = json::to_string(&ReportFile {
        manifest: &manifest,
        report: &report,
    })?;
    let table = report.to_table();
    out.write_all(if args.json { report_json.as_bytes() } else { table.as_bytes() })?;

    let dir = match &args.out {
        Some(p) => Some(output_path(p)),
        None => std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from),
    };
    if let Some(dir) = dir {
        write_file(&dir.join("report.txt"), table.as_bytes())?;
        write_file(&dir.join("report.json"), report_json.as_bytes())?;
        let record = ManifestRecord {
            manifest,
            started_at: started,
            finished_at: manifest::now(),
            artifacts: vec![
                Artifact {
                    file: "report.txt".into(),
                    sha256: manifest::sha256_hex(table.as_bytes()),
                },
                Artifact {
                    file: "report.json".into(),
                    sha256: manifest::sha256_hex(report_json.as_bytes()),
                },
            ],
        };
        write_file(&dir.join("manifest.json"), json::to_string(&record)?.as_bytes())?;
        log::info!("wrote report to {}", dir.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct FeatureRow<'a> {
    subject: &'a str,
    label: Option<u8>,
    features: Vec<f64>,
}

#[derive(Serialize)]
struct FeatureFile<'a> {
    manifest: RunManifest,
    columns: Vec<String>,
    dropped: Vec<String>,
    excluded: &'a [pipeline::Exclusion],
    rows: Vec<FeatureRow<'a>>,
}

#[derive(Serialize)]
struct FeaturizeSettings {
    depth: usize,
    embedding: EmbeddingConfig,
    standardized: bool,
}

fn cmd_featurize(args: &FeaturizeArgs, out: &mut dyn Write) -> Result<()> {
    let embedding = args.embedding.resolve(EmbeddingConfig::delay())?;
    let depth = args.depth as usize;
    let input = read_input(&args.dataset)?;
    let ingested = pipeline::ingest(&dataset::read_dataset(input.as_slice())?)?;
    for e in &ingested.excluded {
        log::warn!("excluded {}: {}", e.id, e.reason);
    }
    let records = &ingested.records;
    let (data, columns, dropped) = if args.raw {
        let (d, c) = pipeline::signature_rows(records, &embedding, depth)?;
        (d, c, Vec::new())
    } else {
        pipeline::featurize_unlabeled(records, &embedding, depth)?
    };
    let bytes = if args.json {
        let file = FeatureFile {
            manifest: RunManifest::new(
                "featurize",
                0,
                FeaturizeSettings {
                    depth,
                    embedding,
                    standardized: !args.raw,
                },
                Some(&input),
            ),
            columns: columns.iter().map(ToString::to_string).collect(),
            dropped: dropped.iter().map(ToString::to_string).collect(),
            excluded: &ingested.excluded,
            rows: records
                .iter()
                .zip(data.rows())
                .map(|(r, row)| FeatureRow {
                    subject: &r.id,
                    label: r.label,
                    features: row.to_vec(),
                })
                .collect(),
        };
        json::to_string(&file)?.into_bytes()
    } else {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut header = vec!["subject".to_string(), "label".to_string()];
        header.extend(columns.iter().map(ToString::to_string));
        w.write_record(&header).map_err(io)?;
        for (r, row) in records.iter().zip(data.rows()) {
            let mut fields = vec![r.id.clone(), r.label.map(|l| l.to_string()).unwrap_or_default()];
            fields.extend(row.iter().map(|v| format!("{v:.16e}")));
            w.write_record(&fields).map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.to_string()))?
    };
    match &args.out {
        Some(p) => write_file(&output_path(p), &bytes),
        None => Ok(out.write_all(&bytes)?),
    }
}
