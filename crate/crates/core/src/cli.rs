//! Command-line front end: `detect`, `evaluate`, `compare` and `synth`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::compare::{compare_directory, reports_by_name, CompareOptions, ExternalSource, SkippedTrial, EVENTS_SUFFIX};
use crate::config::DetectorConfig;
use crate::detectors::{detect, Method, METHOD_IDS};
use crate::error::{Error, Result};
use crate::evaluation::{
    default_window, export_report, format_compare_table, match_events, summarize, write_deltas_csv, EvaluationReport,
    ReportFormat, DEFAULT_BIN_WIDTH_MS, REPORT_SCHEMA,
};
use crate::events::{load_events, save_events, EVENTS_CSV_SCHEMA};
use crate::signal::estimate_gait_context;
use crate::synth::{generate, SyntheticSpec};
use crate::trial::{load_trial, normalize_coordinates, save_trial, LengthUnit, LoadOptions, Trial, TRIAL_CSV_SCHEMA};

pub const EXIT_OK: i32 = 0;
/// Bad arguments, unreadable or malformed inputs, invalid configuration.
pub const EXIT_INPUT: i32 = 2;
/// The input was valid but detection could not proceed.
pub const EXIT_DETECTION: i32 = 3;

const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (trial csv schema 1, events csv schema 1, report schema 1)"
);

#[derive(Debug, Parser)]
#[command(name = "gaitevents", version = VERSION, about = "Gait event detection from marker trajectories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect heel strikes and toe offs in one trial.
    Detect(DetectArgs),
    /// Compare predicted events against reference events.
    Evaluate(EvaluateArgs),
    /// Run several methods over a directory of trials against force-plate truth.
    Compare(CompareArgs),
    /// Write synthetic trials with their truth events.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum UnitArg {
    Mm,
    M,
}

impl From<UnitArg> for LengthUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Mm => LengthUnit::Millimeters,
            UnitArg::M => LengthUnit::Meters,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON file with DetectorConfig fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override one config field, e.g. `--set smoothing_cutoff=6`. Repeatable; beats --config.
    #[arg(long = "set", value_name = "FIELD=VALUE")]
    pub overrides: Vec<String>,
    /// Length unit of the trial files, overriding their header.
    #[arg(long, value_enum)]
    pub units: Option<UnitArg>,
}

impl ConfigArgs {
    /// Defaults, then the JSON file, then `--set` overrides.
    pub fn detector_config(&self) -> Result<DetectorConfig> {
        let mut value = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                serde_json::from_str::<serde_json::Value>(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => serde_json::json!({}),
        };
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::Config("config file must hold a JSON object".into()))?;
        for item in &self.overrides {
            let (key, raw) =
                item.split_once('=').ok_or_else(|| Error::Config(format!("--set expects FIELD=VALUE, got '{item}'")))?;
            let v = serde_json::from_str(raw.trim()).unwrap_or_else(|_| serde_json::Value::String(raw.trim().into()));
            obj.insert(key.trim().to_string(), v);
        }
        let cfg: DetectorConfig = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load_options(&self) -> LoadOptions {
        LoadOptions { units: self.units.map(Into::into), ..LoadOptions::default() }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// One of zeni, desailly, oconnor, ghoussayni, hreljac, hsue, bonci.
    #[arg(long)]
    pub method: String,
    #[arg(long)]
    pub input: PathBuf,
    /// Events CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Predicted Events CSV, from any source.
    #[arg(long)]
    pub pred: PathBuf,
    /// Reference Events CSV.
    #[arg(long)]
    pub truth: PathBuf,
    /// Report JSON to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Matching window in seconds; defaults to half the median reference gait period.
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH_MS)]
    pub bin_width_ms: f64,
    /// Also write one CSV row per matched pair.
    #[arg(long)]
    pub deltas: Option<PathBuf>,
    /// Method label in the report; defaults to the source column of the predictions.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Directory of Trial CSV files (`*.events.csv` files are ignored).
    #[arg(long)]
    pub input_dir: PathBuf,
    /// Comma-separated method identifiers; all methods when omitted.
    #[arg(long, value_delimiter = ',')]
    pub methods: Vec<String>,
    /// Extra predictions as NAME=DIR, where DIR holds `<trial id>.events.csv`. Repeatable.
    #[arg(long = "external", value_name = "NAME=DIR")]
    pub externals: Vec<String>,
    /// Writes compare.md, compare.json and one `<method>_deltas.csv` per row.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH_MS)]
    pub bin_width_ms: f64,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 10)]
    pub cycles: usize,
    /// Gait period, s.
    #[arg(long, default_value_t = 1.1)]
    pub period: f64,
    /// Walking speed, m/s.
    #[arg(long, default_value_t = 1.2)]
    pub speed: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Number of trials, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Marker noise standard deviation, m.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0.62)]
    pub stance: f64,
    /// Peak heel swing height, m.
    #[arg(long, default_value_t = 0.1)]
    pub step_height: f64,
    #[arg(long, default_value_t = 200.0)]
    pub sample_rate: f64,
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Detect(a) => cmd_detect(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Compare(a) => cmd_compare(&a),
        Command::Synth(a) => cmd_synth(&a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_detection_failure() {
        EXIT_DETECTION
    } else {
        EXIT_INPUT
    }
}

pub fn cmd_detect(a: &DetectArgs) -> Result<()> {
    let method: Method = a.method.parse()?;
    let cfg = a.config.detector_config()?;
    let trial: Trial = load_trial(&a.input, &a.config.load_options())?;
    let trial = normalize_coordinates(&trial)?;
    let ctx = estimate_gait_context(&trial)?;
    let result = detect(method.id(), &trial, &ctx, &cfg)?;
    for flag in &result.diagnostics.flags {
        log::info!("{}: {flag:?}", a.input.display());
    }
    save_events(&a.out, &result.events)
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> Result<()> {
    let truth = load_events(&a.truth)?;
    let pred = load_events(&a.pred)?;
    if let Some(w) = a.window {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Config(format!("window must be > 0, got {w}")));
        }
    }
    let window = a.window.unwrap_or_else(|| default_window(&truth));
    let name = a
        .name
        .clone()
        .or_else(|| pred.first().map(|e| e.source.clone()))
        .unwrap_or_else(|| "predicted".to_string());
    let trial = a.truth.file_name().and_then(|n| n.to_str()).unwrap_or("trial");
    let trial = trial.strip_suffix(EVENTS_SUFFIX).or_else(|| trial.strip_suffix(".csv")).unwrap_or(trial);
    let matching = match_events(&truth, &pred, window).with_trial(trial);
    let mut report = summarize(&name, &matching, window, a.bin_width_ms);
    report.trials = 1;
    export_report(&report, &a.out, ReportFormat::Json)?;
    if let Some(path) = &a.deltas {
        export_report(&report, path, ReportFormat::Csv)?;
    }
    Ok(())
}

fn parse_external(s: &str) -> Result<ExternalSource> {
    let (name, dir) = s.split_once('=').ok_or_else(|| Error::Config(format!("--external expects NAME=DIR, got '{s}'")))?;
    let name = name.trim();
    if name.is_empty() || METHOD_IDS.contains(&name) {
        return Err(Error::Config(format!("--external name '{name}' is empty or clashes with a method")));
    }
    Ok(ExternalSource { name: name.to_string(), dir: PathBuf::from(dir) })
}

/// Every file cmd_compare writes, keyed into one JSON document.
#[derive(Serialize)]
struct MergedReport<'a> {
    schema: u32,
    trials: usize,
    skipped: Vec<SkippedEntry>,
    reports: std::collections::BTreeMap<String, &'a EvaluationReport>,
}

#[derive(Serialize)]
struct SkippedEntry {
    path: String,
    reason: String,
}

impl From<&SkippedTrial> for SkippedEntry {
    fn from(s: &SkippedTrial) -> Self {
        SkippedEntry { path: s.path.display().to_string(), reason: s.reason.clone() }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn cmd_compare(a: &CompareArgs) -> Result<()> {
    let methods = if a.methods.is_empty() {
        Method::ALL.to_vec()
    } else {
        a.methods.iter().map(|m| m.parse()).collect::<Result<Vec<Method>>>()?
    };
    let externals = a.externals.iter().map(|s| parse_external(s)).collect::<Result<Vec<_>>>()?;
    let opts = CompareOptions {
        methods,
        externals,
        config: a.config.detector_config()?,
        load: a.config.load_options(),
        jobs: a.jobs,
        bin_width_ms: a.bin_width_ms,
    };
    let out = compare_directory(&a.input_dir, &opts)?;
    let table = format_compare_table(&out.rows, out.trials, out.skipped.len());
    print!("{table}");
    std::io::stdout().flush().map_err(|e| Error::io("<stdout>", e))?;

    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_file(&dir.join("compare.md"), table.as_bytes())?;
        let merged = MergedReport {
            schema: REPORT_SCHEMA,
            trials: out.trials,
            skipped: out.skipped.iter().map(Into::into).collect(),
            reports: reports_by_name(&out.rows),
        };
        let mut json = serde_json::to_vec_pretty(&merged).map_err(|e| Error::Format(format!("report json: {e}")))?;
        json.push(b'\n');
        write_file(&dir.join("compare.json"), &json)?;
        for row in &out.rows {
            let mut buf = Vec::new();
            write_deltas_csv(&row.report.pairs, &mut buf)?;
            write_file(&dir.join(format!("{}_deltas.csv", row.method)), &buf)?;
        }
    }
    Ok(())
}

pub fn cmd_synth(a: &SynthArgs) -> Result<()> {
    fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
    for seed in a.seed..a.seed + a.count {
        let spec = SyntheticSpec {
            n_cycles: a.cycles,
            gait_period: a.period,
            stance_fraction: a.stance,
            walking_speed: a.speed,
            step_height: a.step_height,
            sample_rate: a.sample_rate,
            noise_std: a.noise,
            seed,
            ..SyntheticSpec::default()
        };
        let (trial, schedule) = generate(&spec)?;
        save_trial(&trial, a.out_dir.join(format!("{}.csv", trial.id)))?;
        save_events(a.out_dir.join(format!("{}{EVENTS_SUFFIX}", trial.id)), &schedule.events())?;
    }
    Ok(())
}

/// Schema versions of the three file formats, as printed by `--version`.
pub fn schema_versions() -> [(&'static str, u32); 3] {
    [("trial csv", TRIAL_CSV_SCHEMA), ("events csv", EVENTS_CSV_SCHEMA), ("report", REPORT_SCHEMA)]
}
