//! The `qcf` command line.

mod report;
mod spec;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::inversion::{invert, Backend, DistResult, InversionOptions, Stopwatch};
use crate::mcm::{self, McmOptions};
use crate::qmodel::{CharFn, LinearModel};

pub use report::{dist_csv, dist_summary, full, mcm_summary, short};
pub use spec::{linspace, preset, Bound, GridSpec, ModelSpec, OptionsSpec, TermSpec, PRESETS};

/// Relative endpoint difference above which `compare` flags a disagreement.
const FLAG_REL_DIFF: f64 = 0.1;

#[derive(Debug, Parser)]
#[command(name = "qcf", version, about = "Distributions of linear combinations of Tsallis q-Gaussians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// PDF, CDF, quantiles and coverage interval by characteristic function inversion.
    Dist(DistArgs),
    /// Monte Carlo coverage interval.
    Mcm(McmArgs),
    /// Inversion and Monte Carlo side by side.
    Compare(McmArgs),
    /// Characteristic function table.
    Cf(CfArgs),
    /// Built-in example models.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Re-print the summary of a JSON result written by `dist`.
    Summary { result: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    List,
    Show { name: String },
}

#[derive(Debug, Args)]
pub struct ModelArg {
    /// Model file (JSON).
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    pub model: Option<PathBuf>,
    /// Built-in model instead of a file.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Auto,
    Grid,
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// Evaluation grid, `a:b:n` or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Comma-separated probabilities.
    #[arg(long)]
    pub probs: Option<String>,
    /// Coverage level; adds the (1 ∓ level)/2 quantiles.
    #[arg(long)]
    pub level: Option<f64>,
    #[arg(long, value_enum, default_value_t = BackendChoice::Auto)]
    pub backend: BackendChoice,
    #[arg(long)]
    pub n_points: Option<usize>,
    /// Table output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct McmArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub level: Option<f64>,
    /// Independent substreams; results depend on this count, not on threads.
    #[arg(long)]
    pub chunks: Option<usize>,
    /// JSON output file for the result.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CfArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// Frequencies, `a:b:n` or a comma list.
    #[arg(long, allow_hyphen_values = true, default_value = "0:10:101")]
    pub t: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure with its exit status: 2 for input errors, 3 for numerical ones.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self { code: if e.is_numerical() { 3 } else { 2 }, message: e.to_string() }
    }
}

fn input_error(message: String) -> CliError {
    CliError { code: 2, message }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Dist(a) => dist(&a, out),
        Command::Mcm(a) => mcm_cmd(&a, out),
        Command::Compare(a) => compare(&a, out),
        Command::Cf(a) => cf_table(&a, out),
        Command::Preset { action: PresetAction::List } => {
            for p in &PRESETS {
                let spec = ModelSpec::from_json(p.json)?;
                emit(out, &format!("{:<10} {}\n", p.name, spec.description.unwrap_or_default()))?;
            }
            Ok(())
        }
        Command::Preset { action: PresetAction::Show { name } } => {
            let p = PRESETS
                .iter()
                .find(|p| p.name == name)
                .ok_or_else(|| input_error(format!("unknown preset `{name}`")))?;
            emit(out, p.json)
        }
        Command::Summary { result } => {
            let text = read(&result)?;
            let r: DistResult = serde_json::from_str(&text)
                .map_err(|e| input_error(format!("cannot parse result {}: {e}", result.display())))?;
            emit(out, &dist_summary(&r))
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| input_error(format!("cannot write output: {e}")))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn load(arg: &ModelArg) -> CliResult<(ModelSpec, LinearModel)> {
    let spec = match (&arg.model, &arg.preset) {
        (_, Some(name)) => preset(name)?,
        (Some(path), None) => ModelSpec::from_json(&read(path)?)?,
        (None, None) => return Err(input_error("no model given".into())),
    };
    let model = spec.model()?;
    Ok((spec, model))
}

/// Explicit flag, then the model file, then adaptive for q > 2.5 or |x| > 1e6.
pub fn choose_backend(choice: BackendChoice, spec: &ModelSpec, model: &LinearModel, x: &[f64]) -> Backend {
    match choice {
        BackendChoice::Grid => Backend::Grid,
        BackendChoice::Adaptive => Backend::Adaptive,
        BackendChoice::Auto => spec.backend().unwrap_or_else(|| {
            let extreme_q = model.terms().iter().any(|t| t.params.q() > 2.5);
            let far_x = x.iter().any(|v| v.abs() > 1e6);
            if extreme_q || far_x {
                Backend::Adaptive
            } else {
                Backend::Grid
            }
        }),
    }
}

fn level_probs(level: f64) -> CliResult<[f64; 2]> {
    if !(level > 0.0 && level < 1.0) {
        return Err(input_error(format!("coverage level {level} must lie strictly inside (0, 1)")));
    }
    let alpha = 0.5 * (1.0 - level);
    Ok([alpha, 1.0 - alpha])
}

/// The `dist` computation without output, shared with `compare`.
pub fn run_dist(
    spec: &ModelSpec,
    model: &LinearModel,
    x: Option<&str>,
    probs: Option<&str>,
    level: Option<f64>,
    choice: BackendChoice,
    n_points: Option<usize>,
) -> CliResult<DistResult> {
    let x = match x {
        Some(text) => GridSpec::parse(text)?.points(model)?,
        None => match &spec.x {
            Some(g) => g.points(model)?,
            None => Vec::new(),
        },
    };
    let mut p: Vec<f64> = match probs {
        Some(text) => spec::parse_list(text)?,
        None => spec.probs.clone().unwrap_or_default(),
    };
    if let Some(level) = level {
        p.extend(level_probs(level)?);
    }
    if p.is_empty() && spec.probs.is_none() && probs.is_none() {
        p.extend(level_probs(0.95)?);
    }
    p.sort_by(f64::total_cmp);
    p.dedup();
    let mut opts: InversionOptions = spec.inversion_options(model)?;
    opts.backend = choose_backend(choice, spec, model, &x);
    if let Some(n) = n_points {
        opts.n_points = n;
    }
    opts.validate()?;
    match invert(model, &x, &p, &opts) {
        // An automatic grid too short for the tails hands over to the adaptive backend.
        Err(Error::ConvergenceFailure(_))
            if matches!(choice, BackendChoice::Auto) && spec.backend().is_none() && opts.backend == Backend::Grid =>
        {
            opts.backend = Backend::Adaptive;
            Ok(invert(model, &x, &p, &opts)?)
        }
        r => Ok(r?),
    }
}

fn dist(a: &DistArgs, out: &mut dyn Write) -> CliResult<()> {
    let (spec, model) = load(&a.model)?;
    let r = run_dist(&spec, &model, a.x.as_deref(), a.probs.as_deref(), a.level, a.backend, a.n_points)?;
    if let Some(path) = &a.out {
        let text = match a.format {
            Format::Csv => dist_csv(&r),
            Format::Json => serde_json::to_string_pretty(&r).expect("results serialize"),
        };
        write_file(path, &text)?;
    }
    if let Some(name) = &spec.name {
        emit(out, &format!("model: {name} ({} terms)\n", model.terms().len()))?;
    }
    emit(out, &dist_summary(&r))
}

fn mcm_options(spec: &ModelSpec, a: &McmArgs) -> McmOptions {
    let base = spec.mcm.clone().unwrap_or_default();
    McmOptions {
        n_samples: a.n.unwrap_or(base.n_samples),
        seed: a.seed.unwrap_or(base.seed),
        coverage_level: a.level.unwrap_or(base.coverage_level),
        chunks: a.chunks.unwrap_or(base.chunks),
    }
}

fn mcm_cmd(a: &McmArgs, out: &mut dyn Write) -> CliResult<()> {
    let (spec, model) = load(&a.model)?;
    let opts = mcm_options(&spec, a);
    let r = mcm::propagate(&model, &opts)?;
    if let Some(path) = &a.out {
        write_file(path, &serde_json::to_string_pretty(&r).expect("results serialize"))?;
    }
    emit(out, &mcm_summary(&r))
}

fn compare(a: &McmArgs, out: &mut dyn Write) -> CliResult<()> {
    let (spec, model) = load(&a.model)?;
    let opts = mcm_options(&spec, a);
    opts.validate()?;
    let probs = level_probs(opts.coverage_level)?;
    let probs_text = format!("{},{}", probs[0], probs[1]);
    let cfa = run_dist(&spec, &model, None, Some(&probs_text), None, BackendChoice::Auto, None)?;
    let c = cfa.coverage.ok_or_else(|| input_error("no coverage interval".into()))?;

    let clock = Stopwatch::start();
    let y = mcm::simulate(&model, &opts)?;
    let (lo, hi) = mcm::coverage_interval(&y, opts.coverage_level);
    let mcm_seconds = clock.seconds();
    let inv = spec.inversion_options(&model)?;
    let ks = mcm::ks_against_cfa(&y, &model, &inv)?;
    let critical = 1.95 / (y.len() as f64).sqrt();

    let rel = |m: f64, c: f64| (m - c).abs() / c.abs().max(f64::MIN_POSITIVE);
    let (rel_lo, rel_hi) = (rel(lo, c.lower), rel(hi, c.upper));
    let mut text = String::new();
    text += &format!(
        "CFA interval: [{}, {}]  ({:.4} s)\n",
        short(c.lower),
        short(c.upper),
        cfa.diagnostics.elapsed_seconds
    );
    text += &format!(
        "MCM interval: [{}, {}]  ({:.4} s, N = {}, seed = {})\n",
        short(lo),
        short(hi),
        mcm_seconds,
        opts.n_samples,
        opts.seed
    );
    text += &format!(
        "endpoint difference: lower {} (rel {:.2e}), upper {} (rel {:.2e})\n",
        short(lo - c.lower),
        rel_lo,
        short(hi - c.upper),
        rel_hi
    );
    let verdict = if ks <= critical { "below" } else { "ABOVE" };
    text += &format!("KS statistic: {ks:.5} ({verdict} critical value {critical:.5})\n");
    if rel_lo.max(rel_hi) > FLAG_REL_DIFF {
        text += &format!("FLAG: endpoint relative difference exceeds {}%\n", 100.0 * FLAG_REL_DIFF);
    }
    emit(out, &text)
}

fn cf_table(a: &CfArgs, out: &mut dyn Write) -> CliResult<()> {
    let (_, model) = load(&a.model)?;
    let t = GridSpec::parse(&a.t)?.points(&model)?;
    let rows: Vec<(f64, f64, f64)> = t
        .iter()
        .map(|&t| {
            let z = model.eval(t);
            (t, z.re, z.im)
        })
        .collect();
    let table = report::cf_csv(&rows);
    match &a.out {
        Some(path) => write_file(path, &table),
        None => emit(out, &table),
    }
}
