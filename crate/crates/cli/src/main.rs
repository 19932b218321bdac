// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use scorch_core::forecast::{
    builtin_presets, load_configs, SeriesView, DEFAULT_VALIDATION_FRACTION,
};
use scorch_core::quadrature::SegmentScheme;
use scorch_core::report::{
    cmd_export, cmd_run, eval_integrals, forecast_report, integrals_table, tasks_table, ExportKind,
    GeneratorSpec, RunArgs,
};
use scorch_core::sandbox::{Limits, DEFAULT_OUTPUT_BYTES};
use scorch_core::tasks::integrals::{IntegralManifest, Split};
use scorch_core::tasks::{TaskOptions, TASK_TOLERANCE};

#[derive(Debug, Parser)]
#[command(
    name = "scorch",
    version,
    about = "Score-driven tree search over candidate solutions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Directory holding `runs/<run_id>/`
    #[arg(
        long,
        global = true,
        env = "SCORCH_OUTPUT_ROOT",
        default_value = "scorch-output"
    )]
    output_root: PathBuf,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exploration constant
    #[arg(long, global = true, default_value_t = 1.0)]
    c_puct: f64,
    /// Search iterations (nodes added after the root)
    #[arg(long, global = true, default_value_t = 100)]
    budget: usize,
    /// Wall-time limit per candidate execution
    #[arg(long, global = true, default_value_t = 300.0)]
    wall_time_s: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a search and write its run directory
    Run(RunCmd),
    /// Re-emit an export of a stored run
    Export(ExportCmd),
    /// Integrate the oscillatory benchmark and print a table
    EvalIntegrals(EvalIntegralsCmd),
    /// Select a forecaster config on a series and forecast it
    Forecast(ForecastCmd),
    /// Task registry commands
    Tasks {
        #[command(subcommand)]
        command: TasksCmd,
    },
}

#[derive(Debug, Subcommand)]
enum TasksCmd {
    /// List built-in tasks
    List,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GeneratorKind {
    Mutator,
    ExternalProcess,
    ExternalHttp,
}

#[derive(Debug, Args)]
struct RunCmd {
    #[arg(long)]
    task: String,
    #[arg(long, value_enum, default_value = "mutator")]
    generator: GeneratorKind,
    /// Generator executable for `external-process`
    #[arg(long)]
    generator_cmd: Option<String>,
    /// Argument passed to the generator executable (repeatable)
    #[arg(long = "generator-arg", allow_hyphen_values = true)]
    generator_args: Vec<String>,
    /// Endpoint for `external-http`
    #[arg(long)]
    generator_url: Option<String>,
    #[arg(long, default_value_t = 120.0)]
    generator_timeout_s: f64,
    /// Cap on each captured output stream, in KiB
    #[arg(long, default_value_t = DEFAULT_OUTPUT_BYTES / 1024)]
    max_output_kb: usize,
    /// Best-effort address-space cap for program candidates, in MiB
    #[arg(long)]
    memory_mb: Option<u64>,
    /// Defaults to `<task>-s<seed>-b<budget>-c<c_puct>`
    #[arg(long)]
    run_id: Option<String>,
    /// Start from this program file instead of the task's own root
    #[arg(long)]
    root_program: Option<PathBuf>,
    /// File holding one research idea, passed to the generator verbatim (repeatable)
    #[arg(long = "idea")]
    ideas: Vec<PathBuf>,
    /// Dimension of the synthetic task
    #[arg(long, default_value_t = 4)]
    dimension: usize,
    /// Put wall times into tree.json (makes it differ between identical runs)
    #[arg(long)]
    embed_timings: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExportWhat {
    Tree,
    Breakthroughs,
}

#[derive(Debug, Args)]
struct ExportCmd {
    #[arg(long)]
    run_id: String,
    #[arg(long, value_enum)]
    what: ExportWhat,
    /// Write here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    embed_timings: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SplitArg {
    Train,
    Test,
    All,
}

#[derive(Debug, Args)]
struct EvalIntegralsCmd {
    #[arg(long, value_enum, default_value = "all")]
    split: SplitArg,
    /// Benchmark manifest; defaults to the built-in one
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    first_length: Option<f64>,
    #[arg(long)]
    growth_ratio: Option<f64>,
    #[arg(long)]
    max_segments: Option<usize>,
    #[arg(long, default_value_t = TASK_TOLERANCE)]
    tol: f64,
}

#[derive(Debug, Args)]
struct ForecastCmd {
    /// CSV with `timestamp,value` columns; an empty value marks a gap
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    horizon: usize,
    /// JSON config or list of configs; defaults to the built-in presets
    #[arg(long)]
    configs: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_VALIDATION_FRACTION)]
    validation_fraction: f64,
    /// Write the selection table here instead of standard output
    #[arg(long)]
    selection_out: Option<PathBuf>,
    /// Write the forecast here instead of standard output
    #[arg(long)]
    forecast_out: Option<PathBuf>,
}

fn secs(value: f64, flag: &str) -> Result<Duration> {
    Duration::try_from_secs_f64(value)
        .ok()
        .filter(|d| !d.is_zero())
        .with_context(|| format!("--{flag} must be a positive number of seconds, got {value}"))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn run(global: &Global, cmd: RunCmd) -> Result<()> {
    let generator_timeout = secs(cmd.generator_timeout_s, "generator-timeout-s")?;
    let generator = match cmd.generator {
        GeneratorKind::Mutator => GeneratorSpec::Mutator,
        GeneratorKind::ExternalProcess => GeneratorSpec::ExternalProcess {
            program: cmd
                .generator_cmd
                .context("--generator external-process needs --generator-cmd")?,
            args: cmd.generator_args,
            timeout: generator_timeout,
        },
        GeneratorKind::ExternalHttp => GeneratorSpec::ExternalHttp {
            url: cmd
                .generator_url
                .context("--generator external-http needs --generator-url")?,
            timeout: generator_timeout,
        },
    };
    if cmd.max_output_kb == 0 {
        bail!("--max-output-kb must be positive");
    }
    let root_program = cmd
        .root_program
        .map(|p| fs::read_to_string(&p).with_context(|| format!("reading {}", p.display())))
        .transpose()?;
    let ideas = cmd
        .ideas
        .iter()
        .map(|p| fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
        .collect::<Result<Vec<_>>>()?;

    let args = RunArgs {
        output_root: global.output_root.clone(),
        task_id: cmd.task,
        task_options: TaskOptions {
            dimension: cmd.dimension,
        },
        generator,
        budget: global.budget,
        c_puct: global.c_puct,
        seed: global.seed,
        limits: Limits {
            wall_time: secs(global.wall_time_s, "wall-time-s")?,
            output_bytes: cmd.max_output_kb * 1024,
            memory_bytes: cmd.memory_mb.map(|m| m * 1024 * 1024),
        },
        run_id: cmd.run_id,
        root_program,
        ideas,
        embed_timings: cmd.embed_timings,
    };
    let summary = cmd_run(&args)?;
    println!("run_id     {}", summary.run_id);
    println!("run_dir    {}", summary.run_dir.display());
    println!("nodes      {}", summary.node_count);
    println!("root_score {}", summary.root_score);
    println!(
        "best_score {} (node {})",
        summary.best.task_score, summary.best.node_id
    );
    println!("best       {}", summary.best.summary);
    Ok(())
}

fn eval(cmd: EvalIntegralsCmd) -> Result<()> {
    let manifest = match &cmd.manifest {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            IntegralManifest::from_json(&text)?
        }
        None => IntegralManifest::builtin(),
    };
    let defaults = SegmentScheme::default();
    let scheme = SegmentScheme {
        first_length: cmd.first_length.unwrap_or(defaults.first_length),
        growth_ratio: cmd.growth_ratio.unwrap_or(defaults.growth_ratio),
        max_segments: cmd.max_segments.unwrap_or(defaults.max_segments),
    };
    scheme.validate()?;
    let split = match cmd.split {
        SplitArg::Train => Some(Split::Train),
        SplitArg::Test => Some(Split::Test),
        SplitArg::All => None,
    };
    let report = eval_integrals(&manifest, split, scheme, cmd.tol)?;
    emit(None, &integrals_table(&report))
}

fn forecast(cmd: ForecastCmd) -> Result<()> {
    let file =
        fs::File::open(&cmd.input).with_context(|| format!("opening {}", cmd.input.display()))?;
    let series =
        SeriesView::from_csv(file).with_context(|| format!("parsing {}", cmd.input.display()))?;
    let configs = match &cmd.configs {
        Some(p) => load_configs(
            &fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        )?,
        None => builtin_presets(),
    };
    let report = forecast_report(&series, &configs, cmd.horizon, cmd.validation_fraction)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    emit(cmd.selection_out.as_deref(), &report.selection_csv)?;
    if cmd.selection_out.is_none() && cmd.forecast_out.is_none() {
        println!();
    }
    emit(cmd.forecast_out.as_deref(), &report.forecast_csv)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(cmd) => run(&cli.global, cmd),
        Command::Export(cmd) => {
            let kind = match cmd.what {
                ExportWhat::Tree => ExportKind::Tree,
                ExportWhat::Breakthroughs => ExportKind::Breakthroughs,
            };
            let text = cmd_export(
                &cli.global.output_root,
                &cmd.run_id,
                kind,
                cmd.embed_timings,
            )?;
            emit(cmd.out.as_deref(), &text)
        }
        Command::EvalIntegrals(cmd) => eval(cmd),
        Command::Forecast(cmd) => forecast(cmd),
        Command::Tasks {
            command: TasksCmd::List,
        } => emit(None, &tasks_table()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
