//! Command-line front end for the optimization harness.
//!
//! Exit codes: 0 on success, 1 when a run (or any sweep cell) aborted
//! mid-training (outputs are still written), 2 for configuration, input,
//! or I/O errors (nothing useful was produced).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eve_opt::harness::{
    decay_sweep, format_float, grid_search, hyper_grid, read_records, run, RunConfig, RunStatus,
    Sweep, SweepExtras, HYPER_BETA3_GRID, HYPER_C_GRID,
};
use eve_opt::optim::OptimizerKind;
use eve_opt::plot::{epoch_mean_series, line_chart_svg, sort_series_by_final, PlotOptions};
use eve_opt::schedules::{DecayKind, K_GRID};

#[derive(Parser)]
#[command(
    name = "eve-opt",
    version,
    about = "Train desk-scale problems with feedback-scaled Adam and baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write its trace CSV.
    Run {
        /// Config file (key = value lines).
        #[arg(long)]
        config: PathBuf,
        /// Trace CSV destination; omit to print the summary only.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Pin the feedback coefficient to 1 (eve only; reproduces Adam).
        #[arg(long)]
        force_d1: bool,
    },
    /// Grid-search optimizers x learning rates; write one trace per cell
    /// plus ranking.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare decay schedules against the constant-rate reference.
    Decay {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep the feedback hyperparameters (beta3, c) against an Adam
    /// reference cell.
    Hyper {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render training curves from trace CSVs as an SVG line chart.
    Plot {
        /// Trace files produced by run or sweep commands.
        #[arg(required = true)]
        traces: Vec<PathBuf>,
        /// SVG destination.
        #[arg(long)]
        out: PathBuf,
        /// Log-scale the loss axis (every value must be positive).
        #[arg(long)]
        log_y: bool,
        /// Chart title.
        #[arg(long, default_value = "training loss")]
        title: String,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            force_d1,
        } => cmd_run(&config, out.as_deref(), seed, force_d1),
        Command::Sweep { config, out, seed } => {
            let (base, extras) = load_config(&config, seed)?;
            let optimizers = extras
                .optimizers
                .clone()
                .unwrap_or_else(|| OptimizerKind::ALL.to_vec());
            let sweep = grid_search(&base, &optimizers, extras.lrs.as_deref())
                .map_err(|e| e.to_string())?;
            write_sweep(&sweep, &out)
        }
        Command::Decay { config, out, seed } => {
            let (base, extras) = load_config(&config, seed)?;
            let kinds = extras
                .decay_kinds
                .clone()
                .unwrap_or_else(|| DecayKind::DECAYING.to_vec());
            let ks = extras.decay_ks.clone().unwrap_or_else(|| K_GRID.to_vec());
            let sweep = decay_sweep(&base, &kinds, &ks).map_err(|e| e.to_string())?;
            write_sweep(&sweep, &out)
        }
        Command::Hyper { config, out, seed } => {
            let (base, extras) = load_config(&config, seed)?;
            let beta3s = extras
                .beta3s
                .clone()
                .unwrap_or_else(|| HYPER_BETA3_GRID.to_vec());
            let cs = extras.cs.clone().unwrap_or_else(|| HYPER_C_GRID.to_vec());
            let sweep = hyper_grid(&base, &beta3s, &cs).map_err(|e| e.to_string())?;
            write_sweep(&sweep, &out)
        }
        Command::Plot {
            traces,
            out,
            log_y,
            title,
        } => cmd_plot(&traces, &out, log_y, &title),
    }
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<(RunConfig, SweepExtras), String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let (mut config, extras) = RunConfig::parse_with_extras(&text).map_err(|e| e.to_string())?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok((config, extras))
}

fn cmd_run(
    config_path: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    force_d1: bool,
) -> Result<ExitCode, String> {
    let (mut config, _) = load_config(config_path, seed)?;
    if force_d1 {
        config.force_d1 = true;
    }
    let trace = run(&config).map_err(|e| e.to_string())?;

    match &trace.summary.status {
        RunStatus::Completed => println!("status = completed"),
        RunStatus::Aborted { step, reason } => {
            println!("status = aborted at step {step}: {reason}")
        }
    }
    println!("steps = {}", trace.summary.steps);
    println!(
        "final_full_loss = {}",
        format_float(trace.summary.final_full_loss)
    );
    println!("best_f_t = {}", format_float(trace.summary.best_f_t));
    if let Some(out) = out {
        trace
            .write_csv(out)
            .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
        println!("trace = {}", out.display());
    }
    Ok(exit_for_aborted(!trace.summary.status.is_completed()))
}

fn write_sweep(sweep: &Sweep, dir: &Path) -> Result<ExitCode, String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    for cell in &sweep.cells {
        let path = dir.join(format!("{}.csv", cell.id));
        cell.trace
            .write_csv(&path)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let ranking_path = dir.join("ranking.csv");
    fs::write(&ranking_path, sweep.ranking_csv())
        .map_err(|e| format!("cannot write {}: {e}", ranking_path.display()))?;

    let ranked = sweep.ranked_indices();
    let best = &sweep.cells[ranked[0]];
    println!("cells = {}", sweep.cells.len());
    println!(
        "aborted = {}",
        sweep
            .cells
            .iter()
            .filter(|c| !c.trace.summary.status.is_completed())
            .count()
    );
    println!(
        "best = {} (final_full_loss = {})",
        best.id,
        format_float(best.trace.summary.final_full_loss)
    );
    println!("ranking = {}", ranking_path.display());
    Ok(exit_for_aborted(sweep.any_aborted()))
}

fn exit_for_aborted(any_aborted: bool) -> ExitCode {
    if any_aborted {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_plot(traces: &[PathBuf], out: &Path, log_y: bool, title: &str) -> Result<ExitCode, String> {
    let mut series = Vec::with_capacity(traces.len());
    for path in traces {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let records =
            read_records(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        series.push(epoch_mean_series(&label, &records));
    }
    sort_series_by_final(&mut series);
    let opts = PlotOptions {
        title: title.to_string(),
        x_label: "epoch".into(),
        y_label: "mean minibatch loss".into(),
        log_y,
        ..PlotOptions::default()
    };
    let svg = line_chart_svg(&series, &opts).map_err(|e| e.to_string())?;
    fs::write(out, svg).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    println!("plot = {}", out.display());
    Ok(ExitCode::SUCCESS)
}
