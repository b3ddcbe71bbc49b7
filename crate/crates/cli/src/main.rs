//! Command-line driver for the simulate -> analyze -> compare pipeline.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on invalid input.
//! All file outputs use `\n` line endings and locale-independent number
//! formatting, so identical inputs give byte-identical outputs.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use radarsim_core::ingest::{parse_series, serialize_series, TreeSeries};
use radarsim_core::measurement::radar_run;
use radarsim_core::metrics::{compare_values, compute_metrics, write_histogram_csv, CurveSet};
use radarsim_core::{CurveField, Error, ExperimentConfig, Result};

const REWIRES_CSV_HEADER: &str = "round,removed_u,removed_v,added_u,added_v";

#[derive(Parser)]
#[command(
    name = "radarsim",
    version,
    about = "Simulate and analyze ego-centered views of a dynamic routing topology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write the series, rewiring log and resolved config
    Simulate {
        /// JSON config file
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute dynamics metrics for a series file
    Analyze {
        /// Series file in the round-based format
        #[arg(long)]
        series: PathBuf,
        /// Metrics CSV path; histograms are written beside it
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare one metrics curve between two metrics CSVs
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// nodes_observed | cumulative_distinct | appeared | disappeared
        #[arg(long)]
        field: String,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(if err.is_invalid_input() { 2 } else { 1 });
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate { config, out } => cmd_simulate(&config, &out),
        Command::Analyze { series, out } => cmd_analyze(&series, &out),
        Command::Compare { a, b, field } => cmd_compare(&a, &b, &field),
    }
}

fn open_input(path: &Path) -> Result<File> {
    File::open(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot open {}: {e}", path.display())))
}

fn cmd_simulate(config_path: &Path, out_dir: &Path) -> Result<()> {
    let text = fs::read_to_string(config_path).map_err(|e| {
        Error::InvalidParameter(format!("cannot read config {}: {e}", config_path.display()))
    })?;
    let config = ExperimentConfig::from_json(&text)?;
    let series = radar_run(&config)?;

    fs::create_dir_all(out_dir)?;
    let mut series_file = BufWriter::new(File::create(out_dir.join("series.rounds"))?);
    serialize_series(&TreeSeries::from_simulation(&series), &mut series_file)?;
    series_file.flush()?;

    let mut rewires = BufWriter::new(File::create(out_dir.join("rewires.csv"))?);
    writeln!(rewires, "{REWIRES_CSV_HEADER}")?;
    for ev in &series.rewire_log {
        writeln!(
            rewires,
            "{},{},{},{},{}",
            ev.round_index, ev.removed.0, ev.removed.1, ev.added.0, ev.added.1
        )?;
    }
    rewires.flush()?;

    fs::write(out_dir.join("config.echo.json"), config.to_json())?;
    Ok(())
}

fn cmd_analyze(series_path: &Path, out_path: &Path) -> Result<()> {
    let reader = BufReader::new(open_input(series_path)?);
    let (series, malformed) = parse_series(reader)?;
    for bad in &malformed {
        eprintln!(
            "warning: dropped round {} (line {}): {}",
            bad.round_id, bad.line, bad.reason
        );
    }
    let report = compute_metrics(&series.views)?;

    let mut metrics_file = BufWriter::new(File::create(out_path)?);
    report.write_csv(&mut metrics_file)?;
    metrics_file.flush()?;

    let dir = out_path.parent().unwrap_or_else(|| Path::new("."));
    let mut presence = BufWriter::new(File::create(dir.join("presence_hist.csv"))?);
    write_histogram_csv(&report.presence_duration_histogram, &mut presence)?;
    presence.flush()?;
    let mut absence = BufWriter::new(File::create(dir.join("absence_hist.csv"))?);
    write_histogram_csv(&report.absence_duration_histogram, &mut absence)?;
    absence.flush()?;
    Ok(())
}

fn cmd_compare(a_path: &Path, b_path: &Path, field: &str) -> Result<()> {
    let field: CurveField = field.parse()?;
    let a = CurveSet::read_csv(BufReader::new(open_input(a_path)?))?;
    let b = CurveSet::read_csv(BufReader::new(open_input(b_path)?))?;
    let d = compare_values(a.curve(field), b.curve(field))?;
    println!(
        "{},{},{},{}",
        field.name(),
        d.length,
        format_sig(d.mean_abs_diff),
        format_sig(d.max_abs_diff)
    );
    Ok(())
}

/// 6 significant digits, trailing zeros trimmed; keeps CSV output
/// reproducible and diff-friendly.
fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
