use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qer_experiment::{
    configure_workers, emit_report, fit_polynomial, fit_table, read_csv, run_sweep, Column, ExperimentError, ExperimentSpec,
    GridSpec,
};

#[derive(Parser)]
#[command(name = "qer", about = "Channel-adapted quantum error recovery experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment spec and write its report.
    Run {
        spec: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the spec's name (and the report file stem).
        #[arg(long)]
        name: Option<String>,
        /// Overrides the grid with comma-separated values.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
    },
    /// Fit a polynomial to one method's column of a report CSV.
    Fit {
        csv: PathBuf,
        #[arg(long)]
        method: String,
        #[arg(long, value_enum, default_value = "fidelity")]
        column: ColumnArg,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 0.005)]
        from: f64,
        #[arg(long, default_value_t = 0.1)]
        to: f64,
    },
    /// Run every `*.json` spec in a directory.
    Report {
        dir: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ColumnArg {
    Fidelity,
    Bound,
    Normalized,
}

fn run_spec(spec: &ExperimentSpec, out: &Path) -> Result<bool, ExperimentError> {
    let table = run_sweep(spec)?;
    let fits = fit_table(&table, &spec.fit.clone().unwrap_or_default());
    let files = emit_report(&table, &fits, out)?;
    println!("{}: {} rows -> {}", table.name, table.rows.len(), files.csv.display());
    for r in table.errors() {
        eprintln!("{} at {}: {}", r.method, r.noise, r.error.as_deref().unwrap_or(""));
    }
    Ok(table.is_complete())
}

fn load(path: &Path) -> Result<ExperimentSpec, ExperimentError> {
    ExperimentSpec::from_json(&std::fs::read_to_string(path)?)
}

fn execute(cli: Cli) -> Result<bool, ExperimentError> {
    configure_workers()?;
    match cli.command {
        Command::Run { spec, out, seed, name, grid } => {
            let mut s = load(&spec)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            if let Some(name) = name {
                s.name = name;
            }
            if let Some(grid) = grid {
                s.grid = Some(GridSpec::Values(grid));
            }
            s.validate()?;
            run_spec(&s, &out)
        }
        Command::Fit { csv, method, column, degree, from, to } => {
            let rows = read_csv(std::fs::File::open(csv)?)?;
            let samples: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.method == method)
                .filter_map(|r| {
                    let v = match column {
                        ColumnArg::Fidelity => r.fidelity,
                        ColumnArg::Bound => r.bound,
                        ColumnArg::Normalized => r.normalized,
                    };
                    v.map(|v| (r.noise, v))
                })
                .collect();
            let fit = fit_polynomial(&samples, degree, (from, to))?;
            let column = match column {
                ColumnArg::Fidelity => Column::Fidelity,
                ColumnArg::Bound => Column::Bound,
                ColumnArg::Normalized => Column::Normalized,
            };
            let out = serde_json::json!({ "method": method, "column": column, "fit": fit });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
        Command::Report { dir, out } => {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            let mut complete = true;
            for p in paths {
                complete &= run_spec(&load(&p)?, &out)?;
            }
            Ok(complete)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
