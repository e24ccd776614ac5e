//! `hwatson`: evaluate the Hartman-Watson integral and the time-averaged
//! GBM density from the command line.
//!
//! Exit codes: 0 success, 2 domain or usage error, 3 convergence failure,
//! 1 I/O failure. Data goes to standard output (or `--out`), diagnostics
//! to standard error.

mod commands;
mod grid;
mod record;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hartman_watson::HwError;
use thiserror::Error;

use commands::{DensityMethodArg, Figure, ThetaMethodArg, TABLE1_T};
use grid::{Grid, GridError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Hw(#[from] HwError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Hw(HwError::Domain { .. }) | CliError::Grid(_) | CliError::Usage(_) => 2,
            CliError::Hw(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "hwatson",
    version,
    about = "Hartman-Watson integral and time-averaged GBM density"
)]
struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Tolerance passed to the quadrature evaluators.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Write data here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// θ(r,t) by one or all evaluators.
    Theta {
        #[arg(short, allow_negative_numbers = true)]
        r: f64,
        #[arg(short, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value = "all")]
        method: ThetaMethodArg,
    },
    /// The θ(0.5,t) comparison table.
    Table1 {
        #[arg(short, default_value_t = 0.5)]
        r: f64,
        /// Grid of t values.
        #[arg(long)]
        t_grid: Option<String>,
    },
    /// Small-t density of the time average over a grid of a.
    Density {
        #[arg(long, default_value = "0.5:2:31:log")]
        a_grid: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(short, default_value_t = 0.1)]
        t: f64,
        #[arg(long, value_enum, default_value = "asym")]
        method: DensityMethodArg,
    },
    /// Observed relative error of θ̂ against the t/70 bound.
    Errorsweep {
        #[arg(long, default_value = "0.5,1,1.5")]
        r_grid: String,
        #[arg(long, default_value = "0.2,0.3,0.5,1,2,3")]
        t_grid: String,
    },
    /// Sampled curves for plotting.
    Plotdata {
        #[arg(long, value_enum)]
        figure: Figure,
        /// ρ grid (F, G, g2tilde) or t grid (theta_vs_t).
        #[arg(long)]
        grid: Option<String>,
        /// r values for theta_vs_t.
        #[arg(long, default_value = "0.5,1,1.5")]
        r_grid: String,
    },
}

fn positive_grid(spec: &str) -> Result<Grid, CliError> {
    Ok(spec.parse::<Grid>()?.positive(spec)?)
}

fn run(cli: &Cli) -> Result<record::OutputRecord, CliError> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(CliError::Usage(format!(
            "--tol must lie in (0, 1), got {}",
            cli.tol
        )));
    }
    match &cli.command {
        Command::Theta { r, t, method } => commands::theta(*r, *t, *method, cli.tol),
        Command::Table1 { r, t_grid } => {
            let ts = match t_grid {
                Some(spec) => positive_grid(spec)?.0,
                None => TABLE1_T.to_vec(),
            };
            commands::table1(*r, &ts, cli.tol)
        }
        Command::Density {
            a_grid,
            mu,
            t,
            method,
        } => commands::density(&positive_grid(a_grid)?, *mu, *t, *method, cli.tol),
        Command::Errorsweep { r_grid, t_grid } => {
            commands::errorsweep(&positive_grid(r_grid)?, &positive_grid(t_grid)?, cli.tol)
        }
        Command::Plotdata {
            figure,
            grid,
            r_grid,
        } => {
            let grid = grid.as_deref().map(positive_grid).transpose()?;
            commands::plotdata(*figure, grid.as_ref(), &positive_grid(r_grid)?, cli.tol)
        }
    }
}

fn emit(cli: &Cli, rec: &record::OutputRecord) -> io::Result<()> {
    let out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(out);
    match cli.format {
        Format::Csv => rec.write_csv(&mut out)?,
        Format::Json => rec.write_json(&mut out)?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|rec| {
        for f in &rec.flags {
            eprintln!("warning: {f}");
        }
        emit(&cli, &rec).map_err(CliError::from)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
