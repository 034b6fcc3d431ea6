//! `conjlab` command-line front-end.

mod commands;
mod experiments;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use conjlab::measurability::DEFAULT_BUDGET;
use conjlab::Tolerances;

/// Conjugations on multipartite quantum systems: spectra, measurability and
/// Cramér-Rao saturation checks.
#[derive(Debug, Parser)]
#[command(name = "conjlab", version, about)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Options {
    /// Entrywise equality tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Gap below which spectrum entries count as degenerate.
    #[arg(long, global = true, default_value_t = 1e-7)]
    deg_tol: f64,
    /// Tolerance for Fisher-matrix comparisons.
    #[arg(long, global = true, default_value_t = 1e-6)]
    fisher_tol: f64,
    #[arg(long, global = true, env = "CONJLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Random re-mixings allowed in the product-eigenbasis search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Phases per axis for `figure2`.
    #[arg(long, global = true, default_value_t = 64)]
    grid: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Magic-basis spectrum of a two-qubit conjugation.
    Spectrum { input: PathBuf },
    /// Two-qubit class (product, Prod-measurable, Sep-unmeasurable) with witness.
    Classify { input: PathBuf },
    /// Takagi factorization of a complex symmetric matrix.
    Takagi { input: PathBuf },
    /// Eigenframe of a conjugation.
    Eigenframe {
        input: PathBuf,
        /// Two qubits only: the minimally entangled Hadamard-rotated frame.
        #[arg(long)]
        hadamard: bool,
    },
    /// Product-eigenbasis search; exits 2 when the verdict is indeterminate.
    Measurability { input: PathBuf },
    /// Fisher matrices of a magnetometry network under its eigenframe measurement.
    Magnetometry { config: PathBuf },
    /// Fisher matrices of an antiparallel (ψ ⊗ θψ) model.
    Antiparallel { config: PathBuf },
    /// Spectra and classes of the three reference two-qubit conjugations.
    Table1,
    /// Minimum average concurrence over the `{1, 1, e^{iφ₂}, e^{iφ₃}}` grid.
    Figure2,
    /// Cross-module invariant suite; exits 3 on any failure.
    Verify,
}

/// How a successful run ended.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Indeterminate,
    SuiteFailed,
}

/// Rendered output plus its status.
pub struct Outcome {
    pub text: String,
    pub status: Status,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, status: Status::Ok }
    }
}

/// Validation failure shown to the user; always exit code 1.
#[derive(Debug)]
pub struct CliError(pub String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

pub struct Context {
    pub tol: Tolerances,
    pub seed: u64,
    pub budget: usize,
    pub grid: usize,
    pub format: Option<Format>,
}

impl Context {
    /// Resolves the output format for a verb that may also speak CSV.
    fn format(&self, verb: &str, csv_ok: bool, default: Format) -> Result<Format, CliError> {
        match self.format.unwrap_or(default) {
            Format::Csv if !csv_ok => Err(CliError(format!("`{verb}` has no CSV output"))),
            f => Ok(f),
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let o = cli.opts;
    let tol = Tolerances::new(o.tol, o.deg_tol, o.fisher_tol)?;
    if o.budget == 0 {
        return Err(CliError("--budget must be positive".into()));
    }
    if o.grid == 0 {
        return Err(CliError("--grid must be positive".into()));
    }
    let ctx = Context {
        tol,
        seed: o.seed,
        budget: o.budget,
        grid: o.grid,
        format: o.format,
    };
    let outcome = match cli.command {
        Command::Spectrum { input } => commands::spectrum(&ctx, &input),
        Command::Classify { input } => commands::classify(&ctx, &input),
        Command::Takagi { input } => commands::takagi(&ctx, &input),
        Command::Eigenframe { input, hadamard } => commands::eigenframe(&ctx, &input, hadamard),
        Command::Measurability { input } => commands::measurability(&ctx, &input),
        Command::Magnetometry { config } => experiments::magnetometry(&ctx, &config),
        Command::Antiparallel { config } => experiments::antiparallel(&ctx, &config),
        Command::Table1 => commands::table1(&ctx),
        Command::Figure2 => commands::figure2(&ctx),
        Command::Verify => commands::verify(&ctx),
    }?;
    match &o.out {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| CliError(format!("{}: {e}", path.display())))?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version are successes; clap's own usage code (2) would
            // collide with the indeterminate-verdict code.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome { status: Status::Ok, .. }) => ExitCode::SUCCESS,
        Ok(Outcome { status: Status::Indeterminate, .. }) => ExitCode::from(2),
        Ok(Outcome { status: Status::SuiteFailed, .. }) => ExitCode::from(3),
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
