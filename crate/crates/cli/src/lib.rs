//! `predform` command line: `simulate`, `sweep`, and `analyze`.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 on I/O
//! errors. Diagnostics go to stderr; results are written only to `--out`.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use predform::engine::{self, EngineError};
use predform::ingest::{self, IngestError};
use predform::model::{validate_config, SimulationConfig, TaskDesign};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "predform", about = "Simulate and analyze predicate formulation strategies for crowdsourced screening")]
pub struct Cli {
    /// Cap the number of worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every task design for one configuration.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every task design over the Cartesian product of a parameter grid.
    Sweep {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Analyze real judgment logs against ground truth.
    Analyze {
        #[arg(long)]
        judgments: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Io(m) => m,
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<SimulationConfig, Failure> {
    SimulationConfig::from_json(&read(path)?).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn check(config: &SimulationConfig) -> Result<(), Failure> {
    let report = validate_config(config);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("invalid configuration:\n{report}")))
    }
}

fn write_out(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> Result<(), Failure>) -> Result<(), Failure> {
    let file = fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.into_inner()
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
        .sync_all()
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate {
            config,
            seed,
            trials,
            out,
        } => {
            let mut cfg = load_config(&config)?;
            cfg.seed = seed;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            check(&cfg)?;
            let results = engine::run_experiment(&cfg, &TaskDesign::ALL)?;
            write_out(&out, |w| Ok(engine::write_results_csv(w, &results)?))
        }
        Command::Sweep {
            grid,
            config,
            seed,
            out,
        } => {
            let mut cfg = load_config(&config)?;
            cfg.seed = seed;
            check(&cfg)?;
            let grid = engine::SweepGrid::from_json(&read(&grid)?)
                .map_err(|e| Failure::Validation(format!("{}: {e}", grid.display())))?;
            let results = engine::sweep(&grid, &cfg, &TaskDesign::ALL)?;
            write_out(&out, |w| Ok(engine::write_results_csv(w, &results)?))
        }
        Command::Analyze { judgments, truth, out } => {
            let report = ingest::analyze_files(&judgments, &truth)?;
            write_out(&out, |w| {
                use std::io::Write;
                w.write_all(report.to_json().as_bytes())
                    .and_then(|_| w.write_all(b"\n"))
                    .map_err(|e| Failure::Io(format!("{}: {e}", out.display())))
            })
        }
    }
}

/// Parse `argv` (including the program name) and run. Returns the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            eprint!("{}", e.render());
            return if informational { EXIT_OK } else { EXIT_VALIDATION };
        }
    };
    let outcome = match cli.threads {
        Some(0) => Err(Failure::Validation("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(Failure::Io(format!("cannot start thread pool: {e}"))),
        },
        None => execute(cli.command),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}
