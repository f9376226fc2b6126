use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ictimpact_cli::server::{self, AppState};
use ictimpact_cli::{render, store_capacity_from_env, SeedPolicy, ADDR_ENV, DEFAULT_ADDR};
use ictimpact_core::domain::Co2e;
use ictimpact_core::uncertainty::DEFAULT_SAMPLES;
use ictimpact_core::workbench::{
    parse_scenario, render_human, run_assessment, run_audit, run_baseline, run_calibration,
    run_sensitivity, to_canonical_json, ParseMode, RunOptions, ScenarioDocument,
    SensitivityMode, WorkbenchError,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ictimpact", version, about = "Assess induced effects of ICT services")]
struct Cli {
    /// Keep unknown fields instead of rejecting the file.
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Tornado,
    Montecarlo,
}

#[derive(Subcommand)]
enum Command {
    /// Full assessment: effect, interval, rebound comparison, audit.
    Assess {
        /// Scenario document (JSON)
        file: PathBuf,
        /// Random seed; without one a seed is taken from the environment or generated and echoed
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-at-a-time or Monte Carlo sensitivity over the file's distributions.
    Sensitivity {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Baseline trajectory and cone table.
    Baseline {
        file: PathBuf,
        /// Number of periods from service introduction
        #[arg(long)]
        horizon: u32,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Methodological flags. Exits with 2 when an error-severity flag fires.
    Audit {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Extrapolation coefficient from a case-study and a population average.
    CalibrateK {
        /// Per-usage average effect in the case study, kg CO2e
        #[arg(long = "case-avg")]
        case_avg: f64,
        /// Per-usage average effect in the population, kg CO2e
        #[arg(long = "population-avg")]
        population_avg: f64,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Parse and validate without computing.
    Validate { file: PathBuf },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = ADDR_ENV, default_value = DEFAULT_ADDR)]
        addr: String,
    },
}

enum Failure {
    Input(WorkbenchError),
    Other(String),
}

impl From<WorkbenchError> for Failure {
    fn from(e: WorkbenchError) -> Self {
        Failure::Input(e)
    }
}

fn load(path: &Path, mode: ParseMode) -> Result<ScenarioDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Other(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_scenario(&text, mode)?)
}

fn emit<T: Serialize>(value: &T, format: Format, human: impl Fn(&T) -> String) {
    match format {
        Format::Human => print!("{}", human(value)),
        Format::Machine => print!("{}", to_canonical_json(value)),
    }
}

fn seed(explicit: Option<u64>) -> Result<u64, Failure> {
    let policy = SeedPolicy::from_env().map_err(Failure::Other)?;
    let (seed, generated) = policy.resolve(explicit);
    if generated {
        eprintln!("seed: {seed}");
    }
    Ok(seed)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let mode = if cli.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    };
    match cli.command {
        Command::Assess {
            file,
            seed: explicit,
            format,
            out,
        } => {
            let doc = load(&file, mode)?;
            let report = run_assessment(&doc, &RunOptions::new(seed(explicit)?))?;
            let text = match format {
                Format::Human => render_human(&report),
                Format::Machine => to_canonical_json(&report),
            };
            match out {
                None => print!("{text}"),
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::Other(format!("cannot write {}: {e}", path.display())))?,
            }
        }
        Command::Sensitivity {
            file,
            mode: m,
            samples,
            seed: explicit,
            format,
        } => {
            let doc = load(&file, mode)?;
            let (m, seed) = match m {
                Mode::Tornado => (SensitivityMode::Tornado, 0),
                Mode::Montecarlo => (SensitivityMode::Montecarlo, seed(explicit)?),
            };
            emit(&run_sensitivity(&doc, m, samples, seed)?, format, render::sensitivity);
        }
        Command::Baseline {
            file,
            horizon,
            format,
        } => {
            let doc = load(&file, mode)?;
            emit(&run_baseline(&doc, horizon)?, format, render::baseline);
        }
        Command::Audit { file, format } => {
            let doc = load(&file, mode)?;
            let report = run_audit(&doc)?;
            emit(&report, format, render::audit);
            if report.has_errors {
                return Ok(ExitCode::from(2));
            }
        }
        Command::CalibrateK {
            case_avg,
            population_avg,
            format,
        } => {
            let report = run_calibration(Co2e::kg(case_avg), Co2e::kg(population_avg))?;
            emit(&report, format, render::calibration);
        }
        Command::Validate { file } => {
            load(&file, mode)?;
            println!("{}: valid", file.display());
        }
        Command::Serve { addr } => {
            tracing_subscriber::fmt().with_writer(std::io::stderr).init();
            let capacity = store_capacity_from_env().map_err(Failure::Other)?;
            let seeds = SeedPolicy::from_env().map_err(Failure::Other)?;
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| Failure::Other(format!("cannot start runtime: {e}")))?;
            runtime
                .block_on(server::serve(&addr, AppState::new(capacity, seeds)))
                .map_err(|e| Failure::Other(format!("cannot serve on {addr}: {e}")))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            for issue in &e.issues {
                eprintln!("error: {issue}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
