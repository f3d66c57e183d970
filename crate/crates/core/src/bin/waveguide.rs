use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use waveguide_nls::experiment::{columns_of, run, ExperimentConfig, ExperimentKind, RunStatus};
use waveguide_nls::Error;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "waveguide", version, about = "Cubic NLS experiments on R^2 x T")]
#[command(after_long_help = "Exit codes: 0 success, 1 I/O or internal error, 2 invalid config, \
3 divergence or edge contamination.\nThreads: set WAVEGUIDE_THREADS (default: all cores).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    #[command(after_long_help = csv_help())]
    Run {
        config: PathBuf,
        /// Output directory; overrides `output` in the config.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Morawetz weight parameter; overrides `morawetz.r0`.
        #[arg(long)]
        r0: Option<f64>,
    },
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
    /// List the available experiments and their CSV outputs.
    ListExperiments,
}

fn csv_help() -> String {
    let mut s = String::from("CSV outputs (every row starts with config_hash):\n");
    for kind in ExperimentKind::ALL {
        for (file, cols) in columns_of(kind) {
            s += &format!("  {kind}: {file}: {}\n", cols.join(","));
        }
    }
    s
}

fn load(path: &Path) -> Result<ExperimentConfig, ExitCode> {
    ExperimentConfig::from_path(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        match e {
            Error::Io(_) => ExitCode::FAILURE,
            _ => ExitCode::from(EXIT_VALIDATION),
        }
    })
}

fn init_threads() {
    if let Some(n) = std::env::var("WAVEGUIDE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListExperiments => {
            for kind in ExperimentKind::ALL {
                let files: Vec<&str> = columns_of(kind).iter().map(|(f, _)| *f).collect();
                println!("{:<14} {}  [{}]", kind.name(), kind.description(), files.join(", "));
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(&config) {
            Ok(cfg) => {
                println!("{}: ok ({}, hash {})", config.display(), cfg.experiment, cfg.hash());
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Run { config, output, r0 } => {
            let mut cfg = match load(&config) {
                Ok(cfg) => cfg,
                Err(code) => return code,
            };
            if let Some(r0) = r0 {
                if cfg.experiment != ExperimentKind::Morawetz {
                    eprintln!("--r0 applies only to the morawetz experiment");
                    return ExitCode::from(EXIT_VALIDATION);
                }
                cfg.morawetz.get_or_insert_with(Default::default).r0 = r0;
                if let Err(e) = cfg.validate() {
                    eprintln!("--r0: {e}");
                    return ExitCode::from(EXIT_VALIDATION);
                }
            }
            if let Some(dir) = output {
                cfg.output = dir;
            }
            init_threads();
            match run(&cfg, &cfg.output) {
                Ok(outcome) => {
                    let m = &outcome.manifest;
                    println!(
                        "{}: {} outputs in {} ({:.2} s)",
                        m.experiment,
                        m.outputs.len(),
                        cfg.output.display(),
                        m.wall_time_s
                    );
                    match outcome.status() {
                        RunStatus::Completed => ExitCode::SUCCESS,
                        RunStatus::NumericalFailure => {
                            eprintln!("{}", m.message.as_deref().unwrap_or("numerical failure"));
                            ExitCode::from(EXIT_NUMERICAL)
                        }
                    }
                }
                Err(e @ (Error::Config(_) | Error::Usage(_))) => {
                    eprintln!("{e}");
                    ExitCode::from(EXIT_VALIDATION)
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
