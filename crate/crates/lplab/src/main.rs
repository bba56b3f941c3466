//! Command-line harness: named experiments with machine-readable output.
//!
//! Exit codes: 0 on success, 1 when any property violation is recorded,
//! 2 on flag errors. LAB_SEED provides the default seed; a key=value
//! config file can override default sizes, flags win over the file.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lplab::experiments::{self, ExpConfig};
use lplab::report::Report;

#[derive(Parser)]
#[command(name = "lplab", version, about = "desk-scale l^p operator laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Exponent p ∈ (1, ∞)
    #[arg(long, global = true)]
    p: Option<f64>,

    /// Principal size (matrix dimension / point count / k range)
    #[arg(long, global = true)]
    dim: Option<usize>,

    /// RNG seed (default: LAB_SEED env var, then 1)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of randomized trials
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Tolerance / defect budget where applicable
    #[arg(long, global = true)]
    eps: Option<f64>,

    /// Write the result table to this path
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// key=value config file overriding defaults (flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Search for Laurent symbols with ‖f(B_N)‖_p above the circle sup
    Fixman,
    /// Følner functional gaps and exact averaging identities
    CircularApprox,
    /// Khintchine ratios by exact sign enumeration
    Khintchine,
    /// Quasicentral approximate units and the pinching constants
    Quasicentral,
    /// Greedy quasitridiagonalization of an operator family
    Tridiagonalize,
    /// Box covers, partitions of unity and the partition intertwiner
    Partition,
    /// Neutral-embedding defect bounds on random tridiagonal families
    NeutralBounds,
    /// One feasible similarity splitting with its certificates
    SplitDemo,
    /// Dyadic staircase family and its five properties
    Staircase,
    /// Diagonal-similarity obstruction inequalities
    DiagObstruction,
    /// The full property battery at small sizes
    Selftest,
}

fn parse_config(path: &PathBuf, cfg: &mut ExpConfig) -> std::io::Result<()> {
    let text = std::fs::read_to_string(path)?;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "p" => {
                if let Ok(v) = value.parse() {
                    cfg.p = v;
                }
            }
            "dim" => {
                if let Ok(v) = value.parse() {
                    cfg.dim = v;
                }
            }
            "seed" => {
                if let Ok(v) = value.parse() {
                    cfg.seed = v;
                }
            }
            "trials" => {
                if let Ok(v) = value.parse() {
                    cfg.trials = v;
                }
            }
            "eps" => {
                if let Ok(v) = value.parse() {
                    cfg.eps = v;
                }
            }
            _ => {}
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let mut cfg = ExpConfig::default();
    if let Ok(seed) = std::env::var("LAB_SEED") {
        if let Ok(seed) = seed.parse() {
            cfg.seed = seed;
        }
    }
    if let Some(path) = &cli.config {
        if let Err(e) = parse_config(path, &mut cfg) {
            eprintln!("error: cannot read config {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Some(p) = cli.p {
        cfg.p = p;
    }
    if let Some(dim) = cli.dim {
        cfg.dim = dim;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = cli.trials {
        cfg.trials = trials;
    }
    if let Some(eps) = cli.eps {
        cfg.eps = eps;
    }

    let result = match cli.command {
        Command::Fixman => experiments::fixman_experiment(cfg),
        Command::CircularApprox => experiments::circular_approx_experiment(cfg),
        Command::Khintchine => experiments::khintchine_experiment(cfg),
        Command::Quasicentral => experiments::quasicentral_experiment(cfg),
        Command::Tridiagonalize => experiments::tridiagonalize_experiment(cfg),
        Command::Partition => experiments::partition_experiment(cfg),
        Command::NeutralBounds => experiments::neutral_bounds_experiment(cfg),
        Command::SplitDemo => experiments::split_demo_experiment(cfg),
        Command::Staircase => experiments::staircase_experiment(cfg),
        Command::DiagObstruction => experiments::diag_obstruction_experiment(cfg),
        Command::Selftest => experiments::selftest(cfg),
    };

    let report: Report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let rendered = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            println!("{} -> {}", report.summary(), path.display());
        }
        None => {
            print!("{rendered}");
            eprintln!("{}", report.summary());
        }
    }

    if report.violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
