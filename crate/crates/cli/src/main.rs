use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use geocast_core::experiment::{
    build_scenario, oracle_check, run_single, run_sweep, Algorithm, ExperimentConfig, OracleBounds,
};
use geocast_core::steiner::emit_ilp;
use geocast_core::topology::generate_topology;
use geocast_core::{EdgeWeights, SteinerInstance};

const EXIT_USAGE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "geocast",
    version,
    about = "Geocast multicast tree experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one topology and print it as JSON.
    Gen {
        #[command(flatten)]
        common: Common,
        /// Sweep point whose topology parameters are used.
        #[arg(long, default_value_t = 0)]
        sweep_index: usize,
    },
    /// Dump a single sweep cell: topology, plans, routing packets and rows.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        sweep_index: usize,
        #[arg(long, default_value_t = 0)]
        replicate: usize,
    },
    /// Run the full sweep and write CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Worker threads; 1 runs single-threaded.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run the brute-force validation suite.
    Oracle {
        /// JSON file with oracle bounds.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Perturb the reference weights; every exact check must then fail.
        #[arg(long)]
        perturb: bool,
    },
    /// Print the integer program for one sweep cell.
    EmitIlp {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        sweep_index: usize,
        #[arg(long, default_value_t = 0)]
        replicate: usize,
    },
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration; defaults apply when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                ExperimentConfig::from_json(&text)?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        if let Some(r) = self.replicates {
            config.replicates = r;
        }
        if let Some(algs) = &self.algorithms {
            config.algorithms = algs.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            info!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen {
            common,
            sweep_index,
        } => {
            let config = common.load()?;
            if sweep_index >= config.sweep.len() {
                anyhow::bail!(geocast_core::Error::InvalidConfig(format!(
                    "sweep index {sweep_index} out of range"
                )));
            }
            let topology = generate_topology(&config.params_at(sweep_index), config.master_seed)?;
            emit(&common.out, &format!("{}\n", topology.to_json()))?;
        }
        Command::Run {
            common,
            sweep_index,
            replicate,
        } => {
            let config = common.load()?;
            let dump = run_single(&config, sweep_index, replicate)?;
            emit(
                &common.out,
                &format!("{}\n", serde_json::to_string_pretty(&dump)?),
            )?;
        }
        Command::Sweep { common, workers } => {
            let config = common.load()?;
            emit(&common.out, &run_sweep(&config, workers)?)?;
        }
        Command::Oracle {
            config,
            seed,
            out,
            perturb,
        } => {
            let mut bounds = match config {
                Some(path) => serde_json::from_str(
                    &fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?,
                )
                .map_err(|e| geocast_core::Error::InvalidConfig(e.to_string()))?,
                None => OracleBounds::default(),
            };
            if let Some(seed) = seed {
                bounds.seed = seed;
            }
            bounds.perturb |= perturb;
            let report = oracle_check(&bounds);
            emit(
                &out,
                &format!("{}\n", serde_json::to_string_pretty(&report)?),
            )?;
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_ORACLE));
            }
        }
        Command::EmitIlp {
            common,
            sweep_index,
            replicate,
        } => {
            let config = common.load()?;
            if sweep_index >= config.sweep.len() || replicate >= config.replicates {
                anyhow::bail!(geocast_core::Error::InvalidConfig(format!(
                    "no cell ({sweep_index}, {replicate}) in this sweep"
                )));
            }
            let s = build_scenario(&config, sweep_index, replicate)?;
            let weights = EdgeWeights::delay(&s.topology, Some(&s.status));
            let model = emit_ilp(&SteinerInstance::new(s.source, &s.destinations, &weights)?);
            emit(&common.out, &model.text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<geocast_core::Error>().is_some() {
                ExitCode::from(EXIT_INFEASIBLE)
            } else {
                ExitCode::from(EXIT_USAGE)
            }
        }
    }
}
