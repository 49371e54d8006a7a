//! `bcran`: runs an experiment preset and writes its CSV files.
//!
//! Exit status: 0 on success, 1 on a runtime failure, 2 on a usage or
//! configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use bcran::experiment::{run_experiment, Preset};
use bcran::sim::SimConfig;
use clap::Parser;

#[derive(Debug, Parser)]
#[command(name = "bcran", version, about = "Ledger-settled RAN sharing simulator")]
struct Args {
    /// JSON configuration file; omitted fields take their defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Preset to run: bc-delay, bc-overhead, sharing-random or mno-mvno.
    #[arg(long, value_name = "NAME", required_unless_present = "print_config")]
    experiment: Option<String>,

    /// Base seed; replication r uses seed + r. Defaults to the config's seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,

    /// Independent replications per sweep point. Defaults to the config's value.
    #[arg(long, value_name = "N")]
    replications: Option<usize>,

    #[arg(long, value_name = "PATH", default_value = "out")]
    out_dir: PathBuf,

    /// Dotted-path override such as `market.operators=3`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

const USAGE_ERROR: u8 = 2;
const RUNTIME_ERROR: u8 = 1;

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE_ERROR) } else { ExitCode::SUCCESS };
        }
    };

    let loaded = match &args.config {
        Some(path) => SimConfig::from_path(path, &args.overrides),
        None => SimConfig::with_overrides(&args.overrides),
    };
    let mut config = match loaded {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(r) = args.replications {
        config.replications = r;
    }
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(USAGE_ERROR);
    }
    if args.print_config {
        println!("{}", config.to_json_pretty());
        return ExitCode::SUCCESS;
    }

    let name = args.experiment.as_deref().unwrap_or_default();
    let Some(preset) = Preset::from_name(name) else {
        eprintln!("error: unknown experiment `{name}`; valid presets: {}", Preset::names().join(", "));
        return ExitCode::from(USAGE_ERROR);
    };

    match run_experiment(preset, &config, &args.out_dir, config.seed, config.replications) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(RUNTIME_ERROR)
        }
    }
}
