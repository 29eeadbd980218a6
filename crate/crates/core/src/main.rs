use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cp1graft::cli::{self, Check, RunConfig, Target};
use cp1graft::Error;

#[derive(Parser)]
#[command(
    name = "cp1graft",
    version,
    about = "Grafting and Thurston coordinates for CP1-structures"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the lift depth of the config.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Overrides the seed of the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance override `key=value`; may be repeated.
    #[arg(long = "tol-override", global = true, value_name = "KEY=VALUE")]
    tol_override: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the grafted structure and write its holonomy.
    Graft,
    /// Run a verification and write its report.
    Verify { check: CheckArg },
    /// Export meshes, limit sets or holonomy tables.
    Export { target: TargetArg },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    TwoPi,
    Goldman,
    Stratification,
    Covering,
    DomeMeasure,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Pleat,
    Dome,
    Limitset,
    Holonomy,
}

fn load(args: &Args) -> Result<RunConfig, Error> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| Error::Precondition("--config is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(d) = args.depth {
        cfg.depth = d;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    for kv in &args.tol_override {
        let (k, v) = kv.split_once('=').ok_or_else(|| {
            Error::Precondition(format!("tolerance override `{kv}` is not key=value"))
        })?;
        let v: f64 = v.trim().parse().map_err(|_| {
            Error::Precondition(format!("tolerance override `{kv}` has no numeric value"))
        })?;
        cfg.tolerances
            .set(k.trim(), v)
            .map_err(Error::Precondition)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &Args) -> Result<cli::Outcome, Error> {
    let cfg = load(args)?;
    match args.command {
        Command::Graft => cli::graft(&cfg, &args.out),
        Command::Verify { check } => {
            let check = match check {
                CheckArg::TwoPi => Check::TwoPi,
                CheckArg::Goldman => Check::Goldman,
                CheckArg::Stratification => Check::Stratification,
                CheckArg::Covering => Check::Covering,
                CheckArg::DomeMeasure => Check::DomeMeasure,
            };
            cli::verify(&cfg, check, &args.out)
        }
        Command::Export { target } => {
            let target = match target {
                TargetArg::Pleat => Target::Pleat,
                TargetArg::Dome => Target::Dome,
                TargetArg::Limitset => Target::Limitset,
                TargetArg::Holonomy => Target::Holonomy,
            };
            cli::export(&cfg, target, &args.out)
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&args) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed; see the report");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
