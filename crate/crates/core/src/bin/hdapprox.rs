use clap::{Parser, Subcommand, ValueEnum};
use hdapprox::experiments::{known_keys, run_experiment, EXPERIMENTS};
use hdapprox::parse::ConfigMap;
use hdapprox::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hdapprox", version, about = "Monte Carlo approximation experiments and bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report.
    Run(RunArgs),
    /// List the experiments and their parameter keys.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment name; may also come from the config file.
    #[arg(long)]
    experiment: Option<String>,
    /// RNG seed; may also come from the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Parameter override `key=value`, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Config file of `key=value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

const USAGE: u8 = 2;
const FAILED: u8 = 1;

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn run(args: RunArgs) -> ExitCode {
    let mut cfg = match &args.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match ConfigMap::parse(&text) {
                Ok(c) => c,
                Err(e) => return usage(format!("{}: {e}", path.display())),
            },
            Err(e) => return usage(format!("{}: {e}", path.display())),
        },
        None => ConfigMap::default(),
    };
    for kv in &args.set {
        if let Err(e) = cfg.set(kv) {
            return usage(e);
        }
    }
    // Runner keys may live in the config file; flags win.
    let mut take = |key: &str| cfg.entries.remove(key);
    let experiment = args.experiment.clone().or_else(|| take("experiment"));
    let seed_text = take("seed");
    let out = args.out.clone().or_else(|| take("out").map(PathBuf::from));
    let format_text = take("format");
    let Some(experiment) = experiment else {
        return usage("missing --experiment");
    };
    if known_keys(&experiment).is_none() {
        return usage(format!("unknown experiment {experiment:?}; available: {}", EXPERIMENTS.join(", ")));
    }
    let seed = match (args.seed, seed_text) {
        (Some(s), _) => s,
        (None, Some(t)) => match t.parse() {
            Ok(s) => s,
            Err(_) => return usage(format!("bad seed {t:?}")),
        },
        (None, None) => return usage("missing --seed"),
    };
    let format = match (args.format, format_text.as_deref()) {
        (Some(f), _) => f,
        (None, None | Some("csv")) => Format::Csv,
        (None, Some("json")) => Format::Json,
        (None, Some(other)) => return usage(format!("unknown format {other:?}")),
    };
    let report = match run_experiment(&experiment, seed, &cfg) {
        Ok(r) => r,
        Err(e @ (Error::InvalidArgument(_) | Error::Parse { .. } | Error::SideCondition(_))) => return usage(e),
        Err(e) => {
            eprintln!("numeric failure: {e}");
            return ExitCode::from(FAILED);
        }
    };
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(FAILED);
            }
        }
        None => print!("{text}"),
    }
    let failing = report.failing_rows();
    if failing.is_empty() {
        ExitCode::SUCCESS
    } else {
        for i in failing {
            eprintln!("FAIL {}", report.row_summary(i));
        }
        ExitCode::from(FAILED)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run(args),
        Command::List => {
            for e in EXPERIMENTS {
                println!("{e}: {}", known_keys(e).unwrap_or(&[]).join(", "));
            }
            ExitCode::SUCCESS
        }
    }
}
