use clap::{Parser, ValueEnum};
use drinfeld_ram::cli::{execute, OutputFormat, RunConfig, EXIT_CONFIG};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

/// Ramification, conductor and Szpiro reports for rank-2 Drinfeld modules.
#[derive(Parser)]
#[command(name = "drinram", version)]
struct Args {
    /// key = value configuration file
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `format` from the config
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides `oracle` from the config
    #[arg(long, value_enum)]
    oracle: Option<Switch>,
    /// Overrides `seed` from the config
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let ok = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            return ExitCode::from(if ok { 0 } else { EXIT_CONFIG as u8 });
        }
    };
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.config.display());
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let mut cfg = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    if let Some(f) = args.format {
        cfg.format = match f {
            Format::Text => OutputFormat::Text,
            Format::Csv => OutputFormat::Csv,
        };
    }
    if let Some(o) = args.oracle {
        cfg.oracle = matches!(o, Switch::On);
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let (out, code) = match execute(&cfg) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG as u8);
            }
        }
        None => print!("{out}"),
    }
    ExitCode::from(code as u8)
}
