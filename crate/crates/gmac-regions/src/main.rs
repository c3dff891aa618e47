use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gmac_regions::executor::default_workers;
use gmac_regions::{run, CliError, Command, Format, LoadedConfig, RunOptions, WORKERS_ENV};

/// Achievable rate regions of the state-dependent generalized MAC.
#[derive(Parser)]
#[command(name = "gmac-regions", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Trace rate regions and write tables and plots.
    Region(CommonArgs),
    /// Maximum sum rate versus signal-to-interference ratio.
    SumrateSir(CommonArgs),
    /// Run the invariant checks; exits with 4 if any fails.
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: the config's `out`, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated output formats: csv, json, svg.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<String>>,
    /// Worker threads (default: available parallelism).
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Must equal the config's model when given.
    #[arg(long)]
    model: Option<String>,
}

fn execute(command: Command, args: CommonArgs) -> Result<i32, CliError> {
    let cfg = LoadedConfig::from_path(&args.config)?;
    let formats = match &args.format {
        None => None,
        Some(list) => Some(
            list.iter()
                .map(|s| {
                    Format::parse(s.trim())
                        .ok_or_else(|| CliError::Config(format!("unknown format {s:?}; expected csv, json or svg")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let workers = match args.workers {
        Some(0) => return Err(CliError::Config("--workers must be at least 1".into())),
        Some(n) => n,
        None => default_workers(),
    };
    let out = args.out.or_else(|| cfg.config.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let opts = RunOptions { out, formats: cfg.formats(formats.as_deref()), workers };
    let outcome = run(command, &cfg, args.model.as_deref(), &opts)?;
    for line in &outcome.report {
        println!("{line}");
    }
    for f in &outcome.files {
        eprintln!("wrote {}", f.display());
    }
    if let Some(msg) = outcome.failure {
        let e = CliError::Verification(msg);
        eprintln!("error: {e}");
        return Ok(e.exit_code());
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Region(a) => (Command::Region, a),
        Cmd::SumrateSir(a) => (Command::SumrateSir, a),
        Cmd::Verify(a) => (Command::Verify, a),
    };
    let code = match execute(command, args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
