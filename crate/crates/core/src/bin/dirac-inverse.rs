use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dirac_inverse::cli_io::{run_direct, run_inverse, run_roundtrip, run_verify, RunConfig};
use dirac_inverse::Error;

#[derive(Parser)]
#[command(
    name = "dirac-inverse",
    version,
    about = "Direct and inverse spectral problems for a weighted Dirac system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides numerics.n_max.
    #[arg(long)]
    n_max: Option<usize>,
    /// Overrides numerics.grid.
    #[arg(long)]
    grid: Option<usize>,
    /// Overrides numerics.colloc.
    #[arg(long)]
    colloc: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Potential to spectral data.
    Direct(Common),
    /// Spectral data to potential.
    Inverse {
        #[command(flatten)]
        common: Common,
        /// Spectrum file written by `direct`.
        #[arg(long)]
        spectrum: PathBuf,
    },
    /// Direct, inverse and comparison with the input.
    Roundtrip(Common),
    /// Identity checks of a spectrum file against the configured potential.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spectrum: PathBuf,
    },
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(n) = common.n_max {
        cfg.numerics.n_max = n;
    }
    if let Some(m) = common.grid {
        cfg.numerics.grid = m;
    }
    if let Some(j) = common.colloc {
        cfg.numerics.colloc = j;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(command: &Command) -> Result<(), Error> {
    let common = match command {
        Command::Direct(c) | Command::Roundtrip(c) => c,
        Command::Inverse { common, .. } | Command::Verify { common, .. } => common,
    };
    let cfg = load(common).map_err(|e| e.at_stage("config"))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(e.to_string()).at_stage("config"))?;
    pool.install(|| match command {
        Command::Direct(c) => {
            let records = run_direct(&cfg, &c.out)?;
            println!(
                "wrote {} eigenvalues to {}",
                records.len(),
                c.out.join("spectrum.txt").display()
            );
            Ok(())
        }
        Command::Inverse { common, spectrum } => {
            run_inverse(&cfg, spectrum, &common.out)?;
            println!("wrote {}", common.out.join("potential.csv").display());
            Ok(())
        }
        Command::Roundtrip(c) => {
            let report = run_roundtrip(&cfg, &c.out)?;
            print!("{}", report.to_text());
            Ok(())
        }
        Command::Verify { common, spectrum } => {
            let checks = run_verify(&cfg, spectrum, &common.out)?;
            for c in &checks {
                println!("{}", c.line());
            }
            match checks.iter().find(|c| !c.passed()) {
                None => Ok(()),
                Some(c) => Err(Error::CheckFailed(c.name.to_string()).at_stage("verify")),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let stage = match &e {
                Error::Stage { stage, .. } => *stage,
                _ => "unknown",
            };
            eprintln!("error stage={stage} kind={} message={e}", e.kind());
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
