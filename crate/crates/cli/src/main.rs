use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use g2kit::runner::{
    bundled_source, parse_scenario, render_report, run_checks, ReportFormat, RunOptions, Scenario,
    Verdict, BUNDLED,
};
use g2kit::sampling::DEFAULT_SEED;
use g2kit::SamplingSpec;

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SAMPLED: u8 = 3;

#[derive(Parser)]
#[command(name = "g2kit", version, about = "Exact checks for G2-structures and contact forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file or bundled scenario.
    Verify(VerifyArgs),
    /// List bundled scenarios.
    List,
    /// Print the JSON source of a bundled scenario.
    Export { name: String },
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Path to a scenario JSON file, or the name of a bundled scenario.
    scenario: String,
    /// Pseudo-random sample points added to the lattice.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Lattice points per axis (the lattice has grid^7 points).
    #[arg(long, default_value_t = 4)]
    grid: usize,
    /// Half-width of the sampling box.
    #[arg(long, default_value_t = 1)]
    bound: i64,
    /// Tolerance for floating-point checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, env = "G2KIT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    report: String,
    /// Exit with status 3 when some clause holds only on samples.
    #[arg(long)]
    strict: bool,
}

fn load(arg: &str) -> anyhow::Result<Scenario> {
    let path = Path::new(arg);
    let bytes = if path.exists() {
        std::fs::read(path).with_context(|| format!("reading {arg}"))?
    } else if let Some(src) = bundled_source(arg) {
        src.as_bytes().to_vec()
    } else {
        bail!("no scenario file or bundled scenario named {arg:?}");
    };
    parse_scenario(&bytes).with_context(|| format!("invalid scenario {arg}"))
}

fn verify(args: &VerifyArgs) -> ExitCode {
    let sc = match load(&args.scenario) {
        Ok(sc) => sc,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let opts = RunOptions {
        sampling: SamplingSpec {
            grid: args.grid,
            bound: args.bound,
            samples: args.samples,
            seed: args.seed,
        },
        tol: args.tol,
    };
    let report = run_checks(&sc, &opts);
    let format: ReportFormat = args.report.parse().expect("validated by clap");
    print!("{}", render_report(&report, format));
    match report.verdict {
        Verdict::Fail => ExitCode::from(EXIT_FAIL),
        Verdict::SampledOnly if args.strict => ExitCode::from(EXIT_SAMPLED),
        _ => ExitCode::SUCCESS,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => verify(&args),
        Command::List => {
            for (name, src) in BUNDLED {
                let sc = parse_scenario(src.as_bytes()).expect("bundled scenarios are valid");
                println!("{name}\t{}", sc.description);
            }
            ExitCode::SUCCESS
        }
        Command::Export { name } => match bundled_source(&name) {
            Some(src) => {
                print!("{src}");
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("error: no bundled scenario named {name:?}");
                ExitCode::from(EXIT_INPUT)
            }
        },
    }
}
