use std::path::PathBuf;

use clap::Parser;

use gl2verify::config::{odd_primes_up_to, CHECK_ORDER};
use gl2verify::{run, CheckKind, Mode, OutputFormat, SuiteConfig, DEFAULT_PRIMES};

/// Verify the permutation-module sequence and pairing determinants for
/// GL(2) over small prime fields, by exact integer matrices, by character
/// sums, or both.
///
/// Exit codes: 0 all checks pass, 1 a verification check fails, 2 usage or
/// configuration error. Set GL2VERIFY_THREADS to parallelize over primes.
#[derive(Parser)]
#[command(name = "gl2verify", version)]
struct Cli {
    /// Verify a single odd prime
    #[arg(long, conflicts_with_all = ["primes", "max_prime"])]
    prime: Option<u64>,

    /// Comma-separated list of odd primes
    #[arg(long, value_delimiter = ',', conflicts_with = "max_prime")]
    primes: Option<Vec<u64>>,

    /// All odd primes up to this bound
    #[arg(long)]
    max_prime: Option<u64>,

    /// Verification route: exact matrices, character sums, or both
    #[arg(long, value_enum, default_value = "both")]
    mode: Mode,

    /// Comma-separated subset of checks to run
    #[arg(long, value_enum, value_delimiter = ',')]
    checks: Option<Vec<CheckKind>>,

    /// Report format
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,

    /// Write the report to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Allow primes above the default resource guard (p <= 19)
    #[arg(long)]
    allow_large: bool,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    let primes = match (cli.prime, cli.primes, cli.max_prime) {
        (Some(p), _, _) => vec![p],
        (_, Some(list), _) => list,
        (_, _, Some(bound)) => odd_primes_up_to(bound),
        _ => DEFAULT_PRIMES.to_vec(),
    };
    let checks = cli.checks.unwrap_or_else(|| CHECK_ORDER.to_vec());
    let config = match SuiteConfig::new(primes, cli.mode, checks, cli.allow_large) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("gl2verify: {e}");
            return 2;
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("gl2verify: {e}");
            return 2;
        }
    };
    let body = match cli.format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("gl2verify: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{body}"),
    }
    if report.pass {
        0
    } else {
        1
    }
}
