use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use dickson_core::verify::{budget_from_env, emit_report, run_grid, Format, GridConfig, Theorem};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

/// Verify the Dickson-invariant and Steenrod-action identities over a grid of cases.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Args {
    /// Theorem to check, or `all`.
    #[arg(long, default_value = "all")]
    theorem: String,

    /// Primes, comma separated. With --n, replaces the default (p, n) grid.
    #[arg(long, value_delimiter = ',')]
    p: Vec<u64>,

    /// Variable counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,

    /// Restrict s to these values.
    #[arg(long, value_delimiter = ',')]
    s: Vec<usize>,

    /// Largest primitive index i.
    #[arg(long)]
    i_max: Option<u64>,

    /// Largest degree for the invariant-dimension cases.
    #[arg(long)]
    d_max: Option<u64>,

    /// Seed for the randomized cases.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report every elapsed time as 0, making the output reproducible byte for byte.
    #[arg(long)]
    omit_timings: bool,
}

fn config(args: &Args) -> Result<GridConfig, String> {
    let theorems = if args.theorem == "all" {
        Theorem::ALL.to_vec()
    } else {
        vec![args.theorem.parse::<Theorem>().map_err(|e| e.to_string())?]
    };
    let mut config = match (args.p.is_empty(), args.n.is_empty()) {
        (true, true) => GridConfig::default_grid(),
        (false, false) => GridConfig::product(vec![], &args.p, &args.n),
        _ => return Err("--p and --n must be given together".into()),
    };
    config.theorems = theorems;
    if !args.s.is_empty() {
        config.s = Some(args.s.clone());
    }
    config.i_max = args.i_max;
    config.d_max = args.d_max;
    config.seed = args.seed;
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let usage = |msg: String| {
        eprintln!("verify: {msg}");
        ExitCode::from(2)
    };
    let config = match config(&args) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(e) => return usage(e.to_string()),
    };
    let mut report = match run_grid(&config, budget) {
        Ok(r) => r,
        Err(e) => return usage(e.to_string()),
    };
    if args.omit_timings {
        report = report.without_timings();
    }
    let format = match args.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    let rendered = emit_report(&report, format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("verify: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
