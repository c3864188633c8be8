use std::process::ExitCode;

use atypical::report::{parse_curve_file, parse_radii, run, DiagnosticsMode, OutputFormat, RunConfig, DEFAULT_PRECISION};
use atypical::Error;
use clap::Parser;

/// Computes the bifurcation set of F = f/g and its parts K0, K1 and B_infty.
#[derive(Parser, Debug)]
#[command(name = "atypical", version)]
struct Cli {
    /// Numerator, a polynomial in x and y with rational coefficients.
    #[arg(long = "f")]
    f: String,
    /// Denominator.
    #[arg(long = "g", default_value = "1")]
    g: String,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Decimal digits for approximations of exact values.
    #[arg(long, default_value_t = DEFAULT_PRECISION as u16, value_parser = clap::value_parser!(u16).range(1..=200))]
    precision: u16,
    /// Numeric diagnostics: a curve file, or `auto` to search near each value of B.
    #[arg(long)]
    diagnose: Option<String>,
    /// Radii for the automatic search, `first:last:count`, geometrically spaced.
    #[arg(long, default_value = "10:10000:4")]
    radii: String,
    /// Skip the Euler characteristic cross-check.
    #[arg(long)]
    no_chi_check: bool,
    /// Recorded in the report; all computations are deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_degenerate_math() {
        3
    } else if matches!(e, Error::Parse { .. } | Error::Input(_)) {
        2
    } else {
        1
    }
}

fn config(cli: &Cli) -> Result<RunConfig, Error> {
    let diagnostics = match cli.diagnose.as_deref() {
        None => DiagnosticsMode::Off,
        Some("auto") => DiagnosticsMode::Auto,
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
            DiagnosticsMode::Curves { path: path.to_string(), curves: parse_curve_file(&text)? }
        }
    };
    Ok(RunConfig {
        f_text: cli.f.clone(),
        g_text: cli.g.clone(),
        output: if cli.json { OutputFormat::Json } else { OutputFormat::Text },
        precision: usize::from(cli.precision),
        diagnostics,
        radii: parse_radii(&cli.radii)?,
        verify_chi: !cli.no_chi_check,
        seed: cli.seed,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(&cli).and_then(|c| run(&c).map(|r| r.render(c.output)));
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
