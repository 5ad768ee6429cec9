use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use orbifunctor::cli::{run_text, Command, Options, EXIT_INPUT_ERROR};
use orbifunctor::verify::FgMode;

/// Exact verification of comparison maps over orbit categories.
#[derive(Parser, Debug)]
#[command(name = "orbifunctor", version)]
struct Args {
    /// validate, homology, bredon, tor, tensor, hom, verify-theorem,
    /// demo-interchange, demo-tor-probe, demo-classifying or borel-check
    #[arg(value_parser = |s: &str| s.parse::<Command>().map_err(|e| e.to_string()))]
    command: Command,
    /// JSON manifest; every command except demo-tor-probe needs one.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Restrict to one degree; for verify-theorem, the top degree n.
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<i64>,
    /// Truncation K for the demos and borel-check.
    #[arg(long)]
    truncation: Option<usize>,
    /// strict or almost.
    #[arg(long, value_parser = |s: &str| s.parse::<FgMode>().map_err(|e| e.to_string()))]
    mode: Option<FgMode>,
    /// Prime for demo-tor-probe.
    #[arg(long)]
    prime: Option<u32>,
    /// Write the machine-readable report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let text = match args.manifest.as_ref().map(std::fs::read_to_string).transpose() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read manifest: {e}");
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    let opts = Options { degree: args.degree, truncation: args.truncation, mode: args.mode, prime: args.prime };
    let report = match run_text(args.command, text.as_deref(), &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    print!("{}", report.render_table());
    eprintln!("elapsed {:.3} s", start.elapsed().as_secs_f64());
    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
