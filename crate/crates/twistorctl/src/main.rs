use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use twistorctl::config::{ConfigArgs, OutputFormat, RunConfig};
use twistorctl::report::{to_json, to_text};
use twistorctl::suite::{run_all, Outcome, Scale};
use twistorctl::{run, CliError, Command};

/// Setting this variable to a non-empty value perturbs a constant inside the
/// self-test, which must then fail.
const MUTATION_ENV: &str = "TWISTORCTL_SELFTEST_MUTATION";

#[derive(Debug, Parser)]
#[command(name = "twistorctl", version, about = "Integrability and 2-form reports for twistor spaces")]
struct Cli {
    /// Worker threads for fibre sampling (reports do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Scalar, traceless Ricci and Weyl parts with sectional curvature range.
    Decompose(ConfigArgs),
    /// Integrability of J+ and J- and type (1,1) of the canonical 2-form.
    Verdict(ConfigArgs),
    /// Ranks of the Nijenhuis tensors of J+ and J-.
    Nijenhuis(ConfigArgs),
    /// Non-degeneracy, type and positivity of the canonical 2-form.
    TwoForm(ConfigArgs),
    /// Eigenvalues of the action of j on curvature tensors.
    Spectrum(ConfigArgs),
    /// Runs the property suite and prints a pass/fail table.
    Selftest(SelftestArgs),
}

#[derive(Debug, clap::Args)]
struct SelftestArgs {
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Acceptance-scale sample counts instead of the quick ones.
    #[arg(long)]
    full: bool,
}

#[derive(Serialize)]
struct SelftestReport<'a> {
    schema_version: u32,
    scale: &'static str,
    mutation: bool,
    passed: bool,
    checks: &'a [Outcome],
}

fn write_output(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn report(command: Command, args: &ConfigArgs) -> Result<(), CliError> {
    let cfg = RunConfig::from_args(args)?;
    let doc = run(command, &cfg)?;
    let text = match cfg.output.format {
        OutputFormat::Json => to_json(&doc),
        OutputFormat::Text => to_text(&doc),
    }
    .map_err(|e| CliError::Invariant(e.to_string()))?;
    write_output(&text, cfg.output.path.as_deref())
}

fn selftest(args: &SelftestArgs) -> Result<bool, CliError> {
    let mutation = std::env::var_os(MUTATION_ENV).is_some_and(|v| !v.is_empty());
    let scale = if args.full { Scale::full() } else { Scale::quick() };
    let outcomes = run_all(&scale, mutation);
    let passed = outcomes.iter().all(|o| o.passed);
    let text = if args.json {
        let doc = SelftestReport {
            schema_version: twistorctl::report::SCHEMA_VERSION,
            scale: if args.full { "full" } else { "quick" },
            mutation,
            passed,
            checks: &outcomes,
        };
        to_json(&doc).map_err(|e| CliError::Invariant(e.to_string()))?
    } else {
        let mut out = String::new();
        for o in &outcomes {
            let status = if o.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{:>2}  {status}  {:<32}  {}\n", o.id, o.name, o.detail));
        }
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        out.push_str(&format!("{} passed, {failed} failed\n", outcomes.len() - failed));
        out
    };
    write_output(&text, None)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("twistorctl: configuration error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("twistorctl: cannot configure threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Cmd::Decompose(a) => report(Command::Decompose, a),
        Cmd::Verdict(a) => report(Command::Verdict, a),
        Cmd::Nijenhuis(a) => report(Command::Nijenhuis, a),
        Cmd::TwoForm(a) => report(Command::TwoForm, a),
        Cmd::Spectrum(a) => report(Command::Spectrum, a),
        Cmd::Selftest(a) => match selftest(a) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(1),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twistorctl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
