use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wres_verifier::{parse_spec, run_suite, CheckKind, OutputFormat, SuiteSpec};

/// Run the verification suite described by a spec file.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Cli {
    /// Suite spec file (`key = value` lines). Defaults apply when omitted.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Output format, overriding the spec's `output`.
    #[arg(long, value_parser = ["json", "markdown", "md"])]
    format: Option<String>,
    /// Base seed for the matrix oracle, overriding the spec's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Restrict to these checks (comma separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Print the available checks and exit.
    #[arg(long)]
    list_checks: bool,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("verify: {}", msg);
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.list_checks {
        for c in CheckKind::ALL {
            println!("{:<13} {}", c.name(), c.describe());
        }
        return ExitCode::SUCCESS;
    }
    let mut spec = match &cli.spec {
        None => SuiteSpec::default(),
        Some(p) => {
            let text = match std::fs::read_to_string(p) {
                Ok(t) => t,
                Err(e) => return usage(format!("{}: {}", p.display(), e)),
            };
            match parse_spec(&text) {
                Ok(s) => s,
                Err(e) => return usage(format!("{}: {}", p.display(), e)),
            }
        }
    };
    if let Some(f) = &cli.format {
        spec.output = f.parse().expect("validated by clap");
    }
    if let Some(s) = cli.seed {
        spec.seed = s;
    }
    if !cli.only.is_empty() {
        let mut set = std::collections::BTreeSet::new();
        for name in &cli.only {
            match name.trim().parse::<CheckKind>() {
                Ok(c) => {
                    set.insert(c);
                }
                Err(()) => return usage(format!("unknown check `{}` (see --list-checks)", name)),
            }
        }
        spec.checks = set;
    }
    let report = run_suite(&spec);
    match spec.output {
        OutputFormat::Json => println!("{}", report.to_json()),
        OutputFormat::Markdown => print!("{}", report.to_markdown()),
    }
    if report.all_match() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
