mod config;
mod report;
mod suites;

use clap::Parser;
use config::SuiteConfig;
use report::SuiteReport;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use suites::{Context, Suite};

const THREADS_VAR: &str = "FOLIATION_LAB_THREADS";

/// Numerical checks for the convolution algebras of the foliations x^k d/dx.
#[derive(Debug, Parser)]
#[command(name = "foliation-lab", version)]
struct Cli {
    #[arg(value_enum)]
    suite: Suite,
    /// JSON suite configuration.
    #[arg(long)]
    config: PathBuf,
    /// Where to write the JSON report.
    #[arg(long)]
    out: PathBuf,
    /// `dotted.key=value`, value parsed as JSON. May be repeated.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Directory for CSV and binary dumps.
    #[arg(long)]
    dump: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let config = match SuiteConfig::load(&cli.config, &cli.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(dir) = &cli.dump {
        if let Err(e) = std::fs::create_dir_all(dir) {
            eprintln!("error: cannot create {}: {e}", dir.display());
            return ExitCode::from(3);
        }
    }

    let start = Instant::now();
    let ctx = Context { config: &config, dump: cli.dump.as_deref() };
    let output = match suites::run(cli.suite, &ctx) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let passed = output.checks.iter().all(|c| c.passed());
    for c in &output.checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        let measured = c.measured.map_or("-".to_string(), |m| format!("{m:.3e}"));
        eprintln!("{status:4}  {}  ({measured} vs {:.3e})", c.name, c.tolerance);
    }
    let report = SuiteReport {
        suite: cli.suite.name().into(),
        passed,
        checks: output.checks,
        wall_time_s: start.elapsed().as_secs_f64(),
        config,
        data: output.data,
    };
    let bytes = match serde_json::to_vec_pretty(&report) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    if let Err(e) = report::write_atomic(&cli.out, &bytes) {
        eprintln!("error: cannot write {}: {e}", cli.out.display());
        return ExitCode::from(3);
    }
    ExitCode::from(if passed { 0 } else { 1 })
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}
