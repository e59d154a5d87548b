use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use liftoff_core::classify;
use liftoff_lab::output::{self, num};
use liftoff_lab::{parse_scenario, run, run_suite, sweep, RunOptions, Scenario, Suite, SweepParam};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "liftoff",
    version,
    about = "Radial drift-diffusion experiments: lift-off versus decay"
)]
struct Cli {
    /// Output directory for CSV and JSON artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
    /// Worker threads for sweeps and suites (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify, simulate and diagnose one scenario.
    Simulate { config: PathBuf },
    /// Print the classifier verdict for a scenario's profile.
    Classify { config: PathBuf },
    /// Run a scenario once per parameter value.
    Sweep {
        config: PathBuf,
        /// One of A, beta, alpha, sigma, n_dim, r_max, num_nodes, dt.
        #[arg(long)]
        param: String,
        /// Comma-separated values, e.g. 1,2,3.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Run a verification suite.
    Verify {
        /// One of oracle, conservation, liftoff, decay, critical, invariants, convergence.
        suite: String,
    },
}

fn load(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("invalid scenario {}", path.display()))
}

fn out_dir(cli_out: &Option<PathBuf>, s: &Scenario) -> PathBuf {
    cli_out
        .clone()
        .or_else(|| s.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&s.name))
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if k == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global()?;
    }
    let say = |msg: &str| {
        if !cli.quiet {
            println!("{msg}");
        }
    };

    match &cli.command {
        Command::Simulate { config } => {
            let s = load(config)?;
            let dir = out_dir(&cli.out, &s);
            let report = run(
                &s,
                &RunOptions {
                    out_dir: Some(dir.clone()),
                    skip_frames: false,
                },
            )?;
            say(&report.summary());
            say(&format!("wrote {}", dir.display()));
            if report.mismatch() {
                eprintln!("warning: observed behavior does not match the verdict");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Classify { config } => {
            let s = load(config)?;
            let c = classify(&s.drift()?, s.n_dim)?;
            say(&format!("verdict:  {}", c.verdict));
            say(&format!("L:        {}", c.growth_limit));
            say(&format!("L_plus:   {}", c.positive_growth_limit));
            say(&format!("phi mass: {}", c.phi_mass));
            if !c.note.is_empty() {
                say(&format!("note:     {}", c.note));
            }
            if let Some(dir) = &cli.out {
                let value = json!({
                    "scenario": s.name,
                    "verdict": c.verdict.to_string(),
                    "L": c.growth_limit.to_string(),
                    "L_plus": c.positive_growth_limit.to_string(),
                    "phi_mass": c.phi_mass.value().map(num),
                    "note": c.note,
                });
                output::write_json(&dir.join("classification.json"), &value)?;
            }
        }
        Command::Sweep { config, param, values } => {
            let s = load(config)?;
            let param: SweepParam = param.parse()?;
            let result = sweep(&s, param, values, cli.out.clone())?;
            say(&result.summary_table());
            if result.rows.iter().any(|r| r.result.is_err()) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite);
            for check in &report.checks {
                say(&check.line());
            }
            let value = report.to_json();
            if let Some(dir) = &cli.out {
                output::write_json(&dir.join(format!("verify-{}.json", suite.name())), &value)?;
            }
            if !cli.quiet {
                println!("{}", serde_json::to_string_pretty(&value)?);
            }
            say(&format!(
                "suite {}: {}",
                suite.name(),
                if report.passed() { "PASS" } else { "FAIL" }
            ));
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
