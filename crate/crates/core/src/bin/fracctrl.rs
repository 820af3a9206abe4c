use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use fracctrl::experiment::{
    check_condition, emit_csv, emit_plotdata, parse_config, run_lambda_sweep, run_regulator, run_selftest,
    ConditionInputs,
};
use fracctrl::Error;

#[derive(Parser)]
#[command(name = "fracctrl", version, about = "Regularized feedback control of impulsive fractional evolution equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured problem over the λ grid and write the result table.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides `output.csv` of the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Two-column (λ, terminal error) file; overrides `output.plot`.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Fill the wall_ms column with measured times (otherwise 0).
        #[arg(long)]
        record_timing: bool,
    },
    /// Optimal control of the linear problem under both control laws.
    Regulator {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the sufficient existence condition for each λ of the grid.
    CheckCondition {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the built-in invariant suite.
    Selftest,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config { .. } | Error::Domain(_) | Error::Grid(_) | Error::Sequencing(_)) => 2,
        Some(e) if e.is_convergence() => 3,
        _ => 1,
    }
}

fn sweep(config: &Path, out: Option<PathBuf>, plot: Option<PathBuf>, record_timing: bool) -> anyhow::Result<u8> {
    let cfg = parse_config(config)?;
    let out = out
        .or_else(|| cfg.csv.clone())
        .ok_or_else(|| Error::config("output.csv", "no CSV destination: pass --out or set output.csv"))?;
    let table = run_lambda_sweep(&cfg, record_timing)?;
    emit_csv(&table, &out)?;
    if let Some(p) = plot.or_else(|| cfg.plot.clone()) {
        emit_plotdata(&table, &p)?;
    }
    println!("{:>10} {:>14} {:>14} {:>6} {:>14}", "lambda", "terminal_err", "energy", "iters", "condition_lhs");
    for r in &table.rows {
        match &r.failure {
            None => println!(
                "{:>10.3e} {:>14.6e} {:>14.6e} {:>6} {:>14.6e}",
                r.lambda, r.terminal_error, r.control_energy, r.picard_iters, r.condition_lhs
            ),
            Some(msg) => println!("{:>10.3e} failed: {msg}", r.lambda),
        }
    }
    if table.any_nonconvergence() {
        eprintln!("{} of {} solves did not converge", table.failures(), table.rows.len());
        return Ok(3);
    }
    if table.failures() > 0 {
        return Err(anyhow!("{} of {} solves failed", table.failures(), table.rows.len()));
    }
    Ok(0)
}

fn regulator(config: &Path) -> anyhow::Result<u8> {
    let cfg = parse_config(config)?;
    let report = run_regulator(&cfg.problem)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

fn condition(config: &Path) -> anyhow::Result<u8> {
    let cfg = parse_config(config)?;
    let mut reports = Vec::new();
    for &l in &cfg.lambda_grid {
        let ci = ConditionInputs::from_problem(&cfg.problem.with_lambda(l), cfg.beta)?;
        let r = check_condition(&ci)?;
        reports.push(serde_json::json!({ "lambda": l, "inputs": ci, "report": r }));
    }
    println!("{}", serde_json::to_string_pretty(&reports)?);
    Ok(0)
}

fn selftest() -> anyhow::Result<u8> {
    let checks = run_selftest().context("self test could not run")?;
    let mut failed = 0;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(anyhow!("{failed} self-test checks failed"));
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Sweep {
            config,
            out,
            plot,
            record_timing,
        } => sweep(&config, out, plot, record_timing),
        Command::Regulator { config } => regulator(&config),
        Command::CheckCondition { config } => condition(&config),
        Command::Selftest => selftest(),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
