use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use super::condition::{check_condition, ConditionInputs};
use super::config::SweepConfig;
use crate::error::{Error, Result};
use crate::mild::MildSolver;

pub const CSV_HEADER: &str = "lambda,terminal_error,control_energy,picard_iters,condition_lhs,wall_ms";

/// One row of the λ sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    /// ‖x^λ(T) − ζ_m‖₂.
    pub terminal_error: f64,
    pub control_energy: f64,
    pub picard_iters: usize,
    pub condition_lhs: f64,
    pub wall_ms: f64,
    /// ‖p_m‖ in the state norm.
    pub offset_norm: f64,
    /// Failure message when the solve did not succeed.
    pub failure: Option<String>,
    pub nonconvergence: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.failure.is_some()).count()
    }

    pub fn any_nonconvergence(&self) -> bool {
        self.rows.iter().any(|r| r.nonconvergence)
    }

    /// e(λ_{i+1}) < e(λ_i) along the table.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].terminal_error < w[0].terminal_error)
    }
}

/// Solves the configured problem for every λ of the grid; rows follow the grid order.
pub fn run_lambda_sweep(cfg: &SweepConfig, record_timing: bool) -> Result<SweepTable> {
    let solver = MildSolver::new(&cfg.problem)?;
    let zeta = cfg.problem.targets.last().expect("validated targets").clone();
    let m = cfg.problem.schedule.m();
    let rows = cfg
        .lambda_grid
        .par_iter()
        .map(|&lambda| {
            let start = Instant::now();
            let lhs = ConditionInputs::from_problem(&cfg.problem.with_lambda(lambda), cfg.beta)
                .and_then(|ci| check_condition(&ci))
                .map(|r| r.lhs)
                .unwrap_or(f64::NAN);
            let res = solver.solve_lambda(lambda);
            let wall_ms = if record_timing {
                start.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            };
            match res {
                Ok(sol) => SweepRow {
                    lambda,
                    terminal_error: sol.terminal_error(&zeta),
                    control_energy: sol.controls.energy(),
                    picard_iters: sol.iterations,
                    condition_lhs: lhs,
                    wall_ms,
                    offset_norm: solver.context().norm(&sol.controls.offsets[m].offset),
                    failure: None,
                    nonconvergence: false,
                },
                Err(e) => SweepRow {
                    lambda,
                    terminal_error: f64::NAN,
                    control_energy: f64::NAN,
                    picard_iters: match &e {
                        Error::NonConvergence { iterations, .. } => *iterations,
                        _ => 0,
                    },
                    condition_lhs: lhs,
                    wall_ms,
                    offset_norm: f64::NAN,
                    nonconvergence: e.is_convergence(),
                    failure: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(SweepTable { rows })
}

/// CSV text with the fixed column order; floats use shortest round-trip exponent form.
pub fn table_csv(table: &SweepTable) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in &table.rows {
        writeln!(
            s,
            "{:e},{:e},{:e},{},{:e},{:e}",
            r.lambda, r.terminal_error, r.control_energy, r.picard_iters, r.condition_lhs, r.wall_ms
        )
        .expect("string write");
    }
    s
}

/// Reads the CSV columns back; fields absent from the file are left empty.
pub fn parse_csv(text: &str) -> Result<SweepTable> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::config("csv", "unexpected header"));
    }
    let num = |s: &str, col: &str| -> Result<f64> { s.parse().map_err(|_| Error::config(col, format!("bad value {s:?}"))) };
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(Error::config("csv", format!("expected 6 columns, got {}", f.len())));
        }
        rows.push(SweepRow {
            lambda: num(f[0], "lambda")?,
            terminal_error: num(f[1], "terminal_error")?,
            control_energy: num(f[2], "control_energy")?,
            picard_iters: f[3].parse().map_err(|_| Error::config("picard_iters", format!("bad value {:?}", f[3])))?,
            condition_lhs: num(f[4], "condition_lhs")?,
            wall_ms: num(f[5], "wall_ms")?,
            offset_norm: f64::NAN,
            failure: None,
            nonconvergence: false,
        });
    }
    Ok(SweepTable { rows })
}

pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<()> {
    std::fs::write(path, table_csv(table))
        .map_err(|e| Error::config("output.csv", format!("cannot write {}: {e}", path.display())))
}

/// Two whitespace-separated columns (λ, terminal error) for external plotting.
pub fn emit_plotdata(table: &SweepTable, path: &Path) -> Result<()> {
    let mut s = String::from("# lambda terminal_error\n");
    for r in &table.rows {
        writeln!(s, "{:e} {:e}", r.lambda, r.terminal_error).expect("string write");
    }
    std::fs::write(path, s).map_err(|e| Error::config("output.plot", format!("cannot write {}: {e}", path.display())))
}
