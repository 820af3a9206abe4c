use serde::Serialize;

use crate::control::{regulator_cost, ControlLaw};
use crate::error::{Error, Result};
use crate::mild::{final_state_identity_check, MildSolver, ProblemSpec};
use crate::state_space::OperatorKind;

/// Outcome of the regularized linear regulator for one control law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegulatorRun {
    pub law: ControlLaw,
    pub cost: f64,
    pub terminal_error: f64,
    /// Cost of u ≡ 0, i.e. ‖T_α(T)ψ(0) − x_T‖².
    pub zero_control_cost: f64,
    pub identity_residual: f64,
    pub offset_norm: f64,
    pub energy: f64,
    pub weighted_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegulatorReport {
    pub lambda: f64,
    pub standard: RegulatorRun,
    pub alternative: RegulatorRun,
}

fn run_law(p: &ProblemSpec, law: ControlLaw) -> Result<RegulatorRun> {
    let spec = ProblemSpec { law, ..p.clone() };
    let solver = MildSolver::new(&spec)?;
    let sol = solver.solve()?;
    let target = &spec.targets[0];
    let free = solver.operators().apply(spec.horizon(), spec.initial.psi0(), OperatorKind::T);
    Ok(RegulatorRun {
        law,
        cost: regulator_cost(sol.terminal_state(), target, sol.controls.weighted_energy(), spec.lambda),
        terminal_error: sol.terminal_error(target),
        zero_control_cost: (&free - target).norm().powi(2),
        identity_residual: final_state_identity_check(&solver, &sol)?,
        offset_norm: sol.controls.offsets[0].offset.norm(),
        energy: sol.controls.energy(),
        weighted_energy: sol.controls.weighted_energy(),
    })
}

/// Optimal control of the linear problem with the standard cost and with the
/// (T − t)^{α−1}-weighted cost of the alternative law.
pub fn run_regulator(p: &ProblemSpec) -> Result<RegulatorReport> {
    if p.schedule.m() != 0 || !p.memory.is_zero() {
        return Err(Error::config(
            "impulses",
            "the regulator needs a linear problem: no impulses and a zero memory kernel",
        ));
    }
    Ok(RegulatorReport {
        lambda: p.lambda,
        standard: run_law(p, ControlLaw::Standard)?,
        alternative: run_law(p, ControlLaw::Alternative)?,
    })
}
