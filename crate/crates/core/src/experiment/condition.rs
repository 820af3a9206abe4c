use serde::Serialize;

use super::gronwall::chained_constants;
use crate::error::{Error, Result};
use crate::mild::{impulse_bound, ProblemSpec};
use crate::special::gamma;
use crate::state_space::LpContext;

/// Constants entering the sufficient condition for existence of a mild solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionInputs {
    pub m_bound: f64,
    pub m_tilde: f64,
    pub alpha: f64,
    pub alpha1: f64,
    pub horizon: f64,
    pub m: usize,
    pub lambda: f64,
    pub beta: f64,
    pub h2: f64,
    /// l_1..l_m.
    pub impulse_bounds: Vec<f64>,
    /// ‖ζ_0‖..‖ζ_m‖.
    pub target_norms: Vec<f64>,
    pub psi0_norm: f64,
    pub gamma_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub lhs: f64,
    pub satisfied: bool,
    pub r_tilde: f64,
    pub mu: f64,
    pub n: Vec<f64>,
    pub c: Vec<f64>,
}

impl ConditionInputs {
    /// Constants of a problem instance for growth constant β.
    pub fn from_problem(p: &ProblemSpec, beta: f64) -> Result<Self> {
        let ctx = LpContext::new(p.p(), &p.generator)?;
        let m = p.schedule.m();
        Ok(Self {
            m_bound: p.generator.semigroup_bound(),
            m_tilde: p.control.norm(),
            alpha: p.alpha,
            alpha1: p.alpha1,
            horizon: p.horizon(),
            m,
            lambda: p.lambda,
            beta,
            h2: p.space().h2(p.horizon()),
            impulse_bounds: (1..=m).map(|k| impulse_bound(p, k, &ctx)).collect(),
            target_norms: p.targets.iter().map(|z| ctx.norm(z)).collect(),
            psi0_norm: ctx.norm(p.initial.psi0()),
            gamma_norm: p.gamma_norm,
        })
    }

    fn validate(&self) -> Result<()> {
        let scalars = [
            ("M", self.m_bound),
            ("M_tilde", self.m_tilde),
            ("T", self.horizon),
            ("lambda", self.lambda),
            ("beta", self.beta),
            ("H2", self.h2),
            ("psi0_norm", self.psi0_norm),
            ("gamma_norm", self.gamma_norm),
        ];
        for (name, v) in scalars {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config(name, "must be finite and nonnegative"));
            }
        }
        if !(self.lambda > 0.0) {
            return Err(Error::config("lambda", "must be positive"));
        }
        if !(self.alpha > 0.5 && self.alpha < 1.0) {
            return Err(Error::config("alpha", "must lie in (1/2, 1)"));
        }
        if self.alpha1 >= self.alpha || self.alpha1 < 0.0 {
            return Err(Error::domain("alpha1 must lie in [0, alpha) so that mu > 0"));
        }
        if self.impulse_bounds.len() != self.m || self.target_norms.len() != self.m + 1 {
            return Err(Error::config("impulses", "need m impulse bounds and m + 1 target norms"));
        }
        if self.impulse_bounds.iter().chain(&self.target_norms).any(|v| !(*v >= 0.0)) {
            return Err(Error::config("targets", "norms and bounds must be nonnegative"));
        }
        Ok(())
    }
}

/// Evaluates μ, R̃, N_k, C_k and the left side of the sufficient condition (satisfied iff < 1).
pub fn check_condition(ci: &ConditionInputs) -> Result<ConditionReport> {
    ci.validate()?;
    let a = ci.alpha;
    let a1 = ci.alpha1;
    let t = ci.horizon;
    let g1 = gamma(1.0 + a)?;
    let mu = (a - a1) / (1.0 - a1);
    let r_tilde = (ci.m_bound * ci.m_tilde * a / g1).powi(2) * 2.0 * t.powf(2.0 * a - 1.0) / (ci.lambda * (2.0 * a - 1.0));
    let holder = 2.0 * t.powf(a - a1) / mu.powf(1.0 - a1);
    let gamma_term = ci.m_bound * a / g1 * holder * ci.gamma_norm;
    let mut n = vec![ci.target_norms[0] + ci.m_bound * ci.psi0_norm + gamma_term];
    for k in 1..=ci.m {
        n.push(ci.target_norms[k] + ci.m_bound * ci.impulse_bounds[k - 1] + gamma_term);
    }
    let c = chained_constants(&n, r_tilde);
    let m = ci.m as f64;
    let tail: f64 = (0..ci.m)
        .map(|j| (((ci.m + j) * (ci.m - j - 1)) as f64 * r_tilde / 2.0).exp())
        .sum();
    let bracket = 1.0 + (m + 1.0) * (m + 2.0) * r_tilde / 2.0 + m * (m + 1.0) * r_tilde * r_tilde / 2.0 * tail;
    let prefactor = ci.m_bound * ci.h2 * a * ci.beta / g1 * holder;
    // a vanishing prefactor wins over an overflowing bracket
    let lhs = if prefactor == 0.0 { 0.0 } else { prefactor * bracket };
    Ok(ConditionReport {
        lhs,
        satisfied: lhs < 1.0,
        r_tilde,
        mu,
        n,
        c,
    })
}
