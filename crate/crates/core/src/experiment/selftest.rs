//! A fast invariant suite run by `fracctrl selftest`: each check is a cheap instance of a
//! property exercised in depth by the test suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::condition::{check_condition, ConditionInputs};
use super::gronwall::{discrete_gronwall_bound, gronwall_recursion};
use crate::control::resolve_matrix;
use crate::error::Result;
use crate::mild::{final_state_identity_check, MildSolver, ProblemSpec};
use crate::phase_space::{segment_bound_check, phase_seminorm};
use crate::special::{mittag_leffler, recip_gamma, subordination_oracle, MLParams, OperatorKind};
use crate::state_space::{Euclidean, GeneratorSpec, LpContext, SolutionOperators, SpectralState};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> SelfCheck {
    SelfCheck { name, passed, detail }
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> SpectralState {
    SpectralState::from_vec((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn special_bridge() -> Result<SelfCheck> {
    let mut worst: f64 = 0.0;
    for &a in &[0.6, 0.8] {
        for &mu in &[0.0, 4.0, 100.0] {
            let ml = mittag_leffler(MLParams::new(a, 1.0)?, -mu)?;
            let sub = subordination_oracle(a, mu, 1.0, OperatorKind::T, 2000)?;
            worst = worst.max((ml - sub).abs());
        }
    }
    Ok(check("subordination matches Mittag-Leffler", worst <= 1e-6, format!("max diff {worst:.2e}")))
}

fn operator_bounds(rng: &mut ChaCha8Rng) -> Result<SelfCheck> {
    let g = GeneratorSpec::heat(8)?;
    let alpha = 0.7;
    let ops = SolutionOperators::new(&g, alpha)?;
    let hat = alpha * recip_gamma(1.0 + alpha);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..20 {
        let s = random_state(rng, 8);
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            worst = worst.max(ops.apply(t, &s, OperatorKind::T).norm() - s.norm());
            worst = worst.max(ops.apply(t, &s, OperatorKind::THat).norm() - hat * s.norm() - 1e-10);
        }
    }
    Ok(check("solution operator bounds", worst <= 0.0, format!("max excess {worst:.2e}")))
}

fn resolvent(rng: &mut ChaCha8Rng) -> Result<SelfCheck> {
    let n = 5;
    let g = GeneratorSpec::heat(n)?;
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for &p in &[2.0, 4.0] {
        let ctx = LpContext::new(p, &g)?;
        for _ in 0..5 {
            let a = nalgebra::DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let phi = &a * a.transpose() * 0.2;
            let h = random_state(rng, n);
            let lambda = 10f64.powf(rng.gen_range(-3.0..0.0));
            let z = resolve_matrix(lambda, &phi, &h, &ctx)?;
            ok &= ctx.norm(&z) <= ctx.norm(&h) * (1.0 + 1e-12);
            let r = crate::control::resolvent_residual(lambda, &phi, &z, &h, &ctx) / (lambda * h.norm());
            worst = worst.max(r);
        }
    }
    Ok(check(
        "resolvent contraction",
        ok && worst <= 1e-8,
        format!("max relative residual {worst:.2e}"),
    ))
}

fn gronwall(rng: &mut ChaCha8Rng) -> Result<SelfCheck> {
    let mut violations = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..12);
        let g: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.5)).collect();
        let f = gronwall_recursion(&g, &w);
        let b = discrete_gronwall_bound(&g, &w)?;
        violations += f.iter().zip(&b).filter(|(f, b)| **f > **b * (1.0 + 1e-12)).count();
    }
    Ok(check("discrete Gronwall bound", violations == 0, format!("{violations} violations")))
}

fn condition() -> Result<SelfCheck> {
    let p = ProblemSpec::desk(8)?;
    let zero = check_condition(&ConditionInputs::from_problem(&p, 0.0)?)?;
    let mut lhs = Vec::new();
    for &l in &[1.0, 0.1, 0.01] {
        lhs.push(check_condition(&ConditionInputs::from_problem(&p.with_lambda(l), 1.0)?)?.lhs);
    }
    let mono = lhs.windows(2).all(|w| w[1] > w[0]);
    Ok(check(
        "condition checker",
        zero.lhs == 0.0 && zero.satisfied && mono,
        format!("beta=0 lhs {}, lhs over lambda {lhs:?}", zero.lhs),
    ))
}

fn desk_solve() -> Result<Vec<SelfCheck>> {
    let p = ProblemSpec::desk(8)?;
    let solver = MildSolver::new(&p)?;
    let sol = solver.solve()?;
    let rep = segment_bound_check(&sol.trajectory, &Euclidean)?;
    let psi = p.initial.history();
    let s1 = phase_seminorm(p.space(), psi, &Euclidean);
    let s2 = phase_seminorm(p.space(), &psi.scaled(-2.5), &Euclidean);
    let homog = (s2 - 2.5 * s1).abs() / s1;
    let mut out = vec![check(
        "segment bound and seminorm homogeneity",
        rep.holds && homog <= 1e-10,
        format!("min slack {:.3e}, homogeneity error {homog:.1e}", rep.min_slack),
    )];
    let zeta = p.targets.last().expect("targets");
    let m = p.schedule.m();
    let e = sol.terminal_error(zeta);
    let pm = sol.controls.offsets[m].offset.norm();
    out.push(check(
        "desk terminal error below offset",
        e <= pm,
        format!("error {e:.4e}, offset {pm:.4e}, {} Picard iterations", sol.iterations),
    ));
    let lin = ProblemSpec::linear(
        4,
        0.8,
        0.1,
        SpectralState::from_vec(vec![1.0, 0.5, -0.3, 0.2]),
        &SpectralState::unit(4, 0) * 0.5,
    )?;
    let ls = MildSolver::new(&lin)?;
    let lsol = ls.solve()?;
    let r = final_state_identity_check(&ls, &lsol)?;
    let pn = lsol.controls.offsets[0].offset.norm();
    out.push(check(
        "linear terminal identity",
        r <= 1e-6 * (1.0 + pn),
        format!("residual {r:.2e}"),
    ));
    Ok(out)
}

/// Runs every check; an `Err` means a check could not be evaluated at all.
pub fn run_selftest() -> Result<Vec<SelfCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = vec![
        special_bridge()?,
        operator_bounds(&mut rng)?,
        resolvent(&mut rng)?,
        gronwall(&mut rng)?,
        condition()?,
    ];
    out.extend(desk_solve()?);
    Ok(out)
}
