use super::solver::{MildSolution, MildSolver};
use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::special::{recip_gamma, MLParams, MittagLeffler};
use crate::state_space::{OperatorKind, SpectralState};

/// L1-scheme Caputo derivative of uniformly sampled data at nodes 1..len.
pub fn caputo_l1(alpha: f64, h: f64, samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let b: Vec<f64> = (0..n).map(|l| ((l + 1) as f64).powf(1.0 - alpha) - (l as f64).powf(1.0 - alpha)).collect();
    let scale = h.powf(-alpha) * recip_gamma(2.0 - alpha);
    (1..n)
        .map(|i| {
            let s: f64 = (0..i).map(|j| b[i - 1 - j] * (samples[j + 1] - samples[j])).sum();
            scale * s
        })
        .collect()
}

/// max over interior nodes of the first flow interval of ‖D^α x − (Ax + Bu + f)‖, with the
/// outer tenth at each end excluded.
pub fn caputo_residual(solver: &MildSolver, sol: &MildSolution) -> Result<f64> {
    let spec = solver.spec();
    let tr = &sol.trajectory;
    let e = solver.onset_index(1);
    let (lo, hi) = ((e as f64 * 0.1).ceil() as usize, (e as f64 * 0.9).floor() as usize);
    if lo < 1 || hi <= lo {
        return Err(Error::Grid("first flow interval holds too few nodes".into()));
    }
    let g = solver.nonlinearity_samples(tr)?;
    let lam = spec.generator.eigenvalues();
    let n = spec.n_modes();
    let mut derivs = Vec::with_capacity(n);
    for k in 0..n {
        let xs: Vec<f64> = (0..=hi).map(|i| tr.state(i)[k]).collect();
        derivs.push(caputo_l1(spec.alpha, solver.step(), &xs));
    }
    let mut worst: f64 = 0.0;
    for i in lo..=hi {
        let t = solver.times()[i];
        let bu = spec.control.apply(&sol.controls.value(t, solver.operators(), &spec.control));
        let x = tr.state(i);
        let r: f64 = (0..n)
            .map(|k| (derivs[k][i - 1] - lam[k] * x[k] - bu[k] - g[i][k]).powi(2))
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// x(T) for a problem without impulses or memory, with the control convolution evaluated by
/// adaptive quadrature mode by mode rather than through the solver's kernel matrices.
pub fn terminal_state_by_quadrature(solver: &MildSolver, sol: &MildSolution) -> Result<SpectralState> {
    let spec = solver.spec();
    if spec.schedule.m() != 0 || !spec.memory.is_zero() {
        return Err(Error::domain("terminal quadrature needs a problem without impulses or memory"));
    }
    let alpha = spec.alpha;
    let horizon = spec.horizon();
    let ml = MittagLeffler::new(MLParams::new(alpha, alpha)?)?;
    let lam = spec.generator.eigenvalues();
    let bb = spec.control.gram();
    let ctl = &sol.controls.intervals[0];
    let v = ctl.v.coeffs();
    // w = T − s = y^q removes the endpoint singularity w^{α−1+a_c}.
    let q = 1.0 / (alpha + spec.law.control_exponent(alpha));
    let ymax = horizon.powf(1.0 / q);
    let mut breaks: Vec<f64> = (0..40).map(|j| ymax * 0.5f64.powi(40 - j)).collect();
    breaks.insert(0, 0.0);
    breaks.push(ymax);
    let n = lam.len();
    let mut out = solver.operators().apply(horizon, spec.initial.psi0(), OperatorKind::T);
    for i in 0..n {
        let mut f = |y: f64| {
            let wa = y.powf(q * alpha);
            let inner: f64 = (0..n).map(|j| bb[(i, j)] * ml.eval(lam[j] * wa) * v[j]).sum();
            q * ml.eval(lam[i] * wa) * inner
        };
        let est = integrate_with_breaks(&mut f, &breaks, QuadOptions::new(1e-13, 1e-12).with_budget(4000))?;
        out[i] += est.value;
    }
    Ok(out)
}

/// ‖x(T) − x_T + λR(λ, Φ)p‖ for a linear problem, with x(T) from independent quadrature.
pub fn final_state_identity_check(solver: &MildSolver, sol: &MildSolution) -> Result<f64> {
    let xt = terminal_state_by_quadrature(solver, sol)?;
    let ctl = &sol.controls.intervals[0];
    let target = &solver.spec().targets[0];
    Ok((&(&xt - target) + &ctl.z).norm())
}
