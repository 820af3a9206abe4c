//! The delayed memory term f and the impulse maps h_k.

use nalgebra::DMatrix;

use super::problem::{ImpulseKernel, MemoryKernel, ProblemSpec};
use crate::error::{Error, Result};
use crate::phase_space::{exp_panel_weights, History, Trajectory};
use crate::state_space::{LpContext, SpectralState};

/// f(φ) = ∫_{−θ_max}^0 b(−θ) φ(θ) dθ mode by mode, with φ piecewise linear between its nodes.
pub fn memory_term(memory: &MemoryKernel, hist: &History) -> SpectralState {
    let n = hist.n_modes();
    let (amp, rate) = match *memory {
        MemoryKernel::Zero => return SpectralState::zeros(n),
        MemoryKernel::Exponential { amplitude, rate } => (amplitude, rate),
    };
    let mut out = SpectralState::zeros(n);
    let (nodes, values) = (hist.nodes(), hist.values());
    for i in 0..nodes.len().saturating_sub(1) {
        let (wa, wb) = exp_panel_weights(rate, nodes[i], nodes[i + 1]);
        if wa == 0.0 && wb == 0.0 {
            continue;
        }
        out.axpy(amp * wa, &values[i]);
        out.axpy(amp * wb, &values[i + 1]);
    }
    out
}

/// f(s, x̃_{ρ(s, x_s)}) for a history produced by `delayed_state`.
pub fn nonlinearity_f(p: &ProblemSpec, hist: &History) -> SpectralState {
    memory_term(&p.memory, hist)
}

/// Running moments P(y) = ∫_{−θ_max}^y e^{κσ} X(σ) dσ of the path X that concatenates ψ and a
/// trajectory, so that every delayed memory integral costs one lookup.
pub(crate) struct MemoryPath {
    amp: f64,
    rate: f64,
    theta_max: f64,
    starts: Vec<f64>,
    ends: Vec<f64>,
    left: Vec<SpectralState>,
    right: Vec<SpectralState>,
    cumulative: Vec<SpectralState>,
}

impl MemoryPath {
    pub(crate) fn new(memory: &MemoryKernel, tr: &Trajectory) -> Option<Self> {
        let (amp, rate) = match *memory {
            MemoryKernel::Zero => return None,
            MemoryKernel::Exponential { amplitude, rate } => (amplitude, rate),
        };
        let psi = tr.initial().history();
        let n = tr.n_modes();
        let mut starts = Vec::new();
        let mut ends = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        let (pn, pv) = (psi.nodes(), psi.values());
        for i in 0..pn.len() - 1 {
            if pn[i + 1] > pn[i] {
                starts.push(pn[i]);
                ends.push(pn[i + 1]);
                left.push(pv[i].clone());
                right.push(pv[i + 1].clone());
            }
        }
        let times = tr.times();
        for i in 0..times.len() - 1 {
            starts.push(times[i]);
            ends.push(times[i + 1]);
            left.push(tr.right_state(i).clone());
            right.push(tr.state(i + 1).clone());
        }
        let mut cumulative = Vec::with_capacity(starts.len() + 1);
        let mut acc = SpectralState::zeros(n);
        cumulative.push(acc.clone());
        for k in 0..starts.len() {
            let (wa, wb) = exp_panel_weights(rate, starts[k], ends[k]);
            acc.axpy(wa, &left[k]);
            acc.axpy(wb, &right[k]);
            cumulative.push(acc.clone());
        }
        Some(Self {
            amp,
            rate,
            theta_max: psi.nodes()[0].abs(),
            starts,
            ends,
            left,
            right,
            cumulative,
        })
    }

    fn moment(&self, y: f64) -> SpectralState {
        if y <= self.starts[0] {
            return &self.cumulative[0] * 0.0;
        }
        let k = self.ends.partition_point(|&e| e < y).min(self.starts.len() - 1);
        let (a, b) = (self.starts[k], self.ends[k]);
        let mut out = self.cumulative[k].clone();
        let y = y.min(b);
        if y > a {
            let c = (y - a) / (b - a);
            let mut xy = &self.left[k] * (1.0 - c);
            xy.axpy(c, &self.right[k]);
            let (wa, wb) = exp_panel_weights(self.rate, a, y);
            out.axpy(wa, &self.left[k]);
            out.axpy(wb, &xy);
        }
        out
    }

    /// f at the delayed time ρ.
    pub(crate) fn at(&self, rho: f64) -> SpectralState {
        let lo = (rho - self.theta_max).max(-self.theta_max);
        let d = &self.moment(rho) - &self.moment(lo);
        &d * (self.amp * (-self.rate * rho).exp())
    }
}

/// Grid form of h_k(t, ·): coefficients = W · cos²(x(z_j)) with
/// W[n][j] = ω_j Σ_i ω_i w_n(ξ_i) ρ(t, ξ_i, z_j).
#[derive(Debug, Clone)]
pub(crate) struct ImpulseOperator {
    matrix: DMatrix<f64>,
}

impl ImpulseOperator {
    pub(crate) fn new(kernel: &ImpulseKernel, t: f64, ctx: &LpContext) -> Self {
        let xs = ctx.nodes();
        let ws = ctx.weights();
        let n = ctx.n_modes();
        let basis: Vec<Vec<f64>> = (0..n).map(|k| ctx.eval_grid(&SpectralState::unit(n, k))).collect();
        let g = xs.len();
        let mut matrix = DMatrix::zeros(n, g);
        for j in 0..g {
            for i in 0..g {
                let r = kernel.eval(t, xs[i], xs[j]) * ws[i] * ws[j];
                if r == 0.0 {
                    continue;
                }
                for k in 0..n {
                    matrix[(k, j)] += basis[k][i] * r;
                }
            }
        }
        Self { matrix }
    }

    pub(crate) fn apply(&self, x_left: &SpectralState, ctx: &LpContext) -> SpectralState {
        let c: Vec<f64> = ctx.eval_grid(x_left).iter().map(|v| v.cos().powi(2)).collect();
        SpectralState::from_vector(&self.matrix * nalgebra::DVector::from_vec(c))
    }
}

/// h_k(t, x(t_k⁻)) projected to the eigenbasis.
pub fn impulse_eval(p: &ProblemSpec, k: usize, t: f64, x_left: &SpectralState) -> Result<SpectralState> {
    let m = p.schedule.m();
    if k == 0 || k > m {
        return Err(Error::domain(format!("impulse index {k} outside 1..={m}")));
    }
    let (tk, tau) = (p.schedule.onset(k), p.schedule.release(k));
    if !(t >= tk && t <= tau) {
        return Err(Error::domain(format!("impulse time {t} outside [{tk}, {tau}]")));
    }
    let ctx = LpContext::new(p.p(), &p.generator)?;
    Ok(ImpulseOperator::new(&p.impulses[k - 1], t, &ctx).apply(x_left, &ctx))
}

/// l_k = π^{1+1/p} sup|ρ_k| over sampled times and the spatial grid: a bound on ‖h_k‖ in L^p.
pub fn impulse_bound(p: &ProblemSpec, k: usize, ctx: &LpContext) -> f64 {
    let (tk, tau) = (p.schedule.onset(k), p.schedule.release(k));
    let xs = ctx.nodes();
    let kern = &p.impulses[k - 1];
    let mut sup: f64 = 0.0;
    for s in 0..=4 {
        let t = tk + (tau - tk) * s as f64 / 4.0;
        for &a in xs {
            for &b in xs {
                sup = sup.max(kern.eval(t, a, b).abs());
            }
        }
    }
    std::f64::consts::PI.powf(1.0 + 1.0 / ctx.p()) * sup
}
