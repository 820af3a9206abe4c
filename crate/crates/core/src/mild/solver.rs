use nalgebra::DMatrix;
use rayon::prelude::*;

use super::convolution::ProductWeights;
use super::problem::ProblemSpec;
use super::terms::{ImpulseOperator, MemoryPath};
use crate::control::{
    assemble_gramian, resolve, ControlLaw, ControlOperator, GramianBlock, IntervalControl, PairQuadrature, PairSide,
};
use crate::error::{Error, Result};
use crate::phase_space::Trajectory;
use crate::special::{MLParams, MittagLeffler};
use crate::state_space::{LpContext, OperatorKind, SolutionOperators, SpectralState};

/// Offset p_k together with the target it was formed from.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalOffset {
    pub k: usize,
    pub offset: SpectralState,
    pub target: SpectralState,
}

/// The piecewise feedback control u_λ, zero outside ∪[τ_k, t_{k+1}).
#[derive(Debug, Clone, PartialEq)]
pub struct ControlProfile {
    pub law: ControlLaw,
    pub intervals: Vec<IntervalControl>,
    pub offsets: Vec<IntervalOffset>,
    /// ∫‖u‖² per interval.
    pub energies: Vec<f64>,
    /// ∫ w‖u‖² per interval, w ≡ 1 (standard law) or (t_{k+1} − t)^{α−1} (alternative law).
    pub weighted_energies: Vec<f64>,
}

impl ControlProfile {
    pub fn value(&self, t: f64, ops: &SolutionOperators, b: &ControlOperator) -> SpectralState {
        self.intervals
            .iter()
            .find(|c| t >= c.start && t < c.end)
            .map(|c| c.value(t, ops, b))
            .unwrap_or_else(|| SpectralState::zeros(b.n_modes()))
    }

    pub fn energy(&self) -> f64 {
        self.energies.iter().sum()
    }

    pub fn weighted_energy(&self) -> f64 {
        self.weighted_energies.iter().sum()
    }
}

/// Converged Picard iterate.
#[derive(Debug, Clone)]
pub struct MildSolution {
    pub trajectory: Trajectory,
    pub controls: ControlProfile,
    pub iterations: usize,
    /// Sup-norm change per sweep.
    pub history: Vec<f64>,
    pub lambda: f64,
}

impl MildSolution {
    pub fn terminal_state(&self) -> &SpectralState {
        self.trajectory.state(self.trajectory.times().len() - 1)
    }

    pub fn terminal_error(&self, target: &SpectralState) -> f64 {
        (self.terminal_state() - target).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Flow,
    Impulse(usize),
    Post(usize),
}

/// Precomputed grid, product weights, Gramians and control convolution matrices for one
/// problem; everything here is independent of λ, so sweeps share one instance.
#[derive(Debug, Clone)]
pub struct MildSolver {
    spec: ProblemSpec,
    ops: SolutionOperators,
    ctx: LpContext,
    times: Vec<f64>,
    /// Node of t_k, k = 1..=m+1 (entry 0 unused).
    onset_idx: Vec<usize>,
    /// Node of τ_k, k = 0..=m.
    release_idx: Vec<usize>,
    branches: Vec<Branch>,
    weights: ProductWeights,
    gramians: Vec<GramianBlock>,
    energy: Vec<DMatrix<f64>>,
    /// `conv[j][i − release_idx[j] − 1]` maps v_j to the control convolution at node i.
    conv: Vec<Vec<DMatrix<f64>>>,
    /// `impulse_ops[k − 1][i − onset_idx[k]]` for nodes t_k..=τ_k.
    impulse_ops: Vec<Vec<ImpulseOperator>>,
}

/// Smallest step count in [requested, 4·requested] putting every breakpoint on a node.
pub fn aligned_steps(breakpoints: &[f64], horizon: f64, requested: usize) -> Result<usize> {
    'outer: for n in requested..=4 * requested {
        for &b in breakpoints {
            let x = b / horizon * n as f64;
            if (x - x.round()).abs() > 1e-9 * n as f64 {
                continue 'outer;
            }
        }
        return Ok(n);
    }
    Err(Error::Grid(format!(
        "no uniform grid with {requested}..={} steps contains the impulse times",
        4 * requested
    )))
}

impl MildSolver {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        spec.validate()?;
        let sch = &spec.schedule;
        let horizon = sch.horizon();
        let m = sch.m();
        let steps = aligned_steps(&sch.breakpoints(), horizon, spec.steps)?;
        let h = horizon / steps as f64;
        let mut times: Vec<f64> = (0..=steps).map(|i| horizon * i as f64 / steps as f64).collect();
        let idx = |t: f64| (t / horizon * steps as f64).round() as usize;
        let mut onset_idx = vec![0];
        for k in 1..=m + 1 {
            let i = idx(sch.onset(k));
            times[i] = sch.onset(k);
            onset_idx.push(i);
        }
        let mut release_idx = Vec::new();
        for k in 0..=m {
            let i = idx(sch.release(k));
            times[i] = sch.release(k);
            release_idx.push(i);
        }
        let mut branches = vec![Branch::Flow; steps + 1];
        for k in 1..=m {
            for b in branches.iter_mut().take(release_idx[k] + 1).skip(onset_idx[k] + 1) {
                *b = Branch::Impulse(k);
            }
            for b in branches.iter_mut().take(onset_idx[k + 1] + 1).skip(release_idx[k] + 1) {
                *b = Branch::Post(k);
            }
        }

        let g = &spec.generator;
        let alpha = spec.alpha;
        let ops = SolutionOperators::new(g, alpha)?;
        let ctx = LpContext::new(spec.p(), g)?;
        let weights = ProductWeights::new(&ops, h, steps);
        let gramians = (0..=m)
            .into_par_iter()
            .map(|k| {
                let mut blk = assemble_gramian(g, &spec.control, alpha, sch.control_interval(k), spec.law, spec.tolerances.gramian)?;
                blk.index = k;
                Ok(blk)
            })
            .collect::<Result<Vec<_>>>()?;

        let ml = MittagLeffler::new(MLParams::new(alpha, alpha)?)?;
        let pq = PairQuadrature::new(alpha);
        let bb = spec.control.gram();
        let lam = g.eigenvalues();
        let ac = spec.law.control_exponent(alpha);
        let side = |e| PairSide {
            eigenvalues: lam,
            exponent: e,
        };
        let energy = gramians
            .iter()
            .map(|blk| match spec.law {
                ControlLaw::Standard => blk.matrix.clone(),
                ControlLaw::Alternative => {
                    let (a, b) = blk.interval;
                    let (mat, _) = pq.integrate(&ml, side(0.0), side(0.0), b - a, 0.0, blk.quadrature.refine);
                    mat.component_mul(&bb)
                }
            })
            .collect();
        let conv = (0..=m)
            .map(|j| {
                let blk = &gramians[j];
                let (a, b) = blk.interval;
                let (r, e) = (release_idx[j], onset_idx[j + 1]);
                let refine = blk.quadrature.refine;
                (r + 1..=steps)
                    .into_par_iter()
                    .map(|i| {
                        let t = times[i];
                        let k = if i == e {
                            return blk.matrix.clone();
                        } else if i < e {
                            pq.integrate(&ml, side(alpha - 1.0), side(ac), t - a, b - t, refine).0
                        } else {
                            pq.integrate(&ml, side(ac), side(alpha - 1.0), b - a, t - b, refine).0.transpose()
                        };
                        k.component_mul(&bb)
                    })
                    .collect()
            })
            .collect();
        let impulse_ops = (1..=m)
            .map(|k| {
                (onset_idx[k]..=release_idx[k])
                    .into_par_iter()
                    .map(|i| ImpulseOperator::new(&spec.impulses[k - 1], times[i], &ctx))
                    .collect()
            })
            .collect();
        Ok(Self {
            spec: spec.clone(),
            ops,
            ctx,
            times,
            onset_idx,
            release_idx,
            branches,
            weights,
            gramians,
            energy,
            conv,
            impulse_ops,
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn operators(&self) -> &SolutionOperators {
        &self.ops
    }

    pub fn context(&self) -> &LpContext {
        &self.ctx
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn step(&self) -> f64 {
        self.weights.step()
    }

    pub fn gramians(&self) -> &[GramianBlock] {
        &self.gramians
    }

    /// Node index of t_k, k = 1..=m+1.
    pub fn onset_index(&self, k: usize) -> usize {
        self.onset_idx[k]
    }

    /// Node index of τ_k, k = 0..=m.
    pub fn release_index(&self, k: usize) -> usize {
        self.release_idx[k]
    }

    /// x(t) = T_α(t)ψ(0) on the grid: the uncontrolled, memoryless flow used to start Picard.
    pub fn initial_guess(&self) -> Result<Trajectory> {
        let psi0 = self.spec.initial.psi0();
        let states = self.times.iter().map(|&t| self.ops.apply(t, psi0, OperatorKind::T)).collect();
        Trajectory::new(self.spec.initial.clone(), self.times.clone(), states, Vec::new())
    }

    /// f(t_i, x̃_{ρ(t_i, x_{t_i})}) at every node.
    pub fn nonlinearity_samples(&self, tr: &Trajectory) -> Result<Vec<SpectralState>> {
        let n = self.spec.n_modes();
        let Some(path) = MemoryPath::new(&self.spec.memory, tr) else {
            return Ok(vec![SpectralState::zeros(n); self.times.len()]);
        };
        let tm = self.spec.space().theta_max();
        (0..self.times.len())
            .into_par_iter()
            .map(|i| {
                let rho = self.spec.delay.rho(self.times[i], self.ctx.norm(tr.state(i)));
                if rho < -tm {
                    return Err(Error::config("delay", format!("delayed time {rho} precedes the history support")));
                }
                Ok(path.at(rho))
            })
            .collect()
    }

    fn impulse_values(&self, tr: &Trajectory) -> Vec<Vec<SpectralState>> {
        (1..=self.spec.schedule.m())
            .map(|k| {
                let left = tr.state(self.onset_idx[k]);
                self.impulse_ops[k - 1].iter().map(|op| op.apply(left, &self.ctx)).collect()
            })
            .collect()
    }

    fn check_grid(&self, tr: &Trajectory) -> Result<()> {
        if tr.times().len() != self.times.len() || tr.times().iter().zip(&self.times).any(|(a, b)| (a - b).abs() > 1e-12) {
            return Err(Error::Grid("trajectory grid differs from the solver grid".into()));
        }
        if tr.n_modes() != self.spec.n_modes() {
            return Err(Error::Grid("trajectory dimension differs from the problem".into()));
        }
        Ok(())
    }

    /// Offsets p_k and controls for the trajectory `tr`, computed in interval order.
    pub fn compute_offsets(&self, tr: &Trajectory, lambda: f64) -> Result<ControlProfile> {
        self.check_grid(tr)?;
        let g = self.nonlinearity_samples(tr)?;
        let f = self.weights.convolve_all(&g);
        let imp = self.impulse_values(tr);
        Ok(self.controls(&f, &imp, lambda)?.0)
    }

    fn controls(
        &self,
        f: &[SpectralState],
        imp: &[Vec<SpectralState>],
        lambda: f64,
    ) -> Result<(ControlProfile, Vec<SpectralState>)> {
        let n = self.spec.n_modes();
        let steps = self.times.len() - 1;
        let mut u = vec![SpectralState::zeros(n); steps + 1];
        let psi0 = self.spec.initial.psi0();
        let mut intervals = Vec::new();
        let mut offsets = Vec::new();
        let mut energies = Vec::new();
        let mut weighted = Vec::new();
        for k in 0..=self.spec.schedule.m() {
            let (r, e) = (self.release_idx[k], self.onset_idx[k + 1]);
            let mut base = &f[e] + &u[e];
            if k == 0 {
                base += &self.ops.apply(self.times[e], psi0, OperatorKind::T);
            } else {
                let hk = &imp[k - 1][r - self.onset_idx[k]];
                base += &self.ops.apply(self.times[e] - self.times[r], hk, OperatorKind::T);
                base -= &f[r];
                base -= &u[r];
            }
            let target = &self.spec.targets[k];
            let p = target - &base;
            let blk = &self.gramians[k];
            let z = resolve(lambda, blk, &p, &self.ctx)?;
            let v = &self.ctx.duality(&z) * (1.0 / lambda);
            for (i, q) in (r + 1..=steps).zip(&self.conv[k]) {
                u[i] += &SpectralState::from_vector(q * v.vector());
            }
            energies.push(v.vector().dot(&(&self.energy[k] * v.vector())));
            weighted.push(v.vector().dot(&(&blk.matrix * v.vector())));
            offsets.push(IntervalOffset {
                k,
                offset: p.clone(),
                target: target.clone(),
            });
            intervals.push(IntervalControl {
                k,
                start: blk.interval.0,
                end: blk.interval.1,
                law: self.spec.law,
                v,
                offset: p,
                z,
            });
        }
        Ok((
            ControlProfile {
                law: self.spec.law,
                intervals,
                offsets,
                energies,
                weighted_energies: weighted,
            },
            u,
        ))
    }

    /// One application of F_λ: controls from `tr`, then the three-branch mild formula.
    pub fn apply(&self, tr: &Trajectory, lambda: f64) -> Result<(Trajectory, ControlProfile)> {
        self.check_grid(tr)?;
        let g = self.nonlinearity_samples(tr)?;
        let f = self.weights.convolve_all(&g);
        let imp = self.impulse_values(tr);
        let (profile, u) = self.controls(&f, &imp, lambda)?;
        let psi0 = self.spec.initial.psi0();
        let states = (0..self.times.len())
            .map(|i| match self.branches[i] {
                Branch::Flow => {
                    let mut x = self.ops.apply(self.times[i], psi0, OperatorKind::T);
                    x += &f[i];
                    x += &u[i];
                    x
                }
                Branch::Impulse(k) => imp[k - 1][i - self.onset_idx[k]].clone(),
                Branch::Post(k) => {
                    let r = self.release_idx[k];
                    let hk = &imp[k - 1][r - self.onset_idx[k]];
                    let mut x = self.ops.apply(self.times[i] - self.times[r], hk, OperatorKind::T);
                    x -= &f[r];
                    x -= &u[r];
                    x += &f[i];
                    x += &u[i];
                    x
                }
            })
            .collect();
        let jumps = (1..=self.spec.schedule.m()).map(|k| (self.onset_idx[k], imp[k - 1][0].clone())).collect();
        let next = Trajectory::new(self.spec.initial.clone(), self.times.clone(), states, jumps)?;
        Ok((next, profile))
    }

    pub fn solve(&self) -> Result<MildSolution> {
        self.solve_lambda(self.spec.lambda)
    }

    /// Picard iteration x ← F_λ(x) from the free flow until the sup-norm change drops below
    /// the fixed-point tolerance.
    pub fn solve_lambda(&self, lambda: f64) -> Result<MildSolution> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::config("lambda", format!("must be positive, got {lambda}")));
        }
        let tol = self.spec.tolerances;
        let mut cur = self.initial_guess()?;
        let mut history = Vec::new();
        for it in 1..=tol.max_iterations {
            let (next, controls) = self.apply(&cur, lambda)?;
            let diff = next.max_distance(&cur);
            history.push(diff);
            if !diff.is_finite() {
                break;
            }
            if diff < tol.fixed_point {
                return Ok(MildSolution {
                    trajectory: next,
                    controls,
                    iterations: it,
                    history,
                    lambda,
                });
            }
            cur = next;
        }
        Err(Error::NonConvergence {
            what: "Picard iteration".into(),
            iterations: history.len(),
            last: history.last().copied().unwrap_or(f64::NAN),
            history,
        })
    }
}
