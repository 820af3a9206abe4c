//! Histories on [−θ_max, 0], the PC_r × L^p_h seminorm with h(θ) = e^{νθ}, trajectory
//! segments x_t, state-dependent delays and the constants bounding ‖x_t‖ by the history
//! and the running sup of the trajectory.
//!
//! All integrals act on piecewise-linear interpolants of node values and are evaluated
//! exactly, so the discrete seminorm inherits the inequalities of the continuous one.

use crate::error::{Error, Result};
use crate::state_space::{SpectralState, StateNorm};

/// Weight h(θ) = e^{νθ}, cutoff r and exponent p of the phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpace {
    nu: f64,
    r: f64,
    p: f64,
    theta_max: f64,
}

impl PhaseSpace {
    pub fn new(nu: f64, r: f64, p: f64, theta_max: f64) -> Result<Self> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::config("phase.nu", "decay rate must be positive"));
        }
        if !(theta_max > 0.0) || !theta_max.is_finite() {
            return Err(Error::config("grid.theta_max", "history length must be positive"));
        }
        if !(r >= 0.0 && r <= theta_max) {
            return Err(Error::config("phase.r", "cutoff must lie in [0, theta_max]"));
        }
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::config("phase.p", "exponent must be at least 1"));
        }
        Ok(Self { nu, r, p, theta_max })
    }

    /// Truncation length with e^{−ν θ_max} < 1e-12.
    pub fn default_theta_max(nu: f64) -> f64 {
        (12.0 * std::f64::consts::LN_10 / nu * 1e3).ceil() / 1e3
    }

    pub fn with_default_length(nu: f64) -> Result<Self> {
        Self::new(nu, 0.0, 1.0, Self::default_theta_max(nu))
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn weight(&self, theta: f64) -> f64 {
        (self.nu * theta).exp()
    }

    /// Λ(t) = ∫_{−t}^0 h(θ) dθ.
    pub fn lambda(&self, t: f64) -> f64 {
        -(-self.nu * t.min(self.theta_max)).exp_m1() / self.nu
    }

    /// H₂ = sup_{t ≤ T} Λ(t)^{1/p}.
    pub fn h2(&self, horizon: f64) -> f64 {
        self.lambda(horizon).powf(1.0 / self.p)
    }
}

/// Piecewise-linear path θ ↦ ψ(θ); a repeated node marks a jump (left value first).
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    nodes: Vec<f64>,
    values: Vec<SpectralState>,
}

impl History {
    pub fn new(nodes: Vec<f64>, values: Vec<SpectralState>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != values.len() {
            return Err(Error::domain("history needs matching, non-empty nodes and values"));
        }
        if nodes.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::domain("history nodes must be sorted"));
        }
        if nodes.windows(3).any(|w| w[0] == w[2]) {
            return Err(Error::domain("history node repeated more than twice"));
        }
        let n = values[0].len();
        if values.iter().any(|v| v.len() != n) {
            return Err(Error::domain("history values have inconsistent dimensions"));
        }
        Ok(Self { nodes, values })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[SpectralState] {
        &self.values
    }

    pub fn n_modes(&self) -> usize {
        self.values[0].len()
    }

    /// ψ(0), the last stored value.
    pub fn head(&self) -> &SpectralState {
        self.values.last().expect("history is non-empty")
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Left-continuous evaluation; zero outside the node range.
    pub fn at(&self, theta: f64) -> SpectralState {
        let n = self.nodes.len();
        if theta < self.nodes[0] || theta > self.nodes[n - 1] {
            return SpectralState::zeros(self.n_modes());
        }
        let i = self.nodes.partition_point(|&x| x < theta);
        if self.nodes[i] == theta {
            return self.values[i].clone();
        }
        let (a, b) = (self.nodes[i - 1], self.nodes[i]);
        let c = (theta - a) / (b - a);
        let mut v = &self.values[i - 1] * (1.0 - c);
        v.axpy(c, &self.values[i]);
        v
    }
}

/// ψ sampled on a uniform grid over [−θ_max, 0] together with its phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialHistory {
    space: PhaseSpace,
    history: History,
}

impl InitialHistory {
    pub fn new(space: PhaseSpace, history: History) -> Result<Self> {
        let nodes = history.nodes();
        if (nodes[0] + space.theta_max()).abs() > 1e-12 * space.theta_max() || nodes[nodes.len() - 1] != 0.0 {
            return Err(Error::config("psi", "history samples must span [-theta_max, 0]"));
        }
        if !history.head().is_finite() {
            return Err(Error::config("psi", "psi(0) must be finite"));
        }
        Ok(Self { space, history })
    }

    /// Samples `f` at `intervals + 1` uniform nodes.
    pub fn sample<F: Fn(f64) -> SpectralState>(space: PhaseSpace, intervals: usize, f: F) -> Result<Self> {
        if intervals == 0 {
            return Err(Error::config("grid.history_nodes", "at least one history interval required"));
        }
        let tm = space.theta_max();
        let nodes: Vec<f64> = (0..=intervals)
            .map(|j| if j == intervals { 0.0 } else { -tm + tm * j as f64 / intervals as f64 })
            .collect();
        let values = nodes.iter().map(|&t| f(t)).collect();
        Self::new(space, History::new(nodes, values)?)
    }

    pub fn constant(space: PhaseSpace, intervals: usize, state: SpectralState) -> Result<Self> {
        Self::sample(space, intervals, |_| state.clone())
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    pub fn psi0(&self) -> &SpectralState {
        self.history.head()
    }

    /// ψ_ρ(θ) = ψ(ρ + θ) for ρ ≤ 0, zero where ρ + θ < −θ_max.
    pub fn shifted(&self, rho: f64) -> Result<History> {
        let tm = self.space.theta_max();
        if rho < -tm {
            return Err(Error::config("delay", format!("delayed time {rho} precedes the history support")));
        }
        if rho > 0.0 {
            return Err(Error::domain("shifted history needs a nonpositive shift"));
        }
        if rho == 0.0 {
            return Ok(self.history.clone());
        }
        let h = &self.history;
        let zero = SpectralState::zeros(h.n_modes());
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        let lead = -tm - rho;
        if rho < 0.0 {
            nodes.extend([-tm, lead]);
            values.extend([zero.clone(), zero]);
        }
        for (t, v) in h.nodes().iter().zip(h.values()) {
            if *t < rho {
                nodes.push((t - rho).max(-tm));
                values.push(v.clone());
            }
        }
        nodes.push(0.0);
        values.push(h.at(rho));
        History::new(nodes, values)
    }
}

/// PC_r × L^p_h seminorm ∫_{−r}^0 ‖ψ‖ + (∫_{−θ_max}^{−r} h‖ψ‖^p)^{1/p}.
pub fn phase_seminorm(space: &PhaseSpace, hist: &History, norm: &dyn StateNorm) -> f64 {
    let norms: Vec<f64> = hist.values().iter().map(|v| norm.norm(v)).collect();
    seminorm_from_norms(space, hist.nodes(), &norms)
}

fn seminorm_from_norms(space: &PhaseSpace, nodes: &[f64], norms: &[f64]) -> f64 {
    let cut = -space.r();
    let lo = -space.theta_max();
    let p = space.p();
    let mut sup_part = 0.0;
    let mut int_part = 0.0;
    for i in 0..nodes.len().saturating_sub(1) {
        let (a, b) = (nodes[i].max(lo), nodes[i + 1]);
        if b <= a {
            continue;
        }
        let na = interp(nodes[i], nodes[i + 1], norms[i], norms[i + 1], a);
        let nb = norms[i + 1];
        if b <= cut {
            int_part += exp_panel(space.nu(), a, b, na.powf(p), nb.powf(p));
        } else if a >= cut {
            sup_part += 0.5 * (b - a) * (na + nb);
        } else {
            let nc = interp(a, b, na, nb, cut);
            int_part += exp_panel(space.nu(), a, cut, na.powf(p), nc.powf(p));
            sup_part += 0.5 * (b - cut) * (nc + nb);
        }
    }
    sup_part + int_part.powf(1.0 / p)
}

fn interp(a: f64, b: f64, fa: f64, fb: f64, x: f64) -> f64 {
    if b == a || x == a {
        return fa;
    }
    fa + (fb - fa) * (x - a) / (b - a)
}

/// ∫_a^b e^{νθ} ℓ(θ) dθ for the linear ℓ with ℓ(a) = fa, ℓ(b) = fb.
pub(crate) fn exp_panel(nu: f64, a: f64, b: f64, fa: f64, fb: f64) -> f64 {
    let (wa, wb) = exp_panel_weights(nu, a, b);
    wa * fa + wb * fb
}

/// Weights (w_a, w_b) with ∫_a^b e^{νθ} ℓ(θ) dθ = w_a ℓ(a) + w_b ℓ(b) for linear ℓ.
pub(crate) fn exp_panel_weights(nu: f64, a: f64, b: f64) -> (f64, f64) {
    let d = b - a;
    if d <= 0.0 {
        return (0.0, 0.0);
    }
    let x = nu * d;
    let ea = (nu * a).exp();
    // I1/d = ∫_a^b (θ−a)/d e^{νθ} = e^{νa} d · g(x), g(x) = (1 + (x−1)e^x)/x²
    let (m0, g) = if x.abs() < 0.05 {
        let mut g = 0.0;
        let mut fact = 1.0;
        let mut xp = 1.0;
        for k in 2..12 {
            fact *= k as f64;
            g += (k as f64 - 1.0) / fact * xp;
            xp *= x;
        }
        let mut m0 = 0.0;
        let mut fact = 1.0;
        let mut xp = 1.0;
        for k in 1..12 {
            fact *= k as f64;
            m0 += xp / fact;
            xp *= x;
        }
        (m0, g)
    } else {
        (x.exp_m1() / x, (1.0 + (x - 1.0) * x.exp()) / (x * x))
    };
    let total = ea * d * m0;
    let wb = ea * d * g;
    (total - wb, wb)
}

/// Solution values on a time grid with left and right limits at impulse onsets.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    initial: InitialHistory,
    times: Vec<f64>,
    states: Vec<SpectralState>,
    right: Vec<Option<SpectralState>>,
}

impl Trajectory {
    /// `states[i]` is x(t_i) = x(t_i⁻); `jumps` lists (node index, x(t_i⁺)).
    pub fn new(
        initial: InitialHistory,
        times: Vec<f64>,
        states: Vec<SpectralState>,
        jumps: Vec<(usize, SpectralState)>,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() || times[0] != 0.0 {
            return Err(Error::domain("trajectory needs matching node lists starting at t = 0"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("trajectory grid must be strictly increasing"));
        }
        let n = initial.psi0().len();
        if states.iter().any(|s| s.len() != n) {
            return Err(Error::domain("trajectory states have inconsistent dimensions"));
        }
        let mut right = vec![None; times.len()];
        for (i, v) in jumps {
            if i >= times.len() {
                return Err(Error::domain("jump index outside the grid"));
            }
            right[i] = Some(v);
        }
        Ok(Self {
            initial,
            times,
            states,
            right,
        })
    }

    pub fn initial(&self) -> &InitialHistory {
        &self.initial
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SpectralState] {
        &self.states
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("non-empty grid")
    }

    pub fn n_modes(&self) -> usize {
        self.initial.psi0().len()
    }

    /// x(t_i), the left limit at jump nodes.
    pub fn state(&self, i: usize) -> &SpectralState {
        &self.states[i]
    }

    /// x(t_i⁺).
    pub fn right_state(&self, i: usize) -> &SpectralState {
        self.right[i].as_ref().unwrap_or(&self.states[i])
    }

    pub fn is_jump(&self, i: usize) -> bool {
        self.right[i].is_some()
    }

    pub fn jump_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.right.iter().enumerate().filter_map(|(i, r)| r.as_ref().map(|_| i))
    }

    /// Index of the node equal to `t` (within rounding), if any.
    pub fn node_index(&self, t: f64) -> Option<usize> {
        let i = self.times.partition_point(|&x| x < t - 1e-12);
        (i < self.times.len() && (self.times[i] - t).abs() <= 1e-12).then_some(i)
    }

    /// x(t) with the left-limit convention at jumps; ψ(t) for t < 0.
    pub fn value(&self, t: f64) -> SpectralState {
        if t < 0.0 {
            return self.initial.history().at(t);
        }
        if let Some(i) = self.node_index(t) {
            return self.states[i].clone();
        }
        let i = self.times.partition_point(|&x| x < t);
        if i >= self.times.len() {
            return self.states[self.times.len() - 1].clone();
        }
        let (a, b) = (self.times[i - 1], self.times[i]);
        let c = (t - a) / (b - a);
        let mut v = self.right_state(i - 1) * (1.0 - c);
        v.axpy(c, &self.states[i]);
        v
    }

    /// Largest deviation between two trajectories on the same grid, jumps included.
    pub fn max_distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.times.len() {
            d = d.max((self.state(i) - other.state(i)).norm());
            d = d.max((self.right_state(i) - other.right_state(i)).norm());
        }
        d
    }
}

/// The segment x_t(θ) = x(t + θ), θ ∈ [−θ_max, 0].
pub fn segment(tr: &Trajectory, t: f64) -> Result<History> {
    let horizon = tr.horizon();
    if !(t >= 0.0 && t <= horizon + 1e-12) {
        return Err(Error::domain(format!("segment time {t} outside [0, {horizon}]")));
    }
    let tm = tr.initial.space().theta_max();
    let psi = tr.initial.history();
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    let pn = psi.nodes();
    let first = pn.partition_point(|&x| x - t < -tm);
    if first > 0 && first < pn.len() && pn[first] - t > -tm {
        nodes.push(-tm);
        values.push(psi.at(t - tm));
    }
    for j in first..pn.len() {
        if pn[j] < 0.0 {
            nodes.push(pn[j] - t);
            values.push(psi.values()[j].clone());
        }
    }
    let exact = tr.node_index(t);
    let last = match exact {
        Some(i) => i,
        None => tr.times.partition_point(|&x| x < t) - 1,
    };
    for i in 0..=last {
        let theta = (tr.times[i] - t).min(0.0);
        if theta < -tm {
            continue;
        }
        nodes.push(theta);
        values.push(tr.states[i].clone());
        if i < last || exact.is_none() {
            if let Some(r) = &tr.right[i] {
                nodes.push(theta);
                values.push(r.clone());
            }
        }
    }
    if exact.is_none() {
        nodes.push(0.0);
        values.push(tr.value(t));
    }
    History::new(nodes, values)
}

/// Scalar delay σ(‖x‖) ≥ 0 defining ρ(s, x_s) = s − σ(‖x(s)‖).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DelaySpec {
    Constant { c: f64 },
    Saturating { a: f64 },
}

impl DelaySpec {
    pub fn validate(&self, theta_max: f64) -> Result<()> {
        let bound = self.bound();
        if !(bound >= 0.0) || !bound.is_finite() {
            return Err(Error::config("delay.params", "delay parameters must be nonnegative"));
        }
        if bound > theta_max {
            return Err(Error::config("delay.params", "delay may exceed the history length theta_max"));
        }
        Ok(())
    }

    pub fn sigma(&self, norm: f64) -> f64 {
        match *self {
            DelaySpec::Constant { c } => c,
            DelaySpec::Saturating { a } => a * norm / (1.0 + norm),
        }
    }

    /// sup σ.
    pub fn bound(&self) -> f64 {
        match *self {
            DelaySpec::Constant { c } => c,
            DelaySpec::Saturating { a } => a,
        }
    }

    pub fn rho(&self, s: f64, norm: f64) -> f64 {
        s - self.sigma(norm)
    }
}

/// x̃_{ρ(s, x_s)}: the segment at the delayed time, or a shifted ψ when it is negative.
pub fn delayed_state(tr: &Trajectory, d: &DelaySpec, s: f64, norm: &dyn StateNorm) -> Result<History> {
    let rho = d.rho(s, norm.norm(&tr.value(s)));
    if rho < -tr.initial.space().theta_max() {
        return Err(Error::config("delay", format!("delayed time {rho} precedes the history support")));
    }
    if rho >= 0.0 {
        segment(tr, rho)
    } else {
        tr.initial.shifted(rho)
    }
}

/// Outcome of checking ‖x_t‖ ≤ H₁‖ψ‖ + H₂ sup_{s≤t}‖x(s)‖ on every grid time.
#[derive(Debug, Clone, Copy)]
pub struct SegmentBoundReport {
    pub h1: f64,
    pub h2: f64,
    /// min over grid times of the right side minus the left side.
    pub min_slack: f64,
    /// Smallest H₁ that would make the inequality hold with the computed H₂.
    pub empirical_h1: f64,
    pub holds: bool,
}

pub fn segment_bound_check(tr: &Trajectory, norm: &dyn StateNorm) -> Result<SegmentBoundReport> {
    let space = tr.initial.space();
    if space.r() != 0.0 {
        return Err(Error::domain("segment bound is implemented for r = 0 only"));
    }
    let h1 = 1.0;
    let h2 = space.h2(tr.horizon());
    let psi_norm = phase_seminorm(space, tr.initial.history(), norm);
    let mut sup: f64 = 0.0;
    let mut min_slack = f64::INFINITY;
    let mut empirical: f64 = 0.0;
    let mut scale: f64 = psi_norm;
    for (i, &t) in tr.times.iter().enumerate() {
        sup = sup.max(norm.norm(&tr.states[i]));
        let seg = phase_seminorm(space, &segment(tr, t)?, norm);
        let slack = h1 * psi_norm + h2 * sup - seg;
        min_slack = min_slack.min(slack);
        scale = scale.max(seg);
        if psi_norm > 0.0 {
            empirical = empirical.max((seg - h2 * sup) / psi_norm);
        }
        if let Some(r) = &tr.right[i] {
            sup = sup.max(norm.norm(r));
        }
    }
    Ok(SegmentBoundReport {
        h1,
        h2,
        min_slack,
        empirical_h1: empirical,
        holds: min_slack >= -1e-12 * scale.max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_space::Euclidean;

    fn space() -> PhaseSpace {
        PhaseSpace::with_default_length(1.0).unwrap()
    }

    #[test]
    fn seminorm_of_constant_history() {
        let sp = space();
        let psi = InitialHistory::constant(sp, 2000, SpectralState::from_vec(vec![3.0, 4.0])).unwrap();
        let v = phase_seminorm(&sp, psi.history(), &Euclidean);
        assert!((v - 5.0).abs() < 1e-10, "{v}");
        let z = InitialHistory::constant(sp, 10, SpectralState::zeros(2)).unwrap();
        assert_eq!(phase_seminorm(&sp, z.history(), &Euclidean), 0.0);
    }

    #[test]
    fn exponential_panel_is_exact() {
        for &(nu, a, b) in &[(1.0f64, -3.0f64, -2.9f64), (2.0, -0.01, 0.0), (0.5, -20.0, -1.0)] {
            let exact = |fa: f64, fb: f64| {
                // ∫ e^{νθ}(fa + (fb−fa)(θ−a)/(b−a))
                let i0 = ((nu * b).exp() - (nu * a).exp()) / nu;
                let i1 = (b - a) * (nu * b).exp() / nu - i0 / nu;
                fa * i0 + (fb - fa) * i1 / (b - a)
            };
            let got = exp_panel(nu, a, b, 1.3, -0.7);
            let want = exact(1.3, -0.7);
            assert!((got - want).abs() < 1e-12 * want.abs().max(1e-3), "{got} {want}");
        }
    }

    #[test]
    fn cutoff_splits_sup_and_weighted_parts() {
        let sp = PhaseSpace::new(1.0, 0.5, 2.0, 30.0).unwrap();
        let psi = InitialHistory::constant(sp, 600, SpectralState::from_vec(vec![2.0])).unwrap();
        let v = phase_seminorm(&sp, psi.history(), &Euclidean);
        let want = 0.5 * 2.0 + (4.0 * ((-0.5f64).exp() - (-30.0f64).exp())).sqrt();
        assert!((v - want).abs() < 1e-10);
    }

    fn ramp_trajectory() -> Trajectory {
        let sp = space();
        let psi = InitialHistory::constant(sp, 1000, SpectralState::from_vec(vec![1.0, 0.0])).unwrap();
        let times: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let states = times
            .iter()
            .map(|t| SpectralState::from_vec(vec![1.0 + t, 0.0]))
            .collect();
        Trajectory::new(psi, times, states, vec![(5, SpectralState::from_vec(vec![0.0, 1.0]))]).unwrap()
    }

    #[test]
    fn segment_examples() {
        let tr = ramp_trajectory();
        let s0 = segment(&tr, 0.0).unwrap();
        assert_eq!(s0.values(), tr.initial().history().values());
        let s5 = segment(&tr, 0.5).unwrap();
        assert_eq!(s5.head(), tr.state(5));
        assert_eq!(s5.head()[0], 1.5);
        let s6 = segment(&tr, 0.55).unwrap();
        // Right limit at 0.5 is (0,1), left value at 0.6 is (1.6,0)
        assert!((s6.head()[0] - 0.8).abs() < 1e-12 && (s6.head()[1] - 0.5).abs() < 1e-12);
        assert!((s6.at(-0.05 - 1e-9)[0] - 1.5).abs() < 1e-6);
        assert!((s6.at(-0.05 + 1e-9)[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn delayed_state_branches() {
        let tr = ramp_trajectory();
        let none = delayed_state(&tr, &DelaySpec::Constant { c: 0.0 }, 0.3, &Euclidean).unwrap();
        assert_eq!(none, segment(&tr, 0.3).unwrap());
        let back = delayed_state(&tr, &DelaySpec::Constant { c: 0.5 }, 0.2, &Euclidean).unwrap();
        assert_eq!(back.head()[0], 1.0);
        // ‖x(0.4)‖ = 1.4, σ = 0.2·1.4/2.4, ρ = 0.4 − 0.11666…
        let d = DelaySpec::Saturating { a: 0.2 };
        let st = delayed_state(&tr, &d, 0.4, &Euclidean).unwrap();
        let rho = 0.4 - 0.2 * 1.4 / 2.4;
        assert!((st.head()[0] - (1.0 + rho)).abs() < 1e-12);
        assert!(delayed_state(&tr, &DelaySpec::Constant { c: 40.0 }, 0.1, &Euclidean).is_err());
    }

    #[test]
    fn segment_bound_on_examples() {
        let tr = ramp_trajectory();
        let rep = segment_bound_check(&tr, &Euclidean).unwrap();
        assert!(rep.holds && rep.min_slack >= 0.0);
        assert!((rep.h2 - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
        let sp = space();
        let z = InitialHistory::constant(sp, 10, SpectralState::zeros(1)).unwrap();
        let tr = Trajectory::new(z, vec![0.0, 1.0], vec![SpectralState::zeros(1); 2], vec![]).unwrap();
        let rep = segment_bound_check(&tr, &Euclidean).unwrap();
        assert_eq!(rep.min_slack, 0.0);
    }
}
