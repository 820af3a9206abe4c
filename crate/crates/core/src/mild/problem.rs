use std::fmt;
use std::sync::Arc;

use crate::control::{ControlLaw, ControlOperator};
use crate::error::{Error, Result};
use crate::phase_space::{DelaySpec, InitialHistory, PhaseSpace};
use crate::state_space::{GeneratorSpec, SpectralState};

/// Onsets t_k and releases τ_k, k = 1..m, on [0, T].
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseSchedule {
    onsets: Vec<f64>,
    releases: Vec<f64>,
    horizon: f64,
}

impl ImpulseSchedule {
    /// `pairs[k−1] = (t_k, τ_k)`; requires 0 < t_1 ≤ τ_1 < t_2 ≤ … ≤ τ_m < T.
    pub fn new(pairs: &[(f64, f64)], horizon: f64) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::config("T", format!("horizon must be positive, got {horizon}")));
        }
        let mut prev = 0.0;
        for (k, &(t, tau)) in pairs.iter().enumerate() {
            if !(t > prev) || !(tau >= t) || !(tau < horizon) {
                return Err(Error::config(
                    "impulses",
                    format!("impulse {} = ({t}, {tau}) breaks 0 < t_1 <= tau_1 < t_2 <= ... < T", k + 1),
                ));
            }
            prev = tau;
        }
        Ok(Self {
            onsets: pairs.iter().map(|p| p.0).collect(),
            releases: pairs.iter().map(|p| p.1).collect(),
            horizon,
        })
    }

    pub fn none(horizon: f64) -> Result<Self> {
        Self::new(&[], horizon)
    }

    pub fn m(&self) -> usize {
        self.onsets.len()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// t_k for k = 1..=m+1 (t_{m+1} = T).
    pub fn onset(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.m() + 1, "onset index {k} out of range");
        if k == self.m() + 1 {
            self.horizon
        } else {
            self.onsets[k - 1]
        }
    }

    /// τ_k for k = 0..=m (τ_0 = 0).
    pub fn release(&self, k: usize) -> f64 {
        assert!(k <= self.m(), "release index {k} out of range");
        if k == 0 {
            0.0
        } else {
            self.releases[k - 1]
        }
    }

    /// [τ_k, t_{k+1}), k = 0..=m.
    pub fn control_interval(&self, k: usize) -> (f64, f64) {
        (self.release(k), self.onset(k + 1))
    }

    /// All t_k and τ_k together with T.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.onsets.iter().chain(&self.releases).copied().collect();
        b.push(self.horizon);
        b.sort_by(f64::total_cmp);
        b
    }
}

/// Memory kernel b(s) of f(t, φ) = ∫_{−θ_max}^0 b(−θ) φ(θ) dθ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MemoryKernel {
    Zero,
    /// b(s) = amplitude · e^{−rate·s}.
    Exponential { amplitude: f64, rate: f64 },
}

impl MemoryKernel {
    pub fn value(&self, s: f64) -> f64 {
        match *self {
            MemoryKernel::Zero => 0.0,
            MemoryKernel::Exponential { amplitude, rate } => amplitude * (-rate * s).exp(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MemoryKernel::Zero) || matches!(self, MemoryKernel::Exponential { amplitude, .. } if *amplitude == 0.0)
    }

    /// K = sup_{θ ∈ [−θ_max, 0]} |b(−θ)| / h(θ) for the weight h(θ) = e^{νθ}.
    pub fn weight_ratio(&self, space: &PhaseSpace) -> f64 {
        match *self {
            MemoryKernel::Zero => 0.0,
            MemoryKernel::Exponential { amplitude, rate } => {
                let worst = if rate >= space.nu() { 0.0 } else { -space.theta_max() };
                amplitude.abs() * ((rate - space.nu()) * worst).exp()
            }
        }
    }

    fn validate(&self, horizon: f64) -> Result<()> {
        if let MemoryKernel::Exponential { amplitude, rate } = *self {
            if !amplitude.is_finite() || !(rate >= 0.0) {
                return Err(Error::config("memory_kernel.params", "amplitude must be finite and rate nonnegative"));
            }
            if rate * horizon > 600.0 {
                return Err(Error::config("memory_kernel.params.rate", "rate * T must stay below 600"));
            }
        }
        Ok(())
    }
}

type KernelFn = dyn Fn(f64, f64, f64) -> f64 + Send + Sync;

/// Impulse kernel ρ_k(t, ξ, z) of h_k(t, x)(ξ) = ∫₀^π ρ_k(t, ξ, z) cos²(x(z)) dz.
#[derive(Clone)]
pub struct ImpulseKernel {
    name: String,
    f: Arc<KernelFn>,
}

impl ImpulseKernel {
    pub fn new<F: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static>(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn zero() -> Self {
        Self::new("zero", |_, _, _| 0.0)
    }

    /// ρ(t, ξ, z) = c · sin ξ · sin z.
    pub fn sine_product(c: f64) -> Self {
        Self::new(format!("sine_product({c})"), move |_, xi: f64, z: f64| c * xi.sin() * z.sin())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64, xi: f64, z: f64) -> f64 {
        (self.f)(t, xi, z)
    }
}

impl fmt::Debug for ImpulseKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImpulseKernel").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Picard stopping threshold on the grid sup-norm difference.
    pub fixed_point: f64,
    pub max_iterations: usize,
    /// Max-norm change accepted by Gramian mesh doubling.
    pub gramian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            fixed_point: 1e-8,
            max_iterations: 200,
            gramian: 1e-8,
        }
    }
}

/// Everything that defines one controlled impulsive delay problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub alpha1: f64,
    pub schedule: ImpulseSchedule,
    pub generator: GeneratorSpec,
    pub control: ControlOperator,
    pub delay: DelaySpec,
    pub memory: MemoryKernel,
    /// ρ_k for k = 1..=m.
    pub impulses: Vec<ImpulseKernel>,
    pub initial: InitialHistory,
    /// ζ_0..ζ_m.
    pub targets: Vec<SpectralState>,
    pub lambda: f64,
    pub law: ControlLaw,
    /// Exponent of the state space L^p(0, π).
    pub lp: f64,
    /// Requested number of time steps; the grid may grow to align with the schedule.
    pub steps: usize,
    pub tolerances: Tolerances,
    /// ‖γ‖ entering the sufficient condition.
    pub gamma_norm: f64,
}

impl ProblemSpec {
    pub fn horizon(&self) -> f64 {
        self.schedule.horizon()
    }

    pub fn n_modes(&self) -> usize {
        self.generator.n_modes()
    }

    pub fn space(&self) -> &PhaseSpace {
        self.initial.space()
    }

    pub fn p(&self) -> f64 {
        self.lp
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self {
            lambda,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.5 && self.alpha < 1.0) {
            return Err(Error::config("alpha", format!("must lie in (1/2, 1), got {}", self.alpha)));
        }
        if !(self.alpha1 >= 0.0 && self.alpha1 < self.alpha) {
            return Err(Error::config("alpha1", "must lie in [0, alpha)"));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::config("lambda", format!("must be positive, got {}", self.lambda)));
        }
        let n = self.n_modes();
        if self.control.n_modes() != n {
            return Err(Error::config("B", "control operator size differs from modes"));
        }
        if self.initial.psi0().len() != n {
            return Err(Error::config("psi", "history dimension differs from modes"));
        }
        let m = self.schedule.m();
        if self.impulses.len() != m {
            return Err(Error::config("impulses", format!("{} kernels for {m} impulses", self.impulses.len())));
        }
        if self.targets.len() != m + 1 {
            return Err(Error::config("targets", format!("need {} targets, got {}", m + 1, self.targets.len())));
        }
        if self.targets.iter().any(|z| z.len() != n || !z.is_finite()) {
            return Err(Error::config("targets", "targets must be finite with one entry per mode"));
        }
        if !(self.lp >= 2.0) || !self.lp.is_finite() {
            return Err(Error::config("p", format!("must be finite and at least 2, got {}", self.lp)));
        }
        if self.steps < 16 {
            return Err(Error::config("grid.nodes", "at least 16 time steps required"));
        }
        if !(self.tolerances.fixed_point > 0.0) || self.tolerances.max_iterations == 0 {
            return Err(Error::config("tolerances", "fixed-point tolerance and iteration cap must be positive"));
        }
        if !(self.gamma_norm >= 0.0) {
            return Err(Error::config("gamma_norm", "must be nonnegative"));
        }
        self.delay.validate(self.space().theta_max())?;
        self.memory.validate(self.horizon())
    }

    /// Heat-equation instance with every ingredient active: N modes, α = 0.7, T = 1, two
    /// impulses, saturating delay, exponential memory, B = diag(1/n), ζ = ½ w₁.
    pub fn desk(n_modes: usize) -> Result<Self> {
        let space = PhaseSpace::with_default_length(1.0)?;
        let mut psi = vec![0.0; n_modes];
        psi[0] = 1.0;
        if n_modes > 1 {
            psi[1] = 0.5;
        }
        let psi = SpectralState::from_vec(psi);
        let initial = InitialHistory::sample(space, 1024, |th| &psi * th.exp())?;
        let target = SpectralState::from_vec((0..n_modes).map(|i| if i == 0 { 0.5 } else { 0.0 }).collect());
        let spec = Self {
            alpha: 0.7,
            alpha1: 0.0,
            schedule: ImpulseSchedule::new(&[(0.3, 0.35), (0.6, 0.65)], 1.0)?,
            generator: GeneratorSpec::heat(n_modes)?,
            control: ControlOperator::inverse_index(n_modes),
            delay: DelaySpec::Saturating { a: 0.2 },
            memory: MemoryKernel::Exponential {
                amplitude: 1.0,
                rate: 2.0,
            },
            impulses: vec![ImpulseKernel::sine_product(0.1); 2],
            initial,
            targets: vec![target; 3],
            lambda: 0.1,
            law: ControlLaw::Standard,
            lp: 2.0,
            steps: 512,
            tolerances: Tolerances::default(),
            gamma_norm: 0.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Linear instance: no impulses, no memory, constant history, target x_T.
    pub fn linear(n_modes: usize, alpha: f64, lambda: f64, psi0: SpectralState, target: SpectralState) -> Result<Self> {
        let space = PhaseSpace::with_default_length(1.0)?;
        let spec = Self {
            alpha,
            alpha1: 0.0,
            schedule: ImpulseSchedule::none(1.0)?,
            generator: GeneratorSpec::heat(n_modes)?,
            control: ControlOperator::inverse_index(n_modes),
            delay: DelaySpec::Constant { c: 0.0 },
            memory: MemoryKernel::Zero,
            impulses: Vec::new(),
            initial: InitialHistory::constant(space, 16, psi0)?,
            targets: vec![target],
            lambda,
            law: ControlLaw::Standard,
            lp: 2.0,
            steps: 512,
            tolerances: Tolerances::default(),
            gamma_norm: 0.0,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_validation() {
        let s = ImpulseSchedule::new(&[(0.3, 0.35), (0.6, 0.65)], 1.0).unwrap();
        assert_eq!(s.m(), 2);
        assert_eq!(s.control_interval(0), (0.0, 0.3));
        assert_eq!(s.control_interval(2), (0.65, 1.0));
        assert_eq!(s.breakpoints(), vec![0.3, 0.35, 0.6, 0.65, 1.0]);
        assert!(ImpulseSchedule::new(&[(0.3, 0.2)], 1.0).is_err());
        assert!(ImpulseSchedule::new(&[(0.3, 0.5), (0.4, 0.6)], 1.0).is_err());
        assert!(ImpulseSchedule::new(&[(0.3, 1.0)], 1.0).is_err());
        assert!(ImpulseSchedule::new(&[(0.3, 0.3)], 1.0).is_ok());
    }

    #[test]
    fn memory_weight_ratio() {
        let sp = PhaseSpace::with_default_length(1.0).unwrap();
        let b = MemoryKernel::Exponential {
            amplitude: 1.5,
            rate: 2.0,
        };
        assert_eq!(b.weight_ratio(&sp), 1.5);
        assert_eq!(MemoryKernel::Zero.weight_ratio(&sp), 0.0);
    }

    #[test]
    fn desk_is_valid_and_errors_name_fields() {
        let d = ProblemSpec::desk(8).unwrap();
        assert_eq!(d.targets.len(), 3);
        let mut bad = d.clone();
        bad.alpha = 0.4;
        assert!(bad.validate().unwrap_err().to_string().contains("alpha"));
        let bad = d.with_lambda(-1.0);
        assert!(bad.validate().unwrap_err().to_string().contains("lambda"));
        let mut bad = d;
        bad.targets.pop();
        assert!(bad.validate().unwrap_err().to_string().contains("targets"));
    }
}
