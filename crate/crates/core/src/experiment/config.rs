use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::control::{ControlLaw, ControlOperator};
use crate::error::{Error, Result};
use crate::mild::{ImpulseKernel, ImpulseSchedule, MemoryKernel, ProblemSpec, Tolerances};
use crate::phase_space::{DelaySpec, InitialHistory, PhaseSpace};
use crate::state_space::{GeneratorSpec, LpContext, SpectralState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpulseEntry {
    pub t: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum DelayEntry {
    Constant { c: f64 },
    Saturating { a: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum MemoryEntry {
    Zero,
    Exponential { amplitude: f64, rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ControlEntry {
    /// b_n = 1/n.
    InverseIndex,
    Identity,
    Zero,
    Diagonal { b: Vec<f64> },
    /// Integral operator with kernel 1 + ξ² + ζ².
    QuadraticKernel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum HistoryEntry {
    Constant { coeffs: Vec<f64> },
    /// ψ(θ) = e^{rate·θ} Σ c_n w_n.
    Exponential { coeffs: Vec<f64>, rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ImpulseKernelEntry {
    Zero,
    SineProduct { amplitude: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntry {
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default)]
    pub theta_max: Option<f64>,
    #[serde(default = "default_history_nodes")]
    pub history_nodes: usize,
    #[serde(default)]
    pub space_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseEntry {
    #[serde(default = "one")]
    pub nu: f64,
    #[serde(default)]
    pub r: f64,
    #[serde(default = "one")]
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceEntry {
    #[serde(default = "default_fp")]
    pub fixed_point: f64,
    #[serde(default = "default_iters")]
    pub max_iterations: usize,
    #[serde(default = "default_fp")]
    pub gramian: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputEntry {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub plot: Option<PathBuf>,
}

/// The JSON document as written by users; everything except `alpha` has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha: f64,
    #[serde(default)]
    pub alpha1: f64,
    #[serde(rename = "T", default = "one")]
    pub horizon: f64,
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_impulses")]
    pub impulses: Vec<ImpulseEntry>,
    #[serde(default = "default_impulse_kernel")]
    pub impulse_kernel: ImpulseKernelEntry,
    #[serde(default = "default_delay")]
    pub delay: DelayEntry,
    #[serde(default = "default_memory")]
    pub memory_kernel: MemoryEntry,
    #[serde(rename = "B", default = "default_b")]
    pub b: ControlEntry,
    #[serde(default = "default_psi")]
    pub psi: HistoryEntry,
    #[serde(default = "default_targets")]
    pub targets: Vec<Vec<f64>>,
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: Vec<f64>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default)]
    pub law: ControlLaw,
    #[serde(default)]
    pub grid: Option<GridEntry>,
    #[serde(default)]
    pub phase: Option<PhaseEntry>,
    #[serde(default)]
    pub tolerances: Option<ToleranceEntry>,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma_norm: f64,
    #[serde(default)]
    pub output: Option<OutputEntry>,
}

fn one() -> f64 {
    1.0
}
fn default_p() -> f64 {
    2.0
}
fn default_modes() -> usize {
    8
}
fn default_nodes() -> usize {
    512
}
fn default_history_nodes() -> usize {
    1024
}
fn default_fp() -> f64 {
    1e-8
}
fn default_iters() -> usize {
    200
}
fn default_lambda() -> f64 {
    0.1
}
fn default_impulses() -> Vec<ImpulseEntry> {
    vec![ImpulseEntry { t: 0.3, tau: 0.35 }, ImpulseEntry { t: 0.6, tau: 0.65 }]
}
fn default_impulse_kernel() -> ImpulseKernelEntry {
    ImpulseKernelEntry::SineProduct { amplitude: 0.1 }
}
fn default_delay() -> DelayEntry {
    DelayEntry::Saturating { a: 0.2 }
}
fn default_memory() -> MemoryEntry {
    MemoryEntry::Exponential {
        amplitude: 1.0,
        rate: 2.0,
    }
}
fn default_b() -> ControlEntry {
    ControlEntry::InverseIndex
}
fn default_psi() -> HistoryEntry {
    HistoryEntry::Exponential {
        coeffs: vec![1.0, 0.5],
        rate: 1.0,
    }
}
fn default_targets() -> Vec<Vec<f64>> {
    vec![vec![0.5]]
}
fn default_lambda_grid() -> Vec<f64> {
    vec![1.0, 1e-1, 1e-2, 1e-3]
}

/// A validated experiment: problem template, λ grid and output locations.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub problem: ProblemSpec,
    pub lambda_grid: Vec<f64>,
    pub beta: f64,
    pub csv: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

fn coeffs(field: &str, c: &[f64], n: usize) -> Result<SpectralState> {
    if c.len() > n {
        return Err(Error::config(field, format!("{} coefficients for {n} modes", c.len())));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::config(field, "coefficients must be finite"));
    }
    let mut v = c.to_vec();
    v.resize(n, 0.0);
    Ok(SpectralState::from_vec(v))
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(json_field(&e.to_string()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build(&self) -> Result<SweepConfig> {
        let n = self.modes;
        if n == 0 {
            return Err(Error::config("modes", "at least one mode required"));
        }
        let grid = self.grid.clone().unwrap_or(GridEntry {
            nodes: default_nodes(),
            theta_max: None,
            history_nodes: default_history_nodes(),
            space_points: None,
        });
        let phase = self.phase.unwrap_or(PhaseEntry { nu: 1.0, r: 0.0, p: 1.0 });
        let mut generator = GeneratorSpec::heat(n)?;
        if let Some(g) = grid.space_points {
            generator = generator.with_grid_points(g)?;
        }
        let theta_max = grid.theta_max.unwrap_or_else(|| PhaseSpace::default_theta_max(phase.nu));
        let space = PhaseSpace::new(phase.nu, phase.r, phase.p, theta_max)?;
        let initial = match &self.psi {
            HistoryEntry::Constant { coeffs: c } => {
                InitialHistory::constant(space, grid.history_nodes, coeffs("psi.params.coeffs", c, n)?)?
            }
            HistoryEntry::Exponential { coeffs: c, rate } => {
                let c = coeffs("psi.params.coeffs", c, n)?;
                if !rate.is_finite() {
                    return Err(Error::config("psi.params.rate", "must be finite"));
                }
                InitialHistory::sample(space, grid.history_nodes, |th| &c * (rate * th).exp())?
            }
        };
        let pairs: Vec<(f64, f64)> = self.impulses.iter().map(|e| (e.t, e.tau)).collect();
        let schedule = ImpulseSchedule::new(&pairs, self.horizon)?;
        let m = schedule.m();
        let control = match &self.b {
            ControlEntry::InverseIndex => ControlOperator::inverse_index(n),
            ControlEntry::Identity => ControlOperator::identity(n),
            ControlEntry::Zero => ControlOperator::zero(n),
            ControlEntry::Diagonal { b } => {
                if b.len() != n {
                    return Err(Error::config("B.params.b", format!("{} entries for {n} modes", b.len())));
                }
                ControlOperator::diagonal(b)?
            }
            ControlEntry::QuadraticKernel => {
                let ctx = LpContext::new(2.0, &generator)?;
                ControlOperator::symmetric_kernel(|x, z| 1.0 + x * x + z * z, &ctx)?
            }
        };
        let kernel = match self.impulse_kernel {
            ImpulseKernelEntry::Zero => ImpulseKernel::zero(),
            ImpulseKernelEntry::SineProduct { amplitude } => ImpulseKernel::sine_product(amplitude),
        };
        let targets = match self.targets.len() {
            0 => return Err(Error::config("targets", "at least one target required")),
            1 => vec![coeffs("targets", &self.targets[0], n)?; m + 1],
            _ => self
                .targets
                .iter()
                .map(|t| coeffs("targets", t, n))
                .collect::<Result<Vec<_>>>()?,
        };
        let tol = self.tolerances.unwrap_or(ToleranceEntry {
            fixed_point: default_fp(),
            max_iterations: default_iters(),
            gramian: default_fp(),
        });
        let problem = ProblemSpec {
            alpha: self.alpha,
            alpha1: self.alpha1,
            schedule,
            generator,
            control,
            delay: match self.delay {
                DelayEntry::Constant { c } => DelaySpec::Constant { c },
                DelayEntry::Saturating { a } => DelaySpec::Saturating { a },
            },
            memory: match self.memory_kernel {
                MemoryEntry::Zero => MemoryKernel::Zero,
                MemoryEntry::Exponential { amplitude, rate } => MemoryKernel::Exponential { amplitude, rate },
            },
            impulses: vec![kernel; m],
            initial,
            targets,
            lambda: self.lambda,
            law: self.law,
            lp: self.p,
            steps: grid.nodes,
            tolerances: Tolerances {
                fixed_point: tol.fixed_point,
                max_iterations: tol.max_iterations,
                gramian: tol.gramian,
            },
            gamma_norm: self.gamma_norm,
        };
        problem.validate()?;
        if self.lambda_grid.is_empty() {
            return Err(Error::config("lambda_grid", "at least one value required"));
        }
        if self.lambda_grid.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
            return Err(Error::config("lambda_grid", "values must be positive"));
        }
        if self.lambda_grid.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::config("lambda_grid", "values must be strictly decreasing"));
        }
        if !(self.beta >= 0.0) {
            return Err(Error::config("beta", "must be nonnegative"));
        }
        let out = self.output.clone().unwrap_or(OutputEntry { csv: None, plot: None });
        Ok(SweepConfig {
            problem,
            lambda_grid: self.lambda_grid.clone(),
            beta: self.beta,
            csv: out.csv,
            plot: out.plot,
        })
    }
}

/// Best-effort extraction of the offending key from a serde message.
fn json_field(msg: &str) -> String {
    for marker in ["missing field `", "unknown field `", "unknown variant `"] {
        if let Some(i) = msg.find(marker) {
            let rest = &msg[i + marker.len()..];
            if let Some(j) = rest.find('`') {
                return rest[..j].to_string();
            }
        }
    }
    "config".to_string()
}

pub fn parse_config(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
    ConfigFile::from_json(&text)?.build()
}
