use super::gramian::ControlLaw;
use super::operator::ControlOperator;
use crate::error::{Error, Result};
use crate::state_space::{OperatorKind, SolutionOperators, SpectralState};

/// The feedback control on [start, end): u(t) = (end − t)^{e} B* T̂*(end − t) v with
/// v = J[R(λ, Φ_k) p_k] and e = α − 1 (standard law) or 0 (alternative law).
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalControl {
    pub k: usize,
    pub start: f64,
    pub end: f64,
    pub law: ControlLaw,
    /// Dual coefficients v_k.
    pub v: SpectralState,
    /// Offset p_k.
    pub offset: SpectralState,
    /// z_k = λR(λ, Φ_k)p_k.
    pub z: SpectralState,
}

impl IntervalControl {
    pub fn value(&self, t: f64, ops: &SolutionOperators, b: &ControlOperator) -> SpectralState {
        let n = self.v.len();
        if !(t >= self.start && t < self.end) {
            return SpectralState::zeros(n);
        }
        let r = self.end - t;
        let pre = r.powf(self.law.control_exponent(ops.alpha()));
        let x = ops.apply(r, &self.v, OperatorKind::THat);
        &b.apply_adjoint(&x) * pre
    }
}

/// Control value on [τ_k, t_{k+1}) from the Gramian, offset and regularization λ.
#[allow(clippy::too_many_arguments)]
pub fn control_value(
    ops: &SolutionOperators,
    b: &ControlOperator,
    ctx: &crate::state_space::LpContext,
    lambda: f64,
    phi: &super::GramianBlock,
    p_k: &SpectralState,
    t: f64,
    law: ControlLaw,
) -> Result<SpectralState> {
    let (start, end) = phi.interval;
    if !(t >= start && t < end) {
        return Err(Error::domain(format!("control time {t} outside [{start}, {end})")));
    }
    if phi.law != law {
        return Err(Error::domain("Gramian law differs from the requested control law"));
    }
    let z = super::resolve(lambda, phi, p_k, ctx)?;
    let v = &ctx.duality(&z) * (1.0 / lambda);
    let ctl = IntervalControl {
        k: phi.index,
        start,
        end,
        law,
        v,
        offset: p_k.clone(),
        z,
    };
    Ok(ctl.value(t, ops, b))
}

/// ‖x(T) − x_T‖² + λ ∫ w‖u‖², given the weighted control energy.
pub fn regulator_cost(achieved: &SpectralState, target: &SpectralState, weighted_energy: f64, lambda: f64) -> f64 {
    (achieved - target).norm().powi(2) + lambda * weighted_energy
}
