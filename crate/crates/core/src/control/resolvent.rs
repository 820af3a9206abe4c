use nalgebra::{DMatrix, DVector};

use super::gramian::GramianBlock;
use crate::error::{Error, Result};
use crate::state_space::{LpContext, SpectralState};

const MAX_ITER: usize = 500;

/// Solves λz + ΦJ[z] = λh, so that z = λR(λ, Φ)h.
///
/// p = 2 is a symmetric positive-definite linear solve; p > 2 uses damped Newton steps
/// on the coefficient system with the analytic derivative of the grid duality map.
pub fn resolve(lambda: f64, phi: &GramianBlock, h: &SpectralState, ctx: &LpContext) -> Result<SpectralState> {
    resolve_matrix(lambda, &phi.matrix, h, ctx)
}

pub fn resolve_matrix(lambda: f64, phi: &DMatrix<f64>, h: &SpectralState, ctx: &LpContext) -> Result<SpectralState> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::config("lambda", format!("must be positive, got {lambda}")));
    }
    let n = h.len();
    if phi.nrows() != n || phi.ncols() != n {
        return Err(Error::domain("Gramian and offset dimensions differ"));
    }
    let hn = h.norm();
    if hn == 0.0 {
        return Ok(SpectralState::zeros(n));
    }
    if ctx.p() == 2.0 {
        let a = DMatrix::identity(n, n) * lambda + phi;
        let rhs = h.vector() * lambda;
        let z = match a.clone().cholesky() {
            Some(c) => c.solve(&rhs),
            None => a
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::Invariant("singular resolvent system".into()))?,
        };
        return Ok(SpectralState::from_vector(z));
    }
    let target = 1e-13 * lambda * hn;
    let residual = |z: &DVector<f64>| -> DVector<f64> {
        let j = ctx.duality(&SpectralState::from_vector(z.clone()));
        z * lambda + phi * j.vector() - h.vector() * lambda
    };
    let mut z = h.vector().clone();
    let mut r = residual(&z);
    let mut rn = r.norm();
    let mut history = vec![rn];
    for _ in 0..MAX_ITER {
        if rn <= target {
            return Ok(SpectralState::from_vector(z));
        }
        let jac = DMatrix::identity(n, n) * lambda
            + phi * ctx.duality_jacobian(&SpectralState::from_vector(z.clone()));
        let step = jac
            .lu()
            .solve(&(-&r))
            .ok_or_else(|| Error::Invariant("singular Newton system in resolvent".into()))?;
        let mut t = 1.0;
        loop {
            let cand = &z + &step * t;
            let rc = residual(&cand);
            let rcn = rc.norm();
            if rcn <= (1.0 - 1e-4 * t) * rn || t < 1e-10 {
                z = cand;
                r = rc;
                rn = rcn;
                break;
            }
            t *= 0.5;
        }
        history.push(rn);
        let k = history.len();
        if k > 5 && history[k - 1] >= history[k - 5] && rn <= 1e-8 * lambda * hn {
            return Ok(SpectralState::from_vector(z));
        }
    }
    if rn <= 1e-8 * lambda * hn {
        return Ok(SpectralState::from_vector(z));
    }
    Err(Error::NonConvergence {
        what: "resolvent Newton iteration".into(),
        iterations: MAX_ITER,
        last: rn,
        history,
    })
}

/// ‖λz + ΦJ[z] − λh‖ in coefficients.
pub fn resolvent_residual(lambda: f64, phi: &DMatrix<f64>, z: &SpectralState, h: &SpectralState, ctx: &LpContext) -> f64 {
    let j = ctx.duality(z);
    (z.vector() * lambda + phi * j.vector() - h.vector() * lambda).norm()
}
