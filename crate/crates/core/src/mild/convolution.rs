use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::state_space::{SolutionOperators, SpectralState};

/// Lags up to this one use closed-form kernel moments; later panels see a smooth kernel
/// and use Gauss–Legendre, which avoids cancellation in the moment differences.
const EXACT_LAGS: usize = 4;

/// Product-integration weights for ∫₀^{t_i} (t_i − s)^{α−1} T̂(t_i − s) g(s) ds on a uniform
/// grid, with g replaced by its piecewise-linear interpolant and the kernel
/// k(u) = u^{α−1}E_{α,α}(λu^α) integrated without further approximation.
#[derive(Debug, Clone)]
pub struct ProductWeights {
    h: f64,
    n_modes: usize,
    /// `older[l][n]` multiplies g(t_{i−l}), `newer[l][n]` multiplies g(t_{i−l+1}), l ≥ 1.
    older: Vec<Vec<f64>>,
    newer: Vec<Vec<f64>>,
}

impl ProductWeights {
    pub fn new(ops: &SolutionOperators, h: f64, max_lag: usize) -> Self {
        let a = ops.alpha();
        let lam = ops.generator().eigenvalues().to_vec();
        let n_modes = lam.len();
        let k1 = |u: f64, l: f64| if u == 0.0 { 0.0 } else { u.powf(a) * ops.k1.eval(l * u.powf(a)) };
        let k2 = |u: f64, l: f64| if u == 0.0 { 0.0 } else { u.powf(a + 1.0) * ops.k2.eval(l * u.powf(a)) };
        let kern = |u: f64, l: f64| u.powf(a - 1.0) * ops.t_hat.eval(l * u.powf(a));
        let gl = GaussLegendre::new(10);
        let rows: Vec<(Vec<f64>, Vec<f64>)> = (1..=max_lag)
            .into_par_iter()
            .map(|lag| {
                let lo = (lag - 1) as f64 * h;
                let hi = lag as f64 * h;
                let mut old = vec![0.0; n_modes];
                let mut new = vec![0.0; n_modes];
                for (n, &l) in lam.iter().enumerate() {
                    if lag <= EXACT_LAGS {
                        let m0 = k1(hi, l) - k1(lo, l);
                        let m1 = hi * k1(hi, l) - lo * k1(lo, l) - (k2(hi, l) - k2(lo, l));
                        old[n] = (m1 - lo * m0) / h;
                        new[n] = (hi * m0 - m1) / h;
                    } else {
                        for (u, w) in gl.mapped(lo, hi) {
                            let kw = kern(u, l) * w;
                            old[n] += kw * (u - lo) / h;
                            new[n] += kw * (hi - u) / h;
                        }
                    }
                }
                (old, new)
            })
            .collect();
        let mut older = vec![Vec::new()];
        let mut newer = vec![Vec::new()];
        for (o, n) in rows {
            older.push(o);
            newer.push(n);
        }
        Self {
            h,
            n_modes,
            older,
            newer,
        }
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn max_lag(&self) -> usize {
        self.older.len() - 1
    }

    /// Convolution at node i from samples g_0..g_i.
    pub fn convolve(&self, g: &[SpectralState], i: usize) -> SpectralState {
        assert!(i < g.len() && i <= self.max_lag(), "node {i} beyond samples or weights");
        let mut out = vec![0.0; self.n_modes];
        for lag in 1..=i {
            let go = g[i - lag].coeffs();
            let gn = g[i - lag + 1].coeffs();
            let (wo, wn) = (&self.older[lag], &self.newer[lag]);
            for n in 0..self.n_modes {
                out[n] += wo[n] * go[n] + wn[n] * gn[n];
            }
        }
        SpectralState::from_vec(out)
    }

    pub fn convolve_all(&self, g: &[SpectralState]) -> Vec<SpectralState> {
        (0..g.len()).into_par_iter().map(|i| self.convolve(g, i)).collect()
    }
}

/// ∫₀^t (t − s)^{α−1} T̂(t − s) g(s) ds from samples of g at the uniform nodes j·t/(len − 1).
pub fn frac_convolution(ops: &SolutionOperators, t: f64, samples: &[SpectralState]) -> Result<SpectralState> {
    if samples.len() < 2 || !(t > 0.0) {
        return Err(Error::Grid("convolution needs t > 0 and at least two samples".into()));
    }
    let n = ops.generator().n_modes();
    if samples.iter().any(|s| s.len() != n) {
        return Err(Error::Grid("sample dimension differs from the generator".into()));
    }
    let steps = samples.len() - 1;
    let w = ProductWeights::new(ops, t / steps as f64, steps);
    Ok(w.convolve(samples, steps))
}
