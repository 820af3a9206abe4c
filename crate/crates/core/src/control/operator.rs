use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::state_space::{LpContext, SpectralState};

/// Input operator B : U → X written in the eigenbasis (U is identified with X).
#[derive(Debug, Clone, PartialEq)]
pub struct ControlOperator {
    matrix: DMatrix<f64>,
}

impl ControlOperator {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::config("B", "control matrix must be square"));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("B", "control matrix has non-finite entries"));
        }
        Ok(Self { matrix })
    }

    pub fn diagonal(b: &[f64]) -> Result<Self> {
        if b.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::config("B.params.b", "diagonal entries must be positive"));
        }
        Self::from_matrix(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(b)))
    }

    /// Diagonal with b_n = 1/n.
    pub fn inverse_index(n: usize) -> Self {
        let b: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
        Self::diagonal(&b).expect("positive entries")
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(n, n),
        }
    }

    /// Integral operator (Bu)(ξ) = ∫₀^π K(ξ, ζ) u(ζ) dζ with symmetric K, assembled on the grid.
    pub fn symmetric_kernel<K: Fn(f64, f64) -> f64>(kernel: K, ctx: &LpContext) -> Result<Self> {
        let xs = ctx.nodes();
        let ws = ctx.weights();
        let n = ctx.n_modes();
        let basis: Vec<Vec<f64>> = (0..n)
            .map(|k| ctx.eval_grid(&SpectralState::unit(n, k)))
            .collect();
        let kw = DMatrix::from_fn(xs.len(), xs.len(), |i, j| ws[i] * kernel(xs[i], xs[j]) * ws[j]);
        for i in 0..xs.len() {
            for j in 0..i {
                if (kernel(xs[i], xs[j]) - kernel(xs[j], xs[i])).abs() > 1e-12 {
                    return Err(Error::config("B", "kernel is not symmetric"));
                }
            }
        }
        let m = DMatrix::from_fn(n, n, |a, b| {
            let mut s = 0.0;
            for i in 0..xs.len() {
                if basis[a][i] == 0.0 {
                    continue;
                }
                for j in 0..xs.len() {
                    s += basis[a][i] * kw[(i, j)] * basis[b][j];
                }
            }
            s
        });
        Self::from_matrix(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows()
    }

    /// BB* in the eigenbasis.
    pub fn gram(&self) -> DMatrix<f64> {
        &self.matrix * self.matrix.transpose()
    }

    /// Operator norm M̃ = ‖B‖.
    pub fn norm(&self) -> f64 {
        self.matrix.clone().singular_values().max()
    }

    pub fn apply(&self, u: &SpectralState) -> SpectralState {
        SpectralState::from_vector(&self.matrix * u.vector())
    }

    pub fn apply_adjoint(&self, x: &SpectralState) -> SpectralState {
        SpectralState::from_vector(self.matrix.tr_mul(x.vector()))
    }
}
