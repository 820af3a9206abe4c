//! Spectrally truncated state space: eigen-coefficient states, the diagonal solution
//! operators T_α(t), T̂_α(t), grid L^p norms and the duality map.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::special::{MLParams, MittagLeffler};

pub use crate::special::OperatorKind;

/// Diagonal generator: eigenvalues λ_n < 0 with eigenfunctions w_n(ξ) = √(2/π) sin(nξ) on [0, π].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    eigenvalues: Vec<f64>,
    semigroup_bound: f64,
    grid_points: usize,
}

impl GeneratorSpec {
    /// Dirichlet Laplacian on [0, π] truncated to `n_modes` modes: λ_n = −n².
    pub fn heat(n_modes: usize) -> Result<Self> {
        let eig = (1..=n_modes).map(|n| -((n * n) as f64)).collect();
        Self::new(eig, 1.0, (16 * n_modes).max(256))
    }

    pub fn new(eigenvalues: Vec<f64>, semigroup_bound: f64, grid_points: usize) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::config("modes", "at least one mode is required"));
        }
        if eigenvalues.iter().any(|l| !(*l < 0.0) || !l.is_finite()) {
            return Err(Error::config("eigenvalues", "eigenvalues must be finite and strictly negative"));
        }
        if eigenvalues.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::config("eigenvalues", "eigenvalues must be sorted strictly decreasing"));
        }
        if !(semigroup_bound >= 1.0) {
            return Err(Error::config("semigroup_bound", "M must be at least 1"));
        }
        if grid_points < 2 * eigenvalues.len() + 2 {
            return Err(Error::config("grid_points", "spatial grid too coarse for the number of modes"));
        }
        Ok(Self {
            eigenvalues,
            semigroup_bound,
            grid_points,
        })
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Result<Self> {
        self.grid_points = grid_points;
        Self::new(self.eigenvalues, self.semigroup_bound, self.grid_points)
    }

    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn semigroup_bound(&self) -> f64 {
        self.semigroup_bound
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    /// w_n(ξ) for the zero-based mode index `n`.
    pub fn basis(&self, n: usize, xi: f64) -> f64 {
        (2.0 / PI).sqrt() * ((n + 1) as f64 * xi).sin()
    }
}

/// Coefficients of a state against the eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    coeffs: DVector<f64>,
}

impl SpectralState {
    pub fn zeros(n: usize) -> Self {
        Self {
            coeffs: DVector::zeros(n),
        }
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut s = Self::zeros(n);
        s.coeffs[k] = 1.0;
        s
    }

    pub fn from_vec(v: Vec<f64>) -> Self {
        Self {
            coeffs: DVector::from_vec(v),
        }
    }

    pub fn from_vector(coeffs: DVector<f64>) -> Self {
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        self.coeffs.as_slice()
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.coeffs
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.coeffs
    }

    /// Euclidean norm of the coefficients, equal to the L² norm of the field.
    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coeffs.dot(&other.coeffs)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Componentwise product with a diagonal multiplier.
    pub fn scale_modes(&self, m: &[f64]) -> Self {
        Self::from_vec(self.coeffs.iter().zip(m).map(|(c, s)| c * s).collect())
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        self.coeffs.axpy(a, &x.coeffs, 1.0);
    }

    /// Field value Σ a_n w_n(ξ).
    pub fn eval(&self, xi: f64) -> f64 {
        let c = (2.0 / PI).sqrt();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a * c * ((n + 1) as f64 * xi).sin())
            .sum()
    }
}

impl Index<usize> for SpectralState {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coeffs[i]
    }
}

impl IndexMut<usize> for SpectralState {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.coeffs[i]
    }
}

impl Add for &SpectralState {
    type Output = SpectralState;
    fn add(self, rhs: Self) -> SpectralState {
        SpectralState::from_vector(&self.coeffs + &rhs.coeffs)
    }
}

impl Sub for &SpectralState {
    type Output = SpectralState;
    fn sub(self, rhs: Self) -> SpectralState {
        SpectralState::from_vector(&self.coeffs - &rhs.coeffs)
    }
}

impl Mul<f64> for &SpectralState {
    type Output = SpectralState;
    fn mul(self, rhs: f64) -> SpectralState {
        SpectralState::from_vector(&self.coeffs * rhs)
    }
}

impl Neg for &SpectralState {
    type Output = SpectralState;
    fn neg(self) -> SpectralState {
        SpectralState::from_vector(-&self.coeffs)
    }
}

impl AddAssign<&SpectralState> for SpectralState {
    fn add_assign(&mut self, rhs: &SpectralState) {
        self.coeffs += &rhs.coeffs;
    }
}

impl SubAssign<&SpectralState> for SpectralState {
    fn sub_assign(&mut self, rhs: &SpectralState) {
        self.coeffs -= &rhs.coeffs;
    }
}

/// Norm used on the state space inside phase-space and delay computations.
pub trait StateNorm {
    fn norm(&self, s: &SpectralState) -> f64;
}

/// The L² norm, computed exactly from the coefficients.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl StateNorm for Euclidean {
    fn norm(&self, s: &SpectralState) -> f64 {
        s.norm()
    }
}

/// Spatial trapezoid grid on [0, π] carrying the L^p structure.
#[derive(Debug, Clone)]
pub struct LpContext {
    p: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    basis: DMatrix<f64>,
}

impl LpContext {
    pub fn new(p: f64, g: &GeneratorSpec) -> Result<Self> {
        if !(p >= 2.0) || !p.is_finite() {
            return Err(Error::config("p", format!("exponent must be finite and at least 2, got {p}")));
        }
        let m = g.grid_points();
        let h = PI / m as f64;
        let nodes: Vec<f64> = (0..=m).map(|j| j as f64 * h).collect();
        let mut weights = vec![h; m + 1];
        weights[0] = 0.5 * h;
        weights[m] = 0.5 * h;
        let basis = DMatrix::from_fn(m + 1, g.n_modes(), |j, n| g.basis(n, nodes[j]));
        Ok(Self {
            p,
            nodes,
            weights,
            basis,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_modes(&self) -> usize {
        self.basis.ncols()
    }

    /// Field values on the grid.
    pub fn eval_grid(&self, s: &SpectralState) -> Vec<f64> {
        (&self.basis * s.vector()).as_slice().to_vec()
    }

    /// Projects grid values onto the eigenbasis with the grid quadrature.
    pub fn project(&self, values: &[f64]) -> SpectralState {
        let wv = DVector::from_iterator(
            values.len(),
            values.iter().zip(&self.weights).map(|(v, w)| v * w),
        );
        SpectralState::from_vector(self.basis.tr_mul(&wv))
    }

    /// Quadrature L^q norm of grid values.
    pub fn grid_norm(&self, values: &[f64], q: f64) -> f64 {
        values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| w * v.abs().powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }

    pub fn norm(&self, s: &SpectralState) -> f64 {
        if self.p == 2.0 {
            return s.norm();
        }
        self.grid_norm(&self.eval_grid(s), self.p)
    }

    /// Pointwise values of J[x] on the grid.
    pub fn duality_grid(&self, s: &SpectralState) -> Vec<f64> {
        let vals = self.eval_grid(s);
        let nrm = self.grid_norm(&vals, self.p);
        if nrm == 0.0 {
            return vec![0.0; vals.len()];
        }
        let scale = nrm.powf(2.0 - self.p);
        vals.iter()
            .map(|v| scale * v.abs().powf(self.p - 2.0) * v)
            .collect()
    }

    pub fn duality(&self, s: &SpectralState) -> SpectralState {
        if self.p == 2.0 {
            return s.clone();
        }
        self.project(&self.duality_grid(s))
    }

    /// Derivative of the coefficient map a ↦ J[a] (symmetric positive semidefinite).
    pub fn duality_jacobian(&self, s: &SpectralState) -> DMatrix<f64> {
        let n = self.n_modes();
        if self.p == 2.0 {
            return DMatrix::identity(n, n);
        }
        let p = self.p;
        let vals = self.eval_grid(s);
        let nrm = self.grid_norm(&vals, p);
        if nrm == 0.0 {
            return DMatrix::zeros(n, n);
        }
        let d = DVector::from_iterator(
            vals.len(),
            vals.iter().zip(&self.weights).map(|(v, w)| w * v.abs().powf(p - 2.0)),
        );
        let g = self.project(&vals.iter().map(|v| v.abs().powf(p - 2.0) * v).collect::<Vec<_>>());
        let weighted = DMatrix::from_fn(self.basis.nrows(), n, |j, k| d[j] * self.basis[(j, k)]);
        let mut jac = self.basis.tr_mul(&weighted) * ((p - 1.0) * nrm.powf(2.0 - p));
        let gv = g.vector();
        jac += gv * gv.transpose() * ((2.0 - p) * nrm.powf(2.0 - 2.0 * p));
        jac
    }
}

impl StateNorm for LpContext {
    fn norm(&self, s: &SpectralState) -> f64 {
        LpContext::norm(self, s)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::config("alpha", format!("must lie in (1/2, 1), got {alpha}")))
    }
}

/// Applies T_α(t) (multipliers E_{α,1}(λ_n t^α)) or T̂_α(t) (multipliers E_{α,α}(λ_n t^α)).
pub fn apply_solution_op(
    g: &GeneratorSpec,
    alpha: f64,
    t: f64,
    s: &SpectralState,
    kind: OperatorKind,
) -> Result<SpectralState> {
    check_alpha(alpha)?;
    if !(t >= 0.0) {
        return Err(Error::domain(format!("time must be nonnegative, got {t}")));
    }
    check_dims(g, s)?;
    let beta = match kind {
        OperatorKind::T => 1.0,
        OperatorKind::THat => alpha,
    };
    let p = MLParams::new(alpha, beta)?;
    let ta = t.powf(alpha);
    let m = g
        .eigenvalues()
        .iter()
        .map(|l| crate::special::mittag_leffler(p, l * ta))
        .collect::<Result<Vec<_>>>()?;
    Ok(s.scale_modes(&m))
}

/// Grid L^p norm of the field Σ a_n w_n.
pub fn lp_norm(ctx: &LpContext, g: &GeneratorSpec, s: &SpectralState) -> Result<f64> {
    check_dims(g, s)?;
    Ok(ctx.norm(s))
}

/// Duality map J, realized pointwise on the grid and projected back to coefficients.
pub fn duality_map(ctx: &LpContext, g: &GeneratorSpec, s: &SpectralState) -> Result<SpectralState> {
    check_dims(g, s)?;
    Ok(ctx.duality(s))
}

/// Residuals of ⟨x, J[x]⟩ = ‖x‖² and ‖J[x]‖_{p'} = ‖x‖_p.
#[derive(Debug, Clone, Copy)]
pub struct DualityCheck {
    pub pairing_residual: f64,
    pub norm_residual: f64,
}

pub fn duality_check(ctx: &LpContext, s: &SpectralState) -> DualityCheck {
    let j = ctx.duality(s);
    let nrm = ctx.norm(s);
    let q = ctx.p() / (ctx.p() - 1.0);
    let jn = ctx.grid_norm(&ctx.duality_grid(s), q);
    DualityCheck {
        pairing_residual: (s.dot(&j) - nrm * nrm).abs(),
        norm_residual: (jn - nrm).abs(),
    }
}

fn check_dims(g: &GeneratorSpec, s: &SpectralState) -> Result<()> {
    if s.len() != g.n_modes() {
        return Err(Error::domain(format!(
            "state has {} coefficients, generator has {} modes",
            s.len(),
            g.n_modes()
        )));
    }
    Ok(())
}

/// Tabulated Mittag-Leffler families used by the solution operators and their kernels.
#[derive(Debug, Clone)]
pub struct SolutionOperators {
    alpha: f64,
    generator: GeneratorSpec,
    /// E_{α,1}
    pub t: MittagLeffler,
    /// E_{α,α}
    pub t_hat: MittagLeffler,
    /// E_{α,α+1}
    pub k1: MittagLeffler,
    /// E_{α,α+2}
    pub k2: MittagLeffler,
}

impl SolutionOperators {
    pub fn new(g: &GeneratorSpec, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            generator: g.clone(),
            t: MittagLeffler::new(MLParams::new(alpha, 1.0)?)?,
            t_hat: MittagLeffler::new(MLParams::new(alpha, alpha)?)?,
            k1: MittagLeffler::new(MLParams::new(alpha, alpha + 1.0)?)?,
            k2: MittagLeffler::new(MLParams::new(alpha, alpha + 2.0)?)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn generator(&self) -> &GeneratorSpec {
        &self.generator
    }

    pub fn multipliers(&self, t: f64, kind: OperatorKind) -> Vec<f64> {
        let ta = t.max(0.0).powf(self.alpha);
        let f = match kind {
            OperatorKind::T => &self.t,
            OperatorKind::THat => &self.t_hat,
        };
        self.generator.eigenvalues().iter().map(|l| f.eval(l * ta)).collect()
    }

    pub fn apply(&self, t: f64, s: &SpectralState, kind: OperatorKind) -> SpectralState {
        s.scale_modes(&self.multipliers(t, kind))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    #[test]
    fn heat_generator_defaults() {
        let g = GeneratorSpec::heat(8).unwrap();
        assert_eq!(g.eigenvalues()[7], -64.0);
        assert_eq!(g.semigroup_bound(), 1.0);
        assert!(GeneratorSpec::new(vec![-1.0, -1.0], 1.0, 64).is_err());
        assert!(GeneratorSpec::new(vec![1.0], 1.0, 64).is_err());
        assert!(GeneratorSpec::new(vec![-1.0], 0.5, 64).is_err());
    }

    #[test]
    fn solution_operator_examples() {
        let g = GeneratorSpec::heat(3).unwrap();
        let s = SpectralState::from_vec(vec![1.0, -2.0, 0.5]);
        let id = apply_solution_op(&g, 0.7, 0.0, &s, OperatorKind::T).unwrap();
        assert_eq!(id, s);
        let hat = apply_solution_op(&g, 0.7, 0.0, &s, OperatorKind::THat).unwrap();
        let c = 1.0 / gamma(0.7).unwrap();
        for i in 0..3 {
            assert!((hat[i] - c * s[i]).abs() < 1e-14);
        }
        let e = apply_solution_op(&g, 0.7, 1.0, &SpectralState::unit(3, 0), OperatorKind::T).unwrap();
        assert!((e[0] - 0.399_611_978_115_599_384).abs() < 1e-12);
        assert!(apply_solution_op(&g, 0.4, 1.0, &s, OperatorKind::T).is_err());
        assert!(apply_solution_op(&g, 0.7, -1.0, &s, OperatorKind::T).is_err());
    }

    #[test]
    fn lp_norm_examples() {
        let g = GeneratorSpec::heat(4).unwrap();
        let c2 = LpContext::new(2.0, &g).unwrap();
        assert_eq!(lp_norm(&c2, &g, &SpectralState::zeros(4)).unwrap(), 0.0);
        let w: f64 = c2.weights().iter().sum();
        assert!((w - PI).abs() < 1e-13);
        let u = SpectralState::unit(4, 0);
        assert!((c2.grid_norm(&c2.eval_grid(&u), 2.0) - 1.0).abs() < 1e-13);
        // ‖w_1 + 0.5 w_2 − 0.25 w_3‖_4 from a high-precision quadrature
        let c4 = LpContext::new(4.0, &g).unwrap();
        let s = SpectralState::from_vec(vec![1.0, 0.5, -0.25, 0.0]);
        let v = lp_norm(&c4, &g, &s).unwrap();
        assert!((v - MIXED_P4_NORM).abs() < 1e-12, "{v}");
    }

    const MIXED_P4_NORM: f64 = 1.041_280_951_557_404_577_466_833;

    #[test]
    fn duality_examples() {
        let g = GeneratorSpec::heat(4).unwrap();
        let c2 = LpContext::new(2.0, &g).unwrap();
        let s = SpectralState::from_vec(vec![0.3, -1.0, 2.0, 0.1]);
        assert_eq!(duality_map(&c2, &g, &s).unwrap(), s);
        let c4 = LpContext::new(4.0, &g).unwrap();
        assert_eq!(duality_map(&c4, &g, &SpectralState::zeros(4)).unwrap(), SpectralState::zeros(4));
        let s = SpectralState::from_vec(vec![1.0, 1.0, 0.0, 0.0]);
        let j = duality_map(&c4, &g, &s).unwrap();
        for (got, want) in j.coeffs().iter().zip(DUALITY_P4) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let chk = duality_check(&c4, &s);
        assert!(chk.pairing_residual < 1e-12 && chk.norm_residual < 1e-12);
    }

    // ∫ ‖x‖₄⁻² x³ w_n for x = w_1 + w_2, high-precision quadrature
    const DUALITY_P4: [f64; 4] = [
        0.846_284_375_321_634_430_422_119_2,
        0.846_284_375_321_634_430_422_119_2,
        0.188_063_194_515_918_762_316_026_5,
        -0.282_094_791_773_878_143_474_039_7,
    ];

    #[test]
    fn duality_jacobian_matches_finite_differences() {
        let g = GeneratorSpec::heat(3).unwrap();
        let c = LpContext::new(3.0, &g).unwrap();
        let s = SpectralState::from_vec(vec![0.7, -0.4, 0.9]);
        let jac = c.duality_jacobian(&s);
        let h = 1e-6;
        for k in 0..3 {
            let mut sp = s.clone();
            sp[k] += h;
            let mut sm = s.clone();
            sm[k] -= h;
            let d = &c.duality(&sp) - &c.duality(&sm);
            for i in 0..3 {
                assert!((d[i] / (2.0 * h) - jac[(i, k)]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn tabulated_operators_match_direct() {
        let g = GeneratorSpec::heat(8).unwrap();
        let ops = SolutionOperators::new(&g, 0.7).unwrap();
        let s = SpectralState::from_vec((1..=8).map(|n| 1.0 / n as f64).collect());
        for &t in &[0.0, 0.013, 0.3, 1.0, 2.5] {
            for kind in [OperatorKind::T, OperatorKind::THat] {
                let a = ops.apply(t, &s, kind);
                let b = apply_solution_op(&g, 0.7, t, &s, kind).unwrap();
                assert!((&a - &b).norm() < 1e-12);
            }
        }
    }
}
