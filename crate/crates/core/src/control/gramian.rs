use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::operator::ControlOperator;
use super::pair::{PairQuadrature, PairSide, GAUSS_POINTS};
use crate::error::{Error, Result};
use crate::special::{MLParams, MittagLeffler};
use crate::state_space::GeneratorSpec;

/// Feedback law variant: the standard law carries the (t_{k+1} − t)^{α−1} prefactor, the
/// alternative law drops it and pairs with a Gramian of weight (t_{k+1} − t)^{α−1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ControlLaw {
    #[default]
    Standard,
    Alternative,
}

impl ControlLaw {
    /// Exponent of (t_{k+1} − s) in the control itself.
    pub fn control_exponent(self, alpha: f64) -> f64 {
        match self {
            ControlLaw::Standard => alpha - 1.0,
            ControlLaw::Alternative => 0.0,
        }
    }

    /// Exponent w of the Gramian kernel u^w.
    pub fn gramian_exponent(self, alpha: f64) -> f64 {
        alpha - 1.0 + self.control_exponent(alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramianQuadrature {
    pub levels: usize,
    pub refine: usize,
    pub gauss_points: usize,
    pub innermost: f64,
    /// Max-norm change between the last two mesh levels.
    pub change: f64,
}

/// Φ over one control interval [a, b].
#[derive(Debug, Clone, PartialEq)]
pub struct GramianBlock {
    pub index: usize,
    pub interval: (f64, f64),
    pub law: ControlLaw,
    pub matrix: DMatrix<f64>,
    pub quadrature: GramianQuadrature,
}

impl GramianBlock {
    pub fn from_matrix(index: usize, interval: (f64, f64), law: ControlLaw, matrix: DMatrix<f64>) -> Self {
        Self {
            index,
            interval,
            law,
            matrix,
            quadrature: GramianQuadrature {
                levels: 0,
                refine: 0,
                gauss_points: 0,
                innermost: 0.0,
                change: 0.0,
            },
        }
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

const MAX_REFINE: usize = 64;

/// Assembles Φ_{nm} = (BB*)_{nm} ∫₀^{b−a} u^w E_{α,α}(λ_n u^α) E_{α,α}(λ_m u^α) du,
/// doubling the panel count until successive matrices agree to `tol` in max norm.
pub fn assemble_gramian(
    g: &GeneratorSpec,
    b: &ControlOperator,
    alpha: f64,
    interval: (f64, f64),
    law: ControlLaw,
    tol: f64,
) -> Result<GramianBlock> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::config("alpha", format!("must lie in (1/2, 1), got {alpha}")));
    }
    if !(interval.1 > interval.0) {
        return Err(Error::domain("Gramian interval must have positive length"));
    }
    if b.n_modes() != g.n_modes() {
        return Err(Error::config("B", "control operator size differs from the number of modes"));
    }
    let ml = MittagLeffler::new(MLParams::new(alpha, alpha)?)?;
    let q = PairQuadrature::new(alpha);
    let bb = b.gram();
    let side = |e| PairSide {
        eigenvalues: g.eigenvalues(),
        exponent: e,
    };
    let len = interval.1 - interval.0;
    let run = |r| {
        let (m, mesh) = q.integrate(&ml, side(alpha - 1.0), side(law.control_exponent(alpha)), len, 0.0, r);
        let m = m.component_mul(&bb);
        (0.5 * (&m + m.transpose()), mesh)
    };
    let (mut prev, _) = run(1);
    let mut refine = 2;
    loop {
        let (next, mesh) = run(refine);
        let change = (&next - &prev).amax();
        if change < tol {
            return Ok(GramianBlock {
                index: 0,
                interval,
                law,
                matrix: next,
                quadrature: GramianQuadrature {
                    levels: mesh.levels,
                    refine,
                    gauss_points: GAUSS_POINTS,
                    innermost: mesh.innermost,
                    change,
                },
            });
        }
        if refine >= MAX_REFINE {
            return Err(Error::Quadrature {
                what: "Gramian mesh doubling".into(),
                estimate: next.amax(),
                error: change,
            });
        }
        prev = next;
        refine *= 2;
    }
}
