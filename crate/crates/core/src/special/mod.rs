//! Scalar special functions: Gamma, Mittag-Leffler, the one-sided stable density and its
//! Mainardi transform, and the subordination integrals that connect them.

mod gamma;
mod mittag_leffler;
mod stable;

pub use gamma::{gamma, ln_gamma, recip_gamma};
pub use mittag_leffler::{mittag_leffler, MLParams, MittagLeffler};
pub use stable::{stable_density, subordination_oracle, varphi_density, OperatorKind};
