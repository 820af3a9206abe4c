//! Input operator, per-interval controllability Gramians, the regularized resolvent
//! (λI + ΦJ)⁻¹, the feedback law and the linear-regulator quantities.

mod gramian;
mod law;
mod operator;
mod pair;
mod resolvent;

pub use gramian::{assemble_gramian, ControlLaw, GramianBlock, GramianQuadrature};
pub use law::{control_value, regulator_cost, IntervalControl};
pub use operator::ControlOperator;
pub use pair::{PairMesh, PairQuadrature, PairSide};
pub use resolvent::{resolve, resolve_matrix, resolvent_residual};
