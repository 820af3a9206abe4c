//! Mild solutions of the controlled impulsive delay problem: product-integration
//! convolutions, the delayed memory term, impulse maps, the three-branch solution map F_λ,
//! Picard iteration and an L1-scheme Caputo residual.

mod convolution;
mod problem;
mod residual;
mod solver;
mod terms;

pub use convolution::{frac_convolution, ProductWeights};
pub use problem::{ImpulseKernel, ImpulseSchedule, MemoryKernel, ProblemSpec, Tolerances};
pub use residual::{caputo_l1, caputo_residual, final_state_identity_check, terminal_state_by_quadrature};
pub use solver::{aligned_steps, ControlProfile, IntervalOffset, MildSolution, MildSolver};
pub use terms::{impulse_bound, impulse_eval, memory_term, nonlinearity_f};
