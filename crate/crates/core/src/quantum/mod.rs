//! Dense state-vector simulation over `ℂG` and `ℂG ⊗ ℂG`.
//!
//! Two-register states are indexed by `index(x) * n + index(y)`: register 1
//! is the slow index. Translations, `A_ψ`, `B_ψ` and `U_π` are kept as
//! index maps; only the Fourier transform and verification products are
//! dense.

mod inversion;
mod measure;
mod operator;
pub(crate) mod ops;
pub(crate) mod qft;
mod state;

pub use inversion::{
    inversion_chain, inversion_residual, inversion_residual_dense, verify_inversion,
    verify_inversion_pair, ChainReport, InversionReport,
};
pub use measure::{measure_register, Distribution, DETERMINISTIC_THRESHOLD};
pub use operator::{DenseMatrix, IndexMap, Operator};
pub use ops::{a_psi, b_psi, permutation_op, tensor_apply, translation_op};
pub use qft::{fourier_state, qft, qft_apply, qft_matrix, Direction};
pub use state::{Register, Registers, StateVector};

/// Norm tolerance enforced on states after every operator application.
pub const NORM_TOLERANCE: f64 = 1e-9;
