//! Quantum Fourier transforms over finite abelian groups.
//!
//! The crate models finite abelian groups as products of cyclic groups,
//! the additive groups of `GF(p^m)` and of matrix rings over small
//! commutative rings, together with a chosen family of characters. On top of
//! that it provides a dense state-vector simulator for one and two
//! `G`-valued registers, exact checks of the control/target inversion
//! identity `(F^† ⊗ F) A_ψ (F ⊗ F^†) = B_φ`, and the hidden homomorphism
//! problem with its one-query quantum solver and classical collision solver.

pub mod character;
pub mod error;
pub mod experiment;
pub mod field;
pub mod group;
pub mod hidden;
pub mod hom;
pub mod matrix_ring;
pub mod quantum;
pub mod suite;
pub mod target;

mod par;

pub use character::CharacterBasis;
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec, LinearFunctional};
pub use group::{GroupElement, GroupSpec};
pub use hidden::{BlackBox, QuantumSolver};
pub use hom::Homomorphism;
pub use matrix_ring::{BaseRing, MatrixRingSpec};
pub use num_complex::Complex64;
pub use target::Target;

/// Default comparison tolerance for character values and operator residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default largest group order for which dense single-register operators and
/// exhaustive checks are built.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Numerical and size limits shared by verification routines.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    pub tolerance: f64,
    pub dense_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            tolerance: DEFAULT_TOLERANCE,
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

impl Limits {
    pub(crate) fn require_dense(&self, order: usize) -> Result<()> {
        if order > self.dense_cap {
            Err(Error::CapExceeded {
                order,
                cap: self.dense_cap,
            })
        } else {
            Ok(())
        }
    }
}
