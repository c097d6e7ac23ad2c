//! Coefficient-level calculus for Appell systems and their biorthogonal
//! duals over measures with analytic Laplace transform, truncated to a
//! weighted finite-dimensional model.
//!
//! The crate is organized around a single storage convention: a symmetric
//! kernel keeps the *values* of the full symmetric tensor (one per
//! multi-index), and every pairing, norm, and product carries its own
//! combinatorial multiplicities. See [`tensor`] for the convention and the
//! basic algebra, [`measure`] for moment models and quadrature oracles,
//! [`appell`] for the P-system, [`calculus`] for kernel sequences, norms,
//! and biorthogonal pairing, [`transforms`] for the S/C/L transforms,
//! [`wick`] for the Wick algebra on dual sequences, and [`remeasure`] for
//! re-expanding systems between measures.

pub mod appell;
pub mod calculus;
mod comb;
pub mod error;
pub mod measure;
pub mod remeasure;
pub mod tensor;
pub mod transforms;
pub mod wick;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tensor::{multi_indices, rank, table_len, MultiIndex, SymKernel, WeightModel};

/// Convenience: promote a real vector to the complex points the kernel API
/// consumes.
pub fn to_complex(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}
