//! Pseudo-bosonic operator pairs on truncated Fock spaces.
//!
//! The crate builds deformed ladder-operator pairs `(A, B)` with `[A, B] = 1`
//! but `A† ≠ B`, their biorthonormal eigenfamilies, the non-self-adjoint
//! Landau-level Hamiltonians obtained from them, the associated frame
//! operators, and the kernel recurrences showing that nonlinear deformations
//! cannot produce pseudo-bosons.
//!
//! Everything lives on a finite number basis `Φ₀ … Φ_{D−1}` (or its two-mode
//! tensor square). Truncation only corrupts a band of rows and columns next to
//! the boundary; operators carry a [`fock::FockOperator::trust_margin`] for that
//! band and identity checks are made on the interior block.
//!
//! Modules:
//! - [`fock`]: number basis, ladder matrices, operator algebra, tensor products.
//! - [`pairs`]: the two Gaussian deformation families, their φ/Ψ families,
//!   tail certification and assumption diagnostics.
//! - [`landau`]: quadratures, `H₁`, `H₂`, the deformed Hamiltonians and the
//!   two-mode construction.
//! - [`intertwine`]: frame operators `S_φ`, `S_Ψ` and the intertwining checks.
//! - [`nogo`]: kernel recurrences for nonlinear deformations.

pub mod error;
pub mod fock;
pub mod intertwine;
pub mod landau;
pub mod nogo;
pub mod pairs;
mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
