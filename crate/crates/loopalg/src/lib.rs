//! Exact-arithmetic workbench for quantum loop algebras of simply-laced type.
//!
//! The crate builds finite-dimensional modules over the quantum loop algebra
//! of a simply-laced Lie algebra, labeled by Drinfeld polynomials, tensors
//! them under the two coproducts, decides cyclicity and cocyclicity of the
//! ordered tensor products, and solves for R-matrices — all over exact ground
//! fields (rationals, or rational functions in `q`).
//!
//! The crate is `no_std` (with `alloc`); IO, CLI and file formats live in the
//! companion `loopalg-cli` crate.
//!
//! Layout:
//! - [`scalar`]: rationals, Laurent polynomials and rational functions in `q`,
//!   quantum integers/factorials/binomials, specialization `q -> zeta`.
//! - [`root_data`]: simply-laced Dynkin diagrams, Cartan matrices, weights,
//!   roots, the pairing and `rho`.
//! - [`linalg`]: sparse matrices and exact row reduction over [`scalar::Scalar`].
//! - [`algebra`]: generator symbols, words, the coproducts and the
//!   anti-automorphism `tau`.
//! - [`repmod`]: concrete module realizations (evaluation modules of type A,
//!   tensor products, k-series, h-operators, Drinfeld polynomials).
//! - [`relations`]: the defining-relation checker certifying a realization.
//! - [`structure`]: generated submodules, cyclicity, duals, cocyclicity and
//!   standard modules.
//! - [`rmatrix`]: intertwiner solver, braid operators, partial R-matrices,
//!   Yang-Baxter and unipotence checks.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod scalar;
pub mod root_data;
pub mod linalg;
pub mod algebra;
pub mod repmod;
pub mod relations;
pub mod structure;
pub mod rmatrix;

pub use scalar::{Field, Rat, Scalar};
pub use root_data::DynkinDiagram;
pub use repmod::ModuleRealization;
