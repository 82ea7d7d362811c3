//! Numerical benchmarks for continuous-variable quantum teleportation.
//!
//! The crate reproduces the classical (measure-and-reprepare) fidelity bounds for
//! teleporting coherent states and contrasts them with the fidelity reached by
//! the entanglement-assisted protocol with finite squeezing.
//!
//! Conventions used throughout: ħ = 1, annihilation operator `a = (x + ip)/√2`,
//! so the vacuum has quadrature variance ½ and a coherent state `|β⟩` has
//! quadrature mean `√2·(Re β, Im β)`.

pub mod cheat;
pub mod eigen;
pub mod error;
pub mod finite_dim;
pub mod fock;
pub mod gaussian;
pub mod gaussian_pair;
pub mod mc;
pub mod measures;
pub mod operator;
pub mod quadrature;
pub mod random;
pub mod verdict;

pub use error::{Error, Result};
pub use fock::{coherent_fock, epr_fock, EprState, FockVector, Truncation};
pub use num_complex::Complex64;
pub use operator::{displacement_matrix, fidelity_pure_mixed, HermitianOperator};
