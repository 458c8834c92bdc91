//! Exact symbolic engine for boundary noncommutative-residue computations of
//! twisted Dirac and twisted signature operators in dimension four.
//!
//! Everything is exact: coefficients live in the Gaussian rationals, the twist
//! endomorphisms are free noncommutative symbols with a formal cyclic trace, and
//! transcendental constants (`pi`, the sphere volume `Omega`) are formal symbols.

pub mod scalar_core;
pub mod coeff_algebra;
pub mod clifford_models;
pub mod symbol_algebra;
pub mod halfplane_calculus;
pub mod operator_library;
pub mod boundary_engine;
pub mod lichnerowicz_engine;

pub use scalar_core::{GaussRational, Mono, Poly, RatFuncXi, ScalarError, ScalarExpr, Sym};
