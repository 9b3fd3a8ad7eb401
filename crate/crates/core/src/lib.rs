//! Exact counting of generalized Golomb rulers as lattice points of inside-out polytopes.
//!
//! Rulers with `m + 1` markings and length `t` correspond to positive integer gap vectors
//! `z ∈ tΔ°`. Each ruler family (Golomb, `B_h`, `B_2[g]`, `B_2^-[g]`) is cut out of the
//! dilated open simplex by a hyperplane or subspace arrangement; this crate builds those
//! arrangements, counts lattice points with and without multiplicity, fits and checks the
//! resulting quasipolynomials, enumerates regions, and checks the orientation model of
//! combinatorial types.

pub mod arrangements;
pub mod ehrhart;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod orientation;
pub mod regions;
pub mod rulers;
pub mod sweep;

pub use error::{Error, Result};
