//! Exact-arithmetic chromatic graph homology over the algebras
//! `A_m = Z[x]/(x^m)` and integral Khovanov link homology, together with
//! closed-form evaluators for the structural results these homologies
//! satisfy (spans, widths, gluing formulas, torsion patterns, Jones and
//! chromatic coefficient formulas).
//!
//! The crate is organized around a brute-force homology oracle
//! ([`homcore`]) that builds the cube of resolutions slice by slice and
//! reduces integer matrices to Smith normal form, plus independent
//! closed-form evaluators ([`closedform`]) that can be cross-checked
//! against the oracle instance by instance.

pub mod chrompoly;
pub mod closedform;
pub mod graph;
pub mod homcore;
pub mod khovanov;

pub use chrompoly::IntPolynomial;
pub use graph::{GraphInvariants, SimpleGraph};
pub use homcore::{BigradedGroups, GroupData};
