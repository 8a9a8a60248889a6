//! Signed-graph p-Laplacian spectra and the cut-off adjacency invariants.
//!
//! The crate is `no_std` (with `alloc`) so the numerical core can be embedded
//! anywhere; graph file formats, reports and the command-line front end live in
//! the `plap` crate.
//!
//! Module map:
//!
//! * [`graph`]: signed graphs with vertex measure and potential, switching,
//!   subgraphs, connectivity and balance classification.
//! * [`linalg`]: dense symmetric eigensolver and (normalized) adjacency spectra.
//! * [`plap`]: the p-Laplacian, its Rayleigh quotient, extremal eigenpair
//!   solvers, closed forms and the monotonicity functionals in `p`.
//! * [`cutoff`]: the cut-off adjacency eigenvalues `L_k`: exact `L_n`, lower and
//!   upper bounds, brackets, interlacing and the eigenfunction limit scan.
//! * [`combinatorics`]: independent sets, matchings, edge covers, the
//!   Cvetković inertia bound and the inertia report.
//! * [`tensor`]: the even-order tensor representation of the p-Laplacian.
//! * [`generate`]: deterministic graph families.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod combinatorics;
pub mod cutoff;
pub mod error;
pub mod generate;
pub mod graph;
pub mod linalg;
pub(crate) mod num;
pub mod plap;
pub mod tensor;

pub use crate::error::{Error, Result};
pub use crate::graph::{
    BalanceClass, BalanceKind, Edge, EdgeSpec, GraphSpec, Sign, SignedGraph, StructuralConstants,
    SwitchingFunction,
};
pub use crate::plap::{Certificate, PEigenPair, SolverConfig, VertexFunction};
