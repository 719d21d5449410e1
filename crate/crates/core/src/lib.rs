//! Discrete Hodge Laplacians on weighted graphs.
//!
//! A weighted graph carries vertex masses `m` and edge conductances `c`. The
//! difference operator `d` maps vertex functions to edge forms and its
//! adjoint `δ` maps back; `Δ₀ = δd` acts on vertices and `Δ₁ = dδ` on edges.
//! This crate assembles both operators, computes their spectra, relates their
//! kernels to the cycle structure of the graph, and runs finite-window
//! analyses of infinite graphs on `Z` ([`infinite`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod exact;
pub mod expr;
pub mod gen;
pub mod graph;
pub mod infinite;
pub mod operators;
pub mod spectra;
pub mod topology;

pub use graph::{Edge, GraphError, RawGraph, WeightedGraph};
pub use operators::{EdgeForm, OperatorError, VertexFunction};
pub use spectra::{Form, SpectraError, SpectrumReport, DEFAULT_TOLERANCE};
pub use topology::{Direction, SignedCycle};
