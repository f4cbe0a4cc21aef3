//! Equivalence testing for finite-variable counting logics with restricted
//! requantification.
//!
//! The crate bundles the pieces needed to study how far two colored graphs
//! can be told apart when only some logical variables may be requantified:
//!
//! * [`graph`] — the colored-graph data model, the base-graph families the
//!   separation arguments are built on, and small-instance oracles
//!   (brute-force isomorphism, degree profiles).
//! * [`cfi`] — the Cai-Fürer-Immerman gadget construction with edge twisting.
//! * [`logic`] — a parser, analyzer, and evaluator for counting first-order
//!   logic over colored graphs, including the requantification check.
//! * [`wl`] — Weisfeiler-Leman style refinements: the classical `k`-WL, the
//!   oblivious variant, and the two-parameter refinement with non-reusable
//!   positions.
//! * [`stream`] — a space-bounded equivalence decision that materializes only
//!   per-level function tables instead of the full assignment domain, with
//!   memory instrumentation.
//! * [`games`] — exact solvers for the bijective pebble game with
//!   non-reusable pebbles and for the cops-and-robber game with place-once
//!   cops.
//! * [`treedepth`] — exact tree-depth, the color-tagging vertex deletion, and
//!   a pairwise identification harness.

pub mod assign;
pub mod cfi;
pub mod games;
pub mod graph;
pub mod iso;
pub mod logic;
pub mod stream;
pub mod treedepth;
pub mod wl;

use thiserror::Error;

pub use assign::{AtomicType, PartialAssignment, Var};
pub use graph::{ColorId, ColoredGraph, Family, Vertex};

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {0} out of range for a graph of order {1}")]
    VertexOutOfRange(Vertex, usize),
    #[error("color list has length {got}, expected {want}")]
    ColorCount { got: usize, want: usize },
    #[error("duplicate vertex {0}")]
    DuplicateVertex(Vertex),
    #[error("invalid family parameters: {0}")]
    FamilyParams(String),
    #[error("base graph must be connected")]
    NotConnected,
    #[error("base-graph colors must be distinct and ascending with the vertex index")]
    BadBaseColors,
    #[error("twist set contains the non-edge ({0}, {1})")]
    TwistNonEdge(Vertex, Vertex),
    #[error("the two assignments of a configuration must have equal domains")]
    ConfigMismatch,
    #[error("free variable {0} is unassigned")]
    UnassignedFree(String),
    #[error("k1 + k2 must be at least 1")]
    NoVariables,
    #[error("dimension k must be at least 1")]
    ZeroDimension,
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource limits for the exact solvers and refinement runs.
///
/// `max_cells` bounds the size of any materialized assignment or
/// configuration domain; `max_nodes` bounds backtracking-search nodes.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_cells: usize,
    pub max_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: 50_000_000,
            max_nodes: 200_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_cells(&self, cells: usize, what: &str) -> Result<()> {
        if cells > self.max_cells {
            return Err(Error::Budget(format!(
                "{what} needs {cells} cells, limit is {}",
                self.max_cells
            )));
        }
        Ok(())
    }
}
