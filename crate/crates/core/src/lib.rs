//! Identification of superbubbles in directed graphs and snarls and
//! ultrabubbles in bidirected graphs, in time linear in the input size.
//!
//! The crate decomposes the input along its block-cut tree and the SPQR
//! trees of its 2-connected blocks, then decides per 2-separator whether it
//! bounds a reportable structure. Brute-force definitional checkers live in
//! [`oracle`] and serve as ground truth for the test suite.

pub mod connectivity;
pub mod feedback;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod report;
pub mod snarls;
pub mod superbubbles;
pub mod ultrabubbles;

pub use graph::{
    Arc, BidirectedEdge, BidirectedGraph, Cycloid, DirectedGraph, EdgeId, GraphBuilder, Sign,
    UndirectedView, VertexId, VertexSide,
};
pub use report::{BubbleReport, Provenance, SnarlRepresentation, SuperbubbleReport, UltrabubbleReport};

use thiserror::Error;

/// Errors raised by graph construction and the operations with preconditions.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop at vertex '{vertex}' is not supported")]
    SelfLoop { vertex: String },
    #[error("unknown vertex '{name}'")]
    UnknownVertex { name: String },
    #[error("graph is not digraphic: edge {edge} has equal signs at both endpoints")]
    NotDigraphic { edge: String },
    #[error("contract violation: {reason}")]
    ContractViolation { reason: String },
    #[error("input error: {reason}")]
    Input { reason: String },
}
