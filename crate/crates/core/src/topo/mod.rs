//! Topological synthesis of closed-loop mechanisms.
//!
//! Covers the counting side (mobility, independent loops, binary-link
//! bookkeeping over basic-link compositions) and the graph side (contracted
//! graphs whose nodes are basic links and whose edges are chains of binary
//! links, plus isomorphism classification).

mod composition;
mod graph;
mod iso;
mod mobility;
mod nrm;
mod synthesis;
mod table;

pub use composition::{binary_link_base, enumerate_compositions, loop_count, LinkComposition};
pub use graph::{EdgeSpec, NodeSpec, TopologyGraph};
pub use iso::{are_isomorphic, find_isomorphism, isomorphism_classes};
pub use mobility::{mobility, MobilityInput};
pub use nrm::{graph_signature, node_response_signature, LayerResponse, ResponseSequence};
pub use synthesis::{enumerate_circumferential_topologies, enumerate_ternary_quad_topologies};
pub use table::{check_table, table_rows, RowStatus, TableRow, TableRowCheck};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopoError {
    #[error("n3 + 3*n5 = {0} is odd, so the loop count is not an integer")]
    NonIntegralLoopCount(u32),
    #[error("node {0} is not part of the graph")]
    UnknownNode(i64),
    #[error("duplicate node id {0}")]
    DuplicateNode(i64),
    #[error("node {id} declares arity {arity} but has degree {degree}")]
    ArityMismatch { id: i64, arity: u32, degree: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed graph file: {0}")]
    Malformed(String),
}
