//! Structural node embeddings: relabel each node's k-hop subgraph by the
//! roles its members play relative to the node, walk the relabeled
//! subgraphs, and train skip-gram with negative sampling on the walks.

pub mod bench;
pub mod cli;
pub mod embed;
pub mod error;
pub mod eval;
pub mod graph;
pub mod pipeline;
pub mod resources;
pub mod role;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Graph, GraphLabels, NodeId};
pub use role::{RoleToken, Token, Variant};
pub use walk::{build_corpus, WalkCorpus, WalkParams};
