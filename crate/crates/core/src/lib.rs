//! Local cut detection in directed graphs under the incidence-lists query
//! model, with the applications built on top of it: vertex connectivity,
//! maximal k-edge-connected subgraphs, and connectivity property testers.

pub mod certificate;
pub mod connectivity;
mod error;
pub mod flow;
pub mod graph;
pub mod harness;
pub mod local;
pub mod measure;
pub mod mkecs;
pub mod scc;
pub mod testers;

pub use error::{Error, Result};
pub use graph::{
    parse_edge_list, parse_undirected_edge_list, write_edge_list, CountedView, Edge, EdgeId,
    Graph, Incidence, Overlay, ResidualGraph, Reversed, UndirectedGraph, Vertex,
};
