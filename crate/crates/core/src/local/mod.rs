//! Local detection of small edge-out and vertex-out components.

mod dfs;
mod edge;
mod split;
mod vertex;

pub use dfs::{budgeted_dfs, Accounting, DfsResult, Processed, ScanKind};
pub use edge::{
    detect_component, detect_component_param, repetitions, trace_detect_component,
    ComponentResult, TimeMode, TrialTrace,
};
pub use split::{split_view, SplitGraph, SplitNode};
pub use vertex::{
    detect_component_volume, detect_vertex_out_component, vertex_component_volume_bound,
    LocalResult, VertexComponentResult, VolumeMode,
};
pub use crate::measure::{verify_k_edge_out, verify_vertex_out};
