//! Set measures on a [`Graph`]: leaving edges, edge size, volume, symmetric
//! volume, out-boundary, and the two component checks built on them.

use crate::graph::{EdgeId, Graph, Vertex};

pub fn membership(n: usize, set: &[Vertex]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set {
        mask[v] = true;
    }
    mask
}

/// `E(S, V \ S)`.
pub fn leaving_edges(g: &Graph, set: &[Vertex]) -> Vec<EdgeId> {
    let inside = membership(g.vertex_count(), set);
    let mut out = Vec::new();
    for &v in set {
        out.extend(g.out_edges(v).filter(|e| !inside[e.head]).map(|e| e.id));
    }
    out.sort();
    out
}

/// `E(V \ S, S)`.
pub fn entering_edges(g: &Graph, set: &[Vertex]) -> Vec<EdgeId> {
    let inside = membership(g.vertex_count(), set);
    let mut out = Vec::new();
    for &v in set {
        out.extend(g.in_edges(v).filter(|e| !inside[e.tail]).map(|e| e.id));
    }
    out.sort();
    out
}

/// `|E(S, S)|`, self-loops counted once.
pub fn edge_size(g: &Graph, set: &[Vertex]) -> usize {
    let inside = membership(g.vertex_count(), set);
    set.iter()
        .map(|&v| g.out_edges(v).filter(|e| inside[e.head]).count())
        .sum()
}

/// `|E(S, V)|`.
pub fn volume(g: &Graph, set: &[Vertex]) -> usize {
    set.iter().map(|&v| g.out_edges(v).count()).sum()
}

/// `|E(S, V) ∪ E(V, S)|`.
pub fn symmetric_volume(g: &Graph, set: &[Vertex]) -> usize {
    volume(g, set) + entering_edges(g, set).len()
}

/// Vertices outside `S` hit by an edge leaving `S`, sorted.
pub fn out_boundary(g: &Graph, set: &[Vertex]) -> Vec<Vertex> {
    let inside = membership(g.vertex_count(), set);
    let mut seen = vec![false; g.vertex_count()];
    let mut boundary = Vec::new();
    for &v in set {
        for e in g.out_edges(v) {
            if !inside[e.head] && !seen[e.head] {
                seen[e.head] = true;
                boundary.push(e.head);
            }
        }
    }
    boundary.sort_unstable();
    boundary
}

/// True iff at most `k` edges leave `set`.
pub fn verify_k_edge_out(g: &Graph, set: &[Vertex], k: usize) -> bool {
    leaving_edges(g, set).len() <= k
}

/// True iff the out-boundary of `set` has at most `k` vertices.
pub fn verify_vertex_out(g: &Graph, set: &[Vertex], k: usize) -> bool {
    out_boundary(g, set).len() <= k
}
