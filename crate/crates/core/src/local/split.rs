use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Incidence, Vertex};

/// A vertex of the split graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SplitNode {
    /// The merged in/out copy of the start vertex.
    Source,
    In(Vertex),
    Out(Vertex),
}

impl SplitNode {
    /// The base vertex this node is a copy of, given the start vertex.
    pub fn vertex(self, s: Vertex) -> Vertex {
        match self {
            SplitNode::Source => s,
            SplitNode::In(v) | SplitNode::Out(v) => v,
        }
    }
}

/// Lazy query access to the vertex-split graph of a base graph around a
/// start vertex `s`.
///
/// Every base edge `(u, v)` with id `e` appears as the image edge
/// `u_out -> v_in` with the same id; every vertex `v != s` gets a transit
/// edge `v_in -> v_out` with id `m + v`, listed first at both of its ends.
/// Nothing is materialized: image edges are answered by querying the base.
#[derive(Clone, Copy, Debug)]
pub struct SplitGraph<G> {
    base: G,
    s: Vertex,
    transit_offset: usize,
}

/// Split graph of `g` around `s`.
pub fn split_view<G: Incidence<Node = Vertex>>(g: G, s: Vertex) -> Result<SplitGraph<G>> {
    if s >= g.node_count() {
        return Err(Error::InvalidVertex {
            vertex: s,
            n: g.node_count(),
        });
    }
    let transit_offset = g.edge_id_bound();
    Ok(SplitGraph {
        base: g,
        s,
        transit_offset,
    })
}

impl<G: Incidence<Node = Vertex>> SplitGraph<G> {
    pub fn base(&self) -> &G {
        &self.base
    }

    pub fn source(&self) -> Vertex {
        self.s
    }

    pub fn out_node(&self, v: Vertex) -> SplitNode {
        if v == self.s {
            SplitNode::Source
        } else {
            SplitNode::Out(v)
        }
    }

    pub fn in_node(&self, v: Vertex) -> SplitNode {
        if v == self.s {
            SplitNode::Source
        } else {
            SplitNode::In(v)
        }
    }

    pub fn transit_id(&self, v: Vertex) -> EdgeId {
        EdgeId(self.transit_offset + v)
    }

    /// The base vertex whose transit edge has this id, if any.
    pub fn transit_vertex(&self, e: EdgeId) -> Option<Vertex> {
        e.0.checked_sub(self.transit_offset)
    }

    pub fn edge_count(&self) -> usize {
        let n = self.base.node_count();
        (0..n).map(|v| self.base.out_degree(v)).sum::<usize>() + n - 1
    }

    fn image(&self, e: Edge) -> Edge<SplitNode> {
        Edge {
            id: e.id,
            tail: self.out_node(e.tail),
            head: self.in_node(e.head),
        }
    }

    fn transit(&self, v: Vertex) -> Edge<SplitNode> {
        Edge {
            id: self.transit_id(v),
            tail: SplitNode::In(v),
            head: SplitNode::Out(v),
        }
    }
}

impl<G: Incidence<Node = Vertex>> Incidence for SplitGraph<G> {
    type Node = SplitNode;

    fn node_count(&self) -> usize {
        2 * self.base.node_count() - 1
    }

    fn edge_id_bound(&self) -> usize {
        self.transit_offset + self.base.node_count()
    }

    fn out_edge(&self, v: SplitNode, i: usize) -> Option<Edge<SplitNode>> {
        match v {
            SplitNode::Source => self.base.out_edge(self.s, i).map(|e| self.image(e)),
            SplitNode::Out(v) => self.base.out_edge(v, i).map(|e| self.image(e)),
            SplitNode::In(v) => (i == 0).then(|| self.transit(v)),
        }
    }

    fn in_edge(&self, v: SplitNode, i: usize) -> Option<Edge<SplitNode>> {
        match v {
            SplitNode::Source => self.base.in_edge(self.s, i).map(|e| self.image(e)),
            SplitNode::In(v) => self.base.in_edge(v, i).map(|e| self.image(e)),
            SplitNode::Out(v) => (i == 0).then(|| self.transit(v)),
        }
    }

    fn out_degree(&self, v: SplitNode) -> usize {
        match v {
            SplitNode::Source => self.base.out_degree(self.s),
            SplitNode::Out(v) => self.base.out_degree(v),
            SplitNode::In(_) => 1,
        }
    }

    fn in_degree(&self, v: SplitNode) -> usize {
        match v {
            SplitNode::Source => self.base.in_degree(self.s),
            SplitNode::In(v) => self.base.in_degree(v),
            SplitNode::Out(_) => 1,
        }
    }

    fn out_rank(&self, e: EdgeId) -> usize {
        if self.transit_vertex(e).is_some() {
            0
        } else {
            self.base.out_rank(e)
        }
    }

    fn in_rank(&self, e: EdgeId) -> usize {
        if self.transit_vertex(e).is_some() {
            0
        } else {
            self.base.in_rank(e)
        }
    }
}

/// Interior rule for the restricted symmetric volume: `v_in` turns interior
/// once both halves of `v` are visited; the merged source at once.
pub(crate) fn interior_pair(v: SplitNode) -> Option<(SplitNode, SplitNode)> {
    Some(match v {
        SplitNode::Source => (SplitNode::Source, SplitNode::Source),
        SplitNode::In(x) => (SplitNode::In(x), SplitNode::Out(x)),
        SplitNode::Out(x) => (SplitNode::In(x), SplitNode::In(x)),
    })
}
