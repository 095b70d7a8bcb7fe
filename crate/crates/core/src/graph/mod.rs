//! Directed multigraphs in the incidence-lists query model.
//!
//! Vertices are `0..n` internally; the text format and the CLI use 1-based
//! ids. Every edge has a unique [`EdgeId`] equal to its insertion index, so
//! parallel copies and self-loops stay distinguishable.
//!
//! Algorithms never touch a [`Graph`] directly. They go through the
//! [`Incidence`] trait, which answers "the `i`-th outgoing (incoming) edge of
//! `v`" the same way the query model does. [`CountedView`] counts those
//! probes and [`Overlay`] layers edge reversals on top of any base.

mod io;
mod overlay;
mod residual;
mod view;

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{parse_edge_list, parse_undirected_edge_list, write_edge_list};
pub use overlay::Overlay;
pub use residual::ResidualGraph;
pub use view::{CountedView, Reversed};

pub type Vertex = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

/// An edge as reported by an incidence query, oriented as the view sees it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge<N = Vertex> {
    pub id: EdgeId,
    pub tail: N,
    pub head: N,
}

impl<N: Copy> Edge<N> {
    pub fn flipped(self) -> Self {
        Edge {
            id: self.id,
            tail: self.head,
            head: self.tail,
        }
    }

    pub fn endpoints(self) -> (N, N) {
        (self.tail, self.head)
    }
}

/// Query access to a directed multigraph.
///
/// Indices are 0-based here (`i = 0` is the first edge); the 1-based
/// convention lives only at the I/O boundary. `out_rank`/`in_rank` give the
/// position of an edge in its tail's out-list and head's in-list; they are
/// bookkeeping for views and are not incidence queries.
pub trait Incidence {
    type Node: Copy + Eq + Hash + Ord + Debug;

    fn node_count(&self) -> usize;
    /// Every edge id is below this.
    fn edge_id_bound(&self) -> usize;
    fn out_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>>;
    fn in_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>>;
    fn out_degree(&self, v: Self::Node) -> usize;
    fn in_degree(&self, v: Self::Node) -> usize;
    fn out_rank(&self, e: EdgeId) -> usize;
    fn in_rank(&self, e: EdgeId) -> usize;
}

impl<G: Incidence + ?Sized> Incidence for &G {
    type Node = G::Node;

    fn node_count(&self) -> usize {
        (**self).node_count()
    }
    fn edge_id_bound(&self) -> usize {
        (**self).edge_id_bound()
    }
    fn out_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>> {
        (**self).out_edge(v, i)
    }
    fn in_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>> {
        (**self).in_edge(v, i)
    }
    fn out_degree(&self, v: Self::Node) -> usize {
        (**self).out_degree(v)
    }
    fn in_degree(&self, v: Self::Node) -> usize {
        (**self).in_degree(v)
    }
    fn out_rank(&self, e: EdgeId) -> usize {
        (**self).out_rank(e)
    }
    fn in_rank(&self, e: EdgeId) -> usize {
        (**self).in_rank(e)
    }
}

/// Directed multigraph with ordered per-vertex incidence lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    ends: Vec<(Vertex, Vertex)>,
    out_lists: Vec<Vec<EdgeId>>,
    in_lists: Vec<Vec<EdgeId>>,
    out_pos: Vec<usize>,
    in_pos: Vec<usize>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            ends: Vec::new(),
            out_lists: vec![Vec::new(); n],
            in_lists: vec![Vec::new(); n],
            out_pos: Vec::new(),
            in_pos: Vec::new(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn try_add_edge(&mut self, tail: Vertex, head: Vertex) -> Result<EdgeId> {
        let n = self.vertex_count();
        for v in [tail, head] {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
        }
        Ok(self.add_edge(tail, head))
    }

    /// Panics if either endpoint is out of range.
    pub fn add_edge(&mut self, tail: Vertex, head: Vertex) -> EdgeId {
        let id = EdgeId(self.ends.len());
        self.ends.push((tail, head));
        self.out_pos.push(self.out_lists[tail].len());
        self.out_lists[tail].push(id);
        self.in_pos.push(self.in_lists[head].len());
        self.in_lists[head].push(id);
        id
    }

    pub fn vertex_count(&self) -> usize {
        self.out_lists.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.vertex_count(),
            })
        }
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        let (tail, head) = self.ends[e.0];
        Edge { id: e, tail, head }
    }

    pub fn endpoints(&self) -> &[(Vertex, Vertex)] {
        &self.ends
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.edge_count()).map(|i| self.edge(EdgeId(i)))
    }

    pub fn out_edges(&self, v: Vertex) -> impl Iterator<Item = Edge> + '_ {
        self.out_lists[v].iter().map(|&e| self.edge(e))
    }

    pub fn in_edges(&self, v: Vertex) -> impl Iterator<Item = Edge> + '_ {
        self.in_lists[v].iter().map(|&e| self.edge(e))
    }

    /// Every edge `(u, v)` becomes `(v, u)`; ids are preserved.
    pub fn reverse(&self) -> Graph {
        let mut r = Graph::new(self.vertex_count());
        for &(u, v) in &self.ends {
            r.add_edge(v, u);
        }
        r
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in the
    /// given order. Also returns the local-to-global edge id map.
    pub fn induced(&self, vertices: &[Vertex]) -> (Graph, Vec<EdgeId>) {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut sub = Graph::new(vertices.len());
        let mut edge_map = Vec::new();
        for e in self.edges() {
            let (lt, lh) = (local[e.tail], local[e.head]);
            if lt != usize::MAX && lh != usize::MAX {
                sub.add_edge(lt, lh);
                edge_map.push(e.id);
            }
        }
        (sub, edge_map)
    }

    /// Same vertex set, only the edges for which `keep` holds. Returns the
    /// local-to-global edge id map alongside.
    pub fn retain_edges(&self, mut keep: impl FnMut(EdgeId) -> bool) -> (Graph, Vec<EdgeId>) {
        let mut sub = Graph::new(self.vertex_count());
        let mut edge_map = Vec::new();
        for e in self.edges() {
            if keep(e.id) {
                sub.add_edge(e.tail, e.head);
                edge_map.push(e.id);
            }
        }
        (sub, edge_map)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.out_lists[u].iter().any(|&e| self.ends[e.0].1 == v)
    }
}

/// Convenience for [`Graph::reverse`].
pub fn reverse_graph(g: &Graph) -> Graph {
    g.reverse()
}

impl Incidence for Graph {
    type Node = Vertex;

    fn node_count(&self) -> usize {
        self.vertex_count()
    }

    fn edge_id_bound(&self) -> usize {
        self.edge_count()
    }

    fn out_edge(&self, v: Vertex, i: usize) -> Option<Edge> {
        self.out_lists[v].get(i).map(|&e| self.edge(e))
    }

    fn in_edge(&self, v: Vertex, i: usize) -> Option<Edge> {
        self.in_lists[v].get(i).map(|&e| self.edge(e))
    }

    fn out_degree(&self, v: Vertex) -> usize {
        self.out_lists[v].len()
    }

    fn in_degree(&self, v: Vertex) -> usize {
        self.in_lists[v].len()
    }

    fn out_rank(&self, e: EdgeId) -> usize {
        self.out_pos[e.0]
    }

    fn in_rank(&self, e: EdgeId) -> usize {
        self.in_pos[e.0]
    }
}

/// Undirected multigraph as a plain edge list.
///
/// Algorithms run on [`UndirectedGraph::to_bidirected`], where undirected
/// edge `i` becomes the antiparallel pair with ids `2i` (`u -> v`) and
/// `2i + 1` (`v -> u`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UndirectedGraph {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        for &(u, v) in &edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
        }
        Ok(UndirectedGraph { n, edges })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn to_bidirected(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for &(u, v) in &self.edges {
            g.add_edge(u, v);
            g.add_edge(v, u);
        }
        g
    }

    /// Neighbour lists as `(neighbour, edge index)` pairs in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(Vertex, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            if u != v {
                adj[v].push((u, i));
            }
        }
        adj
    }

    pub fn induced(&self, vertices: &[Vertex]) -> UndirectedGraph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| {
                let (a, b) = (local[u], local[v]);
                (a != usize::MAX && b != usize::MAX).then_some((a, b))
            })
            .collect();
        UndirectedGraph {
            n: vertices.len(),
            edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn out_queries_on_path() {
        let g = path3();
        assert_eq!(g.out_edge(0, 0).map(|e| (e.tail, e.head)), Some((0, 1)));
        assert_eq!(g.out_edge(0, 1), None);
    }

    #[test]
    fn in_queries_on_path() {
        let g = path3();
        assert_eq!(g.in_edge(2, 0).map(|e| (e.tail, e.head)), Some((1, 2)));
        assert_eq!(g.in_edge(0, 0), None);
    }

    #[test]
    fn parallel_edges_have_distinct_ids() {
        let g = Graph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let ids: Vec<_> = (0..2).map(|i| g.out_edge(0, i).unwrap().id).collect();
        assert_ne!(ids[0], ids[1]);
    }

    #[test]
    fn reverse_single_edge_and_triangle() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(g.reverse().endpoints(), &[(1, 0)]);
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = tri.reverse();
        assert_eq!(r.endpoints(), &[(1, 0), (2, 1), (0, 2)]);
    }

    #[test]
    fn out_of_range_vertex_is_rejected() {
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(Error::InvalidVertex { vertex: 2, n: 2 })
        ));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..10).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..30)
                .prop_map(move |edges| Graph::from_edges(n, edges).unwrap())
        })
    }

    proptest! {
        #[test]
        fn double_reverse_is_identity(g in arb_graph()) {
            prop_assert_eq!(g.reverse().reverse(), g);
        }

        #[test]
        fn in_lists_match_independent_transpose(g in arb_graph()) {
            // transpose rebuilt from the raw edge list
            let mut transpose = vec![Vec::new(); g.vertex_count()];
            for (i, &(u, v)) in g.endpoints().iter().enumerate() {
                transpose[v].push((i, u));
            }
            for (v, expected) in transpose.iter().enumerate() {
                let mut seen = Vec::new();
                let mut i = 0;
                while let Some(e) = g.in_edge(v, i) {
                    prop_assert_eq!(e.head, v);
                    seen.push((e.id.0, e.tail));
                    i += 1;
                }
                prop_assert_eq!(&seen, expected);
            }
        }
    }
}
