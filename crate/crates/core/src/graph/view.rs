use std::cell::Cell;

use super::{Edge, EdgeId, Incidence};

/// Wraps any [`Incidence`] base and counts incidence queries.
///
/// Every `out_edge`/`in_edge` call is one query, including calls that come
/// back empty. Degree and rank lookups are not queries.
#[derive(Debug)]
pub struct CountedView<G> {
    base: G,
    queries: Cell<u64>,
}

impl<G: Incidence> CountedView<G> {
    pub fn new(base: G) -> Self {
        CountedView {
            base,
            queries: Cell::new(0),
        }
    }

    pub fn query_count(&self) -> u64 {
        self.queries.get()
    }

    pub fn inner(&self) -> &G {
        &self.base
    }

    pub fn inner_mut(&mut self) -> &mut G {
        &mut self.base
    }

    pub fn into_inner(self) -> G {
        self.base
    }

    /// The `i`-th outgoing edge of `v` (0-based), one query.
    pub fn query_out_edge(&self, v: G::Node, i: usize) -> Option<Edge<G::Node>> {
        self.out_edge(v, i)
    }

    /// The `i`-th incoming edge of `v` (0-based), one query.
    pub fn query_in_edge(&self, v: G::Node, i: usize) -> Option<Edge<G::Node>> {
        self.in_edge(v, i)
    }
}

impl<G: Incidence> Incidence for CountedView<G> {
    type Node = G::Node;

    fn node_count(&self) -> usize {
        self.base.node_count()
    }

    fn edge_id_bound(&self) -> usize {
        self.base.edge_id_bound()
    }

    fn out_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>> {
        self.queries.set(self.queries.get() + 1);
        self.base.out_edge(v, i)
    }

    fn in_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>> {
        self.queries.set(self.queries.get() + 1);
        self.base.in_edge(v, i)
    }

    fn out_degree(&self, v: Self::Node) -> usize {
        self.base.out_degree(v)
    }

    fn in_degree(&self, v: Self::Node) -> usize {
        self.base.in_degree(v)
    }

    fn out_rank(&self, e: EdgeId) -> usize {
        self.base.out_rank(e)
    }

    fn in_rank(&self, e: EdgeId) -> usize {
        self.base.in_rank(e)
    }
}

/// The reverse graph as a zero-copy view: out-queries answer in-queries of
/// the base with the edge flipped.
#[derive(Clone, Copy, Debug)]
pub struct Reversed<G>(pub G);

impl<G: Incidence> Incidence for Reversed<G> {
    type Node = G::Node;

    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    fn edge_id_bound(&self) -> usize {
        self.0.edge_id_bound()
    }

    fn out_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>> {
        self.0.in_edge(v, i).map(Edge::flipped)
    }

    fn in_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>> {
        self.0.out_edge(v, i).map(Edge::flipped)
    }

    fn out_degree(&self, v: Self::Node) -> usize {
        self.0.in_degree(v)
    }

    fn in_degree(&self, v: Self::Node) -> usize {
        self.0.out_degree(v)
    }

    fn out_rank(&self, e: EdgeId) -> usize {
        self.0.in_rank(e)
    }

    fn in_rank(&self, e: EdgeId) -> usize {
        self.0.out_rank(e)
    }
}
