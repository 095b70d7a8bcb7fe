use super::{Edge, EdgeId, Graph, Incidence, Vertex};

/// A [`Graph`] that supports edge deletion in O(1). Deleting an edge moves
/// the last entry of each affected incidence list into its slot, so list
/// order is not stable across deletions.
#[derive(Clone, Debug)]
pub struct ResidualGraph {
    ends: Vec<(Vertex, Vertex)>,
    alive: Vec<bool>,
    out_lists: Vec<Vec<EdgeId>>,
    in_lists: Vec<Vec<EdgeId>>,
    out_pos: Vec<usize>,
    in_pos: Vec<usize>,
    live_edges: usize,
}

impl ResidualGraph {
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut out_lists = vec![Vec::new(); n];
        let mut in_lists = vec![Vec::new(); n];
        let mut out_pos = Vec::with_capacity(g.edge_count());
        let mut in_pos = Vec::with_capacity(g.edge_count());
        for e in g.edges() {
            out_pos.push(out_lists[e.tail].len());
            out_lists[e.tail].push(e.id);
            in_pos.push(in_lists[e.head].len());
            in_lists[e.head].push(e.id);
        }
        ResidualGraph {
            ends: g.endpoints().to_vec(),
            alive: vec![true; g.edge_count()],
            out_lists,
            in_lists,
            out_pos,
            in_pos,
            live_edges: g.edge_count(),
        }
    }

    pub fn live_edge_count(&self) -> usize {
        self.live_edges
    }

    pub fn is_alive(&self, e: EdgeId) -> bool {
        self.alive[e.0]
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        let (tail, head) = self.ends[e.0];
        Edge { id: e, tail, head }
    }

    pub fn out_ids(&self, v: Vertex) -> &[EdgeId] {
        &self.out_lists[v]
    }

    pub fn in_ids(&self, v: Vertex) -> &[EdgeId] {
        &self.in_lists[v]
    }

    /// Removes `e`; returns false if it was already gone.
    pub fn remove_edge(&mut self, e: EdgeId) -> bool {
        if !self.alive[e.0] {
            return false;
        }
        self.alive[e.0] = false;
        self.live_edges -= 1;
        let (tail, head) = self.ends[e.0];
        detach(&mut self.out_lists[tail], &mut self.out_pos, e);
        detach(&mut self.in_lists[head], &mut self.in_pos, e);
        true
    }

    /// Removes every live edge incident to `v`.
    pub fn isolate(&mut self, v: Vertex) {
        while let Some(&e) = self.out_lists[v].last() {
            self.remove_edge(e);
        }
        while let Some(&e) = self.in_lists[v].last() {
            self.remove_edge(e);
        }
    }

    /// Subgraph induced by `vertices` on the live edges, relabelled in the
    /// given order, with the local-to-original edge id map.
    pub fn induced(&self, vertices: &[Vertex]) -> (Graph, Vec<EdgeId>) {
        let mut local = vec![usize::MAX; self.out_lists.len()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut ids: Vec<EdgeId> = vertices
            .iter()
            .flat_map(|&v| self.out_lists[v].iter().copied())
            .filter(|e| local[self.ends[e.0].1] != usize::MAX)
            .collect();
        ids.sort();
        let mut sub = Graph::new(vertices.len());
        for &e in &ids {
            let (u, v) = self.ends[e.0];
            sub.add_edge(local[u], local[v]);
        }
        (sub, ids)
    }
}

fn detach(list: &mut Vec<EdgeId>, pos: &mut [usize], e: EdgeId) {
    let i = pos[e.0];
    let last = *list.last().expect("edge is listed");
    list.swap_remove(i);
    if last != e {
        pos[last.0] = i;
    }
}

impl Incidence for ResidualGraph {
    type Node = Vertex;

    fn node_count(&self) -> usize {
        self.out_lists.len()
    }

    fn edge_id_bound(&self) -> usize {
        self.ends.len()
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
