//! Sparse certificates of undirected graphs built from iterated spanning
//! forests: forest `i` spans what forests `1..i` left over.

use crate::graph::UndirectedGraph;

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Edge indices of `k` iterated spanning forests, each grown greedily in
/// edge-list order. Every cut keeps `min(k, original size)` edges.
pub fn sparse_certificate_edges(g: &UndirectedGraph, k: usize) -> Vec<usize> {
    let mut used = vec![false; g.edge_count()];
    for _ in 0..k {
        let mut forest = DisjointSets::new(g.n);
        let mut grew = false;
        for (i, &(u, v)) in g.edges.iter().enumerate() {
            if !used[i] && u != v && forest.union(u, v) {
                used[i] = true;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    (0..g.edge_count()).filter(|&i| used[i]).collect()
}

/// Sparse k-edge-connectivity certificate: at most `k(n - 1)` edges.
pub fn sparse_certificate(g: &UndirectedGraph, k: usize) -> UndirectedGraph {
    let edges = sparse_certificate_edges(g, k)
        .into_iter()
        .map(|i| g.edges[i])
        .collect();
    UndirectedGraph { n: g.n, edges }
}

/// Vertex-connectivity certificate: `k` iterated scan-first search forests.
/// Scanning a vertex claims an unused edge to every still-unmarked
/// neighbour. Local vertex connectivity is kept up to `k`.
pub fn vertex_certificate(g: &UndirectedGraph, k: usize) -> UndirectedGraph {
    let adj = g.adjacency();
    let mut used = vec![false; g.edge_count()];
    for _ in 0..k {
        let mut marked = vec![false; g.n];
        let mut grew = false;
        for root in 0..g.n {
            if marked[root] {
                continue;
            }
            marked[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(w, i) in &adj[v] {
                    if !used[i] && !marked[w] {
                        marked[w] = true;
                        used[i] = true;
                        grew = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    let edges = (0..g.edge_count())
        .filter(|&i| used[i])
        .map(|i| g.edges[i])
        .collect();
    UndirectedGraph { n: g.n, edges }
}
