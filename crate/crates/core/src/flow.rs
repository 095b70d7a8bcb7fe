//! Small integral max-flow network augmented one unit path at a time
//! (Ford-Fulkerson with DFS). Every instance here has unit capacities on the
//! arcs that matter, so each augmentation moves exactly one unit.

use crate::graph::{Graph, Vertex};

pub const INF_CAP: u32 = u32::MAX / 4;

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    to: Vec<usize>,
    cap: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds arc `u -> v` with capacity `cap` and its residual twin.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: u32) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.adj[v].push(id + 1);
        id
    }

    /// Finds one augmenting path and pushes one unit along it.
    pub fn augment(&mut self, s: usize, t: usize) -> bool {
        let n = self.node_count();
        let mut parent_arc = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            if v == t {
                break;
            }
            for &a in &self.adj[v] {
                let w = self.to[a];
                if self.cap[a] > 0 && !seen[w] {
                    seen[w] = true;
                    parent_arc[w] = a;
                    stack.push(w);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let a = parent_arc[v];
            self.cap[a] -= 1;
            self.cap[a ^ 1] += 1;
            v = self.to[a ^ 1];
        }
        true
    }

    /// Augments until no path remains or `limit` units have been pushed.
    pub fn max_flow_up_to(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        while flow < limit && self.augment(s, t) {
            flow += 1;
        }
        flow
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &a in &self.adj[v] {
                let w = self.to[a];
                if self.cap[a] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Unit-capacity edge network of `g` (parallel edges are separate arcs).
pub fn edge_network(g: &Graph) -> FlowNetwork {
    let mut net = FlowNetwork::new(g.vertex_count());
    for e in g.edges() {
        if e.tail != e.head {
            net.add_arc(e.tail, e.head, 1);
        }
    }
    net
}

/// Local edge connectivity `λ(s, t)` capped at `limit`, with the source side
/// of a minimum cut when the cap is not reached.
pub fn edge_cut_up_to(g: &Graph, s: Vertex, t: Vertex, limit: usize) -> (usize, Option<Vec<Vertex>>) {
    let mut net = edge_network(g);
    let flow = net.max_flow_up_to(s, t, limit);
    if flow >= limit {
        return (flow, None);
    }
    let reach = net.residual_reachable(s);
    let side = (0..g.vertex_count()).filter(|&v| reach[v]).collect();
    (flow, Some(side))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_paths() {
        let g = Graph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(edge_cut_up_to(&g, 0, 3, 10).0, 3);
        let (f, side) = edge_cut_up_to(&g, 3, 0, 10);
        assert_eq!(f, 0);
        assert_eq!(side.unwrap(), vec![3]);
    }

    #[test]
    fn limit_stops_early() {
        let g = Graph::from_edges(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(edge_cut_up_to(&g, 0, 1, 2), (2, None));
    }
}
