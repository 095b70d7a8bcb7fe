use rustc_hash::{FxHashMap, FxHashSet};

use crate::graph::{Edge, EdgeId, Incidence};

/// How a processed edge entered `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanKind {
    /// Out-edge of a visited vertex; its head was pushed.
    Out,
    /// In-edge charged when its head became interior.
    In,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Processed<N> {
    /// Orientation at processing time.
    pub edge: Edge<N>,
    /// Visited node the entry hangs off: the tail for out-scans, the interior
    /// node for in-scans.
    pub anchor: N,
    pub kind: ScanKind,
}

/// Which edges are charged to the budget.
#[derive(Clone, Copy, Debug)]
pub enum Accounting<N> {
    /// Out-edges of visited vertices only.
    Volume,
    /// Out-edges of visited vertices plus the in-edges of interior nodes.
    /// For a freshly visited node the function returns `(node whose in-edges
    /// get scanned, node that must already be visited)`. The scan happens
    /// once, when the second of the two is visited.
    RestrictedSymmetric(fn(N) -> Option<(N, N)>),
}

#[derive(Clone, Debug)]
pub struct DfsResult<N> {
    pub processed: Vec<Processed<N>>,
    /// Visited nodes in visit order.
    pub visited: Vec<N>,
    /// First-encounter attachment: node -> edge through which it was pushed.
    pub tree_parent: FxHashMap<N, Edge<N>>,
    pub completed: bool,
}

impl<N: Copy + Eq + std::hash::Hash> DfsResult<N> {
    /// Edges of the DFS tree from the start node to `v`, in walk order.
    pub fn tree_path(&self, v: N) -> Vec<Edge<N>> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(&e) = self.tree_parent.get(&cur) {
            path.push(e);
            cur = e.tail;
        }
        path.reverse();
        path
    }
}

/// Stack-based DFS from `s` that stops as soon as `budget` edges have been
/// processed. Popping an unvisited node visits it and pushes the head of
/// each of its out-edges (in incidence order); each push is one processed
/// edge and the budget is checked right after it.
pub fn budgeted_dfs<G: Incidence>(
    g: &G,
    s: G::Node,
    budget: usize,
    accounting: Accounting<G::Node>,
) -> DfsResult<G::Node> {
    let room = budget.saturating_add(1).min(1 << 12);
    let mut processed = Vec::with_capacity(room);
    let mut counted: FxHashSet<EdgeId> = FxHashSet::default();
    let mut visited_set = FxHashSet::with_capacity_and_hasher(room, Default::default());
    let mut visited = Vec::with_capacity(room);
    let mut tree_parent = FxHashMap::with_capacity_and_hasher(room, Default::default());
    let mut stack = vec![s];
    let mut encountered = FxHashSet::with_capacity_and_hasher(room, Default::default());
    encountered.insert(s);

    let result = |processed, visited, tree_parent, completed| DfsResult {
        processed,
        visited,
        tree_parent,
        completed,
    };

    if budget == 0 {
        return result(processed, visited, tree_parent, false);
    }

    while let Some(v) = stack.pop() {
        if !visited_set.insert(v) {
            continue;
        }
        visited.push(v);

        if let Accounting::RestrictedSymmetric(pair) = accounting {
            if let Some((target, partner)) = pair(v) {
                if visited_set.contains(&partner) {
                    let mut i = 0;
                    while let Some(e) = g.in_edge(target, i) {
                        i += 1;
                        if counted.insert(e.id) {
                            processed.push(Processed {
                                edge: e,
                                anchor: target,
                                kind: ScanKind::In,
                            });
                            if processed.len() >= budget {
                                return result(processed, visited, tree_parent, false);
                            }
                        }
                    }
                }
            }
        }

        let mut i = 0;
        while let Some(e) = g.out_edge(v, i) {
            i += 1;
            if encountered.insert(e.head) {
                tree_parent.insert(e.head, e);
            }
            stack.push(e.head);
            if counted.insert(e.id) {
                processed.push(Processed {
                    edge: e,
                    anchor: v,
                    kind: ScanKind::Out,
                });
                if processed.len() >= budget {
                    return result(processed, visited, tree_parent, false);
                }
            }
        }
    }
    result(processed, visited, tree_parent, true)
}
