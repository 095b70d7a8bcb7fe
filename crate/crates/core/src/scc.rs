//! Strongly connected components (iterative Tarjan) and undirected
//! connected components.

use crate::graph::{Graph, Incidence, UndirectedGraph, Vertex};

/// Component index per vertex plus the components themselves.
///
/// Components come out in reverse topological order of the condensation:
/// component 0 is a sink (no edges leave it).
#[derive(Clone, Debug)]
pub struct Components {
    pub comp_of: Vec<usize>,
    pub members: Vec<Vec<Vertex>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

pub fn strongly_connected_components(g: &Graph) -> Components {
    let n = g.vertex_count();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp_of = vec![UNSEEN; n];
    let mut members = Vec::new();
    let mut next_index = 0;
    // (vertex, position in its out-list)
    let mut call: Vec<(Vertex, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let (v, pos) = *top;
            if let Some(e) = g.out_edge(v, pos) {
                top.1 += 1;
                let w = e.head;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let id = members.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp_of[w] = id;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    members.push(comp);
                }
            }
        }
    }
    Components { comp_of, members }
}

pub fn is_strongly_connected(g: &Graph) -> bool {
    g.vertex_count() <= 1 || strongly_connected_components(g).count() == 1
}

pub fn connected_components(g: &UndirectedGraph) -> Components {
    let adj = g.adjacency();
    let mut comp_of = vec![usize::MAX; g.n];
    let mut members = Vec::new();
    for root in 0..g.n {
        if comp_of[root] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut comp = vec![root];
        comp_of[root] = id;
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for &(w, _) in &adj[v] {
                if comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        members.push(comp);
    }
    Components { comp_of, members }
}
