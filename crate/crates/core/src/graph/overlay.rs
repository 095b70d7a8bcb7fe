use std::collections::BTreeSet;
use std::hash::BuildHasherDefault;

use rustc_hash::{FxHashMap as HashMap, FxHasher};

type IndexMap<K, V> = indexmap::IndexMap<K, V, BuildHasherDefault<FxHasher>>;

use super::{Edge, EdgeId, Incidence};
use crate::error::{Error, Result};

/// Edge-direction overlay over a base graph.
///
/// Tracks which edge ids are currently reversed. A reversed edge leaves a
/// hole at its rank in the old tail's out-list (and old head's in-list) and
/// is appended at the end of the gaining vertex's list. Only touched vertices
/// get entries, so a flip costs expected O(1) hash-map work plus an ordered
/// insert into the (short) hole set.
#[derive(Debug)]
pub struct Overlay<G: Incidence> {
    base: G,
    /// Reversed edges, stored in base orientation.
    reversed: HashMap<EdgeId, Edge<G::Node>>,
    out_holes: HashMap<G::Node, BTreeSet<usize>>,
    in_holes: HashMap<G::Node, BTreeSet<usize>>,
    gained_out: HashMap<G::Node, IndexMap<EdgeId, Edge<G::Node>>>,
    gained_in: HashMap<G::Node, IndexMap<EdgeId, Edge<G::Node>>>,
}

fn nth_surviving(i: usize, holes: Option<&BTreeSet<usize>>) -> usize {
    let mut j = i;
    if let Some(holes) = holes {
        for &h in holes {
            if h <= j {
                j += 1;
            } else {
                break;
            }
        }
    }
    j
}

impl<G: Incidence> Overlay<G> {
    pub fn new(base: G) -> Self {
        Overlay {
            base,
            reversed: HashMap::default(),
            out_holes: HashMap::default(),
            in_holes: HashMap::default(),
            gained_out: HashMap::default(),
            gained_in: HashMap::default(),
        }
    }

    pub fn base(&self) -> &G {
        &self.base
    }

    pub fn is_reversed(&self, e: EdgeId) -> bool {
        self.reversed.contains_key(&e)
    }

    pub fn reversed_count(&self) -> usize {
        self.reversed.len()
    }

    /// Reversed edge ids, in no particular order.
    pub fn reversed_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.reversed.keys().copied()
    }

    /// Flips one edge given in its current orientation.
    pub fn flip(&mut self, current: Edge<G::Node>) {
        if let Some(base_edge) = self.reversed.remove(&current.id) {
            let (t, h) = (base_edge.tail, base_edge.head);
            let id = base_edge.id;
            remove_hole(&mut self.out_holes, t, self.base.out_rank(id));
            remove_hole(&mut self.in_holes, h, self.base.in_rank(id));
            remove_gained(&mut self.gained_out, h, id);
            remove_gained(&mut self.gained_in, t, id);
        } else {
            let base_edge = current;
            let (t, h) = (base_edge.tail, base_edge.head);
            let id = base_edge.id;
            self.reversed.insert(id, base_edge);
            self.out_holes
                .entry(t)
                .or_default()
                .insert(self.base.out_rank(id));
            self.in_holes
                .entry(h)
                .or_default()
                .insert(self.base.in_rank(id));
            let flipped = base_edge.flipped();
            self.gained_out.entry(h).or_default().insert(id, flipped);
            self.gained_in.entry(t).or_default().insert(id, flipped);
        }
    }

    /// Reverses every edge of a directed walk given in current orientation.
    pub fn apply_path_reversal(&mut self, path: &[Edge<G::Node>]) -> Result<()> {
        for w in path.windows(2) {
            if w[0].head != w[1].tail {
                return Err(Error::InvalidParameter(format!(
                    "edges {:?} and {:?} are not consecutive on a directed path",
                    w[0].id, w[1].id
                )));
            }
        }
        for &e in path {
            self.flip(e);
        }
        Ok(())
    }
}

fn remove_hole<N: Eq + std::hash::Hash>(
    holes: &mut HashMap<N, BTreeSet<usize>>,
    v: N,
    rank: usize,
) {
    if let Some(set) = holes.get_mut(&v) {
        set.remove(&rank);
        if set.is_empty() {
            holes.remove(&v);
        }
    }
}

fn remove_gained<N: Eq + std::hash::Hash, T>(
    gained: &mut HashMap<N, IndexMap<EdgeId, T>>,
    v: N,
    id: EdgeId,
) {
    if let Some(map) = gained.get_mut(&v) {
        map.shift_remove(&id);
        if map.is_empty() {
            gained.remove(&v);
        }
    }
}

impl<G: Incidence> Incidence for Overlay<G> {
    type Node = G::Node;

    fn node_count(&self) -> usize {
        self.base.node_count()
    }

    fn edge_id_bound(&self) -> usize {
        self.base.edge_id_bound()
    }

    fn out_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>> {
        let holes = self.out_holes.get(&v);
        let kept = self.base.out_degree(v) - holes.map_or(0, BTreeSet::len);
        if i < kept {
            self.base.out_edge(v, nth_surviving(i, holes))
        } else {
            self.gained_out
                .get(&v)
                .and_then(|m| m.get_index(i - kept))
                .map(|(_, e)| *e)
        }
    }

    fn in_edge(&self, v: Self::Node, i: usize) -> Option<Edge<Self::Node>> {
        let holes = self.in_holes.get(&v);
        let kept = self.base.in_degree(v) - holes.map_or(0, BTreeSet::len);
        if i < kept {
            self.base.in_edge(v, nth_surviving(i, holes))
        } else {
            self.gained_in
                .get(&v)
                .and_then(|m| m.get_index(i - kept))
                .map(|(_, e)| *e)
        }
    }

    fn out_degree(&self, v: Self::Node) -> usize {
        self.base.out_degree(v) - self.out_holes.get(&v).map_or(0, BTreeSet::len)
            + self.gained_out.get(&v).map_or(0, IndexMap::len)
    }

    fn in_degree(&self, v: Self::Node) -> usize {
        self.base.in_degree(v) - self.in_holes.get(&v).map_or(0, BTreeSet::len)
            + self.gained_in.get(&v).map_or(0, IndexMap::len)
    }

    // Ranks are only meaningful for the base orientation; overlays are never
    // stacked.
    fn out_rank(&self, e: EdgeId) -> usize {
        self.base.out_rank(e)
    }

    fn in_rank(&self, e: EdgeId) -> usize {
        self.base.in_rank(e)
    }
}
