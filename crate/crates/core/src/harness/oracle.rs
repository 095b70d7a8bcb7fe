//! Brute-force reference answers computed straight from an edge list.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Vertex;

/// Largest `n` accepted by the subset-enumeration oracles.
pub const ENUMERATION_LIMIT: usize = 20;
/// Largest `n` accepted by the flow-based connectivity oracle.
pub const FLOW_LIMIT: usize = 64;
/// Largest `n` accepted by the decomposition oracle.
pub const DECOMPOSITION_LIMIT: usize = 12;
/// Largest `n` accepted by the split-graph lemma check.
pub const SPLIT_LIMIT: usize = 6;

fn guard(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::TooLarge { what, limit, n })
    } else {
        Ok(())
    }
}

fn mask_of(set: &[Vertex]) -> u64 {
    set.iter().fold(0, |m, &v| m | 1 << v)
}

fn members(mask: u64) -> Vec<Vertex> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Arcs from `mask` to `within & !mask`.
fn crossing(edges: &[(Vertex, Vertex)], mask: u64, within: u64) -> usize {
    edges
        .iter()
        .filter(|&&(u, v)| mask >> u & 1 == 1 && (within & !mask) >> v & 1 == 1)
        .count()
}

/// Leaving-arc counts of every subset, indexed by bitmask.
fn leaving_table(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<u32> {
    let mut mult = vec![vec![0u32; n]; n];
    for &(u, v) in edges {
        mult[u][v] += 1;
    }
    let mut table = vec![0u32; 1 << n];
    for mask in 1usize..1 << n {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let into_v: u32 = (0..n).filter(|&u| rest >> u & 1 == 1).map(|u| mult[u][v]).sum();
        let out_of_v: u32 = (0..n).filter(|&w| mask >> w & 1 == 0).map(|w| mult[v][w]).sum();
        table[mask] = table[rest] - into_v + out_of_v;
    }
    table
}

/// Out-boundary sizes of every subset, indexed by bitmask.
fn boundary_table(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<u32> {
    let mut reach = vec![0u64; n];
    for &(u, v) in edges {
        reach[u] |= 1 << v;
    }
    let mut union = vec![0u64; 1 << n];
    let mut table = vec![0u32; 1 << n];
    for mask in 1usize..1 << n {
        let v = mask.trailing_zeros() as usize;
        union[mask] = union[mask & (mask - 1)] | reach[v];
        table[mask] = (union[mask] & !(mask as u64)).count_ones();
    }
    table
}

/// All minimal sets containing `s` whose measure is at most `k`, where a
/// set is minimal if every proper subset containing `s` measures more.
fn minimal_sets(n: usize, s: Vertex, k: usize, measure: &[u32]) -> Vec<Vec<Vertex>> {
    let sbit = 1usize << s;
    // best[mask]: smallest measure over subsets of mask containing s
    let mut best = vec![u32::MAX; 1 << n];
    let mut found = Vec::new();
    for mask in 0usize..1 << n {
        if mask & sbit == 0 {
            continue;
        }
        let proper = (0..n)
            .filter(|&v| v != s && mask >> v & 1 == 1)
            .map(|v| best[mask & !(1 << v)])
            .min()
            .unwrap_or(u32::MAX);
        best[mask] = proper.min(measure[mask]);
        if measure[mask] as usize <= k && proper > measure[mask] {
            found.push(members(mask as u64));
        }
    }
    found
}

/// Every minimal k-edge-out component containing `s`.
pub fn oracle_min_edge_out_components(n: usize, edges: &[(Vertex, Vertex)], s: Vertex, k: usize) -> Result<Vec<Vec<Vertex>>> {
    guard("edge-out component enumeration", n, ENUMERATION_LIMIT)?;
    Ok(minimal_sets(n, s, k, &leaving_table(n, edges)))
}

/// Every minimal k-vertex-out component containing `s`.
pub fn oracle_min_vertex_out_components(n: usize, edges: &[(Vertex, Vertex)], s: Vertex, k: usize) -> Result<Vec<Vec<Vertex>>> {
    guard("vertex-out component enumeration", n, ENUMERATION_LIMIT)?;
    Ok(minimal_sets(n, s, k, &boundary_table(n, edges)))
}

/// Whether `set` (containing `s`) has strictly fewer leaving arcs than every
/// proper subset containing `s`.
pub fn is_minimal_edge_out(n: usize, edges: &[(Vertex, Vertex)], s: Vertex, set: &[Vertex]) -> Result<bool> {
    guard("minimality check", n, ENUMERATION_LIMIT)?;
    let full = mask_of(set);
    let own = crossing(edges, full, u64::MAX);
    let others = full & !(1 << s);
    let mut sub = others;
    loop {
        let candidate = sub | 1 << s;
        if candidate != full && crossing(edges, candidate, u64::MAX) <= own {
            return Ok(false);
        }
        if sub == 0 {
            return Ok(true);
        }
        sub = (sub - 1) & others;
    }
}

/// Smallest number of arcs leaving a nonempty proper subset, with one such
/// subset; `None` for graphs with fewer than two vertices.
pub fn oracle_min_edge_cut(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Option<(usize, Vec<Vertex>)>> {
    guard("global cut enumeration", n, ENUMERATION_LIMIT)?;
    if n < 2 {
        return Ok(None);
    }
    let table = leaving_table(n, edges);
    let full = (1usize << n) - 1;
    let best = (1..full).min_by_key(|&m| table[m]).expect("n >= 2");
    Ok(Some((table[best] as usize, members(best as u64))))
}

/// Vertex connectivity: fewest vertices whose removal separates some
/// ordered non-adjacent pair, via max-flow on the split network of every
/// such pair; `n - 1` if there is none.
pub fn oracle_vertex_connectivity(n: usize, edges: &[(Vertex, Vertex)]) -> Result<usize> {
    guard("vertex connectivity oracle", n, FLOW_LIMIT)?;
    if n < 2 {
        return Ok(0);
    }
    let mut adjacent = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adjacent[u][v] = true;
    }
    let mut best = n - 1;
    for (s, row) in adjacent.iter().enumerate() {
        for (t, &adj) in row.iter().enumerate() {
            if s != t && !adj {
                best = best.min(pair_disjoint_paths(n, edges, s, t, best));
            }
        }
    }
    Ok(best)
}

/// Internally vertex-disjoint `s`-`t` paths, counted up to `limit`, by
/// Edmonds-Karp on a capacity matrix. Node `2v` is `v`'s entry, `2v + 1`
/// its exit.
fn pair_disjoint_paths(n: usize, edges: &[(Vertex, Vertex)], s: Vertex, t: Vertex, limit: usize) -> usize {
    let size = 2 * n;
    let big = n as i32 + 1;
    let mut cap = vec![vec![0i32; size]; size];
    let mut nbrs = vec![Vec::new(); size];
    let mut link = |cap: &mut Vec<Vec<i32>>, a: usize, b: usize, c: i32| {
        if cap[a][b] == 0 && cap[b][a] == 0 {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
        cap[a][b] += c;
    };
    for v in 0..n {
        let c = if v == s || v == t { big } else { 1 };
        link(&mut cap, 2 * v, 2 * v + 1, c);
    }
    for &(u, v) in edges {
        if u != v {
            link(&mut cap, 2 * u + 1, 2 * v, big);
        }
    }
    let (source, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    while flow < limit {
        let mut prev = vec![usize::MAX; size];
        prev[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for &y in &nbrs[x] {
                if prev[y] == usize::MAX && cap[x][y] > 0 {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut y = sink;
        while y != source {
            let x = prev[y];
            cap[x][y] -= 1;
            cap[y][x] += 1;
            y = x;
        }
        flow += 1;
    }
    flow
}

/// Maximal k-edge-connected vertex sets, found by testing every subset;
/// vertices in no multi-vertex set become singletons. Classes sorted.
pub fn oracle_mkecs(n: usize, edges: &[(Vertex, Vertex)], k: usize) -> Result<Vec<Vec<Vertex>>> {
    guard("decomposition oracle", n, DECOMPOSITION_LIMIT)?;
    let mut masks: Vec<u64> = (1u64..1 << n).filter(|m| m.count_ones() >= 2).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    let mut taken = 0u64;
    let mut classes = Vec::new();
    for mask in masks {
        if mask & taken == 0 && k_edge_connected_subset(edges, mask, k) {
            taken |= mask;
            classes.push(members(mask));
        }
    }
    for v in 0..n {
        if taken >> v & 1 == 0 {
            classes.push(vec![v]);
        }
    }
    classes.sort();
    Ok(classes)
}

fn k_edge_connected_subset(edges: &[(Vertex, Vertex)], within: u64, k: usize) -> bool {
    let mut sub = (within - 1) & within;
    while sub != 0 {
        if crossing(edges, sub, within) < k {
            return false;
        }
        sub = (sub - 1) & within;
    }
    true
}

/// Outcome of checking both split-graph lemmas on one graph.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SplitLemmaReport {
    /// Start vertices examined.
    pub sources: usize,
    /// Vertex sets checked for the forward direction.
    pub forward_sets: usize,
    /// Minimal split-graph sets checked for the backward direction.
    pub backward_sets: usize,
    pub violations: Vec<String>,
}

/// Explicit split graph around `s`: node 0 is `s`, `2i - 1` and `2i` are
/// the entry and exit copies of the `i`-th other vertex.
struct ExplicitSplit {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    entry: Vec<usize>,
    exit: Vec<usize>,
}

impl ExplicitSplit {
    fn new(n: usize, edges: &[(Vertex, Vertex)], s: Vertex) -> Self {
        let mut entry = vec![0; n];
        let mut exit = vec![0; n];
        let mut next = 1;
        for v in (0..n).filter(|&v| v != s) {
            entry[v] = next;
            exit[v] = next + 1;
            next += 2;
        }
        let mut split_edges: Vec<_> = edges.iter().map(|&(u, v)| (exit[u], entry[v])).collect();
        for v in (0..n).filter(|&v| v != s) {
            split_edges.push((entry[v], exit[v]));
        }
        ExplicitSplit {
            nodes: next,
            edges: split_edges,
            entry,
            exit,
        }
    }

    fn volume(&self, set: u64) -> usize {
        self.edges.iter().filter(|&&(a, _)| set >> a & 1 == 1).count()
    }

    fn restricted_symmetric_volume(&self, set: u64, n: usize) -> usize {
        let mut interior = set;
        for v in 0..n {
            if self.entry[v] != self.exit[v] && set >> self.exit[v] & 1 == 0 {
                interior &= !(1 << self.entry[v]);
            }
        }
        let out = self.volume(set);
        let into_interior = self
            .edges
            .iter()
            .filter(|&&(a, b)| set >> a & 1 == 0 && interior >> b & 1 == 1)
            .count();
        out + into_interior
    }
}

fn volume(edges: &[(Vertex, Vertex)], set: u64) -> usize {
    edges.iter().filter(|&&(u, _)| set >> u & 1 == 1).count()
}

fn symmetric_volume(edges: &[(Vertex, Vertex)], set: u64) -> usize {
    edges
        .iter()
        .filter(|&&(u, v)| set >> u & 1 == 1 || set >> v & 1 == 1)
        .count()
}

/// Vertices of `set` reachable from `s` using only edges inside `set`.
fn reach_within(edges: &[(Vertex, Vertex)], s: Vertex, set: u64) -> u64 {
    let mut seen = 1u64 << s;
    loop {
        let next = edges
            .iter()
            .filter(|&&(u, v)| seen >> u & 1 == 1 && set >> v & 1 == 1)
            .fold(seen, |m, &(_, v)| m | 1 << v);
        if next == seen {
            return seen;
        }
        seen = next;
    }
}

fn out_boundary(edges: &[(Vertex, Vertex)], set: u64) -> u64 {
    edges
        .iter()
        .filter(|&&(u, v)| set >> u & 1 == 1 && set >> v & 1 == 0)
        .fold(0, |b, &(_, v)| b | 1 << v)
}

/// Checks, for every start vertex: each vertex set `C` containing it whose
/// vertices are all reachable from it inside `C` maps to a split-graph set
/// with at most `|B(C)|` leaving edges and volume (and restricted symmetric
/// volume) at most three times that of `C`; every other `C` shrinks to such a
/// set without growing its boundary or volumes; and each
/// minimal split-graph set containing the start maps back to a set whose
/// boundary and (symmetric) volume are no larger.
pub fn check_split_lemmas(n: usize, edges: &[(Vertex, Vertex)]) -> Result<SplitLemmaReport> {
    guard("split-graph lemma check", n, SPLIT_LIMIT)?;
    let mut report = SplitLemmaReport::default();
    for s in 0..n {
        report.sources += 1;
        let split = ExplicitSplit::new(n, edges, s);
        let split_leaving = leaving_table(split.nodes, &split.edges);

        for c in (0u64..1 << n).filter(|c| c >> s & 1 == 1) {
            report.forward_sets += 1;
            let b = out_boundary(edges, c);
            let core = reach_within(edges, s, c);
            if core != c {
                // the lemma is applied to the part of C reachable from s
                let core_b = out_boundary(edges, core);
                if core_b & !b != 0
                    || volume(edges, core) > volume(edges, c)
                    || symmetric_volume(edges, core) > symmetric_volume(edges, c)
                {
                    report.violations.push(format!("s={s} C={:?}: reachable core is not smaller", members(c)));
                }
                continue;
            }
            let image = members(c)
                .into_iter()
                .flat_map(|v| [split.entry[v], split.exit[v]])
                .chain(members(b).into_iter().map(|v| split.entry[v]))
                .fold(0u64, |m, x| m | 1 << x);
            let leaving = split_leaving[image as usize] as usize;
            if leaving > b.count_ones() as usize {
                report.violations.push(format!("s={s} C={:?}: {leaving} split edges leave, boundary {}", members(c), b.count_ones()));
            }
            if split.volume(image) > 3 * volume(edges, c) {
                report.violations.push(format!("s={s} C={:?}: split volume exceeds three times volume", members(c)));
            }
            if split.restricted_symmetric_volume(image, n) > 3 * symmetric_volume(edges, c) {
                report.violations.push(format!("s={s} C={:?}: restricted symmetric volume exceeds bound", members(c)));
            }
        }

        let minimal = minimal_sets(split.nodes, 0, usize::MAX, &split_leaving);
        for set in minimal {
            report.backward_sets += 1;
            let image = mask_of(&set);
            let c = (0..n)
                .filter(|&v| image >> split.exit[v] & 1 == 1)
                .fold(0u64, |m, v| m | 1 << v);
            let leaving = split_leaving[image as usize] as usize;
            let boundary = out_boundary(edges, c).count_ones() as usize;
            if boundary > leaving {
                report.violations.push(format!("s={s} C'={set:?}: boundary {boundary} exceeds {leaving} leaving edges"));
            }
            if volume(edges, c) > split.volume(image) {
                report.violations.push(format!("s={s} C'={set:?}: volume exceeds split volume"));
            }
            if symmetric_volume(edges, c) > split.restricted_symmetric_volume(image, n) {
                report.violations.push(format!("s={s} C'={set:?}: symmetric volume exceeds restricted symmetric volume"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_source_is_its_own_component() {
        let comps = oracle_min_edge_out_components(3, &[(1, 2)], 0, 0).unwrap();
        assert_eq!(comps, vec![vec![0]]);
    }

    #[test]
    fn three_cycle_with_k_zero_is_the_whole_cycle() {
        let comps = oracle_min_edge_out_components(3, &[(0, 1), (1, 2), (2, 0)], 0, 0).unwrap();
        assert_eq!(comps, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn minimality_check_agrees_with_enumeration() {
        let edges = [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (3, 0)];
        for k in 0..3 {
            let comps = oracle_min_edge_out_components(4, &edges, 0, k).unwrap();
            for c in &comps {
                assert!(is_minimal_edge_out(4, &edges, 0, c).unwrap());
            }
        }
        // the closure of 0 is minimal; a closed proper subset breaks minimality
        assert!(is_minimal_edge_out(4, &edges, 0, &[0, 1, 2, 3]).unwrap());
        assert!(!is_minimal_edge_out(4, &[(0, 1), (1, 2)], 0, &[0, 1, 2, 3]).unwrap());
    }

    #[test]
    fn connectivity_of_small_graphs() {
        let mut k4 = Vec::new();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    k4.push((u, v));
                }
            }
        }
        assert_eq!(oracle_vertex_connectivity(4, &k4).unwrap(), 3);
        assert_eq!(oracle_vertex_connectivity(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap(), 1);
    }

    #[test]
    fn size_guards_are_errors() {
        assert!(oracle_min_edge_cut(21, &[]).is_err());
        assert!(oracle_vertex_connectivity(65, &[]).is_err());
        assert!(oracle_mkecs(13, &[], 2).is_err());
        assert!(check_split_lemmas(7, &[]).is_err());
    }

    #[test]
    fn decomposition_of_two_triangles_joined_by_one_arc_pair() {
        let mut edges = Vec::new();
        for (u, v) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)] {
            edges.push((u, v));
            edges.push((v, u));
        }
        assert_eq!(oracle_mkecs(6, &edges, 2).unwrap(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(oracle_mkecs(6, &edges, 1).unwrap(), vec![vec![0, 1, 2, 3, 4, 5]]);
    }

    #[test]
    fn split_lemmas_hold_on_a_small_graph() {
        let edges = [(0, 1), (1, 2), (2, 0), (0, 2), (2, 3), (3, 1)];
        let report = check_split_lemmas(4, &edges).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert_eq!(report.sources, 4);
    }

    #[test]
    fn unreachable_members_reduce_to_the_reachable_core() {
        // C = {0, 3} has volume 0 but its image holds the transit edge of 3
        let edges = [(2, 3)];
        let split = ExplicitSplit::new(4, &edges, 0);
        let image = [split.entry[3], split.exit[3], 0].iter().fold(0u64, |m, &x| m | 1 << x);
        assert!(split.volume(image) > 3 * volume(&edges, 0b1001));
        assert_eq!(reach_within(&edges, 0, 0b1001), 0b0001);
        assert!(check_split_lemmas(4, &edges).unwrap().violations.is_empty());
    }
}
