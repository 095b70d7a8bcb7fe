//! Vertex connectivity of directed and undirected graphs.
//!
//! The decision procedure for "κ ≥ k" looks for a vertex cut with fewer
//! than `k` separator vertices in two ways: Ford-Fulkerson between the
//! endpoints of randomly sampled edge pairs (finds cuts with two large
//! sides) and a sweep of local vertex-cut detections over geometrically
//! shrinking volume bounds (finds cuts with one small side). A search over
//! `k` on top of it yields κ together with a minimum cut.

use std::cell::OnceCell;
use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::vertex_certificate;
use crate::flow::{FlowNetwork, INF_CAP};
use crate::graph::{Graph, UndirectedGraph, Vertex};
use crate::local::{detect_vertex_out_component, vertex_component_volume_bound};
use crate::measure::membership;
use crate::scc::strongly_connected_components;

/// A vertex cut `(L, M, R)`: a partition of `V` with `L`, `R` nonempty and
/// no edge from `L` to `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCut {
    pub left: Vec<Vertex>,
    pub separator: Vec<Vertex>,
    pub right: Vec<Vertex>,
}

impl VertexCut {
    fn new(mut left: Vec<Vertex>, mut separator: Vec<Vertex>, mut right: Vec<Vertex>) -> Self {
        left.sort_unstable();
        separator.sort_unstable();
        right.sort_unstable();
        VertexCut {
            left,
            separator,
            right,
        }
    }

    pub fn size(&self) -> usize {
        self.separator.len()
    }

    /// Checks the partition, the nonempty sides, and that no edge of `g`
    /// runs from `left` to `right`.
    pub fn validate(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        let mut side = vec![u8::MAX; n];
        for (tag, part) in [&self.left, &self.separator, &self.right].into_iter().enumerate() {
            for &v in part {
                if v >= n || side[v] != u8::MAX {
                    return false;
                }
                side[v] = tag as u8;
            }
        }
        !self.left.is_empty()
            && !self.right.is_empty()
            && side.iter().all(|&t| t != u8::MAX)
            && g.edges().all(|e| !(side[e.tail] == 0 && side[e.head] == 2))
    }
}

/// Outcome of one "κ ≥ k" decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decision {
    /// A validated cut with fewer than `k` separator vertices.
    CutFound { cut: VertexCut },
    /// No such cut was found; κ ≥ k with high probability (or for sure when
    /// the exact fallback decided).
    ProbablyAtLeast,
    /// `k ≥ n`: κ ≤ n − 1 < k, and a complete graph has no cut to show.
    TooFewVertices,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProbeStats {
    pub pair_samples: usize,
    pub flow_runs: usize,
    pub local_calls: usize,
    pub local_queries: u64,
    /// The exact fallback answered this probe.
    pub exact: bool,
}

impl ProbeStats {
    fn absorb(&mut self, other: ProbeStats) {
        self.pair_samples += other.pair_samples;
        self.flow_runs += other.flow_runs;
        self.local_calls += other.local_calls;
        self.local_queries += other.local_queries;
        self.exact |= other.exact;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityVerdict {
    pub k: usize,
    pub decision: Decision,
    pub stats: ProbeStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityConfig {
    /// Confidence constant `c`: each sampling step fails with probability
    /// at most `n^-c`.
    pub confidence: f64,
    /// Use the exact algorithm outright on graphs with at most this many
    /// vertices.
    pub exact_fallback_threshold: Option<usize>,
}

impl Default for ConnectivityConfig {
    fn default() -> Self {
        ConnectivityConfig {
            confidence: 2.0,
            exact_fallback_threshold: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityResult {
    pub kappa: usize,
    /// A validated cut of size `kappa`; absent only for complete graphs.
    pub witness: Option<VertexCut>,
    pub probes: Vec<ConnectivityVerdict>,
}

/// Flow network with every vertex `v` split into `2v -> 2v + 1`.
fn split_network(g: &Graph, s: Vertex, t: Vertex) -> FlowNetwork {
    let n = g.vertex_count();
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        let cap = if v == s || v == t { INF_CAP } else { 1 };
        net.add_arc(2 * v, 2 * v + 1, cap);
    }
    for e in g.edges() {
        if e.tail != e.head {
            net.add_arc(2 * e.tail + 1, 2 * e.head, INF_CAP);
        }
    }
    net
}

/// Up to `k` unit augmentations from `s` to `t` on the split network. If the
/// flow stays below `k`, returns the cut read off the residual graph; its
/// separator has exactly as many vertices as the flow value.
pub fn pair_vertex_cut_at_most(g: &Graph, s: Vertex, t: Vertex, k: usize) -> Option<VertexCut> {
    assert_ne!(s, t, "pair cut needs distinct endpoints");
    let mut net = split_network(g, s, t);
    let flow = net.max_flow_up_to(2 * s + 1, 2 * t, k);
    if flow >= k {
        return None;
    }
    let reach = net.residual_reachable(2 * s + 1);
    let (mut left, mut separator, mut right) = (Vec::new(), Vec::new(), Vec::new());
    for v in 0..g.vertex_count() {
        if v == s || reach[2 * v + 1] {
            left.push(v);
        } else if reach[2 * v] {
            separator.push(v);
        } else {
            right.push(v);
        }
    }
    debug_assert_eq!(separator.len(), flow);
    Some(VertexCut::new(left, separator, right))
}

/// Number of edge pairs drawn by [`sample_pair_step`].
pub fn pair_sample_count(m: usize, n: usize, delta_star: usize, confidence: f64) -> usize {
    (4.0 * m as f64 / delta_star as f64 * confidence * (n as f64).ln()).ceil() as usize
}

/// Samples edge pairs and tries all four endpoint combinations as `(s, t)`;
/// returns the first cut with fewer than `k` separator vertices.
pub fn sample_pair_step<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    delta_star: usize,
    confidence: f64,
    rng: &mut R,
) -> (Option<VertexCut>, ProbeStats) {
    let mut stats = ProbeStats::default();
    let m = g.edge_count();
    if m == 0 || k == 0 {
        return (None, stats);
    }
    let adjacent = adjacency(g);
    let n = g.vertex_count();
    let open_pairs = n * (n - 1) - adjacent.iter().filter(|&&(a, b)| a != b).count();
    // pair flows are deterministic, so each pair is tried once
    let mut tried = HashSet::new();
    for _ in 0..pair_sample_count(m, n, delta_star.max(1), confidence) {
        if tried.len() == open_pairs {
            break;
        }
        stats.pair_samples += 1;
        let (u, v) = g.endpoints()[rng.gen_range(0..m)];
        let (x, y) = g.endpoints()[rng.gen_range(0..m)];
        for (s, t) in [(u, x), (u, y), (v, x), (v, y)] {
            if s == t || adjacent.contains(&(s, t)) || !tried.insert((s, t)) {
                continue;
            }
            stats.flow_runs += 1;
            if let Some(cut) = pair_vertex_cut_at_most(g, s, t, k) {
                return (Some(cut), stats);
            }
        }
    }
    (None, stats)
}

fn adjacency(g: &Graph) -> HashSet<(Vertex, Vertex)> {
    g.endpoints().iter().copied().collect()
}

/// Runs local vertex-out detection from `s` with `k - 1` allowed boundary
/// vertices on `g` (out-side) and on `reversed` (in-side), turning a proper
/// component into a cut of `original`.
#[allow(clippy::too_many_arguments)]
fn local_cut_at<R: Rng + ?Sized>(
    g: &Graph,
    reversed: &Graph,
    s: Vertex,
    k: usize,
    delta: usize,
    p: f64,
    stats: &mut ProbeStats,
    rng: &mut R,
) -> Option<VertexCut> {
    let m = g.edge_count();
    let n = g.vertex_count();
    for (view, flip) in [(g, false), (reversed, true)] {
        stats.local_calls += 1;
        let r = detect_vertex_out_component(view, s, k - 1, delta, p, true, rng)
            .expect("parameters checked by caller");
        stats.local_queries += r.queries_used;
        if !r.is_found() || r.symmetric_volume + k * k >= m {
            continue;
        }
        let mut taken = membership(n, &r.members);
        for &b in &r.boundary {
            taken[b] = true;
        }
        let rest: Vec<_> = (0..n).filter(|&v| !taken[v]).collect();
        let cut = if flip {
            VertexCut::new(rest, r.boundary, r.members)
        } else {
            VertexCut::new(r.members, r.boundary, rest)
        };
        if cut.validate(g) {
            return Some(cut);
        }
    }
    None
}

/// Sweeps volume bounds `Δ*/2^i` down to 1, running local detection from
/// both endpoints of sampled edges; returns the first proper component as a
/// cut with fewer than `k` separator vertices.
pub fn local_sweep_step<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    delta_star: usize,
    confidence: f64,
    rng: &mut R,
) -> (Option<VertexCut>, ProbeStats) {
    let mut stats = ProbeStats::default();
    let m = g.edge_count();
    let n = g.vertex_count();
    if m == 0 || k == 0 {
        return (None, stats);
    }
    let reversed = g.reverse();
    let p = 1.0 - 1.0 / (n as f64).powi(3);
    // a failed search at some bound also covers every smaller bound
    let mut tried = vec![false; n];
    let mut untried = n;
    let mut level = 0u32;
    while delta_star >> level >= 1 && untried > 0 {
        let delta = delta_star >> level;
        let next = delta_star as f64 / f64::from(1u32 << (level + 1));
        let samples = (m as f64 / next * confidence * (n as f64).ln()).ceil() as usize;
        for _ in 0..samples {
            if untried == 0 {
                break;
            }
            let (u, v) = g.endpoints()[rng.gen_range(0..m)];
            for s in [u, v] {
                if std::mem::replace(&mut tried[s], true) {
                    continue;
                }
                untried -= 1;
                if let Some(cut) = local_cut_at(g, &reversed, s, k, delta, p, &mut stats, rng) {
                    return (Some(cut), stats);
                }
            }
        }
        level += 1;
    }
    (None, stats)
}

/// Largest `Δ ≥ 1` with `S(Δ) + k² < m`, where `S` bounds the symmetric
/// volume of a component returned by local detection with `k - 1`.
pub fn delta_star(m: usize, k: usize) -> Option<usize> {
    let fits = |d: usize| vertex_component_volume_bound(k.saturating_sub(1), d) + k * k < m;
    if !fits(1) {
        return None;
    }
    let (mut lo, mut hi) = (1, m);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Some(lo)
}

/// Exact κ: minimum pair connectivity over ordered non-adjacent pairs, with
/// a cut attaining it; `n - 1` and no cut for complete graphs.
pub fn fallback_exact(g: &Graph) -> (usize, Option<VertexCut>) {
    let n = g.vertex_count();
    let adjacent = adjacency(g);
    let mut best: (usize, Option<VertexCut>) = (n.saturating_sub(1), None);
    for s in 0..n {
        for t in 0..n {
            if s == t || adjacent.contains(&(s, t)) {
                continue;
            }
            let limit = if best.1.is_some() { best.0 } else { n };
            if let Some(cut) = pair_vertex_cut_at_most(g, s, t, limit) {
                best = (cut.size(), Some(cut));
                if best.0 == 0 {
                    return best;
                }
            }
        }
    }
    best
}

fn sink_witness(g: &Graph) -> Option<VertexCut> {
    let comps = strongly_connected_components(g);
    if comps.count() <= 1 {
        return None;
    }
    let sink = comps.members[0].clone();
    let inside = membership(g.vertex_count(), &sink);
    let rest = (0..g.vertex_count()).filter(|&v| !inside[v]).collect();
    Some(VertexCut::new(sink, Vec::new(), rest))
}

/// Decision procedure and κ search over one directed graph, caching the
/// exact fallback so it runs at most once.
struct Solver<'g> {
    g: &'g Graph,
    config: ConnectivityConfig,
    exact: OnceCell<(usize, Option<VertexCut>)>,
}

impl<'g> Solver<'g> {
    fn new(g: &'g Graph, config: ConnectivityConfig) -> Self {
        Solver {
            g,
            config,
            exact: OnceCell::new(),
        }
    }

    fn exact(&self) -> &(usize, Option<VertexCut>) {
        self.exact.get_or_init(|| fallback_exact(self.g))
    }

    fn decide<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> ConnectivityVerdict {
        let g = self.g;
        let n = g.vertex_count();
        let m = g.edge_count();
        let mut stats = ProbeStats::default();
        let verdict = |decision, stats| ConnectivityVerdict { k, decision, stats };
        if k == 0 {
            return verdict(Decision::ProbablyAtLeast, stats);
        }
        if k >= n {
            return verdict(Decision::TooFewVertices, stats);
        }
        if let Some(cut) = sink_witness(g) {
            return verdict(Decision::CutFound { cut }, stats);
        }
        let use_exact = 4 * k * k > m
            || self.config.exact_fallback_threshold.is_some_and(|t| n <= t);
        let star = if use_exact { None } else { delta_star(m, k) };
        let Some(star) = star else {
            stats.exact = true;
            let (kappa, cut) = self.exact();
            let decision = match cut {
                Some(cut) if *kappa < k => Decision::CutFound { cut: cut.clone() },
                _ => Decision::ProbablyAtLeast,
            };
            return verdict(decision, stats);
        };
        let c = self.config.confidence;
        let (cut, s1) = sample_pair_step(g, k, star, c, rng);
        stats.absorb(s1);
        if let Some(cut) = cut {
            return verdict(Decision::CutFound { cut }, stats);
        }
        let (cut, s2) = local_sweep_step(g, k, star, c, rng);
        stats.absorb(s2);
        match cut {
            Some(cut) => verdict(Decision::CutFound { cut }, stats),
            None => verdict(Decision::ProbablyAtLeast, stats),
        }
    }
}

/// Doubling then bisection over `k`, driven by a probe that either returns
/// a validated cut smaller than `k` or reports "probably at least `k`".
fn search<F>(n: usize, mut probe: F) -> ConnectivityResult
where
    F: FnMut(usize) -> ConnectivityVerdict,
{
    let mut probes = Vec::new();
    let top = n.saturating_sub(1);
    let mut lo = 0;
    let mut best: Option<VertexCut> = None;
    let mut ub = top;
    let mut record = |k: usize, probes: &mut Vec<ConnectivityVerdict>| {
        let v = probe(k);
        let cut = match &v.decision {
            Decision::CutFound { cut } => Some(cut.clone()),
            _ => None,
        };
        probes.push(v);
        cut
    };

    let mut k = 1;
    while k <= top && best.is_none() {
        match record(k, &mut probes) {
            Some(cut) => {
                ub = cut.size();
                best = Some(cut);
            }
            None => {
                lo = k;
                k = if k == top { top + 1 } else { (2 * k).min(top) };
            }
        }
    }
    while lo < ub {
        let mid = lo + (ub - lo).div_ceil(2);
        match record(mid, &mut probes) {
            Some(cut) => {
                ub = cut.size();
                best = Some(cut);
            }
            None => lo = mid,
        }
    }
    ConnectivityResult {
        kappa: ub,
        witness: best,
        probes,
    }
}

/// Decides whether κ(g) ≥ k: a `CutFound` answer is always correct, a
/// `ProbablyAtLeast` answer is correct with high probability.
pub fn is_connectivity_at_least<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    config: ConnectivityConfig,
    rng: &mut R,
) -> ConnectivityVerdict {
    Solver::new(g, config).decide(k, rng)
}

/// κ of a directed graph with a minimum vertex cut as witness.
pub fn vertex_connectivity_directed<R: Rng + ?Sized>(
    g: &Graph,
    config: ConnectivityConfig,
    rng: &mut R,
) -> ConnectivityResult {
    let solver = Solver::new(g, config);
    search(g.vertex_count(), |k| solver.decide(k, rng))
}

/// Turns a cut of the certificate into a cut of `g` by running pair flows
/// between its sides, keeping the smallest cut below `k`.
fn lift_cut(g: &Graph, cut: &VertexCut, k: usize) -> Option<VertexCut> {
    let adjacent = adjacency(g);
    let mut best: Option<VertexCut> = None;
    for &s in &cut.left {
        for &t in &cut.right {
            if adjacent.contains(&(s, t)) {
                continue;
            }
            let limit = best.as_ref().map_or(k, VertexCut::size);
            if let Some(c) = pair_vertex_cut_at_most(g, s, t, limit) {
                best = Some(c);
            }
        }
    }
    best
}

/// κ of an undirected graph. Each probe runs the directed decision on the
/// bidirected sparse certificate for that `k`, then lifts any cut it finds
/// back to the input graph.
pub fn vertex_connectivity_undirected<R: Rng + ?Sized>(
    g: &UndirectedGraph,
    config: ConnectivityConfig,
    rng: &mut R,
) -> ConnectivityResult {
    let full = g.to_bidirected();
    search(g.n, |k| {
        let h = vertex_certificate(g, k).to_bidirected();
        let mut verdict = Solver::new(&h, config).decide(k, rng);
        if let Decision::CutFound { cut } = &verdict.decision {
            verdict.decision = match lift_cut(&full, cut, k) {
                Some(cut) => Decision::CutFound { cut },
                None => {
                    let (kappa, cut) = fallback_exact(&full);
                    verdict.stats.exact = true;
                    match cut {
                        Some(cut) if kappa < k => Decision::CutFound { cut },
                        _ => Decision::ProbablyAtLeast,
                    }
                }
            };
        }
        verdict
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn pair_cut_on_complete_graph_reaches_limit() {
        let g = complete(4);
        assert!(pair_vertex_cut_at_most(&g, 0, 1, 3).is_none());
    }

    #[test]
    fn pair_cut_on_path() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let cut = pair_vertex_cut_at_most(&g, 0, 2, 2).unwrap();
        assert_eq!(cut, VertexCut::new(vec![0], vec![1], vec![2]));
        assert!(cut.validate(&g));
    }

    #[test]
    fn sample_count_formula() {
        assert_eq!(pair_sample_count(100, 20, 50, 1.0), 24);
    }

    #[test]
    fn steps_find_nothing_on_k5() {
        let g = complete(5);
        assert!(sample_pair_step(&g, 3, 2, 2.0, &mut rng(0)).0.is_none());
        assert!(local_sweep_step(&g, 3, 2, 2.0, &mut rng(0)).0.is_none());
    }

    #[test]
    fn validation_rejects_bad_cuts() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!VertexCut::new(vec![0], vec![], vec![1, 2]).validate(&g));
        assert!(!VertexCut::new(vec![], vec![1], vec![0, 2]).validate(&g));
        assert!(!VertexCut::new(vec![0], vec![1], vec![1, 2]).validate(&g));
        assert!(!VertexCut::new(vec![0], vec![1], vec![]).validate(&g));
    }

    #[test]
    fn not_strongly_connected_gives_empty_separator() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let v = is_connectivity_at_least(&g, 1, ConnectivityConfig::default(), &mut rng(0));
        match v.decision {
            Decision::CutFound { cut } => {
                assert_eq!(cut.size(), 0);
                assert!(cut.validate(&g));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complete_graphs() {
        let g = complete(6);
        let v = is_connectivity_at_least(&g, 5, ConnectivityConfig::default(), &mut rng(0));
        assert_eq!(v.decision, Decision::ProbablyAtLeast);
        let r = vertex_connectivity_directed(&complete(5), ConnectivityConfig::default(), &mut rng(0));
        assert_eq!(r.kappa, 4);
        assert!(r.witness.is_none());
        assert_eq!(fallback_exact(&complete(3)).0, 2);
    }

    #[test]
    fn directed_cycle_has_connectivity_one() {
        let g = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let r = vertex_connectivity_directed(&g, ConnectivityConfig::default(), &mut rng(1));
        assert_eq!(r.kappa, 1);
        let w = r.witness.unwrap();
        assert_eq!(w.size(), 1);
        assert!(w.validate(&g));
    }

    #[test]
    fn bidirected_star_has_connectivity_one() {
        let g = UndirectedGraph::new(5, (1..5).map(|v| (0, v)).collect()).unwrap();
        assert_eq!(fallback_exact(&g.to_bidirected()).0, 1);
    }

    #[test]
    fn undirected_small_cases() {
        let cycle = UndirectedGraph::new(7, (0..7).map(|i| (i, (i + 1) % 7)).collect()).unwrap();
        let r = vertex_connectivity_undirected(&cycle, ConnectivityConfig::default(), &mut rng(2));
        assert_eq!(r.kappa, 2);
        assert!(r.witness.unwrap().validate(&cycle.to_bidirected()));
        let k4_minus = UndirectedGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let r = vertex_connectivity_undirected(&k4_minus, ConnectivityConfig::default(), &mut rng(2));
        assert_eq!(r.kappa, 2);
    }

    #[test]
    fn delta_star_is_largest_fitting_value() {
        let d = delta_star(1000, 3).unwrap();
        let s = |d| vertex_component_volume_bound(2, d);
        assert!(s(d) + 9 < 1000 && s(d + 1) + 9 >= 1000);
        assert_eq!(delta_star(10, 3), None);
    }
}
