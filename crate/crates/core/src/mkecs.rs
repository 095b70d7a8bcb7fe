//! Decomposition into maximal k-edge-connected subgraphs.

use std::collections::VecDeque;

use rand::Rng;
use serde::Serialize;

use crate::certificate::sparse_certificate_edges;
use crate::error::{Error, Result};
use crate::flow::edge_cut_up_to;
use crate::graph::{EdgeId, Graph, Incidence, ResidualGraph, Reversed, UndirectedGraph, Vertex};
use crate::local::{detect_component_param, TimeMode};
use crate::measure::{leaving_edges, membership};
use crate::scc::{connected_components, strongly_connected_components};

/// A partition of the vertex set into maximal k-edge-connected classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Each class sorted, classes ordered by smallest member.
    pub classes: Vec<Vec<Vertex>>,
    pub k: usize,
}

impl Decomposition {
    pub fn new(mut classes: Vec<Vec<Vertex>>, k: usize) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.retain(|c| !c.is_empty());
        classes.sort();
        Decomposition { classes, k }
    }

    /// Class index of every vertex.
    pub fn class_of(&self, n: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; n];
        for (i, c) in self.classes.iter().enumerate() {
            for &v in c {
                of[v] = i;
            }
        }
        of
    }
}

/// A directed cut `(source_side, rest)` and the edges leaving `source_side`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCut {
    pub source_side: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

/// A smallest directed cut with at most `k - 1` crossing edges, if any.
/// Found by unit-capacity max-flows between vertex 0 and every other vertex,
/// in both directions.
pub fn global_edge_cut_below(g: &Graph, k: usize) -> Option<EdgeCut> {
    let n = g.vertex_count();
    if n <= 1 || k == 0 {
        return None;
    }
    let mut limit = k;
    let mut best = None;
    for v in 1..n {
        for (s, t) in [(0, v), (v, 0)] {
            if let (value, Some(side)) = edge_cut_up_to(g, s, t, limit) {
                limit = value;
                best = Some(side);
                if value == 0 {
                    break;
                }
            }
        }
        if limit == 0 {
            break;
        }
    }
    best.map(|source_side| EdgeCut {
        edges: leaving_edges(g, &source_side),
        source_side,
    })
}

/// Whether `g` is k-edge-connected (a single vertex always is).
pub fn is_k_edge_connected(g: &Graph, k: usize) -> bool {
    g.vertex_count() <= 1 || (strongly_connected_components(g).count() == 1 && global_edge_cut_below(g, k).is_none())
}

/// Reference decomposition: split into strongly connected components, remove
/// the edges of any cut smaller than `k`, and repeat.
pub fn baseline_mkecs(g: &Graph, k: usize) -> Decomposition {
    let n = g.vertex_count();
    if k == 0 {
        return Decomposition::new(vec![(0..n).collect()], k);
    }
    let mut classes = Vec::new();
    baseline_into(g.clone(), (0..n).collect(), k, &mut classes);
    Decomposition::new(classes, k)
}

fn baseline_into(g: Graph, ids: Vec<Vertex>, k: usize, classes: &mut Vec<Vec<Vertex>>) {
    let mut stack = vec![(g, ids)];
    while let Some((g, ids)) = stack.pop() {
        for comp in strongly_connected_components(&g).members {
            let comp_ids: Vec<Vertex> = comp.iter().map(|&v| ids[v]).collect();
            if comp.len() == 1 {
                classes.push(comp_ids);
                continue;
            }
            let (sub, _) = g.induced(&comp);
            match global_edge_cut_below(&sub, k) {
                None => classes.push(comp_ids),
                Some(cut) => {
                    let mut drop = vec![false; sub.edge_count()];
                    for e in cut.edges {
                        drop[e.0] = true;
                    }
                    let (rest, _) = sub.retain_edges(|e| !drop[e.0]);
                    stack.push((rest, comp_ids));
                }
            }
        }
    }
}

/// Largest edge size a detected component can have.
fn detection_size_bound(k_local: usize, delta: usize) -> usize {
    (2 * k_local * (delta + k_local)).max(delta)
}

fn detection_probability(n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        1.0 - 1.0 / (n as f64).powi(3)
    }
}

struct Scheme {
    k: usize,
    k_local: usize,
    delta: usize,
    size_bound: usize,
    p: f64,
}

impl Scheme {
    fn new(k: usize, delta: usize, n: usize) -> Self {
        let k_local = k.min(delta) - 1;
        Scheme {
            k,
            k_local,
            delta,
            size_bound: detection_size_bound(k_local, delta),
            p: detection_probability(n),
        }
    }

    fn detect<G, R>(&self, g: &G, s: Vertex, rng: &mut R) -> Option<Vec<Vertex>>
    where
        G: Incidence<Node = Vertex>,
        R: Rng + ?Sized,
    {
        let found = detect_component_param(g, s, self.k_local, self.delta, self.p, TimeMode::Expected, rng)
            .expect("parameters are validated up front");
        found.is_found().then_some(found.members)
    }
}

struct Task<G> {
    graph: G,
    ids: Vec<Vertex>,
    worklist: Vec<Vertex>,
}

/// Decomposition of a directed graph that first peels off small
/// `(k'-1)`-edge-out and -in components found by local detection, with
/// `k' = min(k, Δ)`. Produces the same partition as [`baseline_mkecs`].
pub fn mkecs_directed<R: Rng + ?Sized>(g: &Graph, k: usize, delta: Option<usize>, rng: &mut R) -> Result<Decomposition> {
    let n = g.vertex_count();
    let delta = match delta {
        Some(0) => return Err(Error::InvalidParameter("delta must be at least 1".into())),
        Some(d) => d,
        None => default_delta(g.edge_count(), k),
    };
    if k <= 1 {
        return Ok(baseline_mkecs(g, k));
    }
    let scheme = Scheme::new(k, delta, n);
    let mut classes = Vec::new();
    let mut tasks: Vec<Task<Graph>> = strongly_connected_components(g)
        .members
        .into_iter()
        .map(|comp| Task {
            graph: g.induced(&comp).0,
            worklist: (0..comp.len()).collect(),
            ids: comp,
        })
        .collect();
    while let Some(task) = tasks.pop() {
        directed_task(task, &scheme, &mut classes, &mut tasks, rng);
    }
    Ok(Decomposition::new(classes, k))
}

fn default_delta(m: usize, k: usize) -> usize {
    ((m as f64 / k.max(1) as f64).sqrt().ceil() as usize).max(1)
}

fn directed_task<R: Rng + ?Sized>(
    task: Task<Graph>,
    scheme: &Scheme,
    classes: &mut Vec<Vec<Vertex>>,
    tasks: &mut Vec<Task<Graph>>,
    rng: &mut R,
) {
    let Task { graph, ids, worklist } = task;
    let n = graph.vertex_count();
    if n == 1 || graph.edge_count() <= scheme.size_bound {
        baseline_into(graph, ids, scheme.k, classes);
        return;
    }
    let mut res = ResidualGraph::new(&graph);
    let mut alive = vec![true; n];
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for v in worklist {
        enqueue(&mut queue, &mut queued, v);
    }
    while let Some(s) = queue.pop_front() {
        queued[s] = false;
        if !alive[s] {
            continue;
        }
        let found = scheme
            .detect(&res, s, rng)
            .or_else(|| scheme.detect(&Reversed(&res), s, rng));
        let Some(comp) = found else { continue };
        let inside = membership(n, &comp);
        for &v in &comp {
            for &e in res.out_ids(v).iter().chain(res.in_ids(v)) {
                let (a, b) = res.edge(e).endpoints();
                for x in [a, b] {
                    if !inside[x] {
                        enqueue(&mut queue, &mut queued, x);
                    }
                }
            }
        }
        let (piece, _) = res.induced(&comp);
        baseline_into(piece, comp.iter().map(|&v| ids[v]).collect(), scheme.k, classes);
        for &v in &comp {
            res.isolate(v);
            alive[v] = false;
        }
    }

    let live: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
    if live.is_empty() {
        return;
    }
    let (rest, rest_ids) = res.induced(&live);
    let sccs = strongly_connected_components(&rest);
    let cut: Vec<EdgeId> = if sccs.count() > 1 {
        rest.edges()
            .filter(|e| sccs.comp_of[e.tail] != sccs.comp_of[e.head])
            .map(|e| e.id)
            .collect()
    } else {
        match global_edge_cut_below(&rest, scheme.k) {
            Some(cut) => cut.edges,
            None => {
                classes.push(live.iter().map(|&v| ids[v]).collect());
                return;
            }
        }
    };
    let mut endpoint = vec![false; live.len()];
    for &e in &cut {
        let edge = rest.edge(e);
        endpoint[edge.tail] = true;
        endpoint[edge.head] = true;
        res.remove_edge(rest_ids[e.0]);
    }
    let (remainder, _) = res.induced(&live);
    for comp in strongly_connected_components(&remainder).members {
        let graph = remainder.induced(&comp).0;
        let worklist = (0..comp.len()).filter(|&i| endpoint[comp[i]]).collect();
        tasks.push(Task {
            graph,
            worklist,
            ids: comp.iter().map(|&i| ids[live[i]]).collect(),
        });
    }
}

fn enqueue(queue: &mut VecDeque<Vertex>, queued: &mut [bool], v: Vertex) {
    if !queued[v] {
        queued[v] = true;
        queue.push_back(v);
    }
}

/// Decomposition of an undirected graph (as its bidirected version) that
/// runs local detection on a sparse k-edge certificate of the current
/// residual graph, with edge-size budget `kΓ`. Produces the same partition
/// as [`baseline_mkecs`] on the bidirected graph.
pub fn mkecs_undirected<R: Rng + ?Sized>(
    g: &UndirectedGraph,
    k: usize,
    gamma: Option<f64>,
    rng: &mut R,
) -> Result<Decomposition> {
    let n = g.n;
    let gamma = match gamma {
        Some(x) if !(x >= 1.0 && x.is_finite()) => {
            return Err(Error::InvalidParameter(format!("gamma must be a finite number at least 1, got {x}")))
        }
        Some(x) => x,
        None => ((n as f64).sqrt() / k.max(1) as f64).max(1.0),
    };
    if k <= 1 {
        return Ok(baseline_mkecs(&g.to_bidirected(), k));
    }
    let delta = ((k as f64 * gamma).ceil() as usize).max(1);
    let scheme = Scheme::new(k, delta, n);
    let mut classes = Vec::new();
    let mut tasks: Vec<Task<UndirectedGraph>> = connected_components(g)
        .members
        .into_iter()
        .map(|comp| Task {
            graph: g.induced(&comp),
            worklist: (0..comp.len()).collect(),
            ids: comp,
        })
        .collect();
    while let Some(task) = tasks.pop() {
        undirected_task(task, &scheme, &mut classes, &mut tasks, rng);
    }
    Ok(Decomposition::new(classes, k))
}

/// The residual graph together with a possibly stale sparse certificate of
/// it, both over the bidirected edge ids (`2i`, `2i + 1` for edge `i`).
struct Certified {
    residual: ResidualGraph,
    certificate: ResidualGraph,
    k: usize,
    removed_since_build: usize,
    built_size: usize,
}

impl Certified {
    fn new(residual: ResidualGraph, k: usize) -> Self {
        let certificate = residual.clone();
        let mut c = Certified {
            residual,
            certificate,
            k,
            removed_since_build: 0,
            built_size: 0,
        };
        c.rebuild();
        c
    }

    fn is_fresh(&self) -> bool {
        self.removed_since_build == 0
    }

    fn rebuild(&mut self) {
        let undirected_ids: Vec<usize> = (0..self.residual.edge_id_bound() / 2)
            .filter(|&i| self.residual.is_alive(EdgeId(2 * i)))
            .collect();
        let live = UndirectedGraph {
            n: self.residual.node_count(),
            edges: undirected_ids
                .iter()
                .map(|&i| self.residual.edge(EdgeId(2 * i)).endpoints())
                .collect(),
        };
        let mut keep = vec![false; self.residual.edge_id_bound() / 2];
        for j in sparse_certificate_edges(&live, self.k) {
            keep[undirected_ids[j]] = true;
        }
        let mut certificate = self.residual.clone();
        for &i in &undirected_ids {
            if !keep[i] {
                certificate.remove_edge(EdgeId(2 * i));
                certificate.remove_edge(EdgeId(2 * i + 1));
            }
        }
        self.built_size = certificate.live_edge_count() / 2;
        self.certificate = certificate;
        self.removed_since_build = 0;
    }

    fn remove(&mut self, undirected: usize) {
        for id in [EdgeId(2 * undirected), EdgeId(2 * undirected + 1)] {
            self.residual.remove_edge(id);
            self.certificate.remove_edge(id);
        }
        self.removed_since_build += 1;
        if self.removed_since_build > self.residual.node_count().max(self.built_size / 2) {
            self.rebuild();
        }
    }

    /// Residual edges with exactly one endpoint in the set.
    fn crossing(&self, inside: &[bool], members: &[Vertex]) -> Vec<usize> {
        members
            .iter()
            .flat_map(|&v| self.residual.out_ids(v).iter())
            .filter(|&&e| !inside[self.residual.edge(e).head])
            .map(|e| e.0 / 2)
            .collect()
    }

    fn isolate(&mut self, v: Vertex) {
        let ids: Vec<usize> = self.residual.out_ids(v).iter().map(|e| e.0 / 2).collect();
        for i in ids {
            self.remove(i);
        }
    }

    fn piece(&self, vertices: &[Vertex]) -> UndirectedGraph {
        let (sub, ids) = self.residual.induced(vertices);
        UndirectedGraph {
            n: vertices.len(),
            edges: sub
                .edges()
                .filter(|e| ids[e.id.0].0 % 2 == 0)
                .map(|e| (e.tail, e.head))
                .collect(),
        }
    }
}

fn undirected_task<R: Rng + ?Sized>(
    task: Task<UndirectedGraph>,
    scheme: &Scheme,
    classes: &mut Vec<Vec<Vertex>>,
    tasks: &mut Vec<Task<UndirectedGraph>>,
    rng: &mut R,
) {
    let Task { graph, ids, worklist } = task;
    let n = graph.n;
    let bidirected = graph.to_bidirected();
    if n == 1 || bidirected.edge_count() <= scheme.size_bound {
        baseline_into(bidirected, ids, scheme.k, classes);
        return;
    }
    let mut state = Certified::new(ResidualGraph::new(&bidirected), scheme.k);
    let mut alive = vec![true; n];
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for v in worklist {
        enqueue(&mut queue, &mut queued, v);
    }
    while let Some(s) = queue.pop_front() {
        queued[s] = false;
        if !alive[s] {
            continue;
        }
        let Some(comp) = detect_validated(&mut state, scheme, s, rng) else {
            continue;
        };
        let inside = membership(n, &comp);
        for i in state.crossing(&inside, &comp) {
            let (a, b) = graph.edges[i];
            for x in [a, b] {
                if !inside[x] {
                    enqueue(&mut queue, &mut queued, x);
                }
            }
        }
        let (piece, _) = state.residual.induced(&comp);
        baseline_into(piece, comp.iter().map(|&v| ids[v]).collect(), scheme.k, classes);
        for &v in &comp {
            state.isolate(v);
            alive[v] = false;
        }
    }

    let live: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
    if live.is_empty() {
        return;
    }
    let residual_live = state.piece(&live);
    let components = connected_components(&residual_live);
    let mut endpoint = vec![false; n];
    if components.count() == 1 {
        if !state.is_fresh() {
            state.rebuild();
        }
        let (certificate, _) = state.certificate.induced(&live);
        let Some(cut) = global_edge_cut_below(&certificate, scheme.k) else {
            classes.push(live.iter().map(|&v| ids[v]).collect());
            return;
        };
        let side: Vec<Vertex> = cut.source_side.iter().map(|&i| live[i]).collect();
        let inside = membership(n, &side);
        for i in state.crossing(&inside, &side) {
            let (a, b) = graph.edges[i];
            endpoint[a] = true;
            endpoint[b] = true;
            state.remove(i);
        }
    }
    let remainder = state.piece(&live);
    for comp in connected_components(&remainder).members {
        let worklist = (0..comp.len()).filter(|&i| endpoint[live[comp[i]]]).collect();
        tasks.push(Task {
            graph: remainder.induced(&comp),
            worklist,
            ids: comp.iter().map(|&i| ids[live[i]]).collect(),
        });
    }
}

/// Detection on the certificate, accepted only if the component also has
/// few enough crossing edges in the residual graph. A stale certificate is
/// rebuilt once before giving up.
fn detect_validated<R: Rng + ?Sized>(state: &mut Certified, scheme: &Scheme, s: Vertex, rng: &mut R) -> Option<Vec<Vertex>> {
    loop {
        let comp = scheme.detect(&state.certificate, s, rng)?;
        let inside = membership(state.residual.node_count(), &comp);
        if state.crossing(&inside, &comp).len() <= scheme.k_local {
            return Some(comp);
        }
        if state.is_fresh() {
            return None;
        }
        state.rebuild();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn figure1() -> UndirectedGraph {
        // attachments first, then the K4 on {0, 1, 2, 3}
        let edges = vec![
            (4, 0),
            (4, 1),
            (5, 1),
            (5, 2),
            (6, 2),
            (6, 3),
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 3),
        ];
        UndirectedGraph::new(7, edges).unwrap()
    }

    fn k4_plus_singletons() -> Vec<Vec<Vertex>> {
        vec![vec![0, 1, 2, 3], vec![4], vec![5], vec![6]]
    }

    #[test]
    fn two_cycle_has_a_one_edge_cut() {
        let g = Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let cut = global_edge_cut_below(&g, 2).unwrap();
        assert_eq!(cut.edges.len(), 1);
    }

    #[test]
    fn complete_digraph_k4_has_no_cut_below_three() {
        let mut g = Graph::new(4);
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    g.add_edge(u, v);
                }
            }
        }
        assert!(global_edge_cut_below(&g, 3).is_none());
        assert_eq!(global_edge_cut_below(&g, 4).unwrap().edges.len(), 3);
    }

    #[test]
    fn k_one_gives_strongly_connected_components() {
        let g = Graph::from_edges(5, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (4, 4)]).unwrap();
        let expected = vec![vec![0, 1], vec![2, 3], vec![4]];
        assert_eq!(baseline_mkecs(&g, 1).classes, expected);
        assert_eq!(mkecs_directed(&g, 1, None, &mut rng(0)).unwrap().classes, expected);
    }

    #[test]
    fn figure1_decomposes_into_k4_and_singletons() {
        let g = figure1();
        let expected = k4_plus_singletons();
        assert_eq!(baseline_mkecs(&g.to_bidirected(), 3).classes, expected);
        for seed in 0..5 {
            assert_eq!(mkecs_directed(&g.to_bidirected(), 3, Some(2), &mut rng(seed)).unwrap().classes, expected);
            assert_eq!(mkecs_undirected(&g, 3, Some(1.0), &mut rng(seed)).unwrap().classes, expected);
        }
    }

    #[test]
    fn decomposing_the_input_certificate_loses_the_k4() {
        let cert = crate::certificate::sparse_certificate(&figure1(), 3);
        let d = baseline_mkecs(&cert.to_bidirected(), 3);
        assert!(d.classes.iter().all(|c| c.len() < 4), "{:?}", d.classes);
    }

    #[test]
    fn two_k4s_joined_by_two_edges() {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((base + u, base + v));
                }
            }
        }
        edges.push((0, 4));
        edges.push((1, 5));
        let g = UndirectedGraph::new(8, edges).unwrap();
        let expected = vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]];
        assert_eq!(baseline_mkecs(&g.to_bidirected(), 3).classes, expected);
        assert_eq!(mkecs_undirected(&g, 3, Some(1.0), &mut rng(1)).unwrap().classes, expected);
    }

    #[test]
    fn cycle_is_one_two_edge_connected_class() {
        let g = UndirectedGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6)).collect()).unwrap();
        let d = mkecs_undirected(&g, 2, None, &mut rng(0)).unwrap();
        assert_eq!(d.classes, vec![(0..6).collect::<Vec<_>>()]);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let g = Graph::new(2);
        assert!(mkecs_directed(&g, 2, Some(0), &mut rng(0)).is_err());
        let u = UndirectedGraph::new(2, vec![]).unwrap();
        assert!(mkecs_undirected(&u, 2, Some(0.5), &mut rng(0)).is_err());
    }

    fn arb_pairs() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (2usize..14).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..60)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn directed_scheme_matches_baseline((n, edges) in arb_pairs(), k in 2usize..5, seed in 0u64..1000) {
            let g = Graph::from_edges(n, edges).unwrap();
            let expected = baseline_mkecs(&g, k);
            for delta in [None, Some(1), Some(3)] {
                prop_assert_eq!(&mkecs_directed(&g, k, delta, &mut rng(seed)).unwrap(), &expected);
            }
        }

        #[test]
        fn undirected_scheme_matches_baseline((n, edges) in arb_pairs(), k in 2usize..5, seed in 0u64..1000) {
            let g = UndirectedGraph::new(n, edges).unwrap();
            let expected = baseline_mkecs(&g.to_bidirected(), k);
            for gamma in [None, Some(1.0), Some(2.5)] {
                prop_assert_eq!(&mkecs_undirected(&g, k, gamma, &mut rng(seed)).unwrap(), &expected);
            }
        }

        #[test]
        fn multi_vertex_classes_are_k_edge_connected((n, edges) in arb_pairs(), k in 1usize..4) {
            let g = Graph::from_edges(n, edges).unwrap();
            let d = baseline_mkecs(&g, k);
            let mut covered: Vec<_> = d.classes.concat();
            covered.sort();
            prop_assert_eq!(covered, (0..n).collect::<Vec<_>>());
            for c in &d.classes {
                prop_assert!(is_k_edge_connected(&g.induced(c).0, k));
            }
        }
    }
}
