use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, UndirectedGraph, Vertex};
use crate::measure::{leaving_edges, out_boundary};
use crate::scc::is_strongly_connected;

/// Instance families the generator can produce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// `m` distinct non-loop arcs chosen uniformly.
    RandomDigraph { n: usize, m: usize },
    /// `m` distinct undirected edges chosen uniformly.
    RandomUndirected { n: usize, m: usize },
    /// A random Hamiltonian cycle plus `m - n` further distinct arcs.
    RandomStronglyConnected { n: usize, m: usize },
    /// A directed cycle on `component_size` vertices with exactly `k` arcs
    /// into a strongly connected blob of `blob_edges` arcs.
    PlantedEdgeComponent {
        component_size: usize,
        k: usize,
        blob_edges: usize,
    },
    /// Undirected: two cliques of the given sizes, no edges between them, and
    /// `sep_size` separator vertices adjacent to everything.
    PlantedSeparator { side_sizes: [usize; 2], sep_size: usize },
    /// Undirected: `count` disjoint cliques of `size` vertices.
    CliqueUnion { count: usize, size: usize },
    /// `count` disjoint directed cycles of `length` vertices.
    CycleUnion { count: usize, length: usize },
    /// Complete digraph.
    Complete { n: usize },
    /// Undirected: a K4 with three vertices each attached to two of its
    /// vertices; attachment edges listed first.
    Figure1,
}

/// Machine-checkable description of the planted structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    None,
    StronglyConnected,
    /// `members` has exactly `out_edges` leaving arcs.
    EdgeOutComponent { members: Vec<Vertex>, out_edges: usize },
    /// No arc from `left` to `right`.
    VertexCut {
        left: Vec<Vertex>,
        separator: Vec<Vertex>,
        right: Vec<Vertex>,
    },
    /// Each class has no arcs leaving it.
    ClosedClasses { classes: Vec<Vec<Vertex>> },
    /// The named class is the only multi-vertex class at `k`.
    Figure1 { k4: Vec<Vertex>, k: usize },
}

#[derive(Clone, Debug)]
pub struct Instance {
    /// Directed form (bidirected for undirected families).
    pub graph: Graph,
    /// Present for undirected families.
    pub undirected: Option<UndirectedGraph>,
    pub certificate: Certificate,
}

impl Instance {
    fn directed(graph: Graph, certificate: Certificate) -> Self {
        Instance {
            graph,
            undirected: None,
            certificate,
        }
    }

    fn undirected(g: UndirectedGraph, certificate: Certificate) -> Self {
        Instance {
            graph: g.to_bidirected(),
            undirected: Some(g),
            certificate,
        }
    }

    /// Re-checks the certificate against the generated graph.
    pub fn verify(&self) -> bool {
        let g = &self.graph;
        match &self.certificate {
            Certificate::None => true,
            Certificate::StronglyConnected => is_strongly_connected(g),
            Certificate::EdgeOutComponent { members, out_edges } => leaving_edges(g, members).len() == *out_edges,
            Certificate::VertexCut { left, separator, right } => {
                let mut boundary = out_boundary(g, left);
                boundary.retain(|v| !separator.contains(v));
                !left.is_empty() && !right.is_empty() && boundary.is_empty()
                    && left.len() + separator.len() + right.len() == g.vertex_count()
            }
            Certificate::ClosedClasses { classes } => classes.iter().all(|c| leaving_edges(g, c).is_empty()),
            Certificate::Figure1 { k4, .. } => {
                g.vertex_count() == 7
                    && g.edge_count() == 24
                    && k4.iter().all(|&u| k4.iter().all(|&v| u == v || g.has_edge(u, v)))
            }
        }
    }
}

/// Builds the instance described by `spec` from `seed`, and checks its
/// certificate.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instance = match *spec {
        GeneratorSpec::RandomDigraph { n, m } => {
            Instance::directed(random_digraph(n, m, &mut rng)?, Certificate::None)
        }
        GeneratorSpec::RandomUndirected { n, m } => {
            Instance::undirected(random_undirected(n, m, &mut rng)?, Certificate::None)
        }
        GeneratorSpec::RandomStronglyConnected { n, m } => {
            Instance::directed(random_strongly_connected(n, m, &mut rng)?, Certificate::StronglyConnected)
        }
        GeneratorSpec::PlantedEdgeComponent {
            component_size,
            k,
            blob_edges,
        } => planted_edge_component(component_size, k, blob_edges, &mut rng)?,
        GeneratorSpec::PlantedSeparator { side_sizes, sep_size } => planted_separator(side_sizes, sep_size)?,
        GeneratorSpec::CliqueUnion { count, size } => clique_union(count, size)?,
        GeneratorSpec::CycleUnion { count, length } => cycle_union(count, length)?,
        GeneratorSpec::Complete { n } => Instance::directed(complete_digraph(n), Certificate::StronglyConnected),
        GeneratorSpec::Figure1 => Instance::undirected(
            figure1(),
            Certificate::Figure1 {
                k4: vec![0, 1, 2, 3],
                k: 3,
            },
        ),
    };
    if !instance.verify() {
        return Err(Error::Infeasible(format!("{spec:?} did not produce its advertised structure")));
    }
    Ok(instance)
}

fn random_digraph<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    let max = n * n.saturating_sub(1);
    if m > max {
        return Err(Error::Infeasible(format!("{m} arcs do not fit in a simple digraph on {n} vertices")));
    }
    let pairs = sample_pairs(n, m, max, rng, |u, v| u != v);
    Graph::from_edges(n, pairs)
}

fn random_undirected<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<UndirectedGraph> {
    let max = n * n.saturating_sub(1) / 2;
    if m > max {
        return Err(Error::Infeasible(format!("{m} edges do not fit in a simple graph on {n} vertices")));
    }
    let pairs = sample_pairs(n, m, max, rng, |u, v| u < v);
    UndirectedGraph::new(n, pairs)
}

/// `m` distinct pairs accepted by `keep`, uniformly; `total` is the number
/// of accepted pairs. Dense requests shuffle
/// the full candidate list; sparse ones use rejection sampling.
fn sample_pairs<R, F>(n: usize, m: usize, total: usize, rng: &mut R, keep: F) -> Vec<(Vertex, Vertex)>
where
    R: Rng + ?Sized,
    F: Fn(Vertex, Vertex) -> bool,
{
    if 2 * m >= total {
        let mut all: Vec<_> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| keep(u, v)).collect();
        all.shuffle(rng);
        all.truncate(m);
        return all;
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if keep(u, v) && seen.insert((u, v)) {
            out.push((u, v));
        }
    }
    out
}

fn random_strongly_connected<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    if n < 2 || m < n || m > n * (n - 1) {
        return Err(Error::Infeasible(format!(
            "a strongly connected simple digraph on {n} vertices needs n <= m <= n(n-1), got m = {m}"
        )));
    }
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let mut g = Graph::new(n);
    for i in 0..n {
        g.add_edge(order[i], order[(i + 1) % n]);
    }
    let mut seen: std::collections::HashSet<_> = g.endpoints().iter().copied().collect();
    let extra = sample_pairs(n, m, n * (n - 1), rng, |u, v| u != v);
    for (u, v) in extra {
        if g.edge_count() == m {
            break;
        }
        if seen.insert((u, v)) {
            g.add_edge(u, v);
        }
    }
    // the shuffled pool may be short of m after removing the cycle arcs
    for u in 0..n {
        if g.edge_count() == m {
            break;
        }
        for v in 0..n {
            if g.edge_count() < m && u != v && seen.insert((u, v)) {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

fn planted_edge_component<R: Rng + ?Sized>(size: usize, k: usize, blob_edges: usize, rng: &mut R) -> Result<Instance> {
    if size == 0 {
        return Err(Error::Infeasible("component must have at least one vertex".into()));
    }
    let blob_n = (blob_edges / 4).max(3);
    if blob_edges < blob_n || blob_edges > blob_n * (blob_n - 1) {
        return Err(Error::Infeasible(format!("blob of {blob_edges} arcs on {blob_n} vertices is not feasible")));
    }
    let blob = random_strongly_connected(blob_n, blob_edges, rng)?;
    let n = size + blob_n;
    let mut g = Graph::new(n);
    if size > 1 {
        for i in 0..size {
            g.add_edge(i, (i + 1) % size);
        }
    }
    for e in blob.edges() {
        g.add_edge(size + e.tail, size + e.head);
    }
    for _ in 0..k {
        g.add_edge(rng.gen_range(0..size), size + rng.gen_range(0..blob_n));
    }
    for _ in 0..k + 1 {
        g.add_edge(size + rng.gen_range(0..blob_n), rng.gen_range(0..size));
    }
    Ok(Instance::directed(
        g,
        Certificate::EdgeOutComponent {
            members: (0..size).collect(),
            out_edges: k,
        },
    ))
}

fn planted_separator(side_sizes: [usize; 2], sep_size: usize) -> Result<Instance> {
    let [a, b] = side_sizes;
    if a == 0 || b == 0 {
        return Err(Error::Infeasible("both sides of the separator must be nonempty".into()));
    }
    let left: Vec<Vertex> = (0..a).collect();
    let separator: Vec<Vertex> = (a..a + sep_size).collect();
    let right: Vec<Vertex> = (a + sep_size..a + sep_size + b).collect();
    let mut edges = Vec::new();
    let mut clique = |vs: &[Vertex]| {
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                edges.push((u, v));
            }
        }
    };
    clique(&[left.as_slice(), separator.as_slice()].concat());
    clique(&right);
    for &s in &separator {
        for &r in &right {
            edges.push((s, r));
        }
    }
    let n = a + sep_size + b;
    Ok(Instance::undirected(
        UndirectedGraph::new(n, edges)?,
        Certificate::VertexCut {
            left,
            separator,
            right,
        },
    ))
}

fn clique_union(count: usize, size: usize) -> Result<Instance> {
    if size == 0 {
        return Err(Error::Infeasible("cliques need at least one vertex".into()));
    }
    let mut edges = Vec::new();
    let mut classes = Vec::new();
    for c in 0..count {
        let base = c * size;
        for u in 0..size {
            for v in u + 1..size {
                edges.push((base + u, base + v));
            }
        }
        classes.push((base..base + size).collect());
    }
    Ok(Instance::undirected(
        UndirectedGraph::new(count * size, edges)?,
        Certificate::ClosedClasses { classes },
    ))
}

fn cycle_union(count: usize, length: usize) -> Result<Instance> {
    if length < 2 {
        return Err(Error::Infeasible("cycles need at least two vertices".into()));
    }
    let mut g = Graph::new(count * length);
    let mut classes = Vec::new();
    for c in 0..count {
        let base = c * length;
        for i in 0..length {
            g.add_edge(base + i, base + (i + 1) % length);
        }
        classes.push((base..base + length).collect());
    }
    Ok(Instance::directed(g, Certificate::ClosedClasses { classes }))
}

pub fn complete_digraph(n: usize) -> Graph {
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

/// The K4 `{0, 1, 2, 3}` with vertex 4 on `{0, 1}`, 5 on `{1, 2}`, 6 on
/// `{2, 3}`; the attachment edges come first.
pub fn figure1() -> UndirectedGraph {
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
    UndirectedGraph { n: 7, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure1_has_seven_vertices_and_twelve_edges() {
        let inst = generate(&GeneratorSpec::Figure1, 0).unwrap();
        let u = inst.undirected.unwrap();
        assert_eq!((u.n, u.edge_count()), (7, 12));
    }

    #[test]
    fn clique_union_of_three_k4s() {
        let inst = generate(&GeneratorSpec::CliqueUnion { count: 3, size: 4 }, 0).unwrap();
        assert_eq!(inst.undirected.unwrap().edge_count(), 18);
        assert_eq!(inst.graph.vertex_count(), 12);
    }

    #[test]
    fn planted_component_has_k_out_edges() {
        for seed in 0..20 {
            let spec = GeneratorSpec::PlantedEdgeComponent {
                component_size: 4,
                k: 2,
                blob_edges: 200,
            };
            let inst = generate(&spec, seed).unwrap();
            assert_eq!(leaving_edges(&inst.graph, &[0, 1, 2, 3]).len(), 2);
        }
    }

    #[test]
    fn random_families_respect_counts() {
        for seed in 0..10 {
            let g = generate(&GeneratorSpec::RandomDigraph { n: 8, m: 30 }, seed).unwrap().graph;
            assert_eq!(g.edge_count(), 30);
            let mut pairs = g.endpoints().to_vec();
            pairs.sort();
            pairs.dedup();
            assert_eq!(pairs.len(), 30);
            let sc = generate(&GeneratorSpec::RandomStronglyConnected { n: 8, m: 20 }, seed).unwrap();
            assert_eq!(sc.graph.edge_count(), 20);
        }
    }

    #[test]
    fn infeasible_parameters_are_errors() {
        assert!(generate(&GeneratorSpec::RandomDigraph { n: 3, m: 7 }, 0).is_err());
        assert!(generate(&GeneratorSpec::RandomUndirected { n: 3, m: 4 }, 0).is_err());
        assert!(generate(&GeneratorSpec::PlantedSeparator { side_sizes: [0, 3], sep_size: 1 }, 0).is_err());
    }

    #[test]
    fn separator_and_unions_verify() {
        let specs = [
            GeneratorSpec::PlantedSeparator {
                side_sizes: [5, 6],
                sep_size: 2,
            },
            GeneratorSpec::CycleUnion { count: 5, length: 3 },
            GeneratorSpec::Complete { n: 5 },
        ];
        for spec in specs {
            assert!(generate(&spec, 1).unwrap().verify());
        }
    }
}
