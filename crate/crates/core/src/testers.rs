//! One-sided property testers for k-edge and k-vertex connectivity.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::connectivity::pair_vertex_cut_at_most;
use crate::error::{Error, Result};
use crate::flow::edge_cut_up_to;
use crate::graph::{CountedView, EdgeId, Graph, Incidence, Reversed, Vertex};
use crate::local::{detect_component_param, detect_vertex_out_component, TimeMode};

/// Success probability of a single local decision.
pub const LOCAL_SUCCESS: f64 = 5.0 / 6.0;

/// Sample-count constant of the doubling schedule.
pub const SAMPLE_CONSTANT: f64 = 16.0;

/// Farness shrink factor used in the bounded-degree model.
pub const BOUNDED_EPSILON_DIVISOR: f64 = 13.0;

/// Degree model the tester works in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    /// Every degree is at most `degree`; farness is relative to `n * degree`.
    Bounded { degree: usize },
    /// Farness is relative to `m`; `average_degree` is `m / n`.
    Unbounded { average_degree: f64 },
}

impl Model {
    pub fn density(&self) -> f64 {
        match *self {
            Model::Bounded { degree } => degree as f64,
            Model::Unbounded { average_degree } => average_degree,
        }
    }

    /// The farness parameter the schedule is built from.
    pub fn effective_epsilon(&self, epsilon: f64) -> f64 {
        match self {
            Model::Bounded { .. } => epsilon / BOUNDED_EPSILON_DIVISOR,
            Model::Unbounded { .. } => epsilon,
        }
    }

    /// Edge-size budget for the edge tester at vertex size `gamma`.
    fn edge_budget(&self, gamma: usize) -> usize {
        match *self {
            Model::Bounded { degree } => gamma * degree,
            Model::Unbounded { .. } => gamma * gamma,
        }
    }

    /// Volume budget for the vertex tester at vertex size `gamma`.
    fn volume_budget(&self, gamma: usize, k: usize) -> usize {
        match *self {
            Model::Bounded { degree } => gamma * degree,
            Model::Unbounded { .. } => 2 * gamma * gamma * k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TesterConfig {
    pub k: usize,
    pub epsilon: f64,
    pub model: Model,
    /// Number of edges, known to the tester.
    pub edge_count: usize,
}

impl TesterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        if !(self.model.density() >= 1.0 && self.model.density().is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "degree parameter must be at least 1, got {}",
                self.model.density()
            )));
        }
        Ok(())
    }
}

/// Which side of the graph a witness was found on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Out,
    In,
}

/// Evidence that the graph is not k-connected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A proper vertex set with fewer than `k` leaving (or entering) edges.
    EdgeComponent {
        orientation: Orientation,
        members: Vec<Vertex>,
        cut_edges: Vec<EdgeId>,
    },
    /// A vertex set whose out- (or in-) boundary has fewer than `k`
    /// vertices and which together with it misses some vertex.
    VertexComponent {
        orientation: Orientation,
        members: Vec<Vertex>,
        boundary: Vec<Vertex>,
    },
    /// A vertex of out- or in-degree below `k`.
    LowDegree {
        vertex: Vertex,
        out_degree: usize,
        in_degree: usize,
    },
}

impl Witness {
    /// Re-checks the witness against `g` for target connectivity `k`.
    pub fn validate(&self, g: &Graph, k: usize) -> bool {
        let n = g.vertex_count();
        let view = |o: &Orientation| match o {
            Orientation::Out => g.clone(),
            Orientation::In => g.reverse(),
        };
        match self {
            Witness::EdgeComponent {
                orientation,
                members,
                cut_edges,
            } => {
                let h = view(orientation);
                let leaving = crate::measure::leaving_edges(&h, members);
                !members.is_empty() && members.len() < n && leaving.len() < k && &leaving == cut_edges
            }
            Witness::VertexComponent {
                orientation,
                members,
                boundary,
            } => {
                let h = view(orientation);
                let actual = crate::measure::out_boundary(&h, members);
                !members.is_empty() && members.len() + actual.len() < n && actual.len() < k && &actual == boundary
            }
            Witness::LowDegree { vertex, .. } => {
                *vertex < n && n >= 2 && (g.out_degree(*vertex) < k || g.in_degree(*vertex) < k)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TesterDecision {
    Accept,
    Reject { witness: Witness },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TesterVerdict {
    pub decision: TesterDecision,
    pub queries_used: u64,
    /// Start vertices examined.
    pub samples: usize,
}

impl TesterVerdict {
    pub fn is_reject(&self) -> bool {
        matches!(self.decision, TesterDecision::Reject { .. })
    }
}

/// One round of the doubling schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Round {
    pub gamma: usize,
    pub samples: usize,
}

/// Rounds `i = 1, 2, ...` with `Γ_i = 2^i - 1`, enough that the last `Γ`
/// reaches `2k / (ε' · density)`, and sample count
/// `⌈c_s · k · L / (2^i · ε' · density)⌉` with `L = max(1, ln(k / (ε' · density)))`.
pub fn doubling_schedule(k: usize, epsilon: f64, model: Model) -> Vec<Round> {
    let eps_density = model.effective_epsilon(epsilon) * model.density();
    let size_bound = 2.0 * k as f64 / eps_density;
    let rounds = size_bound.max(1.0).log2().floor() as u32 + 1;
    let log_factor = (k as f64 / eps_density).ln().max(1.0);
    (1..=rounds)
        .map(|i| {
            let scale = 2f64.powi(i as i32);
            Round {
                gamma: (1usize << i) - 1,
                samples: (SAMPLE_CONSTANT * k as f64 * log_factor / (scale * eps_density)).ceil() as usize,
            }
        })
        .collect()
}

/// Materializes the graph behind a view, with each local edge's original id.
fn read_whole<G: Incidence<Node = Vertex>>(g: &G) -> (Graph, Vec<EdgeId>) {
    let n = g.node_count();
    let mut h = Graph::new(n);
    let mut ids = Vec::new();
    for v in 0..n {
        let mut i = 0;
        while let Some(e) = g.out_edge(v, i) {
            i += 1;
            h.add_edge(e.tail, e.head);
            ids.push(e.id);
        }
    }
    (h, ids)
}

/// A proper set containing `s` with fewer than `k` leaving edges, if any,
/// by max-flow from `s` to each other vertex.
fn exact_edge_component(g: &Graph, ids: &[EdgeId], s: Vertex, k: usize) -> Option<(Vec<Vertex>, Vec<EdgeId>)> {
    (0..g.vertex_count()).filter(|&t| t != s).find_map(|t| {
        let (_, side) = edge_cut_up_to(g, s, t, k);
        side.map(|side| {
            let mut cut: Vec<EdgeId> = crate::measure::leaving_edges(g, &side).iter().map(|e| ids[e.0]).collect();
            cut.sort();
            (side, cut)
        })
    })
}

fn exact_vertex_component(g: &Graph, s: Vertex, k: usize) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
    (0..g.vertex_count())
        .filter(|&t| t != s)
        .find_map(|t| pair_vertex_cut_at_most(g, s, t, k).map(|cut| (cut.left, cut.separator)))
}

/// Decides whether `s` lies in a proper `(k-1)`-edge-out component. Answers
/// with a witness ("yes") only if one exists; finds one with probability at
/// least 5/6 if one of vertex size at most `gamma` exists.
pub fn local_decision_edge<G, R>(g: &G, s: Vertex, k: usize, gamma: usize, model: Model, m: usize, rng: &mut R) -> Option<Witness>
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    local_decision_edge_oriented(g, s, k, gamma, model, m, Orientation::Out, rng)
}

#[allow(clippy::too_many_arguments)]
fn local_decision_edge_oriented<G, R>(
    g: &G,
    s: Vertex,
    k: usize,
    gamma: usize,
    model: Model,
    m: usize,
    orientation: Orientation,
    rng: &mut R,
) -> Option<Witness>
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    let n = g.node_count();
    let delta = model.edge_budget(gamma.max(1));
    let (members, cut_edges) = if uses_exact_branch(model, Property::Edge, gamma, k, m) {
        let (h, ids) = read_whole(g);
        exact_edge_component(&h, &ids, s, k)?
    } else {
        let found = detect_component_param(g, s, k - 1, delta, LOCAL_SUCCESS, TimeMode::Expected, rng)
            .expect("valid detection parameters");
        if !found.is_found() || found.members.len() == n {
            return None;
        }
        (found.members, found.out_edges)
    };
    (cut_edges.len() < k && members.len() < n).then_some(Witness::EdgeComponent {
        orientation,
        members,
        cut_edges,
    })
}

/// Decides whether `s` lies in a proper `(k-1)`-vertex-out component, with
/// the same one-sided guarantee as [`local_decision_edge`].
pub fn local_decision_vertex<G, R>(g: &G, s: Vertex, k: usize, gamma: usize, model: Model, m: usize, rng: &mut R) -> Option<Witness>
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    local_decision_vertex_oriented(g, s, k, gamma, model, m, Orientation::Out, rng)
}

#[allow(clippy::too_many_arguments)]
fn local_decision_vertex_oriented<G, R>(
    g: &G,
    s: Vertex,
    k: usize,
    gamma: usize,
    model: Model,
    m: usize,
    orientation: Orientation,
    rng: &mut R,
) -> Option<Witness>
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    let n = g.node_count();
    let delta = model.volume_budget(gamma.max(1), k);
    let (members, boundary) = if uses_exact_branch(model, Property::Vertex, gamma, k, m) {
        let (h, _) = read_whole(g);
        exact_vertex_component(&h, s, k)?
    } else {
        let found = detect_vertex_out_component(g, s, k - 1, delta, LOCAL_SUCCESS, false, rng)
            .expect("valid detection parameters");
        (found.members, found.boundary)
    };
    (!members.is_empty() && boundary.len() < k && members.len() + boundary.len() < n).then_some(
        Witness::VertexComponent {
            orientation,
            members,
            boundary,
        },
    )
}

#[derive(Clone, Copy)]
enum Property {
    Edge,
    Vertex,
}

/// Tests whether the graph behind `g` is k-edge-connected. Never rejects a
/// k-edge-connected graph; rejects graphs that are ε-far from it with
/// probability at least 2/3.
pub fn test_k_edge_connectivity<G, R>(g: &G, cfg: &TesterConfig, rng: &mut R) -> Result<TesterVerdict>
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    run_tester(g, cfg, Property::Edge, rng)
}

/// Tests whether the graph behind `g` is k-vertex-connected, with the same
/// guarantees as [`test_k_edge_connectivity`].
pub fn test_k_vertex_connectivity<G, R>(g: &G, cfg: &TesterConfig, rng: &mut R) -> Result<TesterVerdict>
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    run_tester(g, cfg, Property::Vertex, rng)
}

fn run_tester<G, R>(g: &G, cfg: &TesterConfig, property: Property, rng: &mut R) -> Result<TesterVerdict>
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    cfg.validate()?;
    let view = CountedView::new(g);
    let n = view.node_count();
    let k = cfg.k;
    let verdict = |decision, view: &CountedView<&G>, samples| TesterVerdict {
        decision,
        queries_used: view.query_count(),
        samples,
    };
    if n < 2 {
        return Ok(verdict(TesterDecision::Accept, &view, 0));
    }
    let eps_density = cfg.model.effective_epsilon(cfg.epsilon) * cfg.model.density();
    if k as f64 <= eps_density / 2.0 {
        let v = rng.gen_range(0..n);
        let out_degree = degree_by_queries(&view, v, Orientation::Out, k);
        let in_degree = degree_by_queries(&view, v, Orientation::In, k);
        if out_degree < k || in_degree < k {
            let witness = Witness::LowDegree {
                vertex: v,
                out_degree,
                in_degree,
            };
            return Ok(verdict(TesterDecision::Reject { witness }, &view, 1));
        }
    }
    let mut samples = 0;
    // Start vertices the exact branch has already answered "no" for.
    let mut settled = vec![false; n];
    for round in doubling_schedule(k, cfg.epsilon, cfg.model) {
        let exact = uses_exact_branch(cfg.model, property, round.gamma, k, cfg.edge_count);
        for _ in 0..round.samples {
            let s = rng.gen_range(0..n);
            samples += 1;
            if exact && settled[s] {
                continue;
            }
            let reversed = Reversed(&view);
            let found = match property {
                Property::Edge => local_decision_edge_oriented(&view, s, k, round.gamma, cfg.model, cfg.edge_count, Orientation::Out, rng)
                    .or_else(|| local_decision_edge_oriented(&reversed, s, k, round.gamma, cfg.model, cfg.edge_count, Orientation::In, rng)),
                Property::Vertex => local_decision_vertex_oriented(&view, s, k, round.gamma, cfg.model, cfg.edge_count, Orientation::Out, rng)
                    .or_else(|| local_decision_vertex_oriented(&reversed, s, k, round.gamma, cfg.model, cfg.edge_count, Orientation::In, rng)),
            };
            settled[s] |= exact && found.is_none();
            if let Some(witness) = found {
                return Ok(verdict(TesterDecision::Reject { witness }, &view, samples));
            }
        }
    }
    Ok(verdict(TesterDecision::Accept, &view, samples))
}

/// Whether a local decision with this `gamma` reads the whole graph.
fn uses_exact_branch(model: Model, property: Property, gamma: usize, k: usize, m: usize) -> bool {
    let delta = match property {
        Property::Edge => model.edge_budget(gamma.max(1)),
        Property::Vertex => model.volume_budget(gamma.max(1), k),
    };
    m <= 2 * k * (delta + k)
}

/// Degree of `v`, probing at most `cap + 1` slots (exact when below `cap`).
fn degree_by_queries<G: Incidence<Node = Vertex>>(g: &G, v: Vertex, orientation: Orientation, cap: usize) -> usize {
    let probe = |i| match orientation {
        Orientation::Out => g.out_edge(v, i).is_some(),
        Orientation::In => g.in_edge(v, i).is_some(),
    };
    (0..=cap).take_while(|&i| probe(i)).count()
}
