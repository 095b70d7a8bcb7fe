use rand::Rng;
use serde::Serialize;

use super::dfs::{budgeted_dfs, Accounting, ScanKind};
use crate::error::{Error, Result};
use crate::graph::{CountedView, EdgeId, Incidence, Overlay, Vertex};

/// Repetition rule for [`detect_component_param`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeMode {
    /// `⌈log₂(1/(1−p))⌉` trials, none aborted.
    #[default]
    Expected,
    /// `⌈log_{4/3}(1/(1−p))⌉` trials; a trial is abandoned once its work
    /// (queries plus flipped edges) passes four times its nominal budget.
    WorstCase,
}

/// Outcome of local edge-cut detection.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComponentResult {
    /// Sorted; empty means "not found".
    pub members: Vec<Vertex>,
    /// Edges leaving `members` in the input graph, sorted.
    pub out_edges: Vec<EdgeId>,
    pub edge_size: usize,
    pub queries_used: u64,
    pub trials_used: usize,
    /// Total size of every `F` built across all trials.
    pub processed_edges: usize,
}

impl ComponentResult {
    pub fn is_found(&self) -> bool {
        !self.members.is_empty()
    }
}

/// Per-round and final DFS budgets of one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Budgets {
    pub rounds: usize,
    pub round: usize,
    pub last: usize,
}

impl Budgets {
    /// Budgets for `k` cut edges and size bound `delta`: `2k(Δ+k)` per round,
    /// `Δ+1` for the last search.
    pub fn new(k: usize, delta: usize) -> Self {
        Budgets {
            rounds: k,
            round: 2 * k * (delta + k),
            last: delta + 1,
        }
    }

    pub fn total(&self) -> usize {
        self.rounds * self.round + self.last
    }
}

/// One trial's raw outcome, in the node type of the graph it ran on.
#[derive(Clone, Debug)]
pub(crate) struct Trial<N> {
    pub members: Option<Vec<N>>,
    pub queries: u64,
    pub processed: usize,
    /// Endpoint of each reversed path, in order.
    pub path_ends: Vec<N>,
    /// Ids reversed in the overlay when the trial ended.
    pub reversed: Vec<EdgeId>,
}

pub(crate) fn run_trial<G: Incidence, R: Rng + ?Sized>(
    g: G,
    s: G::Node,
    budgets: Budgets,
    accounting: Accounting<G::Node>,
    work_cap: Option<u64>,
    rng: &mut R,
) -> Trial<G::Node> {
    let mut view = CountedView::new(Overlay::new(g));
    let mut processed = 0;
    let mut flipped = 0u64;
    let mut path_ends = Vec::new();

    let finish = |view: CountedView<Overlay<G>>, members, processed, path_ends| {
        let mut reversed: Vec<_> = view.inner().reversed_ids().collect();
        reversed.sort();
        Trial {
            members,
            queries: view.query_count(),
            processed,
            path_ends,
            reversed,
        }
    };

    for _ in 0..budgets.rounds {
        let dfs = budgeted_dfs(&view, s, budgets.round, accounting);
        processed += dfs.processed.len();
        if dfs.completed {
            return finish(view, Some(dfs.visited), processed, path_ends);
        }
        let pick = dfs.processed[rng.gen_range(0..dfs.processed.len())];
        let mut path = dfs.tree_path(pick.anchor);
        if pick.kind == ScanKind::Out && view.inner().is_reversed(pick.edge.id) {
            path.push(pick.edge);
        }
        path_ends.push(path.last().map_or(s, |e| e.head));
        flipped += path.len() as u64;
        view.inner_mut()
            .apply_path_reversal(&path)
            .expect("tree paths are contiguous");
        if work_cap.is_some_and(|cap| view.query_count() + flipped > cap) {
            return finish(view, None, processed, path_ends);
        }
    }

    let dfs = budgeted_dfs(&view, s, budgets.last, accounting);
    processed += dfs.processed.len();
    let members = dfs.completed.then_some(dfs.visited);
    finish(view, members, processed, path_ends)
}

/// Number of independent trials needed to reach success probability `p`.
pub fn repetitions(p: f64, mode: TimeMode) -> usize {
    if p <= 0.0 {
        return 1;
    }
    let base: f64 = match mode {
        TimeMode::Expected => 2.0,
        TimeMode::WorstCase => 4.0 / 3.0,
    };
    let exact = (1.0 / (1.0 - p)).ln() / base.ln();
    ((exact - 1e-9).ceil() as usize).max(1)
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p must lie in [0, 1), got {p}")))
    }
}

fn check_source<G: Incidence<Node = Vertex>>(g: &G, s: Vertex) -> Result<()> {
    if s < g.node_count() {
        Ok(())
    } else {
        Err(Error::InvalidVertex {
            vertex: s,
            n: g.node_count(),
        })
    }
}

/// Leaving edges and edge size of `members`, read from the unmodified graph.
fn describe<G: Incidence<Node = Vertex>>(g: &G, members: &mut [Vertex]) -> (Vec<EdgeId>, usize) {
    members.sort_unstable();
    let inside = |v: Vertex| members.binary_search(&v).is_ok();
    let mut out_edges = Vec::new();
    let mut edge_size = 0;
    for &v in members.iter() {
        let mut i = 0;
        while let Some(e) = g.out_edge(v, i) {
            i += 1;
            if inside(e.head) {
                edge_size += 1;
            } else {
                out_edges.push(e.id);
            }
        }
    }
    out_edges.sort();
    (out_edges, edge_size)
}

/// One run of the local procedure: looks for a `k`-edge-out component
/// containing `s` of edge size at most `delta`.
///
/// A nonempty answer is always a minimal `k`-edge-out component with edge
/// size at most `max(2k(Δ+k), Δ)`. If a qualifying component exists the
/// answer is nonempty with probability at least 1/2.
pub fn detect_component<G, R>(g: &G, s: Vertex, k: usize, delta: usize, rng: &mut R) -> Result<ComponentResult>
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    detect_component_param(g, s, k, delta, 0.5, TimeMode::Expected, rng)
}

/// Repeats [`detect_component`] until it succeeds or the trial count for
/// success probability `p` is used up.
pub fn detect_component_param<G, R>(
    g: &G,
    s: Vertex,
    k: usize,
    delta: usize,
    p: f64,
    mode: TimeMode,
    rng: &mut R,
) -> Result<ComponentResult>
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    check_source(g, s)?;
    check_probability(p)?;
    if delta == 0 {
        return Err(Error::InvalidParameter("delta must be at least 1".into()));
    }
    let budgets = Budgets::new(k, delta);
    let cap = match mode {
        TimeMode::Expected => None,
        TimeMode::WorstCase => Some(4 * budgets.total() as u64),
    };
    let mut result = ComponentResult::default();
    for _ in 0..repetitions(p, mode) {
        let trial = run_trial(g, s, budgets, Accounting::Volume, cap, rng);
        result.trials_used += 1;
        result.queries_used += trial.queries;
        result.processed_edges += trial.processed;
        if let Some(mut members) = trial.members {
            let (out_edges, edge_size) = describe(g, &mut members);
            result.members = members;
            result.out_edges = out_edges;
            result.edge_size = edge_size;
            break;
        }
    }
    Ok(result)
}

/// Instrumented single trial for white-box checks: the nodes where the
/// reversed paths ended and the overlay's reversed set at the end.
#[derive(Clone, Debug)]
pub struct TrialTrace {
    pub members: Option<Vec<Vertex>>,
    pub path_ends: Vec<Vertex>,
    pub reversed: Vec<EdgeId>,
    pub processed_edges: usize,
}

pub fn trace_detect_component<G, R>(g: &G, s: Vertex, k: usize, delta: usize, rng: &mut R) -> TrialTrace
where
    G: Incidence<Node = Vertex>,
    R: Rng + ?Sized,
{
    let t = run_trial(g, s, Budgets::new(k, delta), Accounting::Volume, None, rng);
    TrialTrace {
        members: t.members.map(|mut m| {
            m.sort_unstable();
            m
        }),
        path_ends: t.path_ends,
        reversed: t.reversed,
        processed_edges: t.processed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::measure::{edge_size, leaving_edges};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn repetition_counts() {
        assert_eq!(repetitions(0.5, TimeMode::Expected), 1);
        assert_eq!(repetitions(15.0 / 16.0, TimeMode::Expected), 4);
        assert_eq!(repetitions(0.0, TimeMode::Expected), 1);
        // 1/(1-p) = 4/3 exactly
        assert_eq!(repetitions(0.25, TimeMode::WorstCase), 1);
        assert_eq!(repetitions(15.0 / 16.0, TimeMode::WorstCase), 10);
    }

    #[test]
    fn k_zero_isolated_source() {
        let g = Graph::new(1);
        let r = detect_component(&g, 0, 0, 1, &mut rng(1)).unwrap();
        assert_eq!(r.members, vec![0]);
        assert!(r.out_edges.is_empty());
    }

    #[test]
    fn k_zero_path_fits_budget() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let r = detect_component(&g, 0, 0, 2, &mut rng(1)).unwrap();
        assert_eq!(r.members, vec![0, 1, 2]);
        assert_eq!(r.edge_size, 2);
    }

    #[test]
    fn k_zero_path_over_budget_is_not_found() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = detect_component(&g, 0, 0, 2, &mut rng(1)).unwrap();
        assert!(!r.is_found());
        assert_eq!(r.processed_edges, 3);
    }

    #[test]
    fn results_are_checked_against_the_input_graph() {
        // two triangles, one edge from the first to the second
        let g = Graph::from_edges(
            6,
            [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (3, 5)],
        )
        .unwrap();
        for seed in 0..50 {
            let r = detect_component_param(&g, 0, 1, 3, 0.99, TimeMode::Expected, &mut rng(seed)).unwrap();
            if r.is_found() {
                assert!(r.members.contains(&0));
                assert_eq!(r.out_edges, leaving_edges(&g, &r.members));
                assert!(r.out_edges.len() <= 1);
                assert_eq!(r.edge_size, edge_size(&g, &r.members));
            }
        }
    }

    #[test]
    fn worst_case_mode_uses_more_trials() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = detect_component_param(&g, 0, 5, 1, 0.9, TimeMode::WorstCase, &mut rng(3)).unwrap();
        assert!(r.is_found());
        assert_eq!(r.trials_used, 1);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let g = Graph::new(2);
        assert!(detect_component(&g, 2, 0, 1, &mut rng(0)).is_err());
        assert!(detect_component(&g, 0, 0, 0, &mut rng(0)).is_err());
        assert!(detect_component_param(&g, 0, 0, 1, 1.0, TimeMode::Expected, &mut rng(0)).is_err());
    }
}
