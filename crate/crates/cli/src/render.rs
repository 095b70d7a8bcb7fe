//! JSON rendering with 1-based vertex ids, matching the edge-list format.

use localcut::connectivity::{ConnectivityResult, Decision, VertexCut};
use localcut::harness::Certificate;
use localcut::local::{ComponentResult, VertexComponentResult};
use localcut::testers::{TesterDecision, TesterVerdict, Witness};
use localcut::{EdgeId, Graph, Vertex};
use serde_json::{json, Value};

pub fn ids(vs: &[Vertex]) -> Vec<usize> {
    vs.iter().map(|&v| v + 1).collect()
}

pub fn edges(g: &Graph, es: &[EdgeId]) -> Vec<[usize; 2]> {
    es.iter()
        .map(|&e| {
            let e = g.edge(e);
            [e.tail + 1, e.head + 1]
        })
        .collect()
}

pub fn edge_component(g: &Graph, r: &ComponentResult) -> Value {
    json!({
        "found": r.is_found(),
        "members": ids(&r.members),
        "out_edges": edges(g, &r.out_edges),
        "edge_size": r.edge_size,
        "queries": r.queries_used,
        "trials": r.trials_used,
        "processed_edges": r.processed_edges,
    })
}

pub fn vertex_component(r: &VertexComponentResult) -> Value {
    json!({
        "found": r.is_found(),
        "members": ids(&r.members),
        "boundary": ids(&r.boundary),
        "volume": r.volume,
        "symmetric_volume": r.symmetric_volume,
        "queries": r.queries_used,
        "trials": r.trials_used,
        "processed_edges": r.processed_edges,
    })
}

pub fn vertex_cut(c: &VertexCut) -> Value {
    json!({
        "left": ids(&c.left),
        "separator": ids(&c.separator),
        "right": ids(&c.right),
    })
}

pub fn connectivity(r: &ConnectivityResult) -> Value {
    let probes: Vec<Value> = r
        .probes
        .iter()
        .map(|p| {
            let decision = match &p.decision {
                Decision::CutFound { .. } => "cut_found",
                Decision::ProbablyAtLeast => "probably_at_least",
                Decision::TooFewVertices => "too_few_vertices",
            };
            json!({"k": p.k, "decision": decision, "stats": p.stats})
        })
        .collect();
    json!({
        "kappa": r.kappa,
        "witness": r.witness.as_ref().map(vertex_cut),
        "stats": {
            "probes": probes,
            "local_queries": r.probes.iter().map(|p| p.stats.local_queries).sum::<u64>(),
            "flow_runs": r.probes.iter().map(|p| p.stats.flow_runs).sum::<usize>(),
        },
    })
}

pub fn witness(g: &Graph, w: &Witness) -> Value {
    match w {
        Witness::EdgeComponent {
            orientation,
            members,
            cut_edges,
        } => json!({
            "kind": "edge_component",
            "orientation": orientation,
            "members": ids(members),
            "cut_edges": edges(g, cut_edges),
        }),
        Witness::VertexComponent {
            orientation,
            members,
            boundary,
        } => json!({
            "kind": "vertex_component",
            "orientation": orientation,
            "members": ids(members),
            "boundary": ids(boundary),
        }),
        Witness::LowDegree {
            vertex,
            out_degree,
            in_degree,
        } => json!({
            "kind": "low_degree",
            "vertex": vertex + 1,
            "out_degree": out_degree,
            "in_degree": in_degree,
        }),
    }
}

pub fn tester_verdict(g: &Graph, v: &TesterVerdict) -> Value {
    let (verdict, witness) = match &v.decision {
        TesterDecision::Accept => ("accept", None),
        TesterDecision::Reject { witness: w } => ("reject", Some(witness(g, w))),
    };
    json!({
        "verdict": verdict,
        "witness": witness,
        "queries": v.queries_used,
        "samples": v.samples,
    })
}

pub fn certificate(c: &Certificate) -> Value {
    match c {
        Certificate::None => json!({"kind": "none"}),
        Certificate::StronglyConnected => json!({"kind": "strongly_connected"}),
        Certificate::EdgeOutComponent { members, out_edges } => json!({
            "kind": "edge_out_component",
            "members": ids(members),
            "out_edges": out_edges,
        }),
        Certificate::VertexCut {
            left,
            separator,
            right,
        } => json!({
            "kind": "vertex_cut",
            "left": ids(left),
            "separator": ids(separator),
            "right": ids(right),
        }),
        Certificate::ClosedClasses { classes } => json!({
            "kind": "closed_classes",
            "classes": classes.iter().map(|c| ids(c)).collect::<Vec<_>>(),
        }),
        Certificate::Figure1 { k4, k } => json!({"kind": "figure1", "k4": ids(k4), "k": k}),
    }
}
