//! Line-oriented edge-list format.
//!
//! ```text
//! # optional comments
//! 3 2        <- header: n m
//! 1 2        <- one "tail head" line per edge, 1-based ids
//! 2 3
//! ```

use super::{Graph, UndirectedGraph, Vertex};
use crate::error::{Error, Result};

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut fields = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = fields.next().ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("{what} `{tok}` is not a non-negative integer"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if fields.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            message: "expected exactly two fields".into(),
        });
    }
    Ok((a, b))
}

fn parse_raw(text: &str) -> Result<(usize, Vec<(Vertex, Vertex)>)> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (a, b) = parse_pair(line, lineno)?;
        match header {
            None => {
                header = Some((a, b, lineno));
                edges.reserve(b);
            }
            Some((n, _, _)) => {
                for v in [a, b] {
                    if v == 0 || v > n {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("vertex id {v} out of range 1..={n}"),
                        });
                    }
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (n, m, header_line) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing header line `n m`".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: header_line,
            message: format!("header declares {m} edges but body has {}", edges.len()),
        });
    }
    Ok((n, edges))
}

/// Parses a directed edge list; edges keep file order.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let (n, edges) = parse_raw(text)?;
    Graph::from_edges(n, edges)
}

/// Same format, each line read as an undirected edge.
pub fn parse_undirected_edge_list(text: &str) -> Result<UndirectedGraph> {
    let (n, edges) = parse_raw(text)?;
    UndirectedGraph::new(n, edges)
}

pub fn write_edge_list(n: usize, edges: &[(Vertex, Vertex)]) -> String {
    let mut out = format!("{n} {}\n", edges.len());
    for &(u, v) in edges {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_small_path() {
        let g = parse_edge_list("3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.endpoints(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn single_isolated_vertex() {
        let g = parse_edge_list("# lone vertex\n1 0\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn parallel_edges_kept() {
        let g = parse_edge_list("2 2\n1 2\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_ne!(g.edge(crate::EdgeId(0)).id, g.edge(crate::EdgeId(1)).id);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = parse_edge_list("3 2\n1 2\n2 x\n").unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 3, .. }), "{bad}");
        let range = parse_edge_list("3 1\n\n1 4\n").unwrap_err();
        assert!(matches!(range, Error::Parse { line: 3, .. }), "{range}");
        let count = parse_edge_list("# c\n3 2\n1 2\n").unwrap_err();
        assert!(matches!(count, Error::Parse { line: 2, .. }), "{count}");
        let fields = parse_edge_list("3 1\n1 2 3\n").unwrap_err();
        assert!(matches!(fields, Error::Parse { line: 2, .. }), "{fields}");
    }

    #[test]
    fn write_then_parse() {
        let text = write_edge_list(4, &[(0, 3), (3, 3), (2, 1)]);
        let g = parse_edge_list(&text).unwrap();
        assert_eq!(g.endpoints(), &[(0, 3), (3, 3), (2, 1)]);
    }
}
