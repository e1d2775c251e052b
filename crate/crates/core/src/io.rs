//! Graph file formats.
//!
//! Text: a header line `p <n> <m>` followed by `m` lines `e <u> <v>` with
//! 0-based ids. Blank lines and lines starting with `c` are ignored.
//!
//! JSON: `{"n": <n>, "edges": [[u, v], ...]}`.
//!
//! Both readers reject loops, duplicate edges and out-of-range ids.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        GraphDoc {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl From<Graph> for GraphDoc {
    fn from(g: Graph) -> Self {
        GraphDoc::from(&g)
    }
}

impl TryFrom<GraphDoc> for Graph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Graph> {
        let edges: Vec<_> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(doc.n, &edges)
    }
}

pub fn parse_text(src: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (lineno, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let bad = || Error::input(format!("line {}: cannot parse {line:?}", lineno + 1));
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::input(format!("line {}: second header", lineno + 1)));
                }
                let n = toks.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                let m = toks.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                header = Some((n, m));
            }
            Some("e") => {
                if header.is_none() {
                    return Err(Error::input(format!(
                        "line {}: edge before header",
                        lineno + 1
                    )));
                }
                let u = toks.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                let v = toks.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                edges.push((u, v));
            }
            _ => return Err(bad()),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::input("missing `p <n> <m>` header"))?;
    if edges.len() != m {
        return Err(Error::input(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::from_edges(n, &edges)
}

pub fn to_text(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

pub fn parse_json(src: &str) -> Result<Graph> {
    let doc: GraphDoc = serde_json::from_str(src)?;
    doc.try_into()
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphDoc::from(g)).expect("graph serializes")
}

/// Reads either format, sniffing JSON by a leading `{`.
pub fn parse_graph(src: &str) -> Result<Graph> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let g = Graph::petersen();
        let back = parse_text(&to_text(&g)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::cycle(7);
        assert_eq!(parse_graph(&to_json(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_text("p 3 1\ne 0 0\n").is_err());
        assert!(parse_text("p 3 2\ne 0 1\ne 1 0\n").is_err());
        assert!(parse_text("p 3 2\ne 0 1\n").is_err());
        assert!(parse_text("e 0 1\n").is_err());
        assert!(parse_json(r#"{"n":2,"edges":[[0,1],[0,1]]}"#).is_err());
        assert!(parse_json(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let g = parse_text("c a triangle\np 3 3\ne 0 1\ne 1 2\n\ne 0 2\n").unwrap();
        assert_eq!(g, Graph::complete(3));
    }
}
