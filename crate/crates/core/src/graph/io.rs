//! Graph file formats.
//!
//! Text: line 1 is `N d`, then one line per vertex `0..N` with its neighbor
//! ids separated by single spaces (an isolated vertex has an empty line).
//! JSON: `{"n": N, "d": d, "adj": [[...], ...]}`. Both are accepted by
//! [`parse_graph`], which dispatches on the first non-blank character.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BoundedDegreeGraph;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    d: usize,
    adj: Vec<Vec<u32>>,
}

pub fn to_text(g: &BoundedDegreeGraph) -> String {
    let mut out = format!("{} {}\n", g.n_vertices(), g.degree_bound());
    for list in g.adjacency() {
        let line: Vec<String> = list.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn to_json(g: &BoundedDegreeGraph) -> String {
    serde_json::to_string(&GraphJson {
        n: g.n_vertices(),
        d: g.degree_bound(),
        adj: g.adjacency().to_vec(),
    })
    .expect("graph json")
}

pub fn parse_text(src: &str) -> Result<BoundedDegreeGraph> {
    let mut lines = src.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(Error::Parse(format!("header must be `N d`, got {header:?}")));
    }
    let n: usize = head[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad vertex count {:?}", head[0])))?;
    let d: usize = head[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree bound {:?}", head[1])))?;
    let mut adjacency = Vec::with_capacity(n);
    for v in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing adjacency line for vertex {v}")))?;
        let list = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("vertex {v}: bad neighbor id {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        adjacency.push(list);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::Parse(format!("trailing content after {n} adjacency lines")));
    }
    BoundedDegreeGraph::new(d, adjacency)
}

pub fn parse_json(src: &str) -> Result<BoundedDegreeGraph> {
    let raw: GraphJson = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.adj.len() != raw.n {
        return Err(Error::Parse(format!(
            "\"n\" is {} but \"adj\" has {} lists",
            raw.n,
            raw.adj.len()
        )));
    }
    BoundedDegreeGraph::new(raw.d, raw.adj)
}

pub fn parse_graph(src: &str) -> Result<BoundedDegreeGraph> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}

pub fn read_graph(path: &Path) -> Result<BoundedDegreeGraph> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use proptest::prelude::*;

    #[test]
    fn text_format_is_bit_exact() {
        let g = BoundedDegreeGraph::from_edges(4, 3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(to_text(&g), "4 3\n1 2\n0\n0\n\n");
        assert_eq!(parse_text("4 3\n1 2\n0\n0\n\n").unwrap(), g);
        // trailing newline after the last list is optional
        assert_eq!(parse_text("4 3\n1 2\n0\n0\n").unwrap(), g);
    }

    #[test]
    fn json_and_text_are_interchangeable() {
        let g = cycle(5, 3).unwrap();
        assert_eq!(parse_graph(&to_json(&g)).unwrap(), g);
        assert_eq!(parse_graph(&to_text(&g)).unwrap(), g);
        let j = r#"{"n": 2, "d": 1, "adj": [[1], [0]]}"#;
        assert_eq!(parse_graph(j).unwrap(), path(2, 1).unwrap());
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_text("").is_err());
        assert!(parse_text("3\n").is_err());
        assert!(parse_text("2 1\n1\n").is_err());
        assert!(parse_text("2 1\nx\n0\n").is_err());
        assert!(parse_text("2 1\n1\n0\n5\n").is_err());
        assert!(parse_json(r#"{"n": 3, "d": 1, "adj": [[1], [0]]}"#).is_err());
    }

    proptest! {
        #[test]
        fn text_roundtrip(seed in any::<u64>(), n in 1usize..40) {
            let mut rng = crate::rng::substream(seed, 0);
            let g = random_matching_union(2 * n, 3, &mut rng).unwrap();
            prop_assert_eq!(parse_text(&to_text(&g)).unwrap(), g);
        }
    }
}
