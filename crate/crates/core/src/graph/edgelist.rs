//! Text edge lists: one `u -> v` or `u -- v` per line, `#` starts a comment.

use super::PartiallyDirectedGraph;
use crate::error::{Error, Result};

/// Parses an edge list over the given node names.
pub fn parse_edge_list(text: &str, names: &[String]) -> Result<PartiallyDirectedGraph> {
    let mut g = PartiallyDirectedGraph::new(names.len());
    let index = |name: &str, line: usize| {
        names.iter().position(|n| n == name).ok_or_else(|| Error::Parse { line, msg: format!("unknown node `{name}`") })
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (op, directed) = if body.contains("->") {
            ("->", true)
        } else if body.contains("--") {
            ("--", false)
        } else {
            return Err(Error::Parse { line, msg: format!("expected `u -> v` or `u -- v`, found `{body}`") });
        };
        let (u, v) = body.split_once(op).unwrap();
        let (u, v) = (index(u.trim(), line)?, index(v.trim(), line)?);
        let added = if directed { g.add_directed(u, v) } else { g.add_undirected(u, v) };
        added.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_rendered_graphs() {
        let names: Vec<String> = ["smoke", "lung", "xray"].iter().map(|s| s.to_string()).collect();
        let mut g = PartiallyDirectedGraph::new(3);
        g.add_directed(0, 1).unwrap();
        g.add_undirected(1, 2).unwrap();
        let text = format!("# learned\n{}", g.to_edge_list(&names));
        assert_eq!(parse_edge_list(&text, &names).unwrap(), g);
    }

    #[test]
    fn reports_line_numbers() {
        let names = vec!["a".to_string(), "b".to_string()];
        match parse_edge_list("a -> b\nb => a\n", &names) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_edge_list("a -> c\n", &names), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("a -> b\nb -> a\n", &names), Err(Error::Parse { line: 2, .. })));
    }
}
