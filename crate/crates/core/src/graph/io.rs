//! Plain-text edge-list format.
//!
//! ```text
//! # optional comments
//! n m
//! nodes 4 9 17        (optional; without it the nodes are 0..n-1)
//! u v                 (m edge lines)
//! ```

use std::fmt::Write as _;

use super::{Graph, GraphError, NodeId, DEFAULT_ID_EXPONENT};

fn parse_err(line: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, GraphError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{tok}`")))
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    parse_graph_with(text, Some(DEFAULT_ID_EXPONENT))
}

/// Parses the edge-list format. `id_exponent = None` lifts the identifier
/// bound. Every error names the 1-based line it was found on.
pub fn parse_graph_with(text: &str, id_exponent: Option<u32>) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let total_lines = text.lines().count();

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `n m` header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(hline, "header must be `n m`"));
    }
    let n: usize = parse_num(toks[0], hline, "node count")?;
    let m: usize = parse_num(toks[1], hline, "edge count")?;

    let mut ids: Vec<NodeId> = (0..n as NodeId).collect();
    if let Some(&(nline, l)) = lines.peek() {
        if let Some(rest) = l.strip_prefix("nodes") {
            lines.next();
            ids = rest
                .split_whitespace()
                .map(|t| parse_num(t, nline, "node id"))
                .collect::<Result<_, _>>()?;
            if ids.len() != n {
                return Err(parse_err(
                    nline,
                    format!("declared {} node ids but header says n = {n}", ids.len()),
                ));
            }
        }
    }
    let mut g = Graph::with_id_exponent(ids, [], id_exponent)
        .map_err(|e| parse_err(hline, e.to_string()))?;

    let mut seen = 0;
    for (line, l) in lines {
        if seen == m {
            return Err(parse_err(line, format!("more than the declared {m} edges")));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(line, "edge line must be `u v`"));
        }
        let u: NodeId = parse_num(toks[0], line, "node id")?;
        let v: NodeId = parse_num(toks[1], line, "node id")?;
        g.insert_edge(u, v).map_err(|e| parse_err(line, e.to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(
            total_lines + 1,
            format!("expected {m} edges, found {seen}"),
        ));
    }
    for list in &mut g.adj {
        list.sort_unstable();
    }
    Ok(g)
}

/// Canonical form: header, a `nodes` line only when ids are not `0..n`, then
/// edges `u v` with `u < v` in lexicographic order.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    let dense = g.ids().iter().enumerate().all(|(i, &id)| id == i as NodeId);
    if !dense {
        out.push_str("nodes");
        for id in g.ids() {
            let _ = write!(out, " {id}");
        }
        out.push('\n');
    }
    for (u, v) in g.edge_ids() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
