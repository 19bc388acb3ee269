//! Line-oriented text formats.
//!
//! ```text
//! dag 3            leg 3 target=0 hop=1
//! 0 -> 1           0 -- 1
//! 1 -> 2           1 -> 2
//!                  0 || 2
//! ```

use std::fmt::Write as _;

use super::{Dag, EdgeMark, Leg, Link};
use crate::error::GraphError;

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_edge(line: usize, s: &str) -> Result<(usize, &str, usize), GraphError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    let [a, op, b] = parts[..] else {
        return Err(parse_err(line, format!("expected `<i> <op> <j>`, got `{s}`")));
    };
    let a = a.parse().map_err(|_| parse_err(line, format!("bad node `{a}`")))?;
    let b = b.parse().map_err(|_| parse_err(line, format!("bad node `{b}`")))?;
    Ok((a, op, b))
}

pub fn parse_dag(text: &str) -> Result<Dag, GraphError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let n = header
        .strip_prefix("dag ")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or_else(|| parse_err(ln, "expected `dag <n>`"))?;
    let mut g = Dag::empty(n);
    for (ln, l) in lines {
        let (a, op, b) = parse_edge(ln, l)?;
        if op != "->" {
            return Err(parse_err(ln, format!("unknown edge operator `{op}`")));
        }
        g.add_edge(a, b).map_err(|e| parse_err(ln, e.to_string()))?;
    }
    Ok(g)
}

pub fn write_dag(g: &Dag) -> String {
    let mut s = format!("dag {}\n", g.n());
    for (a, b) in g.edges() {
        writeln!(s, "{a} -> {b}").unwrap();
    }
    s
}

pub fn parse_leg(text: &str) -> Result<Leg, GraphError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let bad_header = || parse_err(ln, "expected `leg <n> target=<i> hop=<h>`");
    let fields: Vec<&str> = header.split_whitespace().collect();
    let ["leg", n, target, hop] = fields[..] else { return Err(bad_header()) };
    let n: usize = n.parse().map_err(|_| bad_header())?;
    let target: usize = target.strip_prefix("target=").and_then(|t| t.parse().ok()).ok_or_else(bad_header)?;
    let hop: usize = hop.strip_prefix("hop=").and_then(|t| t.parse().ok()).ok_or_else(bad_header)?;
    if target >= n {
        return Err(parse_err(ln, format!("target {target} out of range")));
    }
    let mut leg = Leg::new(n, target, hop);
    for (ln, l) in lines {
        let (a, op, b) = parse_edge(ln, l)?;
        if a >= n || b >= n || a == b {
            return Err(parse_err(ln, format!("invalid edge `{l}`")));
        }
        if leg.graph.adjacent(a, b) {
            return Err(parse_err(ln, format!("duplicate edge `{l}`")));
        }
        let link = match op {
            "--" => Link::Undirected,
            "->" => Link::Out,
            "||" => Link::DoubleBar,
            _ => return Err(parse_err(ln, format!("unknown edge operator `{op}`"))),
        };
        leg.graph.set(a, b, link);
    }
    Ok(leg)
}

pub fn write_leg(leg: &Leg) -> String {
    let mut s = format!("leg {} target={} hop={}\n", leg.n(), leg.target, leg.hop);
    for e in leg.graph.edges() {
        let op = match e.mark {
            EdgeMark::Undirected => "--",
            EdgeMark::Directed => "->",
            EdgeMark::DoubleBar => "||",
        };
        writeln!(s, "{} {op} {}", e.a, e.b).unwrap();
    }
    s
}
