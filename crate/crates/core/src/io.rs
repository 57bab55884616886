//! Edge-list text format.
//!
//! ```text
//! c optional comment lines
//! p bihole <n_a> <n_b> <m>
//! e <a> <b>        (m lines, 1-based indices)
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

pub fn write_graph(g: &BipartiteGraph) -> String {
    let mut out = String::new();
    writeln!(out, "p bihole {} {} {}", g.n_a(), g.n_b(), g.edge_count()).unwrap();
    for (a, b) in g.edges() {
        writeln!(out, "e {} {}", a + 1, b + 1).unwrap();
    }
    out
}

pub fn read_graph(text: &str) -> Result<BipartiteGraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let mut tokens = raw.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                if tokens.next() != Some("bihole") {
                    return Err(err("expected `p bihole <n_a> <n_b> <m>`".into()));
                }
                let nums = parse_numbers(&mut tokens, 3).map_err(err)?;
                header = Some((nums[0], nums[1], nums[2]));
            }
            "e" => {
                let (n_a, n_b, _) = header.ok_or_else(|| err("edge before header".into()))?;
                let nums = parse_numbers(&mut tokens, 2).map_err(err)?;
                let (a, b) = (nums[0], nums[1]);
                if a == 0 || a > n_a {
                    return Err(err(format!("A index {a} not in 1..={n_a}")));
                }
                if b == 0 || b > n_b {
                    return Err(err(format!("B index {b} not in 1..={n_b}")));
                }
                edges.push((a - 1, b - 1));
            }
            other => return Err(err(format!("unknown line type `{other}`"))),
        }
    }

    let (n_a, n_b, m) = header.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        msg: "missing `p bihole` header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    BipartiteGraph::new(n_a, n_b, &edges)
}

fn parse_numbers<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    count: usize,
) -> std::result::Result<Vec<usize>, String> {
    let nums = tokens
        .by_ref()
        .take(count)
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad integer `{t}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if nums.len() != count {
        return Err(format!("expected {count} integers"));
    }
    if let Some(extra) = tokens.next() {
        return Err(format!("unexpected trailing token `{extra}`"));
    }
    Ok(nums)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = read_graph("p bihole 2 2 1\ne 1 1\n").unwrap();
        assert_eq!(g.n_a(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn complete_round_trip() {
        let g = BipartiteGraph::complete(3, 3);
        let text = write_graph(&g);
        assert!(text.starts_with("p bihole 3 3 9\n"));
        assert_eq!(read_graph(&text).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = read_graph("c hello\n\np bihole 1 2 1\nc mid\ne 1 2\n").unwrap();
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn out_of_range_index_reports_line() {
        let err = read_graph("p bihole 2 2 1\ne 3 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = read_graph("p bihole 2 2 1\ne 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "e 1 1\n",
            "p graph 2 2 0\n",
            "p bihole 2 2\n",
            "p bihole 2 2 1\ne 1\n",
            "p bihole 2 2 1\ne 1 x\n",
            "p bihole 2 2 2\ne 1 1\n",
            "p bihole 2 2 0\np bihole 2 2 0\n",
            "q 1\n",
            "",
        ] {
            assert!(
                matches!(read_graph(bad), Err(Error::Parse { .. })),
                "accepted {bad:?}"
            );
        }
    }
}
