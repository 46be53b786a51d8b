//! The plain-text graph format.
//!
//! ```text
//! # C4 with f ≡ 0 (mod 2)
//! 4 4 2
//! 0 1
//! 1 2
//! 2 3
//! 3 0
//! f: 0 0 0 0
//! ```
//!
//! The header is `n m` or `n m k`; then `m` edge lines `u v` (0-based,
//! `u = v` is a loop, repeats are parallel edges); then optionally
//! `f: r0 … r(n-1)`, which needs `k`. Everything after `#` is ignored, as
//! are blank lines.

use crate::error::{Error, Result};
use crate::graph::{Multigraph, ResidueMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedGraph {
    pub graph: Multigraph,
    pub k: Option<usize>,
    pub f: Option<ResidueMap>,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn numbers(line: usize, text: &str) -> Result<Vec<i64>> {
    text.split_whitespace()
        .map(|t| t.parse::<i64>().or_else(|_| err(line, format!("not an integer: {t:?}"))))
        .collect()
}

fn count(line: usize, x: i64, what: &str) -> Result<usize> {
    usize::try_from(x).or_else(|_| err(line, format!("{what} must be non-negative")))
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let Some((hl, header)) = lines.next() else {
        return err(0, "missing header line");
    };
    let h = numbers(hl, header)?;
    if !(2..=3).contains(&h.len()) {
        return err(hl, "header must be `n m` or `n m k`");
    }
    let n = count(hl, h[0], "n")?;
    let m = count(hl, h[1], "m")?;
    let k = match h.get(2) {
        Some(&k) if k <= 0 => return err(hl, "k must be positive"),
        Some(&k) => Some(k as usize),
        None => None,
    };

    let mut g = Multigraph::new(n);
    let mut f = None;
    for (ln, line) in lines {
        if f.is_some() {
            return err(ln, "nothing may follow the f line");
        }
        if let Some(rest) = line.strip_prefix("f:") {
            if g.edge_count() != m {
                return err(ln, format!("header promises {m} edges, found {}", g.edge_count()));
            }
            let Some(k) = k else {
                return err(ln, "an f line needs k in the header");
            };
            let vals = numbers(ln, rest)?;
            if vals.len() != n {
                return err(ln, format!("f has {} values for {n} vertices", vals.len()));
            }
            f = Some(ResidueMap::new(k, &vals).or_else(|e| err(ln, e.to_string()))?);
            continue;
        }
        let uv = numbers(ln, line)?;
        if uv.len() != 2 {
            return err(ln, "edge line must be `u v`");
        }
        if g.edge_count() == m {
            return err(ln, format!("more than {m} edge lines"));
        }
        let (u, v) = (count(ln, uv[0], "vertex")?, count(ln, uv[1], "vertex")?);
        if u >= n || v >= n {
            return err(ln, format!("vertex out of range 0..{n}"));
        }
        g.add_edge(u, v).or_else(|e| err(ln, e.to_string()))?;
    }
    if g.edge_count() != m {
        return err(0, format!("header promises {m} edges, found {}", g.edge_count()));
    }
    Ok(ParsedGraph { graph: g, k, f })
}

/// Canonical text: edges written `min max` and sorted, so equal multigraphs
/// give equal bytes whatever their edge ids.
pub fn emit_graph(g: &Multigraph, k: Option<usize>, f: Option<&ResidueMap>) -> String {
    let k = f.map(|f| f.modulus()).or(k);
    let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    edges.sort_unstable();
    let mut out = match k {
        Some(k) => format!("{} {} {}\n", g.vertex_count(), g.edge_count(), k),
        None => format!("{} {}\n", g.vertex_count(), g.edge_count()),
    };
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    if let Some(f) = f {
        let vals: Vec<String> = f.values().iter().map(|r| r.to_string()).collect();
        out.push_str(&format!("f: {}\n", vals.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_the_documented_example() {
        let p = parse_graph("4 4 2\n0 1\n1 2\n2 3\n3 0\nf: 0 0 0 0\n").unwrap();
        assert_eq!(p.graph.edge_count(), 4);
        assert_eq!(p.k, Some(2));
        assert_eq!(p.f.unwrap().values(), &[0, 0, 0, 0]);
    }

    #[test]
    fn loops_comments_and_missing_k() {
        let p = parse_graph("# one loop\n  2 2  \n0 0 # loop\n\n0 1\n").unwrap();
        assert_eq!(p.graph.loop_count(), 1);
        assert!(p.k.is_none() && p.f.is_none());
    }

    #[test]
    fn rejects_malformed_input() {
        for (text, line) in [
            ("2 1\n0 x\n", 2),
            ("2 1\n0 1 1\n", 2),
            ("2 1\n0 5\n", 2),
            ("2 1\n0 1\nf: 0 0\n", 3),
            ("2 1 3\n0 1\nf: 0\n", 3),
            ("2 2\n0 1\n", 0),
            ("1\n", 1),
        ] {
            match parse_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn emit_sorts_edges() {
        let g = Multigraph::from_edges(3, [(2, 1), (0, 2), (1, 0)]).unwrap();
        assert_eq!(emit_graph(&g, None, None), "3 3\n0 1\n0 2\n1 2\n");
    }

    proptest! {
        #[test]
        fn round_trip(edges in prop::collection::vec((0usize..6, 0usize..6), 0..20), vals in prop::collection::vec(0i64..5, 6)) {
            let g = Multigraph::from_edges(6, edges).unwrap();
            let f = ResidueMap::new(5, &vals).unwrap();
            let text = emit_graph(&g, None, Some(&f));
            let p = parse_graph(&text).unwrap();
            prop_assert_eq!(p.graph.degrees(), g.degrees());
            prop_assert_eq!(p.f.as_ref(), Some(&f));
            prop_assert_eq!(emit_graph(&p.graph, None, p.f.as_ref()), text);
        }
    }
}
