use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::graph::{Bipartition, EdgeId, Factor, Multigraph, VertexId};
use crate::matching::perfect_matching;

/// A walk without repeated edges, given by its first vertex and edge list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trail {
    pub start: VertexId,
    pub edges: Vec<EdgeId>,
}

impl Trail {
    /// `v0, ..., vn`, or `None` if consecutive edges do not chain.
    pub fn vertices(&self, g: &Multigraph) -> Option<Vec<VertexId>> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        let mut cur = self.start;
        out.push(cur);
        for &e in &self.edges {
            if e >= g.edge_count() {
                return None;
            }
            let (u, v) = g.endpoints(e);
            cur = if cur == u {
                v
            } else if cur == v {
                u
            } else {
                return None;
            };
            out.push(cur);
        }
        Some(out)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Trails partitioning a factor `T`, with the parity property relative to `X`:
/// odd trails have exactly one end in `X`, even trails have both ends on one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrailDecomposition {
    pub trails: Vec<Trail>,
    pub x: Bipartition,
}

impl TrailDecomposition {
    /// Checks the partition of `t`, the walks and the parity property.
    pub fn verify(&self, g: &Multigraph, t: &Factor) -> Result<()> {
        t.check_host(g)?;
        if self.x.vertex_count() != g.vertex_count() {
            return precondition("bipartition covers a different vertex count");
        }
        let mut seen = vec![false; g.edge_count()];
        for (i, tr) in self.trails.iter().enumerate() {
            if tr.is_empty() {
                return precondition(format!("trail {i} is empty"));
            }
            let vs = tr
                .vertices(g)
                .ok_or_else(|| Error::Precondition(format!("trail {i} is not a walk")))?;
            for &e in &tr.edges {
                if !t.contains(e) {
                    return precondition(format!("trail {i} uses edge {e} outside T"));
                }
                if seen[e] {
                    return precondition(format!("edge {e} is used twice"));
                }
                seen[e] = true;
            }
            let (a, b) = (self.x.in_x(vs[0]), self.x.in_x(*vs.last().unwrap()));
            let ok = if tr.len() % 2 == 1 { a != b } else { a == b };
            if !ok {
                return precondition(format!(
                    "trail {i} has size {} and ends {} and {}, violating X-parity",
                    tr.len(),
                    vs[0],
                    vs.last().unwrap()
                ));
            }
        }
        if let Some(e) = t.edge_ids().into_iter().find(|&e| !seen[e]) {
            return precondition(format!("edge {e} of T is not covered"));
        }
        Ok(())
    }
}

/// A two-edge trail through a shared vertex, in either order.
fn pair_trail(g: &Multigraph, e1: EdgeId, e2: EdgeId) -> Trail {
    let (a, b) = g.endpoints(e1);
    let (c, d) = g.endpoints(e2);
    for (first, second) in [(e1, e2), (e2, e1)] {
        let (u, v) = if first == e1 { (a, b) } else { (c, d) };
        for start in [u, v] {
            let t = Trail {
                start,
                edges: vec![first, second],
            };
            if t.vertices(g).is_some() {
                return t;
            }
        }
    }
    unreachable!("edges {e1} and {e2} share no vertex")
}

/// An X-parity decomposition of `T` into single cross edges and two-edge
/// trails inside `X` or inside `Y`.
///
/// The two-edge trails come from a perfect matching on the line graph of
/// the intra edges, so this succeeds whenever such a decomposition exists
/// (in particular for the greedy trails of the general engine). Other
/// shapes of decomposition are not searched for; use
/// [`TrailDecomposition::verify`] to check a given one.
pub fn x_parity_trails(g: &Multigraph, t: &Factor, x: &Bipartition) -> Result<TrailDecomposition> {
    t.check_host(g)?;
    if x.vertex_count() != g.vertex_count() {
        return precondition("bipartition covers a different vertex count");
    }
    let mut trails = Vec::new();
    let mut intra = Vec::new();
    for e in t.edge_ids() {
        if x.is_intra(g, e) {
            intra.push(e);
        } else {
            let (u, _) = g.endpoints(e);
            trails.push(Trail { start: u, edges: vec![e] });
        }
    }
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (i, &e) in intra.iter().enumerate() {
        let (u, v) = g.endpoints(e);
        at[u].push(i);
        if v != u {
            at[v].push(i);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); intra.len()];
    for list in &at {
        for (a, &i) in list.iter().enumerate() {
            for &j in &list[a + 1..] {
                if !adj[i].contains(&j) {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
    }
    let mate = perfect_matching(&adj).ok_or_else(|| {
        Error::Precondition(
            "T has no X-parity decomposition into cross edges and two-edge intra trails".into(),
        )
    })?;
    for (i, &j) in mate.iter().enumerate() {
        if i < j {
            trails.push(pair_trail(g, intra[i], intra[j]));
        }
    }
    let d = TrailDecomposition { trails, x: x.clone() };
    d.verify(g, t)?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;

    fn side(n: usize, x: &[usize]) -> Bipartition {
        let xs = VertexSet::new(x.iter().copied());
        Bipartition::from_sets(n, &xs, &xs.complement(n)).unwrap()
    }

    #[test]
    fn empty_and_pairs() {
        let g = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = side(4, &[0, 1, 2]);
        let d = x_parity_trails(&g, &Factor::empty(&g), &b).unwrap();
        assert!(d.trails.is_empty());
        let t = Factor::from_ids(&g, [0, 1]).unwrap();
        let d = x_parity_trails(&g, &t, &b).unwrap();
        assert_eq!(d.trails.len(), 1);
        let vs = d.trails[0].vertices(&g).unwrap();
        assert!(b.in_x(vs[0]) && b.in_x(vs[2]));
    }

    #[test]
    fn single_intra_edge_fails() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let b = side(3, &[0, 1]);
        let t = Factor::from_ids(&g, [0]).unwrap();
        assert!(x_parity_trails(&g, &t, &b).is_err());
        let bad = TrailDecomposition {
            trails: vec![Trail { start: 0, edges: vec![0] }],
            x: b.clone(),
        };
        assert!(bad.verify(&g, &t).is_err());
        // a cross edge alone is fine
        let t = Factor::from_ids(&g, [1]).unwrap();
        assert_eq!(x_parity_trails(&g, &t, &b).unwrap().trails.len(), 1);
    }

    #[test]
    fn parallel_pair_and_loops_close_up() {
        let g = Multigraph::from_edges(2, [(0, 1), (0, 1), (0, 0), (0, 0)]).unwrap();
        let b = side(2, &[0, 1]);
        let d = x_parity_trails(&g, &Factor::full(&g), &b).unwrap();
        assert_eq!(d.trails.len(), 2);
    }

    #[test]
    fn matching_beats_greedy_order() {
        // a greedy pass starting at the middle edges would strand the two ends
        let g = Multigraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let b = side(5, &[0, 1, 2, 3, 4]);
        let d = x_parity_trails(&g, &Factor::full(&g), &b).unwrap();
        assert_eq!(d.trails.len(), 2);
    }
}
