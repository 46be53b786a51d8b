//! Maximum cuts and the bipartite index `bi(G)`.
//!
//! Exact mode runs a depth-first branch and bound with vertex 0 fixed in `X`
//! and vertices assigned in id order, `X` before `Y`. The incumbent is only
//! replaced on strict improvement, so the returned bipartition is the
//! optimum whose side-label sequence is lexicographically smallest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Multigraph};

pub const EXACT_MAX_VERTICES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutMode {
    Exact,
    /// Local search; the cut is a lower bound on the maximum, so `bi` is an
    /// upper estimate.
    Bound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteIndex {
    pub value: usize,
    pub cut: usize,
    pub witness: Bipartition,
    pub exact: bool,
}

/// `bi(G) = (non-loop edges - maxcut) + loops`.
pub fn bipartite_index(g: &Multigraph, mode: CutMode) -> Result<BipartiteIndex> {
    bipartite_index_with_threshold(g, mode, EXACT_MAX_VERTICES)
}

pub fn bipartite_index_with_threshold(g: &Multigraph, mode: CutMode, threshold: usize) -> Result<BipartiteIndex> {
    let (cut, witness, exact) = match mode {
        CutMode::Exact => {
            if g.vertex_count() > threshold {
                return Err(Error::TooLarge {
                    what: "vertex count for exact max cut",
                    limit: threshold,
                    got: g.vertex_count(),
                });
            }
            let (c, w) = max_cut_exact(g);
            (c, w, true)
        }
        CutMode::Bound => {
            let (c, w) = max_cut_local(g);
            (c, w, false)
        }
    };
    let nonloop = g.edge_count() - g.loop_count();
    Ok(BipartiteIndex {
        value: nonloop - cut + g.loop_count(),
        cut,
        witness,
        exact,
    })
}

fn weights(g: &Multigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut w = vec![vec![0usize; n]; n];
    for &(u, v) in g.edges() {
        if u != v {
            w[u][v] += 1;
            w[v][u] += 1;
        }
    }
    w
}

fn cut_value(g: &Multigraph, in_x: &[bool]) -> usize {
    g.edges().iter().filter(|&&(u, v)| in_x[u] != in_x[v]).count()
}

/// Single-vertex-flip local search from a greedy start. Every vertex ends
/// with at least half of its non-loop edges crossing.
pub fn max_cut_local(g: &Multigraph) -> (usize, Bipartition) {
    let n = g.vertex_count();
    let w = weights(g);
    let mut in_x = vec![false; n];
    for v in 0..n {
        let (mut to_x, mut to_y) = (0, 0);
        for u in 0..v {
            if in_x[u] {
                to_x += w[v][u];
            } else {
                to_y += w[v][u];
            }
        }
        in_x[v] = to_y >= to_x;
    }
    loop {
        let mut improved = false;
        for v in 0..n {
            let (mut same, mut other) = (0, 0);
            for u in 0..n {
                if u == v {
                    continue;
                }
                if in_x[u] == in_x[v] {
                    same += w[v][u];
                } else {
                    other += w[v][u];
                }
            }
            if same > other {
                in_x[v] = !in_x[v];
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    if n > 0 && !in_x[0] {
        in_x.iter_mut().for_each(|b| *b = !*b);
    }
    (cut_value(g, &in_x), Bipartition::from_x_mask(in_x))
}

/// Exact maximum cut; see the module docs for the tie-break.
pub fn max_cut_exact(g: &Multigraph) -> (usize, Bipartition) {
    let n = g.vertex_count();
    if n == 0 {
        return (0, Bipartition::from_x_mask(Vec::new()));
    }
    let w = weights(g);
    // edges with both ends at index >= i
    let mut inner_suffix = vec![0usize; n + 1];
    for i in (0..n).rev() {
        inner_suffix[i] = inner_suffix[i + 1] + (i + 1..n).map(|j| w[i][j]).sum::<usize>();
    }
    let (local, _) = max_cut_local(g);
    let mut bb = BranchBound {
        w: &w,
        inner_suffix,
        to_x: vec![0; n],
        to_y: vec![0; n],
        side: vec![false; n],
        best: local as i64 - 1,
        best_side: None,
    };
    bb.assign(0, true, 0);
    let side = bb.best_side.expect("branch and bound explores at least one leaf");
    (cut_value(g, &side), Bipartition::from_x_mask(side))
}

struct BranchBound<'a> {
    w: &'a [Vec<usize>],
    inner_suffix: Vec<usize>,
    to_x: Vec<usize>,
    to_y: Vec<usize>,
    side: Vec<bool>,
    best: i64,
    best_side: Option<Vec<bool>>,
}

impl BranchBound<'_> {
    fn n(&self) -> usize {
        self.w.len()
    }

    fn assign(&mut self, v: usize, x: bool, cut: usize) {
        let n = self.n();
        let gain = if x { self.to_y[v] } else { self.to_x[v] };
        let cut = cut + gain;
        self.side[v] = x;
        for u in v + 1..n {
            if x {
                self.to_x[u] += self.w[v][u];
            } else {
                self.to_y[u] += self.w[v][u];
            }
        }
        self.descend(v + 1, cut);
        for u in v + 1..n {
            if x {
                self.to_x[u] -= self.w[v][u];
            } else {
                self.to_y[u] -= self.w[v][u];
            }
        }
    }

    fn descend(&mut self, i: usize, cut: usize) {
        let n = self.n();
        if i == n {
            if cut as i64 > self.best {
                self.best = cut as i64;
                self.best_side = Some(self.side.clone());
            }
            return;
        }
        let bound = cut
            + (i..n).map(|j| self.to_x[j].max(self.to_y[j])).sum::<usize>()
            + self.inner_suffix[i];
        if bound as i64 <= self.best {
            return;
        }
        self.assign(i, true, cut);
        self.assign(i, false, cut);
    }
}
