//! Connectivity certificates: edge connectivity, essential edge
//! connectivity, spanning-tree packing with partition certificates,
//! tree connectivity and partition-connected decompositions.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{components_of, EdgeId, IntFunc, Multigraph, VertexId};
use crate::orient::orient_with_lower_bounds;
use crate::par::{self, Exec};

/// Largest vertex count for which essential connectivity is enumerated.
pub const ESSENTIAL_MAX_VERTICES: usize = 24;
/// Edge-count limit of the exact fallback in [`partition_connected_decompose`].
pub const PARTITION_EXACT_MAX_EDGES: usize = 20;

/// Global minimum edge cut, via `n - 1` max-flow calls from vertex 0.
pub fn edge_connectivity(g: &Multigraph) -> Result<usize> {
    Ok(min_edge_cut(g)?.0)
}

/// Minimum cut value and one shore attaining it.
pub fn min_edge_cut(g: &Multigraph) -> Result<(usize, Vec<bool>)> {
    let n = g.vertex_count();
    if n < 2 {
        return precondition("edge connectivity needs at least two vertices");
    }
    let mut best = (usize::MAX, Vec::new());
    for t in 1..n {
        let mut net = FlowNetwork::new(n);
        for &(u, v) in g.edges() {
            if u != v {
                net.add_undirected(u, v, 1);
            }
        }
        let limit = if best.0 == usize::MAX { i64::MAX } else { best.0 as i64 };
        let f = net.max_flow_limited(0, t, limit) as usize;
        if f < best.0 {
            best = (f, net.source_side(0));
        }
    }
    Ok(best)
}

/// Whether every cut of size `< lambda` is trivial, i.e. `lambda <= edge_connectivity`.
pub fn is_edge_connected(g: &Multigraph, lambda: usize) -> bool {
    if lambda == 0 {
        return true;
    }
    match edge_connectivity(g) {
        Ok(c) => c >= lambda,
        Err(_) => true,
    }
}

/// Largest `lambda` such that every edge cut of size `< lambda` consists of
/// edges sharing a common vertex. Returns `m + 1` when every cut is of that
/// kind.
pub fn essential_edge_connectivity(g: &Multigraph) -> Result<usize> {
    essential_edge_connectivity_with(g, Exec::default())
}

pub fn essential_edge_connectivity_with(g: &Multigraph, exec: Exec) -> Result<usize> {
    let n = g.vertex_count();
    if n < 4 {
        return precondition("essential edge connectivity needs at least four vertices");
    }
    if n > ESSENTIAL_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count for essential connectivity",
            limit: ESSENTIAL_MAX_VERTICES,
            got: n,
        });
    }
    let edges: Vec<(usize, usize)> = g.edges().iter().copied().filter(|(u, v)| u != v).collect();
    let sentinel = g.edge_count() + 1;
    // Vertex n-1 stays outside A; every cut is seen once.
    let half = 1u64 << (n - 1);
    let best = par::min_by_key(exec, half, |bits| {
        if bits == 0 {
            return None;
        }
        let mut cut: Vec<(usize, usize)> = Vec::new();
        for &(u, v) in &edges {
            if (bits >> u & 1) != (bits >> v & 1) {
                cut.push((u, v));
            }
        }
        if cut_is_star(&cut) {
            None
        } else {
            Some(cut.len())
        }
    });
    Ok(best.map(|(_, c)| c).unwrap_or(sentinel))
}

fn cut_is_star(cut: &[(usize, usize)]) -> bool {
    let Some(&(a, b)) = cut.first() else {
        return true;
    };
    cut.iter().all(|&(u, v)| u == a || v == a) || cut.iter().all(|&(u, v)| u == b || v == b)
}

/// `m` edge-disjoint spanning trees plus the edges they leave unused.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreePacking {
    pub trees: Vec<Vec<EdgeId>>,
    pub leftover: Vec<EdgeId>,
}

/// A vertex partition with fewer than `m(|P| - 1)` crossing edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub parts: Vec<Vec<VertexId>>,
    pub crossing_edges: usize,
}

impl PartitionCertificate {
    /// Recount crossing edges and test `e_G(P) < m(|P| - 1)`.
    pub fn refutes(&self, g: &Multigraph, m: usize) -> bool {
        let mut part = vec![usize::MAX; g.vertex_count()];
        for (i, p) in self.parts.iter().enumerate() {
            for &v in p {
                if v >= part.len() || part[v] != usize::MAX {
                    return false;
                }
                part[v] = i;
            }
        }
        if part.iter().any(|&p| p == usize::MAX) {
            return false;
        }
        let crossing = g.edges().iter().filter(|&&(u, v)| part[u] != part[v]).count();
        crossing == self.crossing_edges && crossing < m * (self.parts.len().saturating_sub(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreePackOutcome {
    Packed(TreePacking),
    Deficient(PartitionCertificate),
}

impl TreePackOutcome {
    pub fn packing(&self) -> Option<&TreePacking> {
        match self {
            TreePackOutcome::Packed(p) => Some(p),
            TreePackOutcome::Deficient(_) => None,
        }
    }

    pub fn is_packed(&self) -> bool {
        matches!(self, TreePackOutcome::Packed(_))
    }
}

/// Pack `m` edge-disjoint spanning trees by matroid-union augmentation, or
/// return a partition certifying that no such packing exists. Loops are
/// ignored.
pub fn tree_pack(g: &Multigraph, m: usize) -> TreePackOutcome {
    let order: Vec<EdgeId> = (0..g.edge_count()).collect();
    tree_pack_ordered(g, m, &order)
}

pub fn is_tree_connected(g: &Multigraph, m: usize) -> bool {
    tree_pack(g, m).is_packed()
}

pub(crate) fn tree_pack_ordered(g: &Multigraph, m: usize, order: &[EdgeId]) -> TreePackOutcome {
    let n = g.vertex_count();
    let mut packer = ForestPacker::new(g, m);
    let target = n.saturating_sub(1);
    if m > 0 && target > 0 {
        for &e in order {
            if g.is_loop(e) || packer.owner[e].is_some() {
                continue;
            }
            packer.try_insert(e);
            if packer.sizes.iter().all(|&s| s == target) {
                break;
            }
        }
    }
    if packer.sizes.iter().all(|&s| s == target) {
        let mut trees = vec![Vec::new(); m];
        let mut leftover = Vec::new();
        for e in 0..g.edge_count() {
            match packer.owner[e] {
                Some(i) => trees[i].push(e),
                None => leftover.push(e),
            }
        }
        return TreePackOutcome::Packed(TreePacking { trees, leftover });
    }
    let cert = packer.certificate();
    assert!(
        cert.refutes(g, m),
        "internal error: tree packing certificate failed verification"
    );
    TreePackOutcome::Deficient(cert)
}

struct ForestPacker<'a> {
    g: &'a Multigraph,
    m: usize,
    owner: Vec<Option<usize>>,
    sizes: Vec<usize>,
}

impl<'a> ForestPacker<'a> {
    fn new(g: &'a Multigraph, m: usize) -> Self {
        ForestPacker {
            g,
            m,
            owner: vec![None; g.edge_count()],
            sizes: vec![0; m],
        }
    }

    fn forest_adjacency(&self) -> Vec<Vec<Vec<(VertexId, EdgeId)>>> {
        let n = self.g.vertex_count();
        let mut adj = vec![vec![Vec::new(); n]; self.m];
        for (e, o) in self.owner.iter().enumerate() {
            if let Some(i) = *o {
                let (u, v) = self.g.endpoints(e);
                adj[i][u].push((v, e));
                adj[i][v].push((u, e));
            }
        }
        adj
    }

    fn forest_components(&self, i: usize) -> Vec<usize> {
        let edges = (0..self.g.edge_count())
            .filter(|&e| self.owner[e] == Some(i))
            .map(|e| self.g.endpoints(e));
        components_of(self.g.vertex_count(), edges).0
    }

    /// BFS over the exchange graph from `sources`. With `allow_sink` the first
    /// insertable element triggers an augmentation and `None` is returned;
    /// otherwise the labelled set is returned.
    fn search(&mut self, sources: &[EdgeId], allow_sink: bool) -> Option<Vec<bool>> {
        let adj = self.forest_adjacency();
        let comps: Vec<Vec<usize>> = (0..self.m).map(|i| self.forest_components(i)).collect();
        let mut labelled = vec![false; self.g.edge_count()];
        let mut parent = vec![usize::MAX; self.g.edge_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            labelled[s] = true;
            queue.push_back(s);
        }
        while let Some(x) = queue.pop_front() {
            let (a, b) = self.g.endpoints(x);
            for i in 0..self.m {
                if self.owner[x] == Some(i) {
                    continue;
                }
                if comps[i][a] != comps[i][b] {
                    if allow_sink {
                        self.augment(x, i, &parent);
                        return None;
                    }
                    continue;
                }
                for y in forest_path(&adj[i], a, b) {
                    if !labelled[y] {
                        labelled[y] = true;
                        parent[y] = x;
                        queue.push_back(y);
                    }
                }
            }
        }
        Some(labelled)
    }

    fn augment(&mut self, sink: EdgeId, forest: usize, parent: &[usize]) {
        let mut cur = sink;
        let mut into = forest;
        loop {
            let old = self.owner[cur];
            self.owner[cur] = Some(into);
            self.sizes[into] += 1;
            if let Some(o) = old {
                self.sizes[o] -= 1;
            }
            match old {
                None => break,
                Some(o) => {
                    into = o;
                    cur = parent[cur];
                }
            }
        }
    }

    fn try_insert(&mut self, e: EdgeId) -> bool {
        self.search(&[e], true).is_none()
    }

    fn certificate(&mut self) -> PartitionCertificate {
        let sources: Vec<EdgeId> = (0..self.g.edge_count())
            .filter(|&e| self.owner[e].is_none() && !self.g.is_loop(e))
            .collect();
        let labelled = if sources.is_empty() {
            vec![false; self.g.edge_count()]
        } else {
            self.search(&sources, false).expect("search without sinks returns labels")
        };
        let spanning = (0..self.g.edge_count())
            .filter(|&e| labelled[e])
            .map(|e| self.g.endpoints(e));
        let (label, count) = components_of(self.g.vertex_count(), spanning);
        let mut parts = vec![Vec::new(); count];
        for (v, &l) in label.iter().enumerate() {
            parts[l].push(v);
        }
        let crossing_edges = self
            .g
            .edges()
            .iter()
            .filter(|&&(u, v)| label[u] != label[v])
            .count();
        PartitionCertificate {
            parts,
            crossing_edges,
        }
    }
}

fn forest_path(adj: &[Vec<(VertexId, EdgeId)>], a: VertexId, b: VertexId) -> Vec<EdgeId> {
    let n = adj.len();
    let mut via: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([a]);
    seen[a] = true;
    while let Some(u) = queue.pop_front() {
        if u == b {
            break;
        }
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                via[w] = Some((u, e));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = b;
    while let Some((p, e)) = via[cur] {
        path.push(e);
        cur = p;
    }
    path
}

/// Maximum number of edge-disjoint spanning trees. Graphs with at most one
/// vertex return `usize::MAX` (they contain any number of empty trees).
pub fn tree_connectivity(g: &Multigraph) -> usize {
    let n = g.vertex_count();
    if n <= 1 {
        return usize::MAX;
    }
    let usable = g.edge_count() - g.loop_count();
    let (mut lo, mut hi) = (0usize, usable / (n - 1));
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if is_tree_connected(g, mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// An `m`-tree-connected factor plus an orientation of the rest meeting
/// out-degree lower bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionDecomposition {
    pub packing: TreePacking,
    /// Edges outside the trees, each with its tail.
    pub remainder: Vec<(EdgeId, VertexId)>,
}

impl PartitionDecomposition {
    pub fn verify(&self, g: &Multigraph, m: usize, l0: &IntFunc) -> bool {
        let mut used = vec![false; g.edge_count()];
        for t in &self.packing.trees {
            let mut dsu = crate::graph::Dsu::new(g.vertex_count());
            if t.len() + 1 != g.vertex_count() {
                return false;
            }
            for &e in t {
                let (u, v) = g.endpoints(e);
                if used[e] || !dsu.union(u, v) {
                    return false;
                }
                used[e] = true;
            }
        }
        if self.packing.trees.len() != m {
            return false;
        }
        let mut out = vec![0i64; g.vertex_count()];
        for &(e, tail) in &self.remainder {
            let (u, v) = g.endpoints(e);
            if used[e] || (tail != u && tail != v) {
                return false;
            }
            used[e] = true;
            out[tail] += 1;
        }
        (0..g.vertex_count()).all(|v| out[v] >= l0.get(v))
    }
}

/// Decompose `g` into an `m`-tree-connected factor and a remainder oriented
/// with out-degree at least `l0(v)` everywhere. Loops are stripped first.
///
/// Repacking with shuffled edge orders is tried before an exact search over
/// all minimal tree factors, which runs when the loopless graph has at most
/// [`PARTITION_EXACT_MAX_EDGES`] edges.
pub fn partition_connected_decompose(g: &Multigraph, m: usize, l0: &IntFunc) -> Result<PartitionDecomposition> {
    let n = g.vertex_count();
    if l0.len() != n {
        return precondition("l0 must have one value per vertex");
    }
    let (loopless, map) = g.without_loops();
    let need_trees = m * n.saturating_sub(1);
    let need_out: i64 = l0.0.iter().map(|&x| x.max(0)).sum();
    if need_trees as i64 + need_out > loopless.edge_count() as i64 {
        return Err(Error::Infeasible(format!(
            "{} edges cannot hold {} tree edges and {} out-degree demands",
            loopless.edge_count(),
            need_trees,
            need_out
        )));
    }
    let lift = |packing: TreePacking, remainder: Vec<(EdgeId, VertexId)>| PartitionDecomposition {
        packing: TreePacking {
            trees: packing
                .trees
                .into_iter()
                .map(|t| t.into_iter().map(|e| map[e]).collect())
                .collect(),
            leftover: packing.leftover.into_iter().map(|e| map[e]).collect(),
        },
        remainder: remainder.into_iter().map(|(e, t)| (map[e], t)).collect(),
    };

    let mut order: Vec<EdgeId> = (0..loopless.edge_count()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for attempt in 0..24 {
        if attempt > 0 {
            order.shuffle(&mut rng);
        }
        match tree_pack_ordered(&loopless, m, &order) {
            TreePackOutcome::Deficient(_) => {
                return Err(Error::Infeasible(format!("graph is not {m}-tree-connected")));
            }
            TreePackOutcome::Packed(p) => {
                if let Some(rem) = orient_with_lower_bounds(&loopless, &p.leftover, l0) {
                    return Ok(lift(p, rem));
                }
            }
        }
    }

    let e = loopless.edge_count();
    if e > PARTITION_EXACT_MAX_EDGES {
        return Err(Error::SolverGaveUp(
            "repacking found no decomposition and the exact search is out of range".into(),
        ));
    }
    let mut chosen = Vec::with_capacity(need_trees);
    let mut found = None;
    combinations(e, need_trees, 0, &mut chosen, &mut |set| {
        let sub = loopless.edge_subgraph(set);
        if let TreePackOutcome::Packed(p) = tree_pack(&sub, m) {
            let mut in_set = vec![false; e];
            set.iter().for_each(|&x| in_set[x] = true);
            let rest: Vec<EdgeId> = (0..e).filter(|&x| !in_set[x]).collect();
            if let Some(rem) = orient_with_lower_bounds(&loopless, &rest, l0) {
                let packing = TreePacking {
                    trees: p
                        .trees
                        .iter()
                        .map(|t| t.iter().map(|&i| set[i]).collect())
                        .collect(),
                    leftover: rest,
                };
                found = Some((packing, rem));
                return true;
            }
        }
        false
    });
    match found {
        Some((p, rem)) => Ok(lift(p, rem)),
        None => Err(Error::Infeasible(format!(
            "no ({m}, l0)-partition-connected decomposition exists (exhaustive)"
        ))),
    }
}

/// Visit every `k`-subset of `0..n` in lexicographic order until `visit` returns true.
pub(crate) fn combinations<F: FnMut(&[usize]) -> bool>(
    n: usize,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    visit: &mut F,
) -> bool {
    if chosen.len() == k {
        return visit(chosen);
    }
    let need = k - chosen.len();
    for i in start..=n.saturating_sub(need) {
        if n < need {
            break;
        }
        chosen.push(i);
        if combinations(n, k, i + 1, chosen, visit) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::VertexSet;

    /// Independent oracle: minimum cut over all vertex subsets.
    fn cut_oracle(g: &Multigraph) -> usize {
        let n = g.vertex_count();
        (1..(1u64 << n) - 1)
            .map(|b| g.cut_degree(&VertexSet::from_bits(b, n)).unwrap())
            .min()
            .unwrap()
    }

    #[test]
    fn edge_connectivity_examples() {
        assert_eq!(edge_connectivity(&cycle(4)).unwrap(), 2);
        assert_eq!(edge_connectivity(&complete(4)).unwrap(), 3);
        let k33 = complete_bipartite(3, 3).multiply(3);
        assert_eq!(cut_oracle(&k33), 9);
        assert_eq!(edge_connectivity(&k33).unwrap(), 9);
        assert!(edge_connectivity(&Multigraph::new(1)).is_err());
        let disconnected = Multigraph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(edge_connectivity(&disconnected).unwrap(), 0);
    }

    #[test]
    fn essential_examples() {
        assert_eq!(essential_edge_connectivity(&complete(4)).unwrap(), 4);
        let s = star(5);
        assert_eq!(essential_edge_connectivity(&s).unwrap(), s.edge_count() + 1);
        assert_eq!(essential_edge_connectivity(&cycle(6)).unwrap(), 2);
        assert!(essential_edge_connectivity(&cycle(3)).is_err());
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(essential_edge_connectivity_with(&complete(5), exec).unwrap(), 6);
        }
    }

    #[test]
    fn tree_pack_examples() {
        let k4 = complete(4);
        let p = tree_pack(&k4, 2);
        let packing = p.packing().expect("K4 holds two spanning trees");
        assert_eq!(packing.trees.len(), 2);
        assert!(packing.leftover.is_empty());

        let t = path(5);
        let p = tree_pack(&t, 1);
        assert_eq!(p.packing().unwrap().trees[0], vec![0, 1, 2, 3]);

        match tree_pack(&cycle(4), 2) {
            TreePackOutcome::Deficient(c) => {
                assert_eq!(c.parts.len(), 4);
                assert_eq!(c.crossing_edges, 4);
                assert!(c.refutes(&cycle(4), 2));
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn tree_connectivity_examples() {
        assert_eq!(tree_connectivity(&complete(4)), 2);
        assert_eq!(tree_connectivity(&cycle(4)), 1);
        assert_eq!(tree_connectivity(&complete(6)), 3);
        assert_eq!(tree_connectivity(&Multigraph::from_edges(3, [(0, 1)]).unwrap()), 0);
    }

    #[test]
    fn certificate_on_two_clumps() {
        // two K4's joined by one edge: 1-tree-connected, not 2
        let mut g = complete(4);
        let mut e: Vec<_> = g.edges().to_vec();
        e.extend(complete(4).edges().iter().map(|&(u, v)| (u + 4, v + 4)));
        e.push((0, 4));
        g = Multigraph::from_edges(8, e).unwrap();
        assert_eq!(tree_connectivity(&g), 1);
        match tree_pack(&g, 2) {
            TreePackOutcome::Deficient(c) => assert!(c.refutes(&g, 2)),
            _ => panic!(),
        }
    }

    #[test]
    fn partition_decompose_examples() {
        let t = path(4);
        let d = partition_connected_decompose(&t, 1, &IntFunc::constant(4, 0)).unwrap();
        assert!(d.remainder.is_empty());
        assert!(d.verify(&t, 1, &IntFunc::constant(4, 0)));

        let dt = t.multiply(2);
        let d = partition_connected_decompose(&dt, 1, &IntFunc::constant(4, 0)).unwrap();
        assert_eq!(d.remainder.len(), 3);
        assert!(d.verify(&dt, 1, &IntFunc::constant(4, 0)));

        let r = partition_connected_decompose(&cycle(4), 1, &IntFunc::constant(4, 1));
        assert!(matches!(r, Err(Error::Infeasible(_))));
    }

    #[test]
    fn partition_decompose_needs_exact_search() {
        // K4 doubled: 12 edges, one spanning tree + out-degree 2 at every vertex.
        let g = complete(4).multiply(2);
        let l0 = IntFunc::constant(4, 2);
        let d = partition_connected_decompose(&g, 1, &l0).unwrap();
        assert!(d.verify(&g, 1, &l0));
        let l0 = IntFunc(vec![3, 3, 3, 0]);
        assert!(partition_connected_decompose(&g, 1, &l0).unwrap().verify(&g, 1, &l0));
        // vertex 0 has degree 6 and the tree takes one of its edges
        let l0 = IntFunc(vec![6, 0, 0, 0]);
        assert!(matches!(partition_connected_decompose(&g, 1, &l0), Err(Error::Infeasible(_))));
    }
}
