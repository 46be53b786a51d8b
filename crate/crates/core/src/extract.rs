//! Bipartite factors of maximum size and the odd-cycle / Eulerian
//! decompositions built from them.

use crate::connectivity::{tree_pack, TreePackOutcome};
use crate::error::{hypothesis, precondition, Error, Hypotheses, Result};
use crate::graph::{Bipartition, EdgeId, Factor, Multigraph, VertexId};
use crate::maxcut::{bipartite_index, CutMode};

/// Edge limit for the brute-force odd-cycle fallback.
pub const ODD_CYCLE_SEARCH_MAX_EDGES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteFactor {
    pub bipartition: Bipartition,
    pub factor: Factor,
    /// `true`: globally maximum, so `2 d_H(A) >= d_G(A)` for every `A`.
    /// `false`: locally maximal, so only `2 d_H(v) >= d_G(v)` per vertex.
    pub exact: bool,
    /// `e(X) + e(Y)` for the bipartition (loops included).
    pub intra: usize,
}

/// `G[X, Y]` for a maximum (or locally maximum) cut `(X, Y)`.
pub fn max_bipartite_factor(g: &Multigraph, mode: CutMode) -> Result<BipartiteFactor> {
    let bi = bipartite_index(g, mode)?;
    let factor = bi.witness.crossing(g);
    Ok(BipartiteFactor {
        bipartition: bi.witness,
        factor,
        exact: bi.exact,
        intra: bi.value,
    })
}

/// Path between `a` and `b` inside the tree given by `edges`.
fn tree_path(g: &Multigraph, edges: &[EdgeId], a: VertexId, b: VertexId) -> Vec<EdgeId> {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
    for &e in edges {
        let (u, v) = g.endpoints(e);
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut via: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut stack = vec![a];
    seen[a] = true;
    while let Some(u) = stack.pop() {
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                via[w] = Some((u, e));
                stack.push(w);
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

/// `k` pairwise edge-disjoint odd cycles, each as a list of edge ids.
///
/// Follows the tree construction when `G[X, Y]` packs `k` spanning trees;
/// otherwise searches all odd cycles when the graph is small enough.
pub fn edge_disjoint_odd_cycles(g: &Multigraph, k: usize) -> Result<Vec<Vec<EdgeId>>> {
    let bf = max_bipartite_factor(g, CutMode::Exact)?;
    if bf.intra < k {
        return Err(Error::Infeasible(format!(
            "bi(G) = {} < {k}, so no {k} edge-disjoint odd cycles exist",
            bf.intra
        )));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let (h, h_ids) = bf.factor.graph(g);
    if let TreePackOutcome::Packed(p) = tree_pack(&h, k) {
        let intra: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| !bf.factor.contains(e)).collect();
        let cycles = p
            .trees
            .iter()
            .zip(&intra)
            .map(|(t, &e)| {
                let tree: Vec<EdgeId> = t.iter().map(|&i| h_ids[i]).collect();
                let (u, v) = g.endpoints(e);
                let mut c = tree_path(g, &tree, u, v);
                c.push(e);
                c
            })
            .collect::<Vec<_>>();
        debug_assert!(verify_odd_cycles(g, &cycles));
        return Ok(cycles);
    }
    if g.edge_count() > ODD_CYCLE_SEARCH_MAX_EDGES {
        return Err(Error::SolverGaveUp(format!(
            "G[X,Y] is not {k}-tree-connected and the graph is too large for the cycle search"
        )));
    }
    let cycles = odd_cycles(g);
    let mut chosen = Vec::new();
    let mut used = vec![false; g.edge_count()];
    if pick_disjoint(&cycles, k, 0, &mut used, &mut chosen) {
        let out: Vec<Vec<EdgeId>> = chosen.into_iter().map(|i| cycles[i].clone()).collect();
        Ok(out)
    } else {
        Err(Error::Infeasible(format!(
            "exhaustive search found no {k} edge-disjoint odd cycles"
        )))
    }
}

fn pick_disjoint(cycles: &[Vec<EdgeId>], k: usize, from: usize, used: &mut [bool], chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == k {
        return true;
    }
    for i in from..cycles.len() {
        if cycles[i].iter().any(|&e| used[e]) {
            continue;
        }
        cycles[i].iter().for_each(|&e| used[e] = true);
        chosen.push(i);
        if pick_disjoint(cycles, k, i + 1, used, chosen) {
            return true;
        }
        chosen.pop();
        cycles[i].iter().for_each(|&e| used[e] = false);
    }
    false
}

/// All odd cycles (as sorted edge-id lists), shortest first.
fn odd_cycles(g: &Multigraph) -> Vec<Vec<EdgeId>> {
    let n = g.vertex_count();
    let inc = g.incidence();
    let mut found: Vec<Vec<EdgeId>> = Vec::new();
    for e in 0..g.edge_count() {
        if g.is_loop(e) {
            found.push(vec![e]);
        }
    }
    for s in 0..n {
        let mut on_path = vec![false; n];
        on_path[s] = true;
        let mut path = Vec::new();
        cycle_dfs(g, &inc, s, s, &mut on_path, &mut path, &mut found);
    }
    for c in found.iter_mut() {
        c.sort_unstable();
    }
    found.sort();
    found.dedup();
    found.sort_by_key(|c| c.len());
    found
}

fn cycle_dfs(
    g: &Multigraph,
    inc: &[Vec<EdgeId>],
    s: VertexId,
    u: VertexId,
    on_path: &mut [bool],
    path: &mut Vec<EdgeId>,
    found: &mut Vec<Vec<EdgeId>>,
) {
    for &e in &inc[u] {
        if g.is_loop(e) || path.last() == Some(&e) {
            continue;
        }
        let w = g.other_end(e, u);
        if w == s && !path.is_empty() {
            if path.len() % 2 == 0 {
                let mut c = path.clone();
                c.push(e);
                found.push(c);
            }
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            path.push(e);
            cycle_dfs(g, inc, s, w, on_path, path, found);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Edge-disjoint, each a closed odd cycle.
pub fn verify_odd_cycles(g: &Multigraph, cycles: &[Vec<EdgeId>]) -> bool {
    let mut used = vec![false; g.edge_count()];
    for c in cycles {
        if c.len() % 2 == 0 {
            return false;
        }
        let mut deg = vec![0usize; g.vertex_count()];
        for &e in c {
            if e >= used.len() || used[e] {
                return false;
            }
            used[e] = true;
            let (u, v) = g.endpoints(e);
            deg[u] += 1;
            deg[v] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            return false;
        }
        let sub = g.edge_subgraph(c);
        let (label, _) = sub.components();
        let first = g.endpoints(c[0]).0;
        if (0..g.vertex_count()).any(|v| deg[v] > 0 && label[v] != label[first]) {
            return false;
        }
    }
    true
}

/// Union of `k` edge-disjoint odd cycles: maximum degree at most `2k` and
/// bipartite index at least `k`.
pub fn bounded_degree_odd_subgraph(g: &Multigraph, k: usize, hyp: Hypotheses) -> Result<Factor> {
    if hyp.verify() {
        if !tree_pack(g, 2 * k).is_packed() {
            return hypothesis(format!("graph is not {}-tree-connected", 2 * k));
        }
        let bi = bipartite_index(g, CutMode::Exact)?;
        if bi.value < k {
            return hypothesis(format!("bi(G) = {} < {k}", bi.value));
        }
    }
    let cycles = edge_disjoint_odd_cycles(g, k)?;
    let h = Factor::from_ids(g, cycles.into_iter().flatten())?;
    let d = h.degrees(g);
    assert!(d.iter().all(|&x| x <= 2 * k), "internal error: degree above 2k");
    Ok(h)
}

/// Edges of the forest `tree` (a forest in `g`) such that every vertex `v`
/// gets degree parity `demand[v]`. Each tree component must have even total
/// demand.
pub fn parity_forest(g: &Multigraph, tree: &[EdgeId], demand: &[bool]) -> Result<Vec<EdgeId>> {
    let n = g.vertex_count();
    if demand.len() != n {
        return precondition("demand must have one value per vertex");
    }
    let mut adj: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
    for &e in tree {
        let (u, v) = g.endpoints(e);
        if u == v {
            return precondition(format!("edge {e} is a loop"));
        }
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut seen = vec![false; n];
    let mut chosen = Vec::new();
    let mut need: Vec<bool> = demand.to_vec();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        // iterative DFS; record (vertex, parent edge) in preorder
        let mut order: Vec<(VertexId, Option<(VertexId, EdgeId)>)> = Vec::new();
        let mut stack = vec![(root, None)];
        seen[root] = true;
        while let Some((u, pe)) = stack.pop() {
            order.push((u, pe));
            for &(w, e) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, Some((u, e))));
                }
            }
        }
        for &(u, pe) in order.iter().rev() {
            match pe {
                Some((p, e)) => {
                    if need[u] {
                        chosen.push(e);
                        need[u] = false;
                        need[p] = !need[p];
                    }
                }
                None => {
                    if need[u] {
                        return precondition(format!(
                            "tree component containing {u} has odd total demand"
                        ));
                    }
                }
            }
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// `G = G1 ⊎ G2`, with `G1` even and `G2[X, Y]` `m`-tree-connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerianBipartiteSplit {
    pub g1: Factor,
    pub g2: Factor,
    pub bipartition: Bipartition,
    /// Edges of `G2` inside `X` or inside `Y`.
    pub intra: Vec<EdgeId>,
}

/// Split `G` into an even factor `G1` and a factor `G2` whose bipartite
/// part is `m`-tree-connected, with `e_{G2}(X) + e_{G2}(Y) = min(budget, bi)`.
pub fn eulerian_plus_bipartite_decompose(
    g: &Multigraph,
    m: usize,
    budget: usize,
    hyp: Hypotheses,
) -> Result<EulerianBipartiteSplit> {
    if hyp.verify() && !tree_pack(g, 2 * m + 4).is_packed() {
        return hypothesis(format!("graph is not {}-tree-connected", 2 * m + 4));
    }
    let bf = max_bipartite_factor(g, CutMode::Exact)?;
    let (h, h_ids) = bf.factor.graph(g);
    let packing = match tree_pack(&h, m + 2) {
        TreePackOutcome::Packed(p) => p,
        TreePackOutcome::Deficient(_) => {
            return hypothesis(format!(
                "the maximum bipartite factor is not {}-tree-connected",
                m + 2
            ))
        }
    };
    let lift = |ids: &[EdgeId]| ids.iter().map(|&i| h_ids[i]).collect::<Vec<_>>();
    let t0 = lift(&packing.trees[0]);
    let t = lift(&packing.trees[1]);
    let intra: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| !bf.factor.contains(e)).collect();
    let keep = budget.min(bf.intra);
    let (m_part, m0) = intra.split_at(keep);
    let n = g.vertex_count();
    let mut demand = vec![false; n];
    for &e in t0.iter().chain(m0) {
        let (u, v) = g.endpoints(e);
        if u != v {
            demand[u] = !demand[u];
            demand[v] = !demand[v];
        }
    }
    let f = parity_forest(g, &t, &demand)?;
    let g1 = Factor::from_ids(g, t0.iter().chain(m0).chain(&f).copied())?;
    let g2 = g1.complement();
    assert!(g1.degrees(g).iter().all(|d| d % 2 == 0), "internal error: G1 is not even");
    Ok(EulerianBipartiteSplit {
        g1,
        g2,
        bipartition: bf.bipartition,
        intra: m_part.to_vec(),
    })
}

/// `k` edge-disjoint spanning connected even factors, each of odd size.
pub fn eulerian_odd_size_factors(g: &Multigraph, k: usize, hyp: Hypotheses) -> Result<Vec<Factor>> {
    let bf = max_bipartite_factor(g, CutMode::Exact)?;
    if hyp.verify() {
        if !tree_pack(g, 4 * k).is_packed() {
            return hypothesis(format!("graph is not {}-tree-connected", 4 * k));
        }
        if bf.intra < k {
            return hypothesis(format!("bi(G) = {} < {k}", bf.intra));
        }
    }
    if bf.intra < k {
        return Err(Error::Infeasible(format!("bi(G) = {} < {k}", bf.intra)));
    }
    let (h, h_ids) = bf.factor.graph(g);
    let packing = match tree_pack(&h, 2 * k) {
        TreePackOutcome::Packed(p) => p,
        TreePackOutcome::Deficient(_) => {
            return hypothesis(format!(
                "the maximum bipartite factor is not {}-tree-connected",
                2 * k
            ))
        }
    };
    let intra: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| !bf.factor.contains(e)).collect();
    let n = g.vertex_count();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let t: Vec<EdgeId> = packing.trees[i].iter().map(|&x| h_ids[x]).collect();
        let t_prime: Vec<EdgeId> = packing.trees[k + i].iter().map(|&x| h_ids[x]).collect();
        let e = intra[i];
        let mut demand = vec![false; n];
        for &x in t_prime.iter().chain(std::iter::once(&e)) {
            let (u, v) = g.endpoints(x);
            if u != v {
                demand[u] = !demand[u];
                demand[v] = !demand[v];
            }
        }
        let f = parity_forest(g, &t, &demand)?;
        let gi = Factor::from_ids(g, t_prime.iter().chain(&f).copied().chain(std::iter::once(e)))?;
        assert!(gi.degrees(g).iter().all(|d| d % 2 == 0), "internal error: odd degree");
        assert!(gi.len() % 2 == 1, "internal error: even size");
        out.push(gi);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::VertexSet;

    fn bowtie() -> Multigraph {
        Multigraph::from_edges(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn max_bipartite_examples() {
        let c4 = cycle(4);
        assert_eq!(max_bipartite_factor(&c4, CutMode::Exact).unwrap().factor.len(), 4);
        let tri = cycle(3);
        assert_eq!(max_bipartite_factor(&tri, CutMode::Exact).unwrap().factor.len(), 2);
        let k4 = complete(4);
        let bf = max_bipartite_factor(&k4, CutMode::Exact).unwrap();
        assert_eq!(bf.factor.len(), 4);
        let (h, _) = bf.factor.graph(&k4);
        for bits in 1u64..15 {
            let a = VertexSet::from_bits(bits, 4);
            assert!(2 * h.cut_degree(&a).unwrap() >= k4.cut_degree(&a).unwrap());
        }
    }

    #[test]
    fn odd_cycle_examples() {
        let tri = cycle(3);
        let c = edge_disjoint_odd_cycles(&tri, 1).unwrap();
        assert_eq!(c[0].len(), 3);
        assert!(matches!(edge_disjoint_odd_cycles(&cycle(4), 1), Err(Error::Infeasible(_))));
        let b = bowtie();
        let c = edge_disjoint_odd_cycles(&b, 2).unwrap();
        assert_eq!(c.len(), 2);
        assert!(verify_odd_cycles(&b, &c));
    }

    #[test]
    fn odd_subgraph_examples() {
        let tri = cycle(3);
        // the triangle is not 2-tree-connected; the construction still applies
        assert!(bounded_degree_odd_subgraph(&tri, 1, Hypotheses::Verify).is_err());
        let h = bounded_degree_odd_subgraph(&tri, 1, Hypotheses::Assume).unwrap();
        assert_eq!(h.len(), 3);
        let g = complete(5).multiply(2);
        let h = bounded_degree_odd_subgraph(&g, 2, Hypotheses::Verify).unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d <= 4));
        let (sub, _) = h.graph(&g);
        assert!(bipartite_index(&sub, CutMode::Exact).unwrap().value >= 2);
        assert!(matches!(
            bounded_degree_odd_subgraph(&bowtie(), 2, Hypotheses::Verify),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn parity_forest_examples() {
        let p = path(4);
        let ids: Vec<EdgeId> = (0..3).collect();
        assert!(parity_forest(&p, &ids, &[false; 4]).unwrap().is_empty());
        let s = star(3);
        let f = parity_forest(&s, &[0, 1, 2], &[false, true, true, false]).unwrap();
        assert_eq!(f, vec![0, 1]);
        assert!(parity_forest(&s, &[0, 1, 2], &[true, false, false, false]).is_err());
    }

    #[test]
    fn decomposition_on_dense_multigraph() {
        // K5 tripled: 12-regular, 6-tree-connected, non-bipartite
        let g = complete(5).multiply(3);
        let s = eulerian_plus_bipartite_decompose(&g, 1, 2, Hypotheses::Verify).unwrap();
        assert!(s.g1.degrees(&g).iter().all(|d| d % 2 == 0));
        assert_eq!(s.intra.len(), 2);
        let (g2, _) = s.g2.graph(&g);
        let cross = s.bipartition.crossing(&g2);
        let (h, _) = cross.graph(&g2);
        assert!(tree_pack(&h, 1).is_packed());
    }

    #[test]
    fn odd_size_factors() {
        let g = complete(5).multiply(2);
        let fs = eulerian_odd_size_factors(&g, 1, Hypotheses::Verify).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].len() % 2, 1);
        let (h, _) = fs[0].graph(&g);
        assert!(h.is_connected());
        assert!(matches!(
            eulerian_odd_size_factors(&complete_bipartite(4, 4).multiply(2), 1, Hypotheses::Assume),
            Err(Error::Infeasible(_))
        ));
    }
}
