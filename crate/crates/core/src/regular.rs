//! Modulo `k`-regular factors (spanning, every degree a positive multiple of
//! `k`) and subgraphs (non-empty, every degree a multiple of `k`).
//!
//! The factor results all pass through a maximum cut: the crossing edges
//! keep at least half of every edge cut, so connectivity of `G` carries
//! over to a bipartite factor at half strength, and the bipartite engines
//! of [`crate::modk`] finish the job with `f ≡ 0`.

use serde::{Deserialize, Serialize};

use crate::check::{check_bipartite, check_modk_regular_factor, check_modk_regular_subgraph};
use crate::connectivity::{edge_connectivity, essential_edge_connectivity};
use crate::error::{hypothesis, precondition, Error, Hypotheses, Result};
use crate::extract::max_bipartite_factor;
use crate::graph::{residue_normalize, EdgeId, Factor, IntFunc, Multigraph, ResidueMap};
use crate::matching::bipartite_matching;
use crate::maxcut::{CutMode, EXACT_MAX_VERTICES};
use crate::modk::{bipartite_f_factor, bipartite_f_factor_tree};
use crate::parity::even_factor;

fn cut_mode(g: &Multigraph) -> CutMode {
    if g.vertex_count() <= EXACT_MAX_VERTICES {
        CutMode::Exact
    } else {
        CutMode::Bound
    }
}

fn lambda_at_least(g: &Multigraph, need: usize) -> Result<()> {
    if need == 0 || g.vertex_count() < 2 {
        return Ok(());
    }
    let l = edge_connectivity(g)?;
    if l < need {
        return hypothesis(format!("graph is {l}-edge-connected, not {need}"));
    }
    Ok(())
}

/// Graphs on fewer than four vertices have no cut of the essential kind.
fn essential_at_least(g: &Multigraph, need: usize) -> Result<()> {
    if need == 0 || g.vertex_count() < 4 {
        return Ok(());
    }
    let l = essential_edge_connectivity(g)?;
    if l < need {
        return hypothesis(format!("graph is essentially {l}-edge-connected, not {need}"));
    }
    Ok(())
}

/// The input itself when bipartite, otherwise the crossing edges of a
/// maximum cut, as a graph with its edge map into `g`.
fn bipartite_base(g: &Multigraph) -> Result<(Multigraph, Vec<EdgeId>)> {
    if g.is_bipartite() {
        Ok((g.clone(), (0..g.edge_count()).collect()))
    } else {
        let bf = max_bipartite_factor(g, cut_mode(g))?;
        Ok(bf.factor.graph(g))
    }
}

fn lift(host: &Multigraph, ids: &[EdgeId], h: &Factor) -> Factor {
    Factor::from_ids(host, h.edge_ids().into_iter().map(|e| ids[e])).expect("ids come from the host")
}

/// A bipartite factor whose degrees are all positive and even, for a
/// 3-edge-connected loopless graph with minimum degree at least 5.
pub fn bipartite_mod2_regular(g: &Multigraph, hyp: Hypotheses) -> Result<Factor> {
    if hyp.verify() {
        if !g.is_loopless() {
            return hypothesis("graph has loops");
        }
        if g.min_degree() < 5 {
            return hypothesis(format!("minimum degree is {}, below 5", g.min_degree()));
        }
        lambda_at_least(g, 3)?;
    }
    let bf = max_bipartite_factor(g, cut_mode(g))?;
    let (h, ids) = bf.factor.graph(g);
    let f = lift(g, &ids, &even_factor(&h, hyp)?);
    assert_regular("bipartite_mod2_regular", g, &f, 2);
    Ok(f)
}

fn assert_regular(what: &str, g: &Multigraph, f: &Factor, k: usize) {
    crate::modk::assert_check(what, check_modk_regular_factor(g, f, k));
    crate::modk::assert_check(what, check_bipartite(g, f));
}

/// `copies` disjoint copies of `K4` and one extra vertex joined to all of
/// them: 4-edge-connected, yet without a bipartite factor of positive even
/// degrees.
pub fn k4_hub_witness(copies: usize) -> Multigraph {
    let n = 4 * copies + 1;
    let hub = n - 1;
    let mut g = Multigraph::new(n);
    for c in 0..copies {
        let base = 4 * c;
        for i in 0..4 {
            for j in i + 1..4 {
                g.add_edge(base + i, base + j).expect("in range");
            }
            g.add_edge(base + i, hub).expect("in range");
        }
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularRoute {
    /// Edge and essential edge connectivity.
    Edge,
    /// Tree connectivity; needs `k >= 3`.
    Tree,
}

/// A bipartite factor with every degree a positive multiple of `k`.
///
/// Edge route: `(4k-1)`-edge-connected and essentially `(6k-7)`-edge-connected,
/// or for bipartite input `2k` and `3k-3`. Tree route: `(4k-4)`-tree-connected,
/// or `(2k-2)` for bipartite input.
pub fn bipartite_modk_regular_factor(g: &Multigraph, k: usize, route: RegularRoute, hyp: Hypotheses) -> Result<Factor> {
    if k == 0 {
        return Err(Error::ZeroModulus);
    }
    if !g.is_loopless() {
        return precondition("graph has loops");
    }
    let bipartite = g.is_bipartite();
    let (g0, ids) = bipartite_base(g)?;
    let f = ResidueMap::constant(k, g0.vertex_count(), 0)?;
    let h = match route {
        RegularRoute::Edge => {
            if hyp.verify() {
                let (l, e) = if bipartite { (2 * k, 3 * k - 3) } else { (4 * k - 1, (6 * k).saturating_sub(7)) };
                lambda_at_least(g, l)?;
                essential_at_least(g, e)?;
                if !bipartite {
                    // a local-search cut (large graphs) carries no guarantee
                    lambda_at_least(&g0, 2 * k)?;
                }
            }
            bipartite_f_factor(&g0, &f, None, Hypotheses::Assume)?
        }
        RegularRoute::Tree => {
            if k < 3 {
                return precondition("the tree route needs k >= 3");
            }
            if hyp.verify() && !bipartite {
                let m = 4 * k - 4;
                if !crate::connectivity::tree_pack(g, m).is_packed() {
                    return hypothesis(format!("graph is not {m}-tree-connected"));
                }
            }
            bipartite_f_factor_tree(&g0, &f, hyp)?
        }
    };
    let h = lift(g, &ids, &h);
    assert_regular("bipartite_modk_regular_factor", g, &h, k);
    Ok(h)
}

/// A factor with every degree `≡ k (mod 2k)`: divisible by `k`, not by `2k`.
///
/// Needs even order and `(10k-3)`-edge-connectivity with essential
/// `(12k-7)`, or for bipartite input `5k-1` and `6k-3`.
pub fn modk_regular_nondiv2k(g: &Multigraph, k: usize, hyp: Hypotheses) -> Result<Factor> {
    if k == 0 {
        return Err(Error::ZeroModulus);
    }
    if !g.is_loopless() {
        return precondition("graph has loops");
    }
    if g.vertex_count() % 2 == 1 {
        return precondition("graph has odd order");
    }
    let bipartite = g.is_bipartite();
    let (g0, ids) = bipartite_base(g)?;
    let f = ResidueMap::constant(2 * k, g0.vertex_count(), k as i64)?;
    if hyp.verify() {
        let (l, e) = if bipartite { (5 * k - 1, 6 * k - 3) } else { (10 * k - 3, 12 * k - 7) };
        lambda_at_least(g, l)?;
        essential_at_least(g, e)?;
        let floor = 4 * k as i64 - 1 + residue_normalize(k as i64, 2 * k as i64)?;
        if let Some((v, &d)) = g0.degrees().iter().enumerate().find(|(_, &d)| (d as i64) < floor) {
            return hypothesis(format!("bipartite factor has degree {d} at {v}, below {floor}"));
        }
    }
    let h = lift(g, &ids, &bipartite_f_factor(&g0, &f, None, Hypotheses::Assume)?);
    let d = h.degrees(g);
    if let Some(v) = (0..d.len()).find(|&v| d[v] % (2 * k) != k) {
        panic!("internal error: modk_regular_nondiv2k gives degree {} at {v}", d[v]);
    }
    Ok(h)
}

pub fn is_prime_power(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|p| q % p == 0).expect("q >= 2");
    let mut x = q;
    while x % p == 0 {
        x /= p;
    }
    x == 1
}

/// Smallest prime power `q >= max(k, 2)`.
pub fn prime_power_at_least(k: usize) -> usize {
    (k.max(2)..).find(|&q| is_prime_power(q)).expect("prime powers are unbounded")
}

/// Whether the known edge bound guarantees a modulo `q`-regular subgraph of
/// a loopless graph: `|E| > (q-1) n`, `(q-1)(n-1)` if bipartite, and
/// `(q-1)(n-1/2)` if `q` is a power of two.
pub fn afk_guaranteed(g: &Multigraph, q: usize) -> bool {
    if !g.is_loopless() || !is_prime_power(q) {
        return false;
    }
    let (m, n, q1) = (g.edge_count() as i64, g.vertex_count() as i64, q as i64 - 1);
    let mut ok = m > q1 * n;
    if g.is_bipartite() {
        ok |= m > q1 * (n - 1);
    }
    if q.is_power_of_two() {
        ok |= 2 * m > q1 * (2 * n - 1);
    }
    ok
}

/// Default node budget for [`mod_q_regular_subgraph`].
pub const DEFAULT_SEARCH_NODES: u64 = 20_000_000;

/// A non-empty edge set whose degrees are all `≡ 0 (mod q)`.
///
/// `Ok(None)` means the search space was exhausted: no such subgraph
/// exists. Running out of `budget` nodes is [`Error::SolverGaveUp`].
pub fn mod_q_regular_subgraph(g: &Multigraph, q: usize, budget: u64) -> Result<Option<Factor>> {
    if !is_prime_power(q) {
        return precondition(format!("{q} is not a prime power"));
    }
    if g.edge_count() == 0 {
        return Ok(None);
    }
    if g.degrees().iter().all(|d| d % q == 0) {
        return Ok(Some(Factor::full(g)));
    }
    // q parallel copies of one edge, or q/2 loops at one vertex
    let mut by_pair: std::collections::HashMap<(usize, usize), Vec<EdgeId>> = Default::default();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let list = by_pair.entry((u.min(v), u.max(v))).or_default();
        list.push(e);
        let need = if u == v && q % 2 == 0 { q / 2 } else { q };
        if list.len() == need {
            let h = Factor::from_ids(g, list.iter().copied())?;
            crate::modk::assert_check("mod_q_regular_subgraph", check_modk_regular_subgraph(g, &h, q));
            return Ok(Some(h));
        }
    }
    let (comp, count) = g.components();
    let mut nodes = 0u64;
    for c in 0..count {
        let ids: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| comp[g.endpoints(e).0] == c).collect();
        if ids.is_empty() {
            continue;
        }
        if let Some(found) = search_component(g, &ids, q, budget, &mut nodes)? {
            let h = Factor::from_ids(g, found)?;
            crate::modk::assert_check("mod_q_regular_subgraph", check_modk_regular_subgraph(g, &h, q));
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Depth-first search over the edges of one component, including edges
/// before excluding them. Edges are ordered so vertices close early, and a
/// vertex is abandoned as soon as its open edge-ends cannot reach a
/// multiple of `q`.
fn search_component(g: &Multigraph, ids: &[EdgeId], q: usize, budget: u64, nodes: &mut u64) -> Result<Option<Vec<EdgeId>>> {
    let n = g.vertex_count();
    // order vertices by BFS from the first endpoint, edges by later endpoint
    let mut rank = vec![usize::MAX; n];
    let inc = g.incidence();
    let start = g.endpoints(ids[0]).0;
    let mut queue = std::collections::VecDeque::from([start]);
    rank[start] = 0;
    let mut next = 1;
    while let Some(u) = queue.pop_front() {
        for &e in &inc[u] {
            let w = g.other_end(e, u);
            if rank[w] == usize::MAX {
                rank[w] = next;
                next += 1;
                queue.push_back(w);
            }
        }
    }
    let mut order = ids.to_vec();
    order.sort_by_key(|&e| {
        let (u, v) = g.endpoints(e);
        (rank[u].max(rank[v]), rank[u].min(rank[v]), e)
    });
    let mut open = vec![0usize; n];
    for &e in &order {
        let (u, v) = g.endpoints(e);
        open[u] += 1;
        open[v] += 1;
    }
    let mut st = Search {
        g,
        order: &order,
        q,
        res: vec![0; n],
        open,
        chosen: Vec::new(),
        budget,
        nodes,
    };
    st.run(0)
}

struct Search<'a> {
    g: &'a Multigraph,
    order: &'a [EdgeId],
    q: usize,
    res: Vec<usize>,
    open: Vec<usize>,
    chosen: Vec<EdgeId>,
    budget: u64,
    nodes: &'a mut u64,
}

impl Search<'_> {
    fn viable(&self, v: usize) -> bool {
        let need = (self.q - self.res[v]) % self.q;
        self.open[v] >= need
    }

    fn run(&mut self, i: usize) -> Result<Option<Vec<EdgeId>>> {
        *self.nodes += 1;
        if *self.nodes > self.budget {
            return Err(Error::SolverGaveUp(format!("subgraph search exceeded {} nodes", self.budget)));
        }
        if i == self.order.len() {
            return Ok((!self.chosen.is_empty()).then(|| self.chosen.clone()));
        }
        let e = self.order[i];
        let (u, v) = self.g.endpoints(e);
        self.open[u] -= 1;
        self.open[v] -= 1;
        for take in [true, false] {
            if take {
                self.res[u] = (self.res[u] + 1) % self.q;
                self.res[v] = (self.res[v] + 1) % self.q;
                self.chosen.push(e);
            }
            if self.viable(u) && self.viable(v) {
                if let Some(found) = self.run(i + 1)? {
                    return Ok(Some(found));
                }
            }
            if take {
                self.res[u] = (self.res[u] + self.q - 1) % self.q;
                self.res[v] = (self.res[v] + self.q - 1) % self.q;
                self.chosen.pop();
            }
        }
        self.open[u] += 1;
        self.open[v] += 1;
        Ok(None)
    }
}

/// `q` pairwise disjoint perfect matchings covering a `q`-regular bipartite
/// multigraph, peeled one at a time.
pub fn peel_perfect_matchings(g: &Multigraph, q: usize) -> Result<Vec<Factor>> {
    let side = g
        .two_coloring()
        .ok_or_else(|| Error::Precondition("graph is not bipartite".into()))?;
    if g.degrees().iter().any(|&d| d != q) {
        return precondition(format!("graph is not {q}-regular"));
    }
    let n = g.vertex_count();
    let mut index = vec![0usize; n];
    let (mut left, mut right) = (0, 0);
    for v in 0..n {
        if side[v] {
            index[v] = left;
            left += 1;
        } else {
            index[v] = right;
            right += 1;
        }
    }
    let mut alive: Vec<EdgeId> = (0..g.edge_count()).collect();
    let mut out = Vec::with_capacity(q);
    for _ in 0..q {
        let pairs: Vec<(usize, usize)> = alive
            .iter()
            .map(|&e| {
                let (u, v) = g.endpoints(e);
                let (l, r) = if side[u] { (u, v) } else { (v, u) };
                (index[l], index[r])
            })
            .collect();
        let mate = bipartite_matching(left, right, &pairs);
        let picked: Vec<usize> = mate.iter().map(|m| m.expect("regular bipartite graphs have perfect matchings")).collect();
        let mut used = vec![false; alive.len()];
        for &i in &picked {
            used[i] = true;
        }
        out.push(Factor::from_ids(g, picked.iter().map(|&i| alive[i]))?);
        alive = alive.iter().zip(&used).filter(|(_, &u)| !u).map(|(&e, _)| e).collect();
    }
    Ok(out)
}

/// From a bipartite factor `H` with `d_H = q f`, a factor `F ⊆ H` with
/// `d_F = k f`: split each vertex into `f(v)` clones of degree `q`
/// (edges dealt round-robin), peel perfect matchings and keep `k` of them.
pub fn konig_scale(g: &Multigraph, h: &Factor, f: &IntFunc, q: usize, k: usize) -> Result<Factor> {
    h.check_host(g)?;
    if k > q {
        return precondition(format!("k = {k} exceeds q = {q}"));
    }
    if f.len() != g.vertex_count() {
        return precondition("f has the wrong length");
    }
    let dh = h.degrees(g);
    if let Some(v) = (0..dh.len()).find(|&v| f.get(v) < 0 || dh[v] as i64 != q as i64 * f.get(v)) {
        return precondition(format!("d_H({v}) = {} is not q f(v) = {}", dh[v], q as i64 * f.get(v)));
    }
    let (sub, ids) = h.graph(g);
    if sub.two_coloring().is_none() {
        return precondition("H is not bipartite");
    }
    let n = g.vertex_count();
    let mut first = vec![0usize; n + 1];
    for v in 0..n {
        first[v + 1] = first[v] + f.get(v) as usize;
    }
    let mut dealt = vec![0usize; n];
    let mut split = Multigraph::new(first[n]);
    for &(u, v) in sub.edges() {
        let cu = first[u] + dealt[u] % f.get(u) as usize;
        dealt[u] += 1;
        let cv = first[v] + dealt[v] % f.get(v) as usize;
        dealt[v] += 1;
        split.add_edge(cu, cv)?;
    }
    let mut keep = vec![false; sub.edge_count()];
    if q > 0 {
        for m in peel_perfect_matchings(&split, q)?.into_iter().take(k) {
            for e in m.edge_ids() {
                keep[e] = true;
            }
        }
    }
    let out = Factor::from_ids(g, (0..sub.edge_count()).filter(|&e| keep[e]).map(|e| ids[e]))?;
    let d = out.degrees(g);
    if let Some(v) = (0..n).find(|&v| d[v] as i64 != k as i64 * f.get(v)) {
        panic!("internal error: konig_scale gives degree {} at {v}", d[v]);
    }
    Ok(out)
}

/// A non-empty bipartite subgraph with every degree a multiple of `k`, for a
/// loopless graph with `|E| > (2q-2)(n-1)`, `q` the smallest prime power
/// `>= k`. Returns the subgraph and `q`.
pub fn bipartite_modk_regular_subgraph(g: &Multigraph, k: usize, budget: u64) -> Result<(Factor, usize)> {
    if k == 0 {
        return Err(Error::ZeroModulus);
    }
    if !g.is_loopless() {
        return precondition("graph has loops");
    }
    let q = prime_power_at_least(k);
    let n = g.vertex_count();
    let bound = (2 * q - 2) * n.saturating_sub(1);
    if g.edge_count() <= bound {
        return hypothesis(format!("|E| = {} is not above (2q-2)(n-1) = {bound} for q = {q}", g.edge_count()));
    }
    let bf = max_bipartite_factor(g, cut_mode(g))?;
    let (h, ids) = bf.factor.graph(g);
    let sub = mod_q_regular_subgraph(&h, q, budget)?
        .unwrap_or_else(|| panic!("internal error: no modulo {q}-regular subgraph above the guarantee"));
    let f = IntFunc(sub.degrees(&h).iter().map(|&d| (d / q) as i64).collect());
    let scaled = konig_scale(&h, &sub, &f, q, k)?;
    let out = lift(g, &ids, &scaled);
    crate::modk::assert_check("bipartite_modk_regular_subgraph", check_modk_regular_subgraph(g, &out, k));
    crate::modk::assert_check("bipartite_modk_regular_subgraph", check_bipartite(g, &out));
    Ok((out, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn mod2_regular_examples() {
        let g = complete(6);
        let h = bipartite_mod2_regular(&g, Hypotheses::Verify).unwrap();
        assert!(check_modk_regular_factor(&g, &h, 2).is_ok());
        assert!(matches!(bipartite_mod2_regular(&cycle(4), Hypotheses::Verify), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn k5_is_the_smallest_witness() {
        // K5 = one copy of K4 plus the hub; no bipartite even spanning factor
        let g = k4_hub_witness(1);
        assert_eq!(g.edge_count(), 10);
        let found = (0u32..1 << 10).any(|bits| {
            let h = Factor::from_ids(&g, (0..10).filter(|e| bits >> e & 1 == 1)).unwrap();
            check_modk_regular_factor(&g, &h, 2).is_ok() && check_bipartite(&g, &h).is_ok()
        });
        assert!(!found);
        assert_eq!(edge_connectivity(&k4_hub_witness(3)).unwrap(), 4);
    }

    #[test]
    fn modk_regular_factor_routes() {
        let g = complete_bipartite(3, 3).multiply(3);
        let h = bipartite_modk_regular_factor(&g, 3, RegularRoute::Edge, Hypotheses::Verify).unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d == 3 || d == 6));
        let h = bipartite_modk_regular_factor(&g, 3, RegularRoute::Tree, Hypotheses::Verify).unwrap();
        assert!(check_modk_regular_factor(&g, &h, 3).is_ok());
        assert!(bipartite_modk_regular_factor(&g, 2, RegularRoute::Tree, Hypotheses::Verify).is_err());
        // K8 x 2: 14-edge-connected, the 4 x 4 cut part is 8-edge-connected
        let g = complete(8).multiply(2);
        let h = bipartite_modk_regular_factor(&g, 2, RegularRoute::Edge, Hypotheses::Verify).unwrap();
        assert!(check_bipartite(&g, &h).is_ok());
    }

    #[test]
    fn nondiv2k_examples() {
        let g = complete_bipartite(4, 4).multiply(5);
        let h = modk_regular_nondiv2k(&g, 2, Hypotheses::Verify).unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d % 4 == 2));
        assert!(matches!(
            modk_regular_nondiv2k(&complete_bipartite(3, 4).multiply(9), 1, Hypotheses::Verify),
            Err(Error::Precondition(_))
        ));
        let g = complete_bipartite(4, 4).multiply(2);
        let h = modk_regular_nondiv2k(&g, 1, Hypotheses::Verify).unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d % 2 == 1));
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<usize> = (1..20).filter(|&q| is_prime_power(q)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
        assert_eq!(prime_power_at_least(6), 7);
        assert_eq!(prime_power_at_least(1), 2);
    }

    #[test]
    fn subgraph_search_examples() {
        let h = mod_q_regular_subgraph(&cycle(5), 2, DEFAULT_SEARCH_NODES).unwrap().unwrap();
        assert_eq!(h.len(), 5);
        assert!(mod_q_regular_subgraph(&path(6), 2, DEFAULT_SEARCH_NODES).unwrap().is_none());
        let t = cycle(3).multiply(3);
        assert!(afk_guaranteed(&t, 3));
        let h = mod_q_regular_subgraph(&t, 3, DEFAULT_SEARCH_NODES).unwrap().unwrap();
        assert!(check_modk_regular_subgraph(&t, &h, 3).is_ok());
        // doubled triangle: degree 3 everywhere would need 4.5 edges, and a
        // single vertex of degree 3 needs three parallel edges
        assert!(mod_q_regular_subgraph(&cycle(3).multiply(2), 3, DEFAULT_SEARCH_NODES).unwrap().is_none());
        assert!(mod_q_regular_subgraph(&cycle(3), 6, 10).is_err());
    }

    #[test]
    fn konig_examples() {
        let g = complete_bipartite(3, 3);
        let one = IntFunc::constant(6, 1);
        let h = konig_scale(&g, &Factor::full(&g), &one, 3, 1).unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d == 1));
        let h = konig_scale(&g, &Factor::full(&g), &one, 3, 2).unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d == 2));
        let g = complete_bipartite(2, 2).multiply(2);
        let h = konig_scale(&g, &Factor::full(&g), &IntFunc::constant(4, 1), 4, 3).unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d == 3));
        // f = 2 splits each vertex of a 4-regular graph into two clones
        let h = konig_scale(&g, &Factor::full(&g), &IntFunc::constant(4, 2), 2, 1).unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d == 2));
    }

    #[test]
    fn subgraph_pipeline() {
        let g = complete(6).multiply(2);
        // 30 edges > (2q-2)(n-1) = 10 for k = 2
        let (h, q) = bipartite_modk_regular_subgraph(&g, 2, DEFAULT_SEARCH_NODES).unwrap();
        assert_eq!(q, 2);
        assert!(check_bipartite(&g, &h).is_ok());
        let (h, q) = bipartite_modk_regular_subgraph(&complete(6).multiply(3), 3, DEFAULT_SEARCH_NODES).unwrap();
        assert_eq!(q, 3);
        assert!(check_modk_regular_subgraph(&complete(6).multiply(3), &h, 3).is_ok());
        assert!(matches!(
            bipartite_modk_regular_subgraph(&complete(4), 3, DEFAULT_SEARCH_NODES),
            Err(Error::Hypothesis(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn peel_covers_regular_bipartite(q in 1usize..6, half in 1usize..8, seed in any::<u64>()) {
            // union of q random perfect matchings between two sides
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut g = Multigraph::new(2 * half);
            for _ in 0..q {
                let mut perm: Vec<usize> = (0..half).collect();
                perm.shuffle(&mut rng);
                for (i, &j) in perm.iter().enumerate() {
                    g.add_edge(i, half + j).unwrap();
                }
            }
            let ms = peel_perfect_matchings(&g, q).unwrap();
            prop_assert_eq!(ms.len(), q);
            let mut seen = vec![false; g.edge_count()];
            for m in &ms {
                prop_assert!(m.degrees(&g).iter().all(|&d| d == 1));
                for e in m.edge_ids() {
                    prop_assert!(!seen[e]);
                    seen[e] = true;
                }
            }
        }
    }
}
