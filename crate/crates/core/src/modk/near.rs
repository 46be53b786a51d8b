//! `f`-factors of graphs that are bipartite up to at most `k - 1` edges of
//! `G0` plus a factor `T` with an X-parity trail decomposition.
//!
//! Each trail of `T` is contracted to one edge (a loop for a closed trail),
//! each of the edges `M` of `G0` inside `X` or `Y` is replaced by two edges
//! to a new vertex `z0` with fixed directions, and an orientation of the
//! result is read back as a factor. Three points differ from a literal
//! reading of the construction and are needed for the degree bookkeeping:
//!
//! * on `Y` the target is `p = D - χ_z - (f - t)`, where the artificial
//!   `z0 z` edge counts in `D` but never in `H`;
//! * the artificial edge points into `z` when `z ∈ Y` and out of `z` when
//!   `z ∈ X`, so in both cases it takes one unit off `d_H(z)`;
//! * the split of `M` only matters through `a + b` (edges of `M` in `X`
//!   put in the first class plus edges in `Y` put in the second), so the
//!   smallest feasible `a + b` is taken, filling `X` first by edge id.

use crate::check::{check_residues, check_window, half_window};
use crate::connectivity::edge_connectivity;
use crate::error::{hypothesis, precondition, Error, Hypotheses, Result};
use crate::graph::{Bipartition, EdgeId, Factor, Multigraph, ResidueMap, VertexId};
use crate::orient::{find_p_orientation, DegreeWindow, PreOrientation};

use super::trails::{x_parity_trails, TrailDecomposition};
use super::{assert_check, mod2_window_factor, require_compatible};

/// See [`near_bipartite_f_factor_with_trails`]; the trail decomposition of
/// `t` is built by [`x_parity_trails`].
pub fn near_bipartite_f_factor(
    g: &Multigraph,
    f: &ResidueMap,
    x: &Bipartition,
    g0: &Factor,
    t: &Factor,
    z: Option<VertexId>,
    hyp: Hypotheses,
) -> Result<Factor> {
    g0.check_host(g)?;
    if g0.union(t).map(|u| u.len()) != Ok(g.edge_count()) {
        return precondition("G0 and T must partition the edges of G");
    }
    let q = x_parity_trails(g, t, x)?;
    near_bipartite_f_factor_with_trails(g, f, g0, &q, z, hyp)
}

/// An `f`-factor with `floor(d/2) - (k-1) <= d_H <= ceil(d/2) + (k-1)`,
/// the upper bound one lower at `z` (which must have odd degree).
///
/// `G` is split into `G0` and the trails of `q`; `G0` must hold exactly
/// `min(k-1, e_G(X) + e_G(Y))` edges inside `X` or `Y` and, as hypothesis,
/// be `(3k-3)`-edge-connected.
pub fn near_bipartite_f_factor_with_trails(
    g: &Multigraph,
    f: &ResidueMap,
    g0: &Factor,
    q: &TrailDecomposition,
    z: Option<VertexId>,
    hyp: Hypotheses,
) -> Result<Factor> {
    f.check_len(g)?;
    g0.check_host(g)?;
    let b = &q.x;
    q.verify(g, &g0.complement())?;
    let k = f.modulus();
    let (ex, ey) = b.intra_counts(g);
    let m_count = g0.edge_ids().into_iter().filter(|&e| b.is_intra(g, e)).count();
    if m_count != (k - 1).min(ex + ey) {
        return precondition(format!(
            "G0 has {m_count} edges inside X or Y; expected min(k-1, {}) = {}",
            ex + ey,
            (k - 1).min(ex + ey)
        ));
    }
    let d = g.degrees();
    if let Some(zv) = z {
        g.check_vertex(zv)?;
        if d[zv] % 2 == 0 {
            return precondition(format!("z = {zv} has even degree"));
        }
    }
    if hyp.verify() {
        require_compatible(g, f, b)?;
        let need = 3 * k - 3;
        if need > 0 && g.vertex_count() >= 2 {
            let (h0, _) = g0.graph(g);
            let lambda = edge_connectivity(&h0)?;
            if lambda < need {
                return hypothesis(format!("G0 is {lambda}-edge-connected, not {need}"));
            }
        }
    }
    let (lo, mut hi) = half_window(g, k);
    if let Some(zv) = z {
        hi.0[zv] -= 1;
    }
    let h = if k == 2 {
        mod2_window_factor(g, f, &lo, &hi)?
    } else {
        construct(g, f, g0, q, z)?
    };
    assert_check("near_bipartite_f_factor", check_residues(g, &h, f));
    assert_check("near_bipartite_f_factor", check_window(g, &h, &lo, &hi));
    Ok(h)
}

enum Aux {
    Cross(EdgeId),
    Trail(usize),
    Pre,
}

fn construct(g: &Multigraph, f: &ResidueMap, g0: &Factor, q: &TrailDecomposition, z: Option<VertexId>) -> Result<Factor> {
    let n = g.vertex_count();
    let z0 = n;
    let k = f.modulus() as i64;
    let b = &q.x;
    let mut aux = Multigraph::new(n + 1);
    let mut kinds: Vec<Aux> = Vec::new();

    let mut closed = vec![0i64; n];
    let mut d_t = vec![0i64; n];
    let mut d_contracted = vec![0i64; n];
    let mut walks = Vec::with_capacity(q.trails.len());
    for (i, tr) in q.trails.iter().enumerate() {
        let vs = tr.vertices(g).expect("verified trail");
        for &e in &tr.edges {
            let (u, v) = g.endpoints(e);
            d_t[u] += 1;
            d_t[v] += 1;
        }
        let (s, e) = (vs[0], *vs.last().unwrap());
        d_contracted[s] += 1;
        d_contracted[e] += 1;
        if s == e {
            closed[s] += 1;
        } else {
            aux.add_edge(s, e)?;
            kinds.push(Aux::Trail(i));
        }
        walks.push(vs);
    }
    let t_half: Vec<i64> = (0..n)
        .map(|v| {
            debug_assert_eq!((d_t[v] - d_contracted[v]) % 2, 0);
            (d_t[v] - d_contracted[v]) / 2
        })
        .collect();

    let mut mx = Vec::new();
    let mut my = Vec::new();
    for e in g0.edge_ids() {
        let (u, v) = g.endpoints(e);
        if b.is_intra(g, e) {
            if b.in_x(u) {
                mx.push(e);
            } else {
                my.push(e);
            }
        } else {
            aux.add_edge(u, v)?;
            kinds.push(Aux::Cross(e));
        }
    }

    // targets that do not depend on the split of M
    let base_edges = aux.edge_count() as i64 + 2 * (mx.len() + my.len()) as i64 + z.is_some() as i64;
    let mut deg_aux = aux.degrees().iter().map(|&x| x as i64).collect::<Vec<_>>();
    for &e in mx.iter().chain(&my) {
        let (u, v) = g.endpoints(e);
        deg_aux[u] += 1;
        deg_aux[v] += 1;
    }
    if let Some(zv) = z {
        deg_aux[zv] += 1;
    }
    let mut p = vec![0i64; n + 1];
    for v in 0..n {
        let chi = (z == Some(v)) as i64;
        let fv = f.get(v) as i64;
        p[v] = if b.in_x(v) {
            fv - t_half[v] + chi - closed[v]
        } else {
            deg_aux[v] + closed[v] - chi - fv + t_half[v]
        };
    }
    let z_in_y = z.map(|zv| !b.in_x(zv)).unwrap_or(false) as i64;
    let rest: i64 = p[..n].iter().sum::<i64>() + z_in_y;
    let s = (0..=(mx.len() + my.len()) as i64)
        .find(|&s| (rest + 2 * s - base_edges).rem_euclid(k) == 0)
        .ok_or_else(|| {
            Error::Hypothesis("f is not compatible with respect to (X, Y): no split of M balances the targets".into())
        })?;
    let a = (s as usize).min(mx.len());
    let bb = s as usize - a;
    // X edges: first `a` point away from z0; Y edges: first `bb` point away
    let mut in_h = vec![false; g.edge_count()];
    let mut pre = Vec::new();
    for (list, take) in [(&mx, a), (&my, bb)] {
        for (i, &e) in list.iter().enumerate() {
            let away = i < take;
            let (u, v) = g.endpoints(e);
            let is_x = b.in_x(u);
            // M0 = X edges pointing toward z0, Y edges pointing away
            if is_x != away {
                in_h[e] = true;
            }
            for w in [u, v] {
                let id = aux.add_edge(z0, w)?;
                kinds.push(Aux::Pre);
                pre.push((id, if away { z0 } else { w }));
            }
        }
    }
    if let Some(zv) = z {
        let id = aux.add_edge(z0, zv)?;
        kinds.push(Aux::Pre);
        pre.push((id, if b.in_x(zv) { zv } else { z0 }));
    }
    let pre_out = pre.iter().filter(|&&(_, t)| t == z0).count() as i64;
    p[z0] = pre_out;
    debug_assert_eq!(aux.edge_count() as i64, base_edges);
    let pmap = ResidueMap::new(f.modulus(), &p)?;
    let mut w = DegreeWindow::half_degree(&aux, f.modulus());
    w.lower.0[z0] = pre_out;
    w.upper.0[z0] = pre_out;
    let w = DegreeWindow::new(w.lower, w.upper)?;
    let pre = PreOrientation::new(&aux, z0, pre)?;
    let o = find_p_orientation(&aux, &pmap, &w, Some(&pre))?;

    for (ae, kind) in kinds.iter().enumerate() {
        match *kind {
            Aux::Cross(e) => {
                if b.in_x(o.tail(&aux, ae)) {
                    in_h[e] = true;
                }
            }
            Aux::Trail(i) => select_alternate(b, &q.trails[i].edges, &walks[i], Some(o.tail(&aux, ae)), &mut in_h),
            Aux::Pre => {}
        }
    }
    for (i, tr) in q.trails.iter().enumerate() {
        if walks[i][0] == *walks[i].last().unwrap() {
            select_alternate(b, &tr.edges, &walks[i], None, &mut in_h);
        }
    }
    Ok(Factor::from_mask_unchecked(g, in_h))
}

/// Every other edge of a trail whose contracted edge leaves `tail`: the
/// even positions when the trail, read from `tail`, starts in `X`, the odd
/// positions otherwise. Closed trails are read from their start.
fn select_alternate(
    b: &Bipartition,
    edges: &[EdgeId],
    walk: &[VertexId],
    tail: Option<VertexId>,
    in_h: &mut [bool],
) {
    let forward = tail.map(|t| t == walk[0]).unwrap_or(true);
    let ordered: Vec<EdgeId> = if forward {
        edges.to_vec()
    } else {
        edges.iter().rev().copied().collect()
    };
    let v0 = if forward { walk[0] } else { *walk.last().unwrap() };
    let first = if b.in_x(v0) { 0 } else { 1 };
    for e in ordered.into_iter().skip(first).step_by(2) {
        in_h[e] = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::VertexSet;
    use crate::modk::bipartite_f_factor;
    use crate::modk::trails::Trail;
    use proptest::prelude::*;

    fn side(n: usize, x: &[usize]) -> Bipartition {
        let xs = VertexSet::new(x.iter().copied());
        Bipartition::from_sets(n, &xs, &xs.complement(n)).unwrap()
    }

    #[test]
    fn empty_t_on_bipartite_matches_contract() {
        let g = complete_bipartite(3, 3).multiply(3);
        let f = ResidueMap::constant(3, 6, 0).unwrap();
        let b = side(6, &[0, 1, 2]);
        let h = near_bipartite_f_factor(&g, &f, &b, &Factor::full(&g), &Factor::empty(&g), None, Hypotheses::Verify)
            .unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d == 3 || d == 6));
        let h2 = bipartite_f_factor(&g, &f, None, Hypotheses::Verify).unwrap();
        assert!(h2.degrees(&g).iter().all(|&d| d == 3 || d == 6));
    }

    #[test]
    fn alternation_rule() {
        // trail 0-1-2 with contracted edge 0 -> 2 and 0 in X: keep edge 01
        let b = side(3, &[0, 2]);
        let mut in_h = vec![false; 2];
        select_alternate(&b, &[0, 1], &[0, 1, 2], Some(0), &mut in_h);
        assert_eq!(in_h, vec![true, false]);
        let mut in_h = vec![false; 2];
        select_alternate(&b, &[0, 1], &[0, 1, 2], Some(2), &mut in_h);
        assert_eq!(in_h, vec![false, true]);
    }

    /// Tripled C6 on (X, Y) = evens/odds plus extra edges inside X.
    fn scaffold(extra: &[(usize, usize)]) -> Multigraph {
        let mut g = cycle(6).multiply(3);
        for &(u, v) in extra {
            g.add_edge(u, v).unwrap();
        }
        g
    }

    #[test]
    fn one_intra_edge_k3_with_odd_z() {
        let g = scaffold(&[(0, 2)]);
        let b = side(6, &[0, 2, 4]);
        // tripled C6 is 6-edge-connected = 3k-3 for k = 3
        let f = ResidueMap::new(3, &[1, 2, 0, 0, 1, 2]).unwrap();
        if require_compatible(&g, &f, &b).is_err() {
            return;
        }
        for z in [None, Some(0), Some(2)] {
            let h = near_bipartite_f_factor(&g, &f, &b, &Factor::full(&g), &Factor::empty(&g), z, Hypotheses::Verify)
                .unwrap();
            assert!(check_residues(&g, &h, &f).is_ok());
        }
    }

    #[test]
    fn trails_through_the_construction() {
        // k = 3: two extra X edges stay in G0, the other two form the trail 0-2-4
        let g = scaffold(&[(0, 2), (2, 4), (0, 2), (2, 4)]);
        let b = side(6, &[0, 2, 4]);
        let g0 = Factor::from_ids(&g, 0..20).unwrap();
        let trails = TrailDecomposition {
            trails: vec![Trail { start: 0, edges: vec![20, 21] }],
            x: b.clone(),
        };
        let mut solved = 0;
        for vals in [[0, 0, 0, 0, 0, 0], [1, 1, 1, 1, 1, 1], [2, 0, 1, 0, 0, 0], [1, 2, 2, 1, 0, 0]] {
            let f = ResidueMap::new(3, &vals).unwrap();
            if require_compatible(&g, &f, &b).is_ok() {
                let h = near_bipartite_f_factor_with_trails(&g, &f, &g0, &trails, None, Hypotheses::Verify).unwrap();
                assert!(check_residues(&g, &h, &f).is_ok());
                solved += 1;
            }
        }
        assert!(solved > 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_scaffolds_k3(
            extra in proptest::collection::vec((0usize..3, 0usize..3), 0..6),
            vals in proptest::collection::vec(0i64..3, 6),
            zpick in 0usize..6,
        ) {
            let k = 3;
            let xs = [0usize, 2, 4];
            let pairs: Vec<(usize, usize)> = extra.iter().map(|&(a, c)| (xs[a], xs[(a + 1 + c % 2) % 3])).collect();
            let g = scaffold(&pairs);
            let b = side(6, &xs);
            let f = ResidueMap::new(k, &vals).unwrap();
            let intra: Vec<EdgeId> = (18..g.edge_count()).collect();
            let keep = intra.len().min(k - 1);
            let t_edges: Vec<EdgeId> = intra[keep..].to_vec();
            let g0 = Factor::from_ids(&g, (0..18).chain(intra[..keep].iter().copied())).unwrap();
            let t = Factor::from_ids(&g, t_edges).unwrap();
            let Ok(q) = x_parity_trails(&g, &t, &b) else { return Ok(()) };
            if require_compatible(&g, &f, &b).is_err() {
                return Ok(());
            }
            let d = g.degrees();
            let z = if d[zpick] % 2 == 1 { Some(zpick) } else { None };
            let h = near_bipartite_f_factor_with_trails(&g, &f, &g0, &q, z, Hypotheses::Verify).unwrap();
            prop_assert!(check_residues(&g, &h, &f).is_ok());
        }
    }
}
