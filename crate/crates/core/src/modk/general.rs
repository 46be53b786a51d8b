use crate::check::{check_residues, check_window};
use crate::connectivity::edge_connectivity;
use crate::error::{hypothesis, precondition, Hypotheses, Result};
use crate::extract::max_bipartite_factor;
use crate::graph::{Bipartition, EdgeId, Factor, IntFunc, Multigraph, ResidueMap};
use crate::maxcut::{CutMode, EXACT_MAX_VERTICES};
use crate::parity::mod2_bounded_factor;

use super::near::near_bipartite_f_factor_with_trails;
use super::trails::{Trail, TrailDecomposition};
use super::{assert_check, lift, require_compatible};

/// `G = G0 ⊎ T ⊎ M` for a bipartition `(X, Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedySplit {
    pub bipartition: Bipartition,
    /// All cross edges plus the first `min(k-1, intra)` intra edges by id.
    pub g0: Factor,
    /// Two-edge trails inside `X` or inside `Y`.
    pub t: TrailDecomposition,
    /// The intra edges left over; always a matching.
    pub m: Factor,
}

/// Split off `G0`, then pair up the remaining intra edges into two-edge
/// trails vertex by vertex. At most one edge stays unpaired at each vertex
/// once it has been visited, so the leftover is a matching.
pub fn greedy_trails(g: &Multigraph, b: &Bipartition, k: usize) -> Result<GreedySplit> {
    if !g.is_loopless() {
        return precondition("graph has loops");
    }
    if b.vertex_count() != g.vertex_count() {
        return precondition("bipartition covers a different vertex count");
    }
    let intra: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| b.is_intra(g, e)).collect();
    let keep = k.saturating_sub(1).min(intra.len());
    let mut in_g0 = vec![false; g.edge_count()];
    for e in 0..g.edge_count() {
        in_g0[e] = !b.is_intra(g, e);
    }
    for &e in &intra[..keep] {
        in_g0[e] = true;
    }
    let mut free = vec![false; g.edge_count()];
    for &e in &intra[keep..] {
        free[e] = true;
    }
    let inc = g.incidence();
    let mut trails = Vec::new();
    for v in 0..g.vertex_count() {
        let open: Vec<EdgeId> = inc[v].iter().copied().filter(|&e| free[e]).collect();
        for pair in open.chunks_exact(2) {
            let (e1, e2) = (pair[0], pair[1]);
            free[e1] = false;
            free[e2] = false;
            trails.push(Trail {
                start: g.other_end(e1, v),
                edges: vec![e1, e2],
            });
        }
    }
    let m = Factor::from_ids(g, (0..g.edge_count()).filter(|&e| free[e]))?;
    let dm = m.degrees(g);
    assert!(dm.iter().all(|&x| x <= 1), "internal error: greedy leftover is not a matching");
    let g0 = Factor::from_mask_unchecked(g, in_g0);
    let t = TrailDecomposition {
        trails,
        x: b.clone(),
    };
    let t_factor = g0.union(&m)?.complement();
    t.verify(g, &t_factor)?;
    Ok(GreedySplit {
        bipartition: b.clone(),
        g0,
        t,
        m,
    })
}

/// An `f`-factor with `floor(d/2) - (k-1) <= d_H <= floor(d/2) + k`.
///
/// The bipartition is a maximum cut (exact up to
/// [`EXACT_MAX_VERTICES`] vertices, local search above). As hypothesis its
/// bipartite part must be `(3k-3)`-edge-connected and `f` compatible with
/// respect to it. The graph must be loopless.
pub fn general_f_factor(g: &Multigraph, f: &ResidueMap, hyp: Hypotheses) -> Result<Factor> {
    f.check_len(g)?;
    if !g.is_loopless() {
        return precondition("graph has loops");
    }
    let k = f.modulus();
    let mode = if g.vertex_count() <= EXACT_MAX_VERTICES {
        CutMode::Exact
    } else {
        CutMode::Bound
    };
    let bf = max_bipartite_factor(g, mode)?;
    let b = &bf.bipartition;
    if hyp.verify() {
        let need = 3 * k - 3;
        if need > 0 && g.vertex_count() >= 2 {
            let (cross, _) = bf.factor.graph(g);
            let lambda = edge_connectivity(&cross)?;
            if lambda < need {
                return hypothesis(format!("G[X, Y] is {lambda}-edge-connected, not {need}"));
            }
        }
        require_compatible(g, f, b)?;
    }
    let d = g.degrees();
    let lo = IntFunc(d.iter().map(|&x| (x / 2) as i64 - (k as i64 - 1)).collect());
    let hi = IntFunc(d.iter().map(|&x| (x / 2) as i64 + k as i64).collect());

    let h = if k == 2 {
        mod2_bounded_factor(g, f, None, Hypotheses::Assume)?
    } else {
        let split = greedy_trails(g, b, k)?;
        let f2 = f.sub_degrees(&split.m.degrees(g));
        let rest = split.m.complement();
        let (sub, ids) = rest.graph(g);
        let mut to_sub = vec![usize::MAX; g.edge_count()];
        for (i, &e) in ids.iter().enumerate() {
            to_sub[e] = i;
        }
        let g0 = Factor::from_ids(&sub, split.g0.edge_ids().into_iter().map(|e| to_sub[e]))?;
        let q = TrailDecomposition {
            trails: split
                .t
                .trails
                .iter()
                .map(|tr| Trail {
                    start: tr.start,
                    edges: tr.edges.iter().map(|&e| to_sub[e]).collect(),
                })
                .collect(),
            x: b.clone(),
        };
        let fsub = near_bipartite_f_factor_with_trails(&sub, &f2, &g0, &q, None, Hypotheses::Assume)?;
        lift(g, &ids, &fsub).union(&split.m)?
    };
    assert_check("general_f_factor", check_residues(g, &h, f));
    assert_check("general_f_factor", check_window(g, &h, &lo, &hi));
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::VertexSet;
    use proptest::prelude::*;

    fn side(n: usize, x: &[usize]) -> Bipartition {
        let xs = VertexSet::new(x.iter().copied());
        Bipartition::from_sets(n, &xs, &xs.complement(n)).unwrap()
    }

    #[test]
    fn greedy_leaves_a_matching() {
        // all of K5 inside X: 10 intra edges, 2 kept for k = 3
        let g = complete(5);
        let b = side(5, &[0, 1, 2, 3, 4]);
        let s = greedy_trails(&g, &b, 3).unwrap();
        assert_eq!(s.g0.len(), 2);
        assert!(s.m.degrees(&g).iter().all(|&d| d <= 1));
        assert_eq!(s.g0.len() + 2 * s.t.trails.len() + s.m.len(), 10);
    }

    #[test]
    fn bipartite_input_keeps_everything_in_g0() {
        let g = complete_bipartite(3, 3).multiply(3);
        let f = ResidueMap::constant(3, 6, 0).unwrap();
        let h = general_f_factor(&g, &f, Hypotheses::Verify).unwrap();
        assert!(h.degrees(&g).iter().all(|&d| d == 3 || d == 6));
        let b = side(6, &[0, 1, 2]);
        let s = greedy_trails(&g, &b, 3).unwrap();
        assert_eq!(s.g0.len(), g.edge_count());
        assert!(s.t.trails.is_empty() && s.m.is_empty());
    }

    #[test]
    fn k2_on_non_bipartite() {
        let g = complete(6);
        let f = ResidueMap::constant(2, 6, 1).unwrap();
        let h = general_f_factor(&g, &f, Hypotheses::Verify).unwrap();
        let d = h.degrees(&g);
        assert!(d.iter().all(|&x| x % 2 == 1 && (1..=4).contains(&x)));
    }

    #[test]
    fn k3_on_multiplied_complete_graph() {
        // K5 x 3: max cut leaves 4 x 3 = 12 intra edges, cross part is
        // 6-edge-connected
        let g = complete(5).multiply(3);
        let mut solved = 0;
        for vals in [[0, 0, 0, 0, 0], [1, 1, 1, 1, 2], [2, 2, 2, 0, 0]] {
            let f = ResidueMap::new(3, &vals).unwrap();
            match general_f_factor(&g, &f, Hypotheses::Verify) {
                Ok(h) => {
                    assert!(check_residues(&g, &h, &f).is_ok());
                    solved += 1;
                }
                Err(crate::error::Error::Hypothesis(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(solved >= 2, "solved {solved}");
    }

    #[test]
    fn loops_are_rejected() {
        let g = Multigraph::from_edges(2, [(0, 1), (1, 1)]).unwrap();
        let f = ResidueMap::constant(3, 2, 0).unwrap();
        assert!(general_f_factor(&g, &f, Hypotheses::Assume).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn greedy_split_partitions_edges(edges in prop::collection::vec((0usize..7, 0usize..7), 1..40), mask in 0u64..128, k in 1usize..5) {
            let edges: Vec<_> = edges.into_iter().filter(|(u, v)| u != v).collect();
            let g = Multigraph::from_edges(7, edges).unwrap();
            let b = Bipartition::from_bits(mask, 7);
            let s = greedy_trails(&g, &b, k).unwrap();
            prop_assert!(s.m.degrees(&g).iter().all(|&d| d <= 1));
            let t_edges: usize = s.t.trails.iter().map(|t| t.len()).sum();
            prop_assert_eq!(s.g0.len() + t_edges + s.m.len(), g.edge_count());
        }
    }
}
