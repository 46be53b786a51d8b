use serde::{Deserialize, Serialize};

use crate::check::{check_residues, check_window};
use crate::connectivity::tree_pack;
use crate::error::{hypothesis, precondition, Error, Hypotheses, Result};
use crate::extract::{eulerian_plus_bipartite_decompose, max_bipartite_factor};
use crate::graph::{Factor, IntFunc, Multigraph, ResidueMap, VertexId};
use crate::maxcut::{CutMode, EXACT_MAX_VERTICES};
use crate::orient::euler_circuits;

use super::near::near_bipartite_f_factor_with_trails;
use super::trails::TrailDecomposition;
use super::{assert_check, lift, require_compatible};

/// Alternate edges along a closed Euler tour from `z`: `d_H = d/2` off `z`,
/// and `d_H(z) = d(z)/2 + 1` exactly when `|E|` is odd.
pub fn eulerian_half_factor(g: &Multigraph, z: VertexId) -> Result<Factor> {
    g.check_vertex(z)?;
    let d = g.degrees();
    if let Some(v) = d.iter().position(|x| x % 2 == 1) {
        return precondition(format!("vertex {v} has odd degree"));
    }
    let (comp, _) = g.components();
    if let Some(&(u, _)) = g.edges().iter().find(|&&(u, _)| comp[u] != comp[z]) {
        return precondition(format!("vertex {u} has edges but is not connected to z = {z}"));
    }
    let mut member = vec![false; g.edge_count()];
    if let Some(tour) = euler_circuits(g, Some(z)).into_iter().next() {
        for (i, &(e, _, _)) in tour.iter().enumerate() {
            member[e] = i % 2 == 0;
        }
    }
    let h = Factor::from_mask_unchecked(g, member);
    let odd = (g.edge_count() % 2) as i64;
    let mut exact = IntFunc(d.iter().map(|&x| x as i64 / 2).collect());
    exact.0[z] += odd;
    assert_check("eulerian_half_factor", check_window(g, &h, &exact, &exact));
    Ok(h)
}

/// Even degrees, odd size, odd `k` and `f ≡ d/2` everywhere: the one case
/// where the bound at `z` cannot drop to `ceil(d/2) + (k-1)`.
pub fn is_high_tree_exceptional(g: &Multigraph, f: &ResidueMap) -> bool {
    let k = f.modulus();
    f.len() == g.vertex_count()
        && g.is_even()
        && g.edge_count() % 2 == 1
        && k % 2 == 1
        && g.degrees().iter().enumerate().all(|(v, &x)| f.matches(v, x as i64 / 2))
}

/// Which construction [`high_tree_f_factor`] takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HighTreeRoute {
    /// A maximum cut leaves at most `k - 1` intra edges.
    NearBipartite,
    /// Split off an even factor and halve it along an Euler tour.
    EulerianSplit,
}

fn cut_mode(g: &Multigraph) -> CutMode {
    if g.vertex_count() <= EXACT_MAX_VERTICES {
        CutMode::Exact
    } else {
        CutMode::Bound
    }
}

pub fn high_tree_route(g: &Multigraph, k: usize) -> Result<HighTreeRoute> {
    let bf = max_bipartite_factor(g, cut_mode(g))?;
    Ok(if bf.intra < k {
        HighTreeRoute::NearBipartite
    } else {
        HighTreeRoute::EulerianSplit
    })
}

/// Window of [`high_tree_f_factor`]: `floor(d/2) - (k-1)` below,
/// `ceil(d/2) + (k-1)` above, except `floor(d(z)/2) + k` at `z`.
pub fn high_tree_window(g: &Multigraph, k: usize, z: VertexId) -> (IntFunc, IntFunc) {
    let k = k as i64;
    let d = g.degrees();
    let lo = IntFunc(d.iter().map(|&x| x as i64 / 2 - (k - 1)).collect());
    let mut hi = IntFunc(d.iter().map(|&x| (x as i64 + 1) / 2 + (k - 1)).collect());
    hi.0[z] = d[z] as i64 / 2 + k;
    (lo, hi)
}

/// An `f`-factor in [`high_tree_window`] for a `(6k-2)`-tree-connected
/// loopless graph and `k >= 1`.
pub fn high_tree_f_factor(g: &Multigraph, f: &ResidueMap, z: VertexId, hyp: Hypotheses) -> Result<Factor> {
    f.check_len(g)?;
    g.check_vertex(z)?;
    if !g.is_loopless() {
        return precondition("graph has loops");
    }
    let k = f.modulus();
    if hyp.verify() {
        let m = 6 * k - 2;
        if !tree_pack(g, m).is_packed() {
            return hypothesis(format!("graph is not {m}-tree-connected"));
        }
        if ((k - 1) * f.total()) % 2 == 1 {
            return hypothesis("(k-1) times the sum of f is odd, so f is not compatible");
        }
    }
    let d = g.degrees();
    let bf = max_bipartite_factor(g, cut_mode(g))?;
    let h = if bf.intra < k {
        let b = &bf.bipartition;
        if hyp.verify() {
            require_compatible(g, f, b)?;
        }
        let q = TrailDecomposition {
            trails: Vec::new(),
            x: b.clone(),
        };
        let zz = (d[z] % 2 == 1).then_some(z);
        near_bipartite_f_factor_with_trails(g, f, &Factor::full(g), &q, zz, Hypotheses::Assume)?
    } else {
        let split = eulerian_plus_bipartite_decompose(g, 3 * k - 3, k - 1, Hypotheses::Assume)?;
        let (g1, ids1) = split.g1.graph(g);
        let f1 = if g1.edge_count() == 0 {
            Factor::empty(g)
        } else {
            lift(g, &ids1, &eulerian_half_factor(&g1, z)?)
        };
        let f2 = f.sub_degrees(&f1.degrees(g));
        let (g2, ids2) = split.g2.graph(g);
        let q = TrailDecomposition {
            trails: Vec::new(),
            x: split.bipartition.clone(),
        };
        let zz = (g2.degrees()[z] % 2 == 1).then_some(z);
        let h2 = near_bipartite_f_factor_with_trails(&g2, &f2, &Factor::full(&g2), &q, zz, Hypotheses::Assume)?;
        f1.union(&lift(g, &ids2, &h2))?
    };
    let (lo, hi) = high_tree_window(g, k, z);
    assert_check("high_tree_f_factor", check_residues(g, &h, f));
    assert_check("high_tree_f_factor", check_window(g, &h, &lo, &hi));
    Ok(h)
}

/// The sharp form: `floor(d/2) - (k-1) <= d_H <= ceil(d/2) + (k-1)`
/// everywhere, except in the exceptional case where one vertex `z` gets
/// the lower bound `ceil(d(z)/2) - k` instead. Returns the factor and that
/// vertex, if any.
///
/// Outside the exceptional case `z` is chosen so that the looser bound of
/// [`high_tree_f_factor`] is never reached: an odd-degree vertex, else a
/// vertex with `f ≢ d/2`. When `f ≡ d/2` everywhere and `|E|` is even the
/// Euler tour gives `d/2` exactly.
pub fn high_tree_sharp_f_factor(g: &Multigraph, f: &ResidueMap, hyp: Hypotheses) -> Result<(Factor, Option<VertexId>)> {
    f.check_len(g)?;
    if g.vertex_count() == 0 {
        return precondition("graph has no vertices");
    }
    let k = f.modulus();
    let d = g.degrees();
    let (lo, hi) = crate::check::half_window(g, k);
    let (h, special) = if is_high_tree_exceptional(g, f) {
        // complement of a factor for d - f, whose loose upper bound at z
        // becomes the looser lower bound here
        let z = 0;
        let fc = ResidueMap::new(k, &d.iter().enumerate().map(|(v, &x)| x as i64 - f.get(v) as i64).collect::<Vec<_>>())?;
        (high_tree_f_factor(g, &fc, z, hyp)?.complement(), Some(z))
    } else if let Some(z) = d.iter().position(|x| x % 2 == 1) {
        (high_tree_f_factor(g, f, z, hyp)?, None)
    } else if let Some(z) = (0..g.vertex_count()).find(|&v| !f.matches(v, d[v] as i64 / 2)) {
        (high_tree_f_factor(g, f, z, hyp)?, None)
    } else if g.edge_count() % 2 == 0 {
        if hyp.verify() && !tree_pack(g, 6 * k - 2).is_packed() {
            return hypothesis(format!("graph is not {}-tree-connected", 6 * k - 2));
        }
        (eulerian_half_factor(g, 0)?, None)
    } else {
        return Err(Error::Hypothesis(
            "f ≡ d/2 on an even graph of odd size with k even: (k-1) times the sum of f is odd".into(),
        ));
    };
    let mut lo = lo;
    if let Some(z) = special {
        lo.0[z] = (d[z] as i64 + 1) / 2 - k as i64;
    }
    assert_check("high_tree_sharp_f_factor", check_residues(g, &h, f));
    assert_check("high_tree_sharp_f_factor", check_window(g, &h, &lo, &hi));
    Ok((h, special))
}
