use crate::check::{check_residues, check_window, half_window};
use crate::connectivity::{
    edge_connectivity, essential_edge_connectivity, partition_connected_decompose, tree_pack,
    ESSENTIAL_MAX_VERTICES,
};
use crate::error::{hypothesis, precondition, Error, Hypotheses, Result};
use crate::graph::{residue_normalize, Bipartition, Factor, IntFunc, Multigraph, Orientation, ResidueMap, VertexId};
use crate::orient::{find_p_orientation, DegreeWindow};
use crate::parity::mod2_bounded_factor;

use super::{assert_check, bipartition_of, mod2_window_factor, require_compatible};

/// `p = f` on `X`, `p = d - f` on `Y`.
pub(crate) fn orientation_targets(g: &Multigraph, f: &ResidueMap, b: &Bipartition) -> ResidueMap {
    let d = g.degrees();
    let vals: Vec<i64> = (0..g.vertex_count())
        .map(|v| {
            if b.in_x(v) {
                f.get(v) as i64
            } else {
                d[v] as i64 - f.get(v) as i64
            }
        })
        .collect();
    ResidueMap::new(f.modulus(), &vals).expect("modulus already validated")
}

/// Edges directed from `X` to `Y`.
pub(crate) fn factor_from_orientation(g: &Multigraph, b: &Bipartition, o: &Orientation) -> Factor {
    let mask = (0..g.edge_count()).map(|e| b.in_x(o.tail(g, e))).collect();
    Factor::from_mask_unchecked(g, mask)
}

/// Out-degree window for `Y` given a factor-degree window: `d - hi ..= d - lo`.
fn orientation_window(g: &Multigraph, b: &Bipartition, lo: &IntFunc, hi: &IntFunc) -> Result<DegreeWindow> {
    let d = g.degrees();
    let n = g.vertex_count();
    let mut a = IntFunc(vec![0; n]);
    let mut c = IntFunc(vec![0; n]);
    for v in 0..n {
        if b.in_x(v) {
            a.0[v] = lo.get(v);
            c.0[v] = hi.get(v);
        } else {
            a.0[v] = d[v] as i64 - hi.get(v);
            c.0[v] = d[v] as i64 - lo.get(v);
        }
    }
    DegreeWindow::new(a, c)
}

/// `(3k-3)`-edge-connected, or essentially `(3k-3)`-edge-connected with
/// `d(v) >= 2k - 1 + [f(v)]_k` everywhere.
fn edge_hypothesis(g: &Multigraph, f: &ResidueMap) -> Result<()> {
    let k = f.modulus();
    let need = 3 * k - 3;
    let n = g.vertex_count();
    if need == 0 || n < 2 {
        return Ok(());
    }
    let lambda = edge_connectivity(g)?;
    if lambda >= need {
        return Ok(());
    }
    if (4..=ESSENTIAL_MAX_VERTICES).contains(&n) && essential_edge_connectivity(g)? >= need {
        let d = g.degrees();
        let low = (0..n).find(|&v| {
            let br = residue_normalize(f.get(v) as i64, k as i64).unwrap_or(0);
            (d[v] as i64) < 2 * k as i64 - 1 + br
        });
        return match low {
            None => Ok(()),
            Some(v) => hypothesis(format!(
                "graph is essentially {need}-edge-connected but d({v}) = {} < 2k - 1 + [f({v})]_k",
                d[v]
            )),
        };
    }
    hypothesis(format!(
        "graph is {lambda}-edge-connected, not {need}-edge-connected (nor essentially so with the degree condition)"
    ))
}

/// An `f`-factor of a bipartite graph with
/// `floor(d/2) - (k-1) <= d_H <= ceil(d/2) + (k-1)`.
///
/// `z = Some((v, t))` pins `d_H(v) = t`; `t` must lie in the window and
/// match `f(v)`. For `k = 2` the exact parity engine is used; otherwise a
/// `p`-orientation with `p = f` on `X` and `p = d - f` on `Y` is found and
/// `H` is the set of edges directed from `X` to `Y`.
pub fn bipartite_f_factor(
    g: &Multigraph,
    f: &ResidueMap,
    z: Option<(VertexId, i64)>,
    hyp: Hypotheses,
) -> Result<Factor> {
    f.check_len(g)?;
    let k = f.modulus();
    let b = bipartition_of(g)?;
    require_compatible(g, f, &b)?;
    if hyp.verify() {
        edge_hypothesis(g, f)?;
    }
    let (lo, hi) = half_window(g, k);
    let d = g.degrees();
    if let Some((zv, t)) = z {
        g.check_vertex(zv)?;
        let lo_z = lo.get(zv).max(0);
        let hi_z = hi.get(zv).min(d[zv] as i64);
        if t < lo_z || t > hi_z || !f.matches(zv, t) {
            return precondition(format!(
                "target {t} at vertex {zv} is not a degree in [{lo_z}, {hi_z}] congruent to f({zv}) = {}",
                f.get(zv)
            ));
        }
    }
    let h = if k == 2 {
        mod2_bounded_factor(g, f, z, Hypotheses::Assume)?
    } else {
        let p = orientation_targets(g, f, &b);
        let mut w = DegreeWindow::half_degree(g, k);
        if let Some((zv, t)) = z {
            w = w.pin(zv, if b.in_x(zv) { t } else { d[zv] as i64 - t })?;
        }
        let o = find_p_orientation(g, &p, &w, None)?;
        factor_from_orientation(g, &b, &o)
    };
    assert_check("bipartite_f_factor", check_residues(g, &h, f));
    assert_check("bipartite_f_factor", check_window(g, &h, &lo, &hi));
    if let Some((zv, t)) = z {
        assert_eq!(h.degrees(g)[zv] as i64, t, "internal error: pinned degree not met");
    }
    Ok(h)
}

/// An `f`-factor with `s <= d_H <= d - s0`, for a `(2k-2, l0)`-partition-
/// connected bipartite graph with `max(s, s0) <= l0 + (k-1)` off `z` and
/// `max(s, s0) <= l0` at `z`.
pub fn bipartite_f_factor_window(
    g: &Multigraph,
    f: &ResidueMap,
    s: &IntFunc,
    s0: &IntFunc,
    l0: &IntFunc,
    z: VertexId,
    hyp: Hypotheses,
) -> Result<Factor> {
    f.check_len(g)?;
    g.check_vertex(z)?;
    let n = g.vertex_count();
    if s.len() != n || s0.len() != n || l0.len() != n {
        return precondition("s, s0 and l0 must have one value per vertex");
    }
    let k = f.modulus() as i64;
    let d = g.degrees();
    if let Some(v) = (0..n).find(|&v| s.get(v) + s0.get(v) + k - 1 > d[v] as i64) {
        return precondition(format!("s({v}) + s0({v}) + k - 1 > d({v}) = {}", d[v]));
    }
    let b = bipartition_of(g)?;
    require_compatible(g, f, &b)?;
    if hyp.verify() {
        for v in 0..n {
            let slack = if v == z { 0 } else { k - 1 };
            if s.get(v).max(s0.get(v)) > l0.get(v) + slack {
                return hypothesis(format!("max(s({v}), s0({v})) exceeds l0({v}) + {slack}"));
            }
        }
        let m = (2 * k - 2) as usize;
        match partition_connected_decompose(g, m, l0) {
            Ok(_) => {}
            Err(Error::Infeasible(msg)) | Err(Error::SolverGaveUp(msg)) => {
                return hypothesis(format!("graph is not ({m}, l0)-partition-connected: {msg}"))
            }
            Err(e) => return Err(e),
        }
    }
    let lo = s.clone();
    let hi = IntFunc((0..n).map(|v| d[v] as i64 - s0.get(v)).collect());
    let h = if k == 2 {
        mod2_window_factor(g, f, &lo, &hi)?
    } else {
        let w = orientation_window(g, &b, &lo, &hi)?;
        let o = find_p_orientation(g, &orientation_targets(g, f, &b), &w, None)?;
        factor_from_orientation(g, &b, &o)
    };
    assert_check("bipartite_f_factor_window", check_residues(g, &h, f));
    assert_check("bipartite_f_factor_window", check_window(g, &h, &lo, &hi));
    Ok(h)
}

/// An `f`-factor of a `(2k-2)`-tree-connected bipartite graph, `k >= 3`,
/// with `c <= d_H <= d - c` for `c = ceil(k/2 - 1) = floor((k-1)/2)`.
pub fn bipartite_f_factor_tree(g: &Multigraph, f: &ResidueMap, hyp: Hypotheses) -> Result<Factor> {
    f.check_len(g)?;
    let k = f.modulus();
    if k < 3 {
        return precondition("the tree-connected bound needs k >= 3");
    }
    if g.vertex_count() < 2 || g.edge_count() == 0 {
        return precondition("graph is trivial");
    }
    let b = bipartition_of(g)?;
    require_compatible(g, f, &b)?;
    if hyp.verify() && !tree_pack(g, 2 * k - 2).is_packed() {
        return hypothesis(format!("graph is not {}-tree-connected", 2 * k - 2));
    }
    let c = ((k - 1) / 2) as i64;
    let n = g.vertex_count();
    let d = g.degrees();
    let lo = IntFunc::constant(n, c);
    let hi = IntFunc(d.iter().map(|&x| x as i64 - c).collect());
    let w = DegreeWindow::new(lo.clone(), hi.clone())?;
    let o = find_p_orientation(g, &orientation_targets(g, f, &b), &w, None)?;
    let h = factor_from_orientation(g, &b, &o);
    assert_check("bipartite_f_factor_tree", check_residues(g, &h, f));
    assert_check("bipartite_f_factor_tree", check_window(g, &h, &lo, &hi));
    Ok(h)
}
