//! Factors modulo `k` with degrees close to `d/2`.
//!
//! Every engine here reads a factor off an orientation. For a bipartite
//! graph on `(X, Y)`, taking the edges directed from `X` to `Y` turns
//! out-degrees on `X` and in-degrees on `Y` into factor degrees, so a
//! `p`-orientation with `p = f` on `X` and `p = d - f` on `Y` is an
//! `f`-factor. The non-bipartite engines reduce to that picture by
//! contracting trails and routing the few edges inside `X` or `Y` through
//! an auxiliary vertex.
//!
//! For `k = 2` the orientation theorems do not apply; those cases go to the
//! exact parity-factor engine with the same degree window.

mod bipartite;
mod derived;
mod general;
mod hightree;
mod near;
mod trails;

pub use bipartite::{bipartite_f_factor, bipartite_f_factor_tree, bipartite_f_factor_window};
pub use derived::{derived_half_factors, mod2_18_edge_eulerian, HalfVariant};
pub use general::{general_f_factor, greedy_trails, GreedySplit};
pub use hightree::{
    eulerian_half_factor, high_tree_f_factor, high_tree_route, high_tree_sharp_f_factor, high_tree_window,
    is_high_tree_exceptional, HighTreeRoute,
};
pub use near::{near_bipartite_f_factor, near_bipartite_f_factor_with_trails};
pub use trails::{x_parity_trails, Trail, TrailDecomposition};

use crate::compat::{compatible_wrt, Correction};
use crate::error::{hypothesis, precondition, Error, Result};
use crate::graph::{Bipartition, EdgeId, Factor, IntFunc, Multigraph, ResidueMap};
use crate::parity::parity_factor;

/// The two-colouring of a bipartite graph (vertex 0's class is `X`).
pub(crate) fn bipartition_of(g: &Multigraph) -> Result<Bipartition> {
    match g.two_coloring() {
        Some(c) => Ok(Bipartition::from_x_mask(c)),
        None => precondition("graph is not bipartite"),
    }
}

pub(crate) fn require_compatible(g: &Multigraph, f: &ResidueMap, b: &Bipartition) -> Result<Correction> {
    f.check_len(g)?;
    match compatible_wrt(g, f, b)? {
        Some(c) => Ok(c),
        None => hypothesis(format!(
            "f is not compatible with respect to the bipartition X = {:?}",
            b.x().as_slice()
        )),
    }
}

/// `d_H ≡ f (mod 2)` with `lo <= d_H <= hi`, by the exact parity engine.
/// Bounds are moved inward to the parity of `f` and clamped to `0..=d`.
pub(crate) fn mod2_window_factor(g: &Multigraph, f: &ResidueMap, lo: &IntFunc, hi: &IntFunc) -> Result<Factor> {
    if f.modulus() != 2 {
        return Err(Error::ModulusMismatch {
            expected: 2,
            got: f.modulus(),
        });
    }
    if f.total() % 2 != 0 {
        return Err(Error::Infeasible("the sum of f is odd, so no f-factor modulo 2 exists".into()));
    }
    let d = g.degrees();
    let n = g.vertex_count();
    let mut a = IntFunc(vec![0; n]);
    let mut b = IntFunc(vec![0; n]);
    for v in 0..n {
        let r = f.get(v) as i64;
        let mut l = lo.get(v).max(0);
        if (l - r).rem_euclid(2) != 0 {
            l += 1;
        }
        let mut h = hi.get(v).min(d[v] as i64);
        if (h - r).rem_euclid(2) != 0 {
            h -= 1;
        }
        if l > h {
            return Err(Error::Infeasible(format!(
                "no degree with the parity of f lies in [{}, {}] at vertex {v}",
                lo.get(v),
                hi.get(v)
            )));
        }
        a.0[v] = l;
        b.0[v] = h;
    }
    parity_factor(g, &a, &b)
}

/// Lift a factor of `sub` (whose edge `i` is host edge `ids[i]`) to the host.
pub(crate) fn lift(host: &Multigraph, ids: &[EdgeId], h: &Factor) -> Factor {
    let mut member = vec![false; host.edge_count()];
    for e in h.edge_ids() {
        member[ids[e]] = true;
    }
    Factor::from_mask_unchecked(host, member)
}

/// Panic with the failing clause: engines assert their own conclusions.
pub(crate) fn assert_check(what: &str, r: crate::check::Check) {
    if let Err(msg) = r {
        panic!("internal error: {what} output fails its contract: {msg}");
    }
}
