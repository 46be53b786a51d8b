//! Parity `(g, f)`-factors and the bounded modulo-2 factors built on them.
//!
//! # Gadget
//!
//! [`parity_factor`] reduces to perfect matching. Every edge end becomes a
//! stub, and the two stubs of an edge are joined (a loop joins two stubs at
//! the same vertex). A stub matched to its partner puts the edge in `H`.
//! At a vertex `v` of degree `d` with clamped bounds `g <= f` the gadget adds
//!
//! * `d - f` mandatory vertices joined to every stub at `v`, and
//! * `(f - g) / 2` optional pairs `(a, b)`, with `a`–`b` joined and both joined
//!   to every stub at `v`.
//!
//! Mandatory vertices consume exactly `d - f` stubs and each optional pair
//! consumes 0 or 2, so a perfect matching exists iff some `H` has
//! `d_H(v) ∈ {g, g + 2, ..., f}` at every vertex.

use serde::{Deserialize, Serialize};

use crate::connectivity::{edge_connectivity, partition_connected_decompose};
use crate::error::{hypothesis, precondition, Error, Hypotheses, Result};
use crate::graph::{components_of, Factor, IntFunc, Multigraph, ResidueMap, VertexId, VertexSet};
use crate::matching::max_matching;
use crate::par::{self, Exec};

/// Vertex limit for the `3^n` enumeration in [`lovasz_violation`].
pub const LOVASZ_MAX_VERTICES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LovaszReport {
    pub a: VertexSet,
    pub b: VertexSet,
    /// Minimum slack; negative refutes the sufficient condition.
    pub slack: i64,
}

fn check_bounds(g: &Multigraph, lo: &IntFunc, hi: &IntFunc) -> Result<()> {
    let n = g.vertex_count();
    if lo.len() != n || hi.len() != n {
        return precondition("bound functions must have one value per vertex");
    }
    for v in 0..n {
        if lo.get(v) > hi.get(v) {
            return precondition(format!("g({v}) > f({v})"));
        }
        if (hi.get(v) - lo.get(v)).rem_euclid(2) != 0 {
            return precondition(format!("g({v}) and f({v}) differ in parity"));
        }
    }
    if hi.sum().rem_euclid(2) != 0 {
        return precondition("the sum of f is odd");
    }
    Ok(())
}

/// Minimum over disjoint `(A, B)`, `A ∪ B ≠ ∅`, of
/// `1 + Σ_A f + Σ_B (d - g) - d(A, B) - ω(G - (A ∪ B))`.
pub fn lovasz_violation(g: &Multigraph, lo: &IntFunc, hi: &IntFunc) -> Result<LovaszReport> {
    lovasz_violation_with(g, lo, hi, Exec::default())
}

pub fn lovasz_violation_with(g: &Multigraph, lo: &IntFunc, hi: &IntFunc, exec: Exec) -> Result<LovaszReport> {
    check_bounds(g, lo, hi)?;
    let n = g.vertex_count();
    if !g.is_connected() {
        return precondition("graph must be connected");
    }
    if n > LOVASZ_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count for the Lovász enumeration",
            limit: LOVASZ_MAX_VERTICES,
            got: n,
        });
    }
    let d = g.degrees();
    let total = 3u64.pow(n as u32);
    let decode = |mut code: u64| {
        let mut side = vec![0u8; n];
        for s in side.iter_mut() {
            *s = (code % 3) as u8;
            code /= 3;
        }
        side
    };
    let slack_of = |side: &[u8]| -> i64 {
        let mut s = 1i64;
        for v in 0..n {
            match side[v] {
                1 => s += hi.get(v),
                2 => s += d[v] as i64 - lo.get(v),
                _ => {}
            }
        }
        let mut rest = Vec::new();
        for &(u, v) in g.edges() {
            match (side[u], side[v]) {
                (1, 2) | (2, 1) => s -= 1,
                (0, 0) => rest.push((u, v)),
                _ => {}
            }
        }
        let (label, _) = components_of(n, rest);
        let mut roots: Vec<usize> = (0..n).filter(|&v| side[v] == 0).map(|v| label[v]).collect();
        roots.sort_unstable();
        roots.dedup();
        s - roots.len() as i64
    };
    let (code, slack) = par::min_by_key(exec, total, |code| {
        (code != 0).then(|| slack_of(&decode(code)))
    })
    .expect("at least one nonempty pair");
    let side = decode(code);
    Ok(LovaszReport {
        a: VertexSet::new((0..n).filter(|&v| side[v] == 1)),
        b: VertexSet::new((0..n).filter(|&v| side[v] == 2)),
        slack,
    })
}

/// A factor `H` with `lo(v) <= d_H(v) <= hi(v)` and `d_H(v) ≡ hi(v) (mod 2)`.
pub fn parity_factor(g: &Multigraph, lo: &IntFunc, hi: &IntFunc) -> Result<Factor> {
    check_bounds(g, lo, hi)?;
    let n = g.vertex_count();
    let d = g.degrees();
    let mut gl = vec![0i64; n];
    let mut fl = vec![0i64; n];
    for v in 0..n {
        let dv = d[v] as i64;
        let mut f = hi.get(v);
        if f > dv {
            f -= 2 * ((f - dv + 1) / 2);
        }
        let mut gv = lo.get(v);
        if gv < 0 {
            gv += 2 * ((-gv + 1) / 2);
        }
        if gv > f {
            return Err(Error::Infeasible(format!(
                "vertex {v} of degree {dv} admits no degree in [{}, {}] with the parity of f",
                lo.get(v),
                hi.get(v)
            )));
        }
        gl[v] = gv;
        fl[v] = f;
    }

    // stubs 0..2m: stub 2e at the first endpoint, 2e+1 at the second
    let m = g.edge_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * m];
    let mut stubs_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        adj[2 * e].push(2 * e + 1);
        adj[2 * e + 1].push(2 * e);
        stubs_at[u].push(2 * e);
        stubs_at[v].push(2 * e + 1);
    }
    let attach = |adj: &mut Vec<Vec<usize>>, stubs: &[usize]| -> usize {
        let id = adj.len();
        adj.push(stubs.to_vec());
        for &s in stubs {
            adj[s].push(id);
        }
        id
    };
    for v in 0..n {
        let dv = d[v] as i64;
        for _ in 0..(dv - fl[v]) {
            attach(&mut adj, &stubs_at[v]);
        }
        for _ in 0..(fl[v] - gl[v]) / 2 {
            let a = attach(&mut adj, &stubs_at[v]);
            let b = attach(&mut adj, &stubs_at[v]);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mate = max_matching(&adj);
    if mate.iter().any(|m| m.is_none()) {
        return Err(Error::Infeasible(
            "the parity gadget has no perfect matching".into(),
        ));
    }
    let chosen = (0..m).filter(|&e| mate[2 * e] == Some(2 * e + 1));
    let h = Factor::from_ids(g, chosen)?;
    let dh = h.degrees(g);
    for v in 0..n {
        let x = dh[v] as i64;
        assert!(
            lo.get(v) <= x && x <= hi.get(v) && (x - hi.get(v)).rem_euclid(2) == 0,
            "internal error: parity gadget returned degree {x} at vertex {v}"
        );
    }
    Ok(h)
}

fn require_mod2(f: &ResidueMap, g: &Multigraph) -> Result<()> {
    if f.modulus() != 2 {
        return Err(Error::ModulusMismatch {
            expected: 2,
            got: f.modulus(),
        });
    }
    f.check_len(g)?;
    if f.total() % 2 != 0 {
        return precondition("the sum of f is odd");
    }
    Ok(())
}

fn require_two_edge_connected(g: &Multigraph) -> Result<()> {
    if g.vertex_count() < 2 || edge_connectivity(g)? < 2 {
        return hypothesis("graph is not 2-edge-connected");
    }
    Ok(())
}

/// Value in `{a, a + 1}` with the parity of `r`.
fn with_parity(a: i64, r: usize) -> i64 {
    if (a - r as i64).rem_euclid(2) == 0 {
        a
    } else {
        a + 1
    }
}

/// `d_H ≡ f (mod 2)` with `floor(d/2) - 1 <= d_H <= ceil(d/2) + 1`; when
/// `z = Some((v, t))`, additionally `d_H(v) = t`.
pub fn mod2_bounded_factor(
    g: &Multigraph,
    f: &ResidueMap,
    z: Option<(VertexId, i64)>,
    hyp: Hypotheses,
) -> Result<Factor> {
    require_mod2(f, g)?;
    if hyp.verify() {
        require_two_edge_connected(g)?;
    }
    let n = g.vertex_count();
    let d = g.degrees();
    let mut lo = IntFunc(vec![0; n]);
    let mut hi = IntFunc(vec![0; n]);
    for v in 0..n {
        let dv = d[v] as i64;
        lo.0[v] = with_parity(dv / 2 - 1, f.get(v));
        hi.0[v] = with_parity((dv + 1) / 2, f.get(v));
    }
    if let Some((zv, t)) = z {
        g.check_vertex(zv)?;
        if (t - f.get(zv) as i64).rem_euclid(2) != 0 || t < lo.get(zv).max(0) || t > hi.get(zv).min(d[zv] as i64) {
            return precondition(format!(
                "target {t} at vertex {zv} is not a degree in the window with the parity of f"
            ));
        }
        lo.0[zv] = t;
        hi.0[zv] = t;
    }
    parity_factor(g, &lo, &hi)
}

/// `d_H ≡ f (mod 2)` with `s <= d_H <= d - s0`, for a graph that decomposes
/// into a spanning tree and a factor with an orientation of out-degree at
/// least `l0`.
pub fn mod2_partition_factor(
    g: &Multigraph,
    f: &ResidueMap,
    s: &IntFunc,
    s0: &IntFunc,
    l0: &IntFunc,
    hyp: Hypotheses,
) -> Result<Factor> {
    require_mod2(f, g)?;
    let n = g.vertex_count();
    if s.len() != n || s0.len() != n || l0.len() != n {
        return precondition("s, s0 and l0 must have one value per vertex");
    }
    let d = g.degrees();
    for v in 0..n {
        if s.get(v) + s0.get(v) >= d[v] as i64 {
            return precondition(format!("s({v}) + s0({v}) >= d({v})"));
        }
        if s.get(v).max(s0.get(v)) > l0.get(v) {
            return precondition(format!("max(s({v}), s0({v})) > l0({v})"));
        }
    }
    if hyp.verify() {
        match partition_connected_decompose(g, 1, l0) {
            Ok(_) => {}
            Err(Error::Infeasible(msg)) | Err(Error::SolverGaveUp(msg)) => {
                return hypothesis(format!("graph is not (1, l0)-partition-connected: {msg}"))
            }
            Err(e) => return Err(e),
        }
    }
    let mut lo = IntFunc(vec![0; n]);
    let mut hi = IntFunc(vec![0; n]);
    for v in 0..n {
        let dv = d[v] as i64;
        lo.0[v] = with_parity(s.get(v), f.get(v));
        hi.0[v] = with_parity(dv - s0.get(v) - 1, f.get(v));
    }
    parity_factor(g, &lo, &hi)
}

/// A factor whose degrees are all positive and even.
pub fn even_factor(g: &Multigraph, hyp: Hypotheses) -> Result<Factor> {
    if hyp.verify() {
        if !g.is_loopless() {
            return hypothesis("graph has loops");
        }
        if g.min_degree() < 3 {
            return hypothesis("minimum degree is below 3");
        }
        require_two_edge_connected(g)?;
    }
    let n = g.vertex_count();
    let d = g.degrees();
    let lo = IntFunc::constant(n, 2);
    let hi = IntFunc(d.iter().map(|&x| (x as i64) & !1).collect());
    parity_factor(g, &lo, &hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    /// Brute force over edge subsets.
    fn brute(g: &Multigraph, lo: &IntFunc, hi: &IntFunc) -> bool {
        let m = g.edge_count();
        (0..1u64 << m).any(|bits| {
            let mut dh = vec![0i64; g.vertex_count()];
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                if bits >> e & 1 == 1 {
                    dh[u] += 1;
                    dh[v] += 1;
                }
            }
            (0..g.vertex_count())
                .all(|v| lo.get(v) <= dh[v] && dh[v] <= hi.get(v) && (dh[v] - hi.get(v)) % 2 == 0)
        })
    }

    #[test]
    fn lovasz_examples() {
        let k4 = complete(4);
        let one = IntFunc::constant(4, 1);
        assert!(lovasz_violation(&k4, &one, &one).unwrap().slack >= 0);
        let p = path(2);
        assert!(lovasz_violation(&p, &IntFunc(vec![0, 1]), &IntFunc(vec![0, 1])).is_err());
        let s = star(3);
        let one = IntFunc::constant(4, 1);
        let r = lovasz_violation(&s, &one, &one).unwrap();
        assert!(r.slack < 0);
        assert_eq!(r.slack, -1);
    }

    #[test]
    fn parity_examples() {
        let k4 = complete(4);
        let one = IntFunc::constant(4, 1);
        let h = parity_factor(&k4, &one, &one).unwrap();
        assert_eq!(h.len(), 2);
        let c4 = cycle(4);
        let h = parity_factor(&c4, &IntFunc::constant(4, 0), &IntFunc::constant(4, 2)).unwrap();
        assert!(h.degrees(&c4).iter().all(|&x| x % 2 == 0));
        let h = parity_factor(&k4, &one, &IntFunc::constant(4, 3)).unwrap();
        assert!(h.degrees(&k4).iter().all(|&x| x % 2 == 1));
        assert!(matches!(
            parity_factor(&star(3), &one, &one),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn loops_count_twice() {
        let g = Multigraph::from_edges(1, [(0, 0), (0, 0)]).unwrap();
        let h = parity_factor(&g, &IntFunc(vec![2]), &IntFunc(vec![2])).unwrap();
        assert_eq!(h.degrees(&g), vec![2]);
    }

    #[test]
    fn mod2_examples() {
        let c4 = cycle(4);
        let h = mod2_bounded_factor(&c4, &ResidueMap::constant(2, 4, 0).unwrap(), None, Hypotheses::Verify).unwrap();
        assert!(h.degrees(&c4).iter().all(|&x| x % 2 == 0));
        let h = mod2_bounded_factor(&c4, &ResidueMap::constant(2, 4, 1).unwrap(), None, Hypotheses::Verify).unwrap();
        assert_eq!(h.degrees(&c4), vec![1; 4]);
        let k4 = complete(4);
        let f1 = ResidueMap::constant(2, 4, 1).unwrap();
        let h = mod2_bounded_factor(&k4, &f1, Some((0, 3)), Hypotheses::Verify).unwrap();
        assert_eq!(h.degrees(&k4)[0], 3);
        assert!(mod2_bounded_factor(&k4, &f1, Some((0, 2)), Hypotheses::Verify).is_err());
        assert!(matches!(
            mod2_bounded_factor(&path(3), &ResidueMap::constant(2, 3, 0).unwrap(), None, Hypotheses::Verify),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn partition_window() {
        let g = cycle(4).multiply(2);
        let f = ResidueMap::constant(2, 4, 0).unwrap();
        let one = IntFunc::constant(4, 1);
        let h = mod2_partition_factor(&g, &f, &one, &one, &one, Hypotheses::Verify).unwrap();
        assert!(h.degrees(&g).iter().all(|&x| x == 2));
        let three = IntFunc::constant(4, 3);
        assert!(matches!(
            mod2_partition_factor(&g, &f, &one, &three, &three, Hypotheses::Verify),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn even_factor_examples() {
        let k4 = complete(4);
        let h = even_factor(&k4, Hypotheses::Verify).unwrap();
        assert!(h.degrees(&k4).iter().all(|&x| x == 2));
        let k5 = complete(5);
        let h = even_factor(&k5, Hypotheses::Verify).unwrap();
        assert!(h.degrees(&k5).iter().all(|&x| x > 0 && x % 2 == 0));
        assert!(matches!(even_factor(&cycle(4), Hypotheses::Verify), Err(Error::Hypothesis(_))));
    }

    fn arb_instance() -> impl Strategy<Value = (Multigraph, IntFunc, IntFunc)> {
        (1usize..=6).prop_flat_map(|n| {
            (
                proptest::collection::vec((0..n, 0..n), 0..12),
                proptest::collection::vec((0i64..4, 0i64..3), n),
            )
                .prop_map(move |(e, b)| {
                    let g = Multigraph::from_edges(n, e).unwrap();
                    let mut lo: Vec<i64> = b.iter().map(|&(l, _)| l).collect();
                    let mut hi: Vec<i64> = b.iter().map(|&(l, w)| l + 2 * w).collect();
                    if hi.iter().sum::<i64>() % 2 != 0 {
                        lo[0] += 1;
                        hi[0] += 1;
                    }
                    (g, IntFunc(lo), IntFunc(hi))
                })
        })
    }

    proptest! {
        #[test]
        fn gadget_agrees_with_brute_force((g, lo, hi) in arb_instance()) {
            match parity_factor(&g, &lo, &hi) {
                Ok(_) => prop_assert!(brute(&g, &lo, &hi)),
                Err(Error::Infeasible(_)) => prop_assert!(!brute(&g, &lo, &hi)),
                Err(Error::Precondition(_)) => {}
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
