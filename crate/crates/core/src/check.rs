//! Conclusion checkers, written against the raw edge list so they share no
//! code with the engines they audit.

use crate::graph::{Factor, IntFunc, Multigraph, Orientation, ResidueMap, VertexId};

/// `Err` carries the first failing clause in words.
pub type Check = std::result::Result<(), String>;

fn degrees_of(g: &Multigraph, h: &Factor) -> std::result::Result<Vec<i64>, String> {
    if h.check_host(g).is_err() || h.mask().len() != g.edge_count() {
        return Err("factor does not belong to this graph".into());
    }
    let mut d = vec![0i64; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if h.mask()[e] {
            d[u] += 1;
            d[v] += 1;
        }
    }
    Ok(d)
}

/// `d_H(v) ≡ f(v) (mod k)` everywhere.
pub fn check_residues(g: &Multigraph, h: &Factor, f: &ResidueMap) -> Check {
    let d = degrees_of(g, h)?;
    if f.len() != d.len() {
        return Err("residue map has the wrong length".into());
    }
    let k = f.modulus() as i64;
    for (v, &x) in d.iter().enumerate() {
        if (x - f.get(v) as i64).rem_euclid(k) != 0 {
            return Err(format!("residue: d_H({v}) = {x} is not {} mod {k}", f.get(v)));
        }
    }
    Ok(())
}

/// `lo(v) <= d_H(v) <= hi(v)` everywhere.
pub fn check_window(g: &Multigraph, h: &Factor, lo: &IntFunc, hi: &IntFunc) -> Check {
    let d = degrees_of(g, h)?;
    for (v, &x) in d.iter().enumerate() {
        if x < lo.get(v) || x > hi.get(v) {
            return Err(format!("window: d_H({v}) = {x} outside [{}, {}]", lo.get(v), hi.get(v)));
        }
    }
    Ok(())
}

/// `floor(d/2) - (k-1)` and `ceil(d/2) + (k-1)` per vertex.
pub fn half_window(g: &Multigraph, k: usize) -> (IntFunc, IntFunc) {
    let k = k as i64;
    let mut lo = vec![0i64; g.vertex_count()];
    let mut hi = vec![0i64; g.vertex_count()];
    for &(u, v) in g.edges() {
        lo[u] += 1;
        lo[v] += 1;
    }
    for v in 0..lo.len() {
        let d = lo[v];
        lo[v] = d / 2 - (k - 1);
        hi[v] = (d + 1) / 2 + (k - 1);
    }
    (IntFunc(lo), IntFunc(hi))
}

/// Every degree satisfies `allowed(v, d_G(v), d_H(v))`.
pub fn check_membership<F: Fn(VertexId, i64, i64) -> bool>(g: &Multigraph, h: &Factor, allowed: F) -> Check {
    let d = degrees_of(g, h)?;
    let full = degrees_of(g, &Factor::full(g))?;
    for v in 0..d.len() {
        if !allowed(v, full[v], d[v]) {
            return Err(format!("membership: d_H({v}) = {} not allowed (d_G = {})", d[v], full[v]));
        }
    }
    Ok(())
}

/// Non-empty, and every vertex it touches has degree divisible by `k`.
pub fn check_modk_regular_subgraph(g: &Multigraph, h: &Factor, k: usize) -> Check {
    let d = degrees_of(g, h)?;
    if h.is_empty() {
        return Err("subgraph is empty".into());
    }
    match d.iter().position(|&x| x % k as i64 != 0) {
        Some(v) => Err(format!("d_H({v}) = {} is not divisible by {k}", d[v])),
        None => Ok(()),
    }
}

/// Spanning with every degree positive and divisible by `k`.
pub fn check_modk_regular_factor(g: &Multigraph, h: &Factor, k: usize) -> Check {
    let d = degrees_of(g, h)?;
    match d.iter().position(|&x| x <= 0 || x % k as i64 != 0) {
        Some(v) => Err(format!("d_H({v}) = {} is not a positive multiple of {k}", d[v])),
        None => Ok(()),
    }
}

/// No odd cycle in `H` (two-colouring by BFS).
pub fn check_bipartite(g: &Multigraph, h: &Factor) -> Check {
    degrees_of(g, h)?;
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if h.mask()[e] {
            if u == v {
                return Err(format!("loop {e} in a bipartite factor"));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut side = vec![u8::MAX; n];
    for s in 0..n {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    queue.push_back(w);
                } else if side[w] == side[u] {
                    return Err(format!("odd cycle through {u} and {w}"));
                }
            }
        }
    }
    Ok(())
}

/// `d+(v) ≡ p(v) (mod k)` and `lo <= d+ <= hi`.
pub fn check_orientation(g: &Multigraph, o: &Orientation, p: &ResidueMap, lo: &IntFunc, hi: &IntFunc) -> Check {
    if o.check_host(g).is_err() {
        return Err("orientation does not belong to this graph".into());
    }
    let mut out = vec![0i64; g.vertex_count()];
    for e in 0..g.edge_count() {
        out[o.tail(g, e)] += 1;
    }
    let k = p.modulus() as i64;
    for (v, &x) in out.iter().enumerate() {
        if (x - p.get(v) as i64).rem_euclid(k) != 0 {
            return Err(format!("residue: d+({v}) = {x} is not {} mod {k}", p.get(v)));
        }
        if x < lo.get(v) || x > hi.get(v) {
            return Err(format!("window: d+({v}) = {x} outside [{}, {}]", lo.get(v), hi.get(v)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn residues_and_windows() {
        let c4 = cycle(4);
        let h = Factor::from_ids(&c4, [0, 2]).unwrap();
        assert!(check_residues(&c4, &h, &ResidueMap::constant(2, 4, 1).unwrap()).is_ok());
        assert!(check_residues(&c4, &h, &ResidueMap::constant(2, 4, 0).unwrap()).is_err());
        let (lo, hi) = half_window(&c4, 1);
        assert_eq!((lo.get(0), hi.get(0)), (1, 1));
        assert!(check_window(&c4, &h, &lo, &hi).is_ok());
        assert!(check_window(&c4, &Factor::full(&c4), &lo, &hi).is_err());
    }

    #[test]
    fn regular_and_bipartite() {
        let c4 = cycle(4);
        assert!(check_modk_regular_factor(&c4, &Factor::full(&c4), 2).is_ok());
        assert!(check_modk_regular_subgraph(&c4, &Factor::empty(&c4), 2).is_err());
        assert!(check_bipartite(&c4, &Factor::full(&c4)).is_ok());
        let tri = cycle(3);
        assert!(check_bipartite(&tri, &Factor::full(&tri)).is_err());
        assert!(check_bipartite(&tri, &Factor::from_ids(&tri, [0, 1]).unwrap()).is_ok());
    }

    #[test]
    fn host_mismatch_is_reported() {
        let h = Factor::full(&cycle(4));
        assert!(check_residues(&cycle(5), &h, &ResidueMap::constant(2, 5, 0).unwrap()).is_err());
    }
}
