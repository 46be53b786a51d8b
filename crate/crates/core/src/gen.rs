//! Seeded instance generators.
//!
//! Each generator re-checks the property it promises with the connectivity
//! or compatibility engines before returning, and retries (deterministically,
//! from the same seed stream) when a draw misses. Vertex labels and edge
//! order are shuffled so that no instance leans on a convenient numbering.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compat::{compatible_all, CompatMode, EXACT_COMPAT_MAX_VERTICES};
use crate::connectivity::{edge_connectivity, essential_edge_connectivity, is_tree_connected, ESSENTIAL_MAX_VERTICES};
use crate::error::{precondition, Error, Result};
use crate::graph::{Factor, Multigraph, ResidueMap, VertexId};

const RETRIES: usize = 64;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(n: usize, edges: Vec<(VertexId, VertexId)>) -> Multigraph {
    Multigraph::from_edges(n, edges).expect("generated endpoints are in range")
}

/// Relabel vertices by a random permutation and shuffle edge order; each
/// edge is written with its smaller end first.
fn scramble(n: usize, mut edges: Vec<(VertexId, VertexId)>, r: &mut ChaCha8Rng) -> Multigraph {
    let mut perm: Vec<VertexId> = (0..n).collect();
    perm.shuffle(r);
    for e in edges.iter_mut() {
        let (u, v) = (perm[e.0], perm[e.1]);
        *e = (u.min(v), u.max(v));
    }
    edges.shuffle(r);
    build(n, edges)
}

/// A uniformly random recursive tree on `ids`: each vertex after the first
/// (in shuffled order) attaches to an earlier one.
fn random_tree(ids: &[VertexId], r: &mut ChaCha8Rng) -> Vec<(VertexId, VertexId)> {
    let mut order = ids.to_vec();
    order.shuffle(r);
    (1..order.len()).map(|i| (order[r.gen_range(0..i)], order[i])).collect()
}

/// A random spanning tree of `K_{a,b}` on classes `0..a` and `a..a+b`,
/// grown by attaching each new vertex to a random placed vertex of the
/// other class.
fn random_bipartite_tree(a: usize, b: usize, r: &mut ChaCha8Rng) -> Vec<(VertexId, VertexId)> {
    let mut order: Vec<VertexId> = (0..a + b).collect();
    order.shuffle(r);
    // start from a cross pair so both classes are placed
    let x0 = *order.iter().find(|&&v| v < a).expect("a > 0");
    let y0 = *order.iter().find(|&&v| v >= a).expect("b > 0");
    let mut placed = [vec![x0], vec![y0]];
    let mut edges = vec![(x0, y0)];
    for v in order {
        if v == x0 || v == y0 {
            continue;
        }
        let other = &placed[usize::from(v < a)];
        edges.push((other[r.gen_range(0..other.len())], v));
        placed[usize::from(v >= a)].push(v);
    }
    edges
}

fn random_pair(n: usize, r: &mut ChaCha8Rng) -> (VertexId, VertexId) {
    let u = r.gen_range(0..n);
    let mut v = r.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

fn random_cross_pair(a: usize, b: usize, r: &mut ChaCha8Rng) -> (VertexId, VertexId) {
    (r.gen_range(0..a), a + r.gen_range(0..b))
}

/// A loopless multigraph with edge connectivity at least `lambda` (and
/// essential edge connectivity at least `essential`, when given). Bipartite
/// instances have classes of sizes `n/2` and `n - n/2` before relabelling.
///
/// The scaffold is a complete (bipartite) graph or a random spanning tree
/// closed into a 2-edge-connected graph, multiplied until the target is met,
/// plus a few random edges.
pub fn gen_edge_connected(n: usize, lambda: usize, bipartite: bool, essential: Option<usize>, seed: u64) -> Result<Multigraph> {
    if n < 2 {
        return precondition("need at least two vertices");
    }
    if essential.is_some() && !(4..=ESSENTIAL_MAX_VERTICES).contains(&n) {
        return precondition(format!(
            "essential connectivity is checked for 4 to {ESSENTIAL_MAX_VERTICES} vertices"
        ));
    }
    let mut r = rng(seed);
    let (a, b) = (n / 2, n - n / 2);
    for attempt in 0..RETRIES {
        let dense = r.gen_bool(0.5);
        let mut base = Vec::new();
        if bipartite {
            if dense {
                for x in 0..a {
                    for y in a..n {
                        base.push((x, y));
                    }
                }
            } else {
                base = random_bipartite_tree(a, b, &mut r);
                for _ in 0..n {
                    base.push(random_cross_pair(a, b, &mut r));
                }
            }
        } else if dense {
            for u in 0..n {
                for v in u + 1..n {
                    base.push((u, v));
                }
            }
        } else {
            let ids: Vec<VertexId> = (0..n).collect();
            base = random_tree(&ids, &mut r);
            for _ in 0..n {
                base.push(random_pair(n, &mut r));
            }
        }
        let lambda0 = edge_connectivity(&build(n, base.clone()))?;
        if lambda0 == 0 {
            continue;
        }
        let t = lambda.div_ceil(lambda0).max(1) + attempt / 8;
        let mut edges = Vec::with_capacity(t * base.len() + n);
        for _ in 0..t {
            edges.extend_from_slice(&base);
        }
        for _ in 0..r.gen_range(0..=n) {
            edges.push(if bipartite {
                random_cross_pair(a, b, &mut r)
            } else {
                random_pair(n, &mut r)
            });
        }
        let g = scramble(n, edges, &mut r);
        if edge_connectivity(&g)? < lambda {
            continue;
        }
        if let Some(ess) = essential {
            if essential_edge_connectivity(&g)? < ess {
                continue;
            }
        }
        return Ok(g);
    }
    Err(Error::SolverGaveUp(format!(
        "no {lambda}-edge-connected graph on {n} vertices after {RETRIES} draws"
    )))
}

/// Union of `m` random spanning trees of `K_n` plus `n/3` random edges,
/// checked `m`-tree-connected.
pub fn gen_tree_connected(n: usize, m: usize, seed: u64) -> Result<Multigraph> {
    let ids: Vec<VertexId> = (0..n).collect();
    tree_union(n, m, seed, |r| random_tree(&ids, r), |r| random_pair(n, r))
}

/// As [`gen_tree_connected`], with trees of `K_{a,b}`, so the result is
/// bipartite.
pub fn gen_tree_connected_bipartite(a: usize, b: usize, m: usize, seed: u64) -> Result<Multigraph> {
    if a == 0 || b == 0 {
        return precondition("both classes must be nonempty");
    }
    tree_union(a + b, m, seed, |r| random_bipartite_tree(a, b, r), |r| random_cross_pair(a, b, r))
}

fn tree_union(
    n: usize,
    m: usize,
    seed: u64,
    tree: impl Fn(&mut ChaCha8Rng) -> Vec<(VertexId, VertexId)>,
    pair: impl Fn(&mut ChaCha8Rng) -> (VertexId, VertexId),
) -> Result<Multigraph> {
    if n == 0 {
        return precondition("need at least one vertex");
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for _ in 0..m {
        edges.extend(tree(&mut r));
    }
    if m > 0 && n >= 2 {
        for _ in 0..n / 3 {
            edges.push(pair(&mut r));
        }
    }
    let g = scramble(n, edges, &mut r);
    if !is_tree_connected(&g, m) {
        return Err(Error::SolverGaveUp(format!("union of {m} trees is not {m}-tree-connected")));
    }
    Ok(g)
}

/// A residue map compatible with `g`. Up to four uniform draws are tried
/// when exact compatibility is affordable; otherwise (and as fallback) `f`
/// is the degree residues of a random factor, compatible because it is
/// realized.
pub fn gen_compatible_f(g: &Multigraph, k: usize, seed: u64) -> Result<ResidueMap> {
    if k == 0 {
        return Err(Error::ZeroModulus);
    }
    let n = g.vertex_count();
    let mut r = rng(seed);
    if n <= EXACT_COMPAT_MAX_VERTICES.min(16) {
        for _ in 0..4 {
            let vals: Vec<i64> = (0..n).map(|_| r.gen_range(0..k as i64)).collect();
            let f = ResidueMap::new(k, &vals)?;
            if compatible_all(g, &f, CompatMode::Exact)?.is_compatible() {
                return Ok(f);
            }
        }
    }
    let mask: Vec<bool> = (0..g.edge_count()).map(|_| r.gen_bool(0.5)).collect();
    let h = Factor::from_mask(g, mask)?;
    let d: Vec<i64> = h.degrees(g).into_iter().map(|x| x as i64).collect();
    let f = ResidueMap::new(k, &d)?;
    if n <= EXACT_COMPAT_MAX_VERTICES.min(16) && !compatible_all(g, &f, CompatMode::Exact)?.is_compatible() {
        unreachable!("a realized residue map is compatible");
    }
    Ok(f)
}

/// A connected even multigraph on `n >= 2` vertices: a union of random
/// closed walks through a shuffled tour of all vertices. Its size is odd
/// when `odd_size` is `Some(true)`, even for `Some(false)`.
pub fn gen_eulerian(n: usize, walks: usize, odd_size: Option<bool>, seed: u64) -> Result<Multigraph> {
    if n < 2 {
        return precondition("need at least two vertices");
    }
    let mut r = rng(seed);
    for _ in 0..RETRIES {
        let mut order: Vec<VertexId> = (0..n).collect();
        order.shuffle(&mut r);
        let mut edges: Vec<(VertexId, VertexId)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
        if n == 2 {
            // the tour 0-1-0 uses the pair twice
            edges.truncate(2);
        }
        for _ in 0..walks {
            let len = r.gen_range(2..=n.max(3));
            let start = r.gen_range(0..n);
            let mut cur = start;
            for _ in 0..len - 1 {
                let (_, next) = random_pair_from(cur, n, &mut r);
                edges.push((cur, next));
                cur = next;
            }
            if cur != start {
                edges.push((cur, start));
            } else {
                // a walk that came back early still closes with one more step
                let (_, other) = random_pair_from(cur, n, &mut r);
                edges.push((cur, other));
                edges.push((other, cur));
            }
        }
        if odd_size.is_some_and(|odd| (edges.len() % 2 == 1) != odd) && n >= 3 {
            // a triangle flips the size parity
            let mut t: Vec<VertexId> = (0..n).collect();
            t.shuffle(&mut r);
            edges.extend([(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]);
        }
        let g = scramble(n, edges, &mut r);
        let size_ok = odd_size.is_none_or(|odd| (g.edge_count() % 2 == 1) == odd);
        if g.is_even() && g.is_connected() && g.is_loopless() && size_ok {
            return Ok(g);
        }
    }
    Err(Error::SolverGaveUp(format!("no Eulerian draw on {n} vertices met the size parity")))
}

fn random_pair_from(u: VertexId, n: usize, r: &mut ChaCha8Rng) -> (VertexId, VertexId) {
    let mut v = r.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

/// A `q`-regular bipartite multigraph with classes `0..half` and
/// `half..2 half`: a union of `q` random perfect matchings.
pub fn gen_regular_bipartite(half: usize, q: usize, seed: u64) -> Result<Multigraph> {
    if half == 0 {
        return precondition("classes must be nonempty");
    }
    let mut r = rng(seed);
    let mut edges = Vec::with_capacity(half * q);
    for _ in 0..q {
        let mut ys: Vec<VertexId> = (half..2 * half).collect();
        ys.shuffle(&mut r);
        edges.extend((0..half).zip(ys));
    }
    edges.shuffle(&mut r);
    let g = build(2 * half, edges);
    if g.degrees().iter().any(|&d| d != q) || !g.is_bipartite() {
        return Err(Error::SolverGaveUp("matching union is not regular".into()));
    }
    Ok(g)
}

/// `m` uniformly random edges on `n` vertices, loops allowed when `loops`.
pub fn gen_multigraph(n: usize, m: usize, loops: bool, seed: u64) -> Result<Multigraph> {
    if n == 0 || (!loops && n < 2 && m > 0) {
        return precondition("too few vertices for the requested edges");
    }
    let mut r = rng(seed);
    let edges = (0..m)
        .map(|_| {
            if loops {
                let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
                (u.min(v), u.max(v))
            } else {
                random_pair(n, &mut r)
            }
        })
        .collect();
    Ok(build(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::tree_connectivity;
    use proptest::prelude::*;

    #[test]
    fn edge_connected_examples() {
        let g = gen_edge_connected(6, 9, true, None, 1).unwrap();
        assert!(g.is_bipartite());
        assert!(edge_connectivity(&g).unwrap() >= 9);
        let g = gen_edge_connected(4, 3, false, None, 2).unwrap();
        assert!(edge_connectivity(&g).unwrap() >= 3);
        let g = gen_edge_connected(5, 0, false, None, 3).unwrap();
        assert_eq!(g.vertex_count(), 5);
        let g = gen_edge_connected(8, 7, false, Some(9), 4).unwrap();
        assert!(essential_edge_connectivity(&g).unwrap() >= 9);
    }

    #[test]
    fn tree_connected_examples() {
        let g = gen_tree_connected(6, 4, 5).unwrap();
        assert!(tree_connectivity(&g) >= 4);
        let g = gen_tree_connected(2, 1, 6).unwrap();
        assert_eq!(g.edge_count(), 1);
        let g = gen_tree_connected(5, 0, 7).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = gen_tree_connected_bipartite(3, 4, 3, 8).unwrap();
        assert!(g.is_bipartite() && tree_connectivity(&g) >= 3);
    }

    #[test]
    fn compatible_maps() {
        let c4 = crate::graph::fixtures::cycle(4);
        for seed in 0..10 {
            let f = gen_compatible_f(&c4, 2, seed).unwrap();
            assert_eq!(f.total() % 2, 0);
        }
        assert!(gen_compatible_f(&c4, 0, 0).is_err());
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = gen_edge_connected(7, 4, false, None, 42).unwrap();
        let b = gen_edge_connected(7, 4, false, None, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = gen_eulerian(6, 3, Some(true), 9).unwrap();
        let d = gen_eulerian(6, 3, Some(true), 9).unwrap();
        assert_eq!(c.edges(), d.edges());
    }

    #[test]
    fn regular_bipartite() {
        let g = gen_regular_bipartite(5, 4, 3).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 4));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn eulerian_draws_are_even_and_connected(n in 2usize..9, walks in 0usize..5, odd in any::<bool>(), seed in any::<u64>()) {
            match gen_eulerian(n, walks, Some(odd), seed) {
                Ok(g) => {
                    prop_assert!(g.is_even() && g.is_connected());
                    prop_assert_eq!(g.edge_count() % 2 == 1, odd);
                }
                // two vertices only ever carry an even number of edges
                Err(_) => prop_assert!(n == 2 && odd),
            }
        }
    }
}
