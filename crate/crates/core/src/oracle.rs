//! Brute-force ground truth for desk-scale instances.
//!
//! Nothing in this module calls an engine: it shares only the graph types
//! with the rest of the crate. Each search refuses inputs beyond its cap
//! with [`Error::TooLarge`]; the caps can be moved through environment
//! variables (see [`Caps::from_env`]).
//!
//! Factors and orientations are enumerated in increasing order of the
//! edge-id bitmask (`bit e` set when edge `e` is in the factor, or reversed
//! in the orientation).

use crate::error::{precondition, Error, Result};
use crate::graph::{Bipartition, Factor, IntFunc, Multigraph, Orientation, ResidueMap, VertexSet};
use crate::par::{self, Exec};

/// Size limits for the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Edges for [`enum_factors`].
    pub factor_edges: usize,
    /// Edges for [`enum_orientations`].
    pub orientation_edges: usize,
    /// Vertices for subset and bipartition sweeps.
    pub subset_vertices: usize,
    /// Vertices for set-partition sweeps.
    pub partition_vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            factor_edges: 24,
            orientation_edges: 20,
            subset_vertices: 12,
            partition_vertices: 8,
        }
    }
}

/// Bitmasks are `u64`, and anything much past these numbers would not finish.
const HARD_LIMITS: Caps = Caps {
    factor_edges: 40,
    orientation_edges: 36,
    subset_vertices: 30,
    partition_vertices: 13,
};

impl Caps {
    /// Defaults, overridden by `MODFACTOR_ORACLE_FACTOR_EDGES`,
    /// `MODFACTOR_ORACLE_ORIENTATION_EDGES`, `MODFACTOR_ORACLE_SUBSET_VERTICES`
    /// and `MODFACTOR_ORACLE_PARTITION_VERTICES`. Values are clamped to what
    /// a 64-bit enumeration can address.
    pub fn from_env() -> Caps {
        let read = |name: &str, default: usize, hard: usize| {
            std::env::var(name)
                .ok()
                .and_then(|s| s.trim().parse::<usize>().ok())
                .unwrap_or(default)
                .min(hard)
        };
        let d = Caps::default();
        Caps {
            factor_edges: read("MODFACTOR_ORACLE_FACTOR_EDGES", d.factor_edges, HARD_LIMITS.factor_edges),
            orientation_edges: read(
                "MODFACTOR_ORACLE_ORIENTATION_EDGES",
                d.orientation_edges,
                HARD_LIMITS.orientation_edges,
            ),
            subset_vertices: read(
                "MODFACTOR_ORACLE_SUBSET_VERTICES",
                d.subset_vertices,
                HARD_LIMITS.subset_vertices,
            ),
            partition_vertices: read(
                "MODFACTOR_ORACLE_PARTITION_VERTICES",
                d.partition_vertices,
                HARD_LIMITS.partition_vertices,
            ),
        }
    }
}

fn within(what: &'static str, limit: usize, got: usize) -> Result<()> {
    if got > limit {
        Err(Error::TooLarge { what, limit, got })
    } else {
        Ok(())
    }
}

/// What a factor predicate sees: membership by edge id and the degrees it
/// induces (loops count twice).
#[derive(Clone, Copy, Debug)]
pub struct Candidate<'a> {
    pub mask: &'a [bool],
    pub degrees: &'a [i64],
}

impl Candidate<'_> {
    /// Two-colourability of the chosen edges, by a union-find with parity.
    pub fn is_bipartite(&self, g: &Multigraph) -> bool {
        let n = g.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut parity = vec![false; n];
        fn find(parent: &mut [usize], parity: &mut [bool], x: usize) -> (usize, bool) {
            if parent[x] == x {
                return (x, false);
            }
            let p = parent[x];
            let (r, pp) = find(parent, parity, p);
            parent[x] = r;
            parity[x] ^= pp;
            (r, parity[x])
        }
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if !self.mask[e] {
                continue;
            }
            let (ru, pu) = find(&mut parent, &mut parity, u);
            let (rv, pv) = find(&mut parent, &mut parity, v);
            if ru == rv {
                if pu == pv {
                    return false;
                }
            } else {
                parent[ru] = rv;
                parity[ru] = !(pu ^ pv);
            }
        }
        true
    }
}

struct FactorSearch<'a, P> {
    g: &'a Multigraph,
    lo: Vec<i64>,
    hi: Vec<i64>,
    pred: &'a P,
}

struct State {
    mask: Vec<bool>,
    deg: Vec<i64>,
    rem: Vec<i64>,
}

impl<P: Fn(&Candidate) -> bool> FactorSearch<'_, P> {
    fn ok(&self, st: &State, v: usize) -> bool {
        st.deg[v] <= self.hi[v] && st.deg[v] + st.rem[v] >= self.lo[v]
    }

    /// Edges `split_at..m` fixed by the bits of `p`, lowest edge first.
    fn prefix(&self, split_at: usize, p: u64) -> Option<State> {
        let n = self.g.vertex_count();
        let mut st = State {
            mask: vec![false; self.g.edge_count()],
            deg: vec![0; n],
            rem: vec![0; n],
        };
        for &(u, v) in self.g.edges() {
            st.rem[u] += 1;
            st.rem[v] += 1;
        }
        for e in split_at..self.g.edge_count() {
            let (u, v) = self.g.endpoints(e);
            st.rem[u] -= 1;
            st.rem[v] -= 1;
            if p >> (e - split_at) & 1 == 1 {
                st.mask[e] = true;
                st.deg[u] += 1;
                st.deg[v] += 1;
            }
        }
        (0..n).all(|v| self.ok(&st, v)).then_some(st)
    }

    /// Decide edges `i-1, i-2, …, 0`, excluding before including, so leaves
    /// come out in increasing bitmask order. `emit` returns `true` to stop.
    fn dfs(&self, i: usize, st: &mut State, emit: &mut dyn FnMut(&State) -> bool) -> bool {
        if i == 0 {
            let c = Candidate {
                mask: &st.mask,
                degrees: &st.deg,
            };
            return (self.pred)(&c) && emit(st);
        }
        let e = i - 1;
        let (u, v) = self.g.endpoints(e);
        st.rem[u] -= 1;
        st.rem[v] -= 1;
        let mut stop = false;
        if self.ok(st, u) && self.ok(st, v) {
            stop = self.dfs(e, st, emit);
        }
        if !stop {
            st.mask[e] = true;
            st.deg[u] += 1;
            st.deg[v] += 1;
            if self.ok(st, u) && self.ok(st, v) {
                stop = self.dfs(e, st, emit);
            }
            st.mask[e] = false;
            st.deg[u] -= 1;
            st.deg[v] -= 1;
        }
        st.rem[u] += 1;
        st.rem[v] += 1;
        stop
    }
}

fn factor_search<'a, P>(g: &'a Multigraph, bounds: Option<(&IntFunc, &IntFunc)>, pred: &'a P) -> Result<FactorSearch<'a, P>> {
    within("edge count for factor enumeration", Caps::from_env().factor_edges, g.edge_count())?;
    let n = g.vertex_count();
    let (lo, hi) = match bounds {
        Some((lo, hi)) => {
            if lo.len() != n || hi.len() != n {
                return precondition("degree bounds cover a different vertex count");
            }
            (lo.0.clone(), hi.0.clone())
        }
        None => (vec![i64::MIN / 4; n], vec![i64::MAX / 4; n]),
    };
    Ok(FactorSearch { g, lo, hi, pred })
}

const SPLIT_BITS: usize = 8;

/// Every factor whose degrees lie within `bounds` (when given) and that
/// satisfies `pred`, in bitmask order.
pub fn enum_factors<P>(g: &Multigraph, bounds: Option<(&IntFunc, &IntFunc)>, pred: P) -> Result<Vec<Factor>>
where
    P: Fn(&Candidate) -> bool + Sync,
{
    enum_factors_with(Exec::default(), g, bounds, pred)
}

pub fn enum_factors_with<P>(exec: Exec, g: &Multigraph, bounds: Option<(&IntFunc, &IntFunc)>, pred: P) -> Result<Vec<Factor>>
where
    P: Fn(&Candidate) -> bool + Sync,
{
    let search = factor_search(g, bounds, &pred)?;
    let m = g.edge_count();
    let s = SPLIT_BITS.min(m);
    let split_at = m - s;
    let chunks = par::map_range(exec, 1u64 << s, |p| {
        let mut found = Vec::new();
        if let Some(mut st) = search.prefix(split_at, p) {
            search.dfs(split_at, &mut st, &mut |st| {
                found.push(st.mask.clone());
                false
            });
        }
        found
    });
    chunks
        .into_iter()
        .flatten()
        .map(|mask| Factor::from_mask(g, mask))
        .collect()
}

/// The first factor of [`enum_factors`], if any.
pub fn first_factor<P>(g: &Multigraph, bounds: Option<(&IntFunc, &IntFunc)>, pred: P) -> Result<Option<Factor>>
where
    P: Fn(&Candidate) -> bool + Sync,
{
    first_factor_with(Exec::default(), g, bounds, pred)
}

pub fn first_factor_with<P>(exec: Exec, g: &Multigraph, bounds: Option<(&IntFunc, &IntFunc)>, pred: P) -> Result<Option<Factor>>
where
    P: Fn(&Candidate) -> bool + Sync,
{
    let search = factor_search(g, bounds, &pred)?;
    let m = g.edge_count();
    let s = SPLIT_BITS.min(m);
    let split_at = m - s;
    let hit = par::find_first(exec, 1u64 << s, |p| {
        let mut st = search.prefix(split_at, p)?;
        let mut found = None;
        search.dfs(split_at, &mut st, &mut |st| {
            found = Some(st.mask.clone());
            true
        });
        found
    });
    hit.map(|(_, mask)| Factor::from_mask(g, mask)).transpose()
}

fn out_degrees(g: &Multigraph, bits: u64) -> Vec<i64> {
    let mut d = vec![0i64; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        d[if bits >> e & 1 == 1 { v } else { u }] += 1;
    }
    d
}

fn orientation_setup(g: &Multigraph) -> Result<(usize, usize)> {
    if !g.is_loopless() {
        return precondition("orientations are defined only on loopless graphs");
    }
    let m = g.edge_count();
    within("edge count for orientation enumeration", Caps::from_env().orientation_edges, m)?;
    let s = SPLIT_BITS.min(m);
    Ok((s, m - s))
}

fn orientation_of(g: &Multigraph, bits: u64) -> Result<Orientation> {
    Orientation::new(g, (0..g.edge_count()).map(|e| bits >> e & 1 == 1).collect())
}

/// Every orientation whose out-degree vector satisfies `pred`. Bit `e` of
/// the enumeration index reverses edge `e` (tail at its second end).
pub fn enum_orientations<P>(g: &Multigraph, pred: P) -> Result<Vec<Orientation>>
where
    P: Fn(&[i64]) -> bool + Sync,
{
    let (s, low) = orientation_setup(g)?;
    let chunks = par::map_range(Exec::default(), 1u64 << s, |hi| {
        (0..1u64 << low)
            .map(|lo| hi << low | lo)
            .filter(|&bits| pred(&out_degrees(g, bits)))
            .collect::<Vec<_>>()
    });
    chunks.into_iter().flatten().map(|bits| orientation_of(g, bits)).collect()
}

pub fn first_orientation<P>(g: &Multigraph, pred: P) -> Result<Option<Orientation>>
where
    P: Fn(&[i64]) -> bool + Sync,
{
    let (s, low) = orientation_setup(g)?;
    let hit = par::find_first(Exec::default(), 1u64 << s, |hi| {
        (0..1u64 << low)
            .map(|lo| hi << low | lo)
            .find(|&bits| pred(&out_degrees(g, bits)))
    });
    hit.map(|(_, bits)| orientation_of(g, bits)).transpose()
}

fn subset_setup(g: &Multigraph) -> Result<usize> {
    let n = g.vertex_count();
    within("vertex count for subset enumeration", Caps::from_env().subset_vertices, n)?;
    Ok(n)
}

fn cut_of(g: &Multigraph, bits: u64, mask: Option<&[bool]>) -> usize {
    g.edges()
        .iter()
        .enumerate()
        .filter(|&(e, &(u, v))| mask.is_none_or(|m| m[e]) && (bits >> u & 1) != (bits >> v & 1))
        .count()
}

/// Minimum of `d(A)` over nonempty proper subsets `A`.
pub fn edge_connectivity_by_subsets(g: &Multigraph) -> Result<usize> {
    let n = subset_setup(g)?;
    if n < 2 {
        return precondition("edge connectivity needs at least two vertices");
    }
    let full = (1u64 << n) - 1;
    Ok((1..full).map(|a| cut_of(g, a, None)).min().unwrap_or(0))
}

/// Minimum number of edges inside the two sides, over all `2^n` splits;
/// loops always count. Returns the value and the first `X` (as bits)
/// attaining it.
pub fn bipartite_index_by_subsets(g: &Multigraph) -> Result<(usize, u64)> {
    let n = subset_setup(g)?;
    let m = g.edge_count();
    let best = (0..1u64 << n).map(|x| (m - cut_of(g, x, None), x)).min().unwrap_or((m, 0));
    Ok(best)
}

/// A set `A` with `2 d_H(A) < d_G(A)`, if one exists.
pub fn half_cut_violation(g: &Multigraph, h: &Factor) -> Result<Option<VertexSet>> {
    let n = subset_setup(g)?;
    h.check_host(g)?;
    Ok((1..1u64 << n)
        .find(|&a| 2 * cut_of(g, a, Some(h.mask())) < cut_of(g, a, None))
        .map(|a| VertexSet::from_bits(a, n)))
}

/// First split `(X, Y)` (all `2^n` of them, `X` as bits) admitting no
/// correction, straight from the definition: no `x <= e(X)` with
/// `Σ_X f - 2x ≡ Σ_Y f` and no `y <= e(Y)` with `Σ_X f ≡ Σ_Y f - 2y`.
pub fn incompatible_split(g: &Multigraph, f: &ResidueMap) -> Result<Option<Bipartition>> {
    let n = subset_setup(g)?;
    f.check_len(g)?;
    let k = f.modulus() as i64;
    for x_bits in 0..1u64 << n {
        let (mut sx, mut sy) = (0i64, 0i64);
        for v in 0..n {
            if x_bits >> v & 1 == 1 {
                sx += f.get(v) as i64;
            } else {
                sy += f.get(v) as i64;
            }
        }
        let (mut ex, mut ey) = (0i64, 0i64);
        for &(u, v) in g.edges() {
            match (x_bits >> u & 1, x_bits >> v & 1) {
                (1, 1) => ex += 1,
                (0, 0) => ey += 1,
                _ => {}
            }
        }
        let by_x = (0..=ex).any(|x| (sx - 2 * x - sy).rem_euclid(k) == 0);
        let by_y = (0..=ey).any(|y| (sx - sy + 2 * y).rem_euclid(k) == 0);
        if !by_x && !by_y {
            return Ok(Some(Bipartition::from_bits(x_bits, n)));
        }
    }
    Ok(None)
}

pub fn compatible_by_definition(g: &Multigraph, f: &ResidueMap) -> Result<bool> {
    Ok(incompatible_split(g, f)?.is_none())
}

/// Calls `visit` with every set partition of `0..n` as a block label per
/// vertex (restricted growth strings, lexicographic) and its block count.
pub fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize], usize)) {
    if n == 0 {
        visit(&[], 0);
        return;
    }
    let mut a = vec![0usize; n];
    // b[i] = 1 + max(a[0..i])
    let mut b = vec![1usize; n];
    loop {
        visit(&a, b[n - 1].max(a[n - 1] + 1));
        let mut i = n - 1;
        while i > 0 && a[i] == b[i] {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        a[i] += 1;
        for j in i + 1..n {
            a[j] = 0;
            b[j] = b[i].max(a[i] + 1);
        }
    }
}

/// Largest `m` with `e_G(P) >= m (|P| - 1)` for every partition `P` of the
/// vertices, the count of edge-disjoint spanning trees by the partition
/// criterion. Graphs on at most one vertex give `usize::MAX`.
pub fn tree_connectivity_by_partitions(g: &Multigraph) -> Result<usize> {
    let n = g.vertex_count();
    within("vertex count for partition enumeration", Caps::from_env().partition_vertices, n)?;
    if n <= 1 {
        return Ok(usize::MAX);
    }
    let mut best = usize::MAX;
    for_each_partition(n, |block, parts| {
        if parts < 2 {
            return;
        }
        let cross = g.edges().iter().filter(|&&(u, v)| block[u] != block[v]).count();
        best = best.min(cross / (parts - 1));
    });
    Ok(best)
}
