//! Orientations with prescribed out-degrees, and the modulo-k orientation
//! solver.
//!
//! [`find_p_orientation`] searches over out-degree target vectors `t` that are
//! residue-admissible and inside the window, realizing each candidate with a
//! flow. A failed realization yields a set `S` with `e(S) > t(S)`; the search
//! then moves `k` units of target into `S`. When the heuristic stalls, an
//! exact depth-first enumeration of target vectors takes over.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{EdgeId, IntFunc, Multigraph, Orientation, ResidueMap, VertexId, VertexSet};

/// Result of [`orient_with_out_degrees`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutDegreeRealization {
    Oriented(Orientation),
    /// A set `A` with `e_G(A) > t(A)`.
    Violating(VertexSet),
}

/// Flow network `s -> edge -> endpoint -> sink`; returns the network, the
/// handles of the edge-to-endpoint arcs and the node ids of `s` and the sink.
fn edge_assignment_network(
    g: &Multigraph,
    ids: &[EdgeId],
    cap: impl Fn(VertexId) -> i64,
) -> (FlowNetwork, Vec<(usize, usize)>, usize, usize) {
    let n = g.vertex_count();
    let m = ids.len();
    let (s, t) = (0, 1 + m + n);
    let mut net = FlowNetwork::new(m + n + 2);
    let mut arcs = Vec::with_capacity(m);
    for (i, &e) in ids.iter().enumerate() {
        let (u, v) = g.endpoints(e);
        net.add_arc(s, 1 + i, 1);
        let a = net.add_arc(1 + i, 1 + m + u, 1);
        let b = net.add_arc(1 + i, 1 + m + v, 1);
        arcs.push((a, b));
    }
    for v in 0..n {
        let c = cap(v);
        if c > 0 {
            net.add_arc(1 + m + v, t, c);
        }
    }
    (net, arcs, s, t)
}

/// Orient a loopless multigraph so that `d+(v) = t(v)` exactly, or return a
/// vertex set `A` with `e(A) > t(A)`.
pub fn orient_with_out_degrees(g: &Multigraph, t: &IntFunc) -> Result<OutDegreeRealization> {
    if !g.is_loopless() {
        return precondition("orientations are defined only on loopless graphs");
    }
    if t.len() != g.vertex_count() {
        return precondition("target function has the wrong length");
    }
    if t.0.iter().any(|&x| x < 0) {
        return precondition("out-degree targets must be nonnegative");
    }
    if t.sum() != g.edge_count() as i64 {
        return precondition(format!(
            "out-degree targets sum to {} but the graph has {} edges",
            t.sum(),
            g.edge_count()
        ));
    }
    let ids: Vec<EdgeId> = (0..g.edge_count()).collect();
    let (mut net, arcs, s, sink) = edge_assignment_network(g, &ids, |v| t.get(v));
    let flow = net.max_flow(s, sink);
    if flow == g.edge_count() as i64 {
        let flipped = arcs.iter().map(|&(a, _)| net.flow_on(a) == 0).collect();
        return Ok(OutDegreeRealization::Oriented(Orientation::new(g, flipped)?));
    }
    let side = net.source_side(s);
    let m = ids.len();
    let set = VertexSet::new((0..g.vertex_count()).filter(|&v| side[1 + m + v]));
    Ok(OutDegreeRealization::Violating(set))
}

/// Orient the edges `ids` of `g` so that every `v` gets out-degree at least
/// `l0(v)`. Returns `(edge, tail)` pairs in the order of `ids`.
pub(crate) fn orient_with_lower_bounds(
    g: &Multigraph,
    ids: &[EdgeId],
    l0: &IntFunc,
) -> Option<Vec<(EdgeId, VertexId)>> {
    let need: i64 = l0.0.iter().map(|&x| x.max(0)).sum();
    if need > ids.len() as i64 {
        return None;
    }
    let (mut net, arcs, s, sink) = edge_assignment_network(g, ids, |v| l0.get(v).max(0));
    if net.max_flow(s, sink) != need {
        return None;
    }
    Some(
        ids.iter()
            .zip(&arcs)
            .map(|(&e, &(_, b))| {
                let (u, v) = g.endpoints(e);
                (e, if net.flow_on(b) > 0 { v } else { u })
            })
            .collect(),
    )
}

/// Pointwise bounds on out-degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWindow {
    pub lower: IntFunc,
    pub upper: IntFunc,
}

impl DegreeWindow {
    pub fn new(lower: IntFunc, upper: IntFunc) -> Result<Self> {
        if lower.len() != upper.len() {
            return precondition("window bounds have different lengths");
        }
        if let Some(v) = (0..lower.len()).find(|&v| lower.get(v) > upper.get(v)) {
            return precondition(format!("window is empty at vertex {v}"));
        }
        Ok(DegreeWindow { lower, upper })
    }

    /// `0 ..= d(v)` everywhere.
    pub fn unbounded(g: &Multigraph) -> Self {
        let d = g.degrees();
        DegreeWindow {
            lower: IntFunc::constant(d.len(), 0),
            upper: IntFunc(d.iter().map(|&x| x as i64).collect()),
        }
    }

    /// `|d+(v) - d(v)/2| < k`, i.e. `floor(d/2) - (k-1) ..= ceil(d/2) + (k-1)`.
    pub fn half_degree(g: &Multigraph, k: usize) -> Self {
        let k = k as i64;
        let d = g.degrees();
        DegreeWindow {
            lower: IntFunc(d.iter().map(|&x| x as i64 / 2 - (k - 1)).collect()),
            upper: IntFunc(d.iter().map(|&x| (x as i64 + 1) / 2 + (k - 1)).collect()),
        }
    }

    /// Fix the out-degree of `v` to `value`.
    pub fn pin(mut self, v: VertexId, value: i64) -> Result<Self> {
        if v >= self.lower.len() {
            return Err(Error::UnknownVertex(v));
        }
        if value < self.lower.get(v) || value > self.upper.get(v) {
            return precondition(format!(
                "pinned out-degree {value} at vertex {v} lies outside [{}, {}]",
                self.lower.get(v),
                self.upper.get(v)
            ));
        }
        self.lower.0[v] = value;
        self.upper.0[v] = value;
        Ok(self)
    }

    pub fn contains(&self, v: VertexId, x: i64) -> bool {
        self.lower.get(v) <= x && x <= self.upper.get(v)
    }
}

/// Fixed directions for every edge at an anchor vertex `z0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreOrientation {
    pub anchor: VertexId,
    /// `(edge, tail)` for each edge incident with the anchor.
    pub tails: Vec<(EdgeId, VertexId)>,
}

impl PreOrientation {
    pub fn new(g: &Multigraph, anchor: VertexId, tails: Vec<(EdgeId, VertexId)>) -> Result<Self> {
        g.check_vertex(anchor)?;
        let mut covered = vec![false; g.edge_count()];
        for &(e, t) in &tails {
            if e >= g.edge_count() {
                return Err(Error::UnknownEdge(e));
            }
            let (u, v) = g.endpoints(e);
            if u != anchor && v != anchor {
                return precondition(format!("pre-oriented edge {e} misses the anchor {anchor}"));
            }
            if t != u && t != v {
                return precondition(format!("vertex {t} is not an end of edge {e}"));
            }
            if covered[e] {
                return precondition(format!("edge {e} pre-oriented twice"));
            }
            covered[e] = true;
        }
        if let Some(e) = (0..g.edge_count()).find(|&e| {
            let (u, v) = g.endpoints(e);
            (u == anchor || v == anchor) && !covered[e]
        }) {
            return precondition(format!("edge {e} at the anchor is not pre-oriented"));
        }
        Ok(PreOrientation { anchor, tails })
    }

    pub fn anchor_out_degree(&self) -> usize {
        self.tails.iter().filter(|&&(_, t)| t == self.anchor).count()
    }
}

/// Search effort for [`find_p_orientation_with`].
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub heuristic_rounds: usize,
    /// Node budget of the exact target enumeration.
    pub exact_nodes: u64,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            heuristic_rounds: 4000,
            exact_nodes: 4_000_000,
            seed: 0x0e1e,
        }
    }
}

/// Find an orientation with `d+(v) ≡ p(v) (mod k)` and `d+(v)` inside the
/// window at every vertex, honoring an optional pre-orientation.
///
/// `Error::Infeasible` is returned only with a certificate: an empty
/// admissible set, an unrepairable target sum, a violating set that no
/// admissible move can fix, or an exhausted exact search.
/// `Error::SolverGaveUp` means the budget ran out.
pub fn find_p_orientation(
    g: &Multigraph,
    p: &ResidueMap,
    window: &DegreeWindow,
    pre: Option<&PreOrientation>,
) -> Result<Orientation> {
    find_p_orientation_with(g, p, window, pre, SolverOptions::default())
}

pub fn find_p_orientation_with(
    g: &Multigraph,
    p: &ResidueMap,
    window: &DegreeWindow,
    pre: Option<&PreOrientation>,
    opts: SolverOptions,
) -> Result<Orientation> {
    let n = g.vertex_count();
    if !g.is_loopless() {
        return precondition("orientations are defined only on loopless graphs");
    }
    p.check_len(g)?;
    if window.lower.len() != n || window.upper.len() != n {
        return precondition("window has the wrong length");
    }
    let k = p.modulus();
    if (g.edge_count() as i64 - p.total() as i64).rem_euclid(k as i64) != 0 {
        return precondition(format!(
            "|E| = {} is not congruent to the sum of p modulo {k}",
            g.edge_count()
        ));
    }
    let mut fixed = vec![false; g.edge_count()];
    let mut tails = vec![usize::MAX; g.edge_count()];
    let mut fixed_out = vec![0i64; n];
    if let Some(pre) = pre {
        if pre.anchor >= n {
            return Err(Error::UnknownVertex(pre.anchor));
        }
        for &(e, t) in &pre.tails {
            if e >= g.edge_count() {
                return Err(Error::UnknownEdge(e));
            }
            let (u, v) = g.endpoints(e);
            if t != u && t != v {
                return precondition(format!("vertex {t} is not an end of edge {e}"));
            }
            fixed[e] = true;
            tails[e] = t;
            fixed_out[t] += 1;
        }
    }
    let free: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| !fixed[e]).collect();
    let free_graph = g.edge_subgraph(&free);
    let free_deg: Vec<i64> = free_graph.degrees().iter().map(|&x| x as i64).collect();
    let deg: Vec<i64> = g.degrees().iter().map(|&x| x as i64).collect();

    let mut admissible: Vec<Vec<i64>> = Vec::with_capacity(n);
    for v in 0..n {
        let lo = window.lower.get(v).max(fixed_out[v]);
        let hi = window.upper.get(v).min(fixed_out[v] + free_deg[v]);
        let mut xs: Vec<i64> = (lo.max(0)..=hi).filter(|&x| p.matches(v, x)).collect();
        if xs.is_empty() {
            return Err(Error::Infeasible(format!(
                "no out-degree at vertex {v} is congruent to {} mod {k} inside [{lo}, {hi}]",
                p.get(v)
            )));
        }
        // nearest to d(v)/2 first, ties toward the smaller value
        xs.sort_by_key(|&x| ((2 * x - deg[v]).abs(), x));
        admissible.push(xs);
    }

    let search = Search {
        g,
        free: &free,
        free_graph: &free_graph,
        fixed_out: &fixed_out,
        deg: &deg,
        admissible: &admissible,
        k: k as i64,
    };
    let targets = match search.heuristic(opts)? {
        Some(t) => Some(t),
        None => search.exact(opts.exact_nodes)?,
    };
    let Some((t, free_orientation)) = targets else {
        return Err(Error::Infeasible(
            "exhaustive search over admissible out-degree vectors found no orientation".into(),
        ));
    };
    debug_assert_eq!(t.len(), n);
    for (i, &e) in free.iter().enumerate() {
        tails[e] = free_orientation.tail(&free_graph, i);
    }
    let o = Orientation::from_tails(g, &tails)?;
    let out = o.out_degrees(g);
    for v in 0..n {
        let x = out[v] as i64;
        assert!(
            p.matches(v, x) && window.contains(v, x),
            "internal error: orientation misses its target at vertex {v}"
        );
    }
    Ok(o)
}

struct Search<'a> {
    g: &'a Multigraph,
    free: &'a [EdgeId],
    free_graph: &'a Multigraph,
    fixed_out: &'a [i64],
    deg: &'a [i64],
    admissible: &'a [Vec<i64>],
    k: i64,
}

type Found = (Vec<i64>, Orientation);

impl Search<'_> {
    fn n(&self) -> usize {
        self.g.vertex_count()
    }

    fn min_of(&self, v: usize) -> i64 {
        *self.admissible[v].iter().min().unwrap()
    }

    fn max_of(&self, v: usize) -> i64 {
        *self.admissible[v].iter().max().unwrap()
    }

    fn realize(&self, t: &[i64]) -> Result<std::result::Result<Orientation, VertexSet>> {
        let free_t = IntFunc((0..self.n()).map(|v| t[v] - self.fixed_out[v]).collect());
        match orient_with_out_degrees(self.free_graph, &free_t)? {
            OutDegreeRealization::Oriented(o) => Ok(Ok(o)),
            OutDegreeRealization::Violating(s) => Ok(Err(s)),
        }
    }

    /// Returns `Ok(None)` when the heuristic stalls without a certificate.
    fn heuristic(&self, opts: SolverOptions) -> Result<Option<Found>> {
        let n = self.n();
        let k = self.k;
        let target = self.g.edge_count() as i64;
        let mut t: Vec<i64> = (0..n).map(|v| self.admissible[v][0]).collect();
        let fits = |v: usize, x: i64| x >= self.min_of(v) && x <= self.max_of(v);

        // repair the total with ±k moves, largest slack first
        let mut sum: i64 = t.iter().sum();
        while sum > target {
            let v = (0..n)
                .filter(|&v| fits(v, t[v] - k))
                .max_by_key(|&v| (2 * t[v] - self.deg[v], std::cmp::Reverse(v)));
            let Some(v) = v else {
                return Err(Error::Infeasible(format!(
                    "every vertex is at its smallest admissible out-degree and the targets still exceed |E| = {target}"
                )));
            };
            t[v] -= k;
            sum -= k;
        }
        while sum < target {
            let v = (0..n)
                .filter(|&v| fits(v, t[v] + k))
                .min_by_key(|&v| (2 * t[v] - self.deg[v], v));
            let Some(v) = v else {
                return Err(Error::Infeasible(format!(
                    "every vertex is at its largest admissible out-degree and the targets stay below |E| = {target}"
                )));
            };
            t[v] += k;
            sum += k;
        }

        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.heuristic_rounds {
            let s = match self.realize(&t)? {
                Ok(o) => return Ok(Some((t, o))),
                Err(s) => s,
            };
            if !seen.insert(t.clone()) {
                // cycling: random balanced move
                let up: Vec<usize> = (0..n).filter(|&v| fits(v, t[v] + k)).collect();
                let down: Vec<usize> = (0..n).filter(|&v| fits(v, t[v] - k)).collect();
                if up.is_empty() || down.is_empty() {
                    return Ok(None);
                }
                let a = up[rng.gen_range(0..up.len())];
                let b = down[rng.gen_range(0..down.len())];
                if a != b {
                    t[a] += k;
                    t[b] -= k;
                }
                continue;
            }
            let inside = s.to_mask(n);
            let raise = (0..n)
                .filter(|&v| inside[v] && fits(v, t[v] + k))
                .min_by_key(|&v| (2 * t[v] - self.deg[v], v));
            let lower = (0..n)
                .filter(|&v| !inside[v] && fits(v, t[v] - k))
                .max_by_key(|&v| (2 * t[v] - self.deg[v], std::cmp::Reverse(v)));
            match (raise, lower) {
                (Some(a), Some(b)) => {
                    t[a] += k;
                    t[b] -= k;
                }
                (None, _) => {
                    return Err(Error::Infeasible(format!(
                        "vertex set {:?} has more internal free edges than its largest admissible out-degrees allow",
                        s.as_slice()
                    )))
                }
                (_, None) => {
                    return Err(Error::Infeasible(format!(
                        "vertex set {:?} is violated while every vertex outside it is at its smallest admissible out-degree",
                        s.as_slice()
                    )))
                }
            }
        }
        Ok(None)
    }

    /// Depth-first enumeration of target vectors, nearest-to-half first.
    /// `Ok(None)` means the space is exhausted.
    fn exact(&self, budget: u64) -> Result<Option<Found>> {
        let n = self.n();
        let free_edges = self.free.len() as i64;
        // suffix bounds on the free part of the targets
        let mut suf_min = vec![0i64; n + 1];
        let mut suf_max = vec![0i64; n + 1];
        for v in (0..n).rev() {
            suf_min[v] = suf_min[v + 1] + self.min_of(v) - self.fixed_out[v];
            suf_max[v] = suf_max[v + 1] + self.max_of(v) - self.fixed_out[v];
        }
        let fg = self.free_graph;
        let mut state = ExactState {
            t: vec![0; n],
            nodes: 0,
            budget,
            // free edges inside the prefix and free edges leaving it
            inner: vec![0; n + 1],
            cut: vec![0; n + 1],
        };
        let mut adj_back: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in fg.edges() {
            let (a, b) = (u.min(v), u.max(v));
            adj_back[b].push(a);
        }
        let ctx = ExactCtx {
            search: self,
            suf_min,
            suf_max,
            free_edges,
            adj_back,
            free_deg: fg.degrees().iter().map(|&x| x as i64).collect(),
        };
        ctx.dfs(0, 0, &mut state)
    }
}

struct ExactState {
    t: Vec<i64>,
    nodes: u64,
    budget: u64,
    inner: Vec<i64>,
    cut: Vec<i64>,
}

struct ExactCtx<'s, 'a> {
    search: &'s Search<'a>,
    suf_min: Vec<i64>,
    suf_max: Vec<i64>,
    free_edges: i64,
    adj_back: Vec<Vec<usize>>,
    free_deg: Vec<i64>,
}

impl ExactCtx<'_, '_> {
    fn dfs(&self, v: usize, prefix: i64, st: &mut ExactState) -> Result<Option<Found>> {
        let s = self.search;
        let n = s.n();
        if v == n {
            if prefix != self.free_edges {
                return Ok(None);
            }
            return Ok(s.realize(&st.t)?.ok().map(|o| (st.t.clone(), o)));
        }
        // prefix 0..=v after adding v
        let back = self.adj_back[v].len() as i64;
        st.inner[v + 1] = st.inner[v] + back;
        st.cut[v + 1] = st.cut[v] - back + (self.free_deg[v] - back);
        for &x in &s.admissible[v] {
            st.nodes += 1;
            if st.nodes > st.budget {
                return Err(Error::SolverGaveUp(format!(
                    "exact orientation search exceeded {} nodes",
                    st.budget
                )));
            }
            let free_x = x - s.fixed_out[v];
            let p = prefix + free_x;
            if p + self.suf_min[v + 1] > self.free_edges || p + self.suf_max[v + 1] < self.free_edges {
                continue;
            }
            if p < st.inner[v + 1] || p > st.inner[v + 1] + st.cut[v + 1] {
                continue;
            }
            st.t[v] = x;
            if let Some(found) = self.dfs(v + 1, p, st)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

/// Closed trails covering the edges of each component that has edges. Each
/// step is `(edge, from, to)`; a component's circuit starts at its smallest
/// vertex, or at `start` for the component containing it.
pub(crate) fn euler_circuits(g: &Multigraph, start: Option<VertexId>) -> Vec<Vec<(EdgeId, VertexId, VertexId)>> {
    let n = g.vertex_count();
    let inc = g.incidence();
    let mut used = vec![false; g.edge_count()];
    let mut ptr = vec![0usize; n];
    let mut circuits = Vec::new();
    let order = start.into_iter().chain(0..n);
    for s in order {
        if inc[s].iter().all(|&e| used[e]) {
            continue;
        }
        let mut stack: Vec<(VertexId, Option<(EdgeId, VertexId)>)> = vec![(s, None)];
        let mut circuit = Vec::new();
        while let Some(&(v, arrived)) = stack.last() {
            while ptr[v] < inc[v].len() && used[inc[v][ptr[v]]] {
                ptr[v] += 1;
            }
            if ptr[v] < inc[v].len() {
                let e = inc[v][ptr[v]];
                used[e] = true;
                stack.push((g.other_end(e, v), Some((e, v))));
            } else {
                stack.pop();
                if let Some((e, from)) = arrived {
                    circuit.push((e, from, v));
                }
            }
        }
        circuit.reverse();
        circuits.push(circuit);
    }
    circuits
}

/// Orient an even multigraph along Euler circuits, so `d+(v) = d(v)/2`.
pub fn eulerian_orientation(g: &Multigraph) -> Result<Orientation> {
    if let Some(v) = g.degrees().iter().position(|d| d % 2 == 1) {
        return precondition(format!("vertex {v} has odd degree"));
    }
    if !g.is_loopless() {
        return precondition("orientations are defined only on loopless graphs");
    }
    let mut tails = vec![0; g.edge_count()];
    for c in euler_circuits(g, None) {
        for (e, from, _) in c {
            tails[e] = from;
        }
    }
    Orientation::from_tails(g, &tails)
}
