//! Multigraph store and the degree / cut / induced-subgraph vocabulary.
//!
//! Loops and parallel edges are allowed everywhere. A loop adds 2 to the
//! degree of its vertex and never crosses a cut. Edge ids are dense in
//! `0..m` and stay stable across every factor operation, so factors built by
//! different constructions on the same host compose directly.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Multigraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    /// The endpoint of `e` opposite to `v` (`v` itself for a loop).
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Incident edge ids per vertex; a loop is listed once at its vertex.
    pub fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push(e);
            if a != b {
                inc[b].push(e);
            }
        }
        inc
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }

    pub fn is_loopless(&self) -> bool {
        self.loop_count() == 0
    }

    /// Stable fingerprint used to tie factors and orientations to their host.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    fn membership(&self, set: &VertexSet) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        for &v in set.as_slice() {
            self.check_vertex(v)?;
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Number of non-loop edges with exactly one end in `a`.
    pub fn cut_degree(&self, a: &VertexSet) -> Result<usize> {
        if a.is_empty() || a.len() >= self.n {
            return Err(Error::InvalidVertexSet(
                "cut set must be nonempty and proper".into(),
            ));
        }
        let mask = self.membership(a)?;
        Ok(cut_of_mask(&self.edges, &mask))
    }

    /// Number of edges with both ends in `a`; loops count once.
    pub fn internal_edges(&self, a: &VertexSet) -> Result<usize> {
        let mask = self.membership(a)?;
        Ok(self.edges.iter().filter(|&&(u, v)| mask[u] && mask[v]).count())
    }

    /// Number of edges with one end in `a` and the other in `b`.
    pub fn cross_edges(&self, a: &VertexSet, b: &VertexSet) -> Result<usize> {
        let ma = self.membership(a)?;
        let mb = self.membership(b)?;
        if ma.iter().zip(&mb).any(|(x, y)| *x && *y) {
            return Err(Error::InvalidVertexSet("sets overlap".into()));
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(u, v)| (ma[u] && mb[v]) || (mb[u] && ma[v]))
            .count())
    }

    /// `G[A]`: vertices of `a` relabelled `0..|a|` in increasing order.
    pub fn induced(&self, a: &VertexSet) -> Result<Induced> {
        let mask = self.membership(a)?;
        let vertex_map: Vec<VertexId> = a.as_slice().to_vec();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertex_map.iter().enumerate() {
            index[v] = i;
        }
        let mut graph = Multigraph::new(vertex_map.len());
        let mut edge_map = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if mask[u] && mask[v] {
                graph.edges.push((index[u], index[v]));
                edge_map.push(e);
            }
        }
        Ok(Induced {
            graph,
            vertex_map,
            edge_map,
        })
    }

    /// `G[A,B]` as a spanning factor: the edges joining `a` and `b`.
    pub fn bipartite_between(&self, a: &VertexSet, b: &VertexSet) -> Result<Factor> {
        let ma = self.membership(a)?;
        let mb = self.membership(b)?;
        if ma.iter().zip(&mb).any(|(x, y)| *x && *y) {
            return Err(Error::InvalidVertexSet("sets overlap".into()));
        }
        let ids = (0..self.edges.len()).filter(|&e| {
            let (u, v) = self.edges[e];
            (ma[u] && mb[v]) || (mb[u] && ma[v])
        });
        Factor::from_ids(self, ids)
    }

    /// Every edge repeated `t` times (copies of edge `e` get ids `e*t .. e*t+t`).
    pub fn multiply(&self, t: usize) -> Multigraph {
        let mut edges = Vec::with_capacity(self.edges.len() * t);
        for &e in &self.edges {
            for _ in 0..t {
                edges.push(e);
            }
        }
        Multigraph { n: self.n, edges }
    }

    /// Component label per vertex (labels dense from 0) and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        components_of(self.n, self.edges.iter().copied())
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().1 == 1
    }

    /// Proper 2-colouring (`true` = first class) if the graph is bipartite.
    /// Each component's colouring starts with its smallest vertex on the first side.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let inc = self.incidence();
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(true);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = color[u].unwrap();
                for &e in &inc[u] {
                    let w = self.other_end(e, u);
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// All degrees even.
    pub fn is_even(&self) -> bool {
        self.degrees().iter().all(|d| d % 2 == 0)
    }

    /// Graph on the same vertex set restricted to `ids` (renumbered in order).
    pub fn edge_subgraph(&self, ids: &[EdgeId]) -> Multigraph {
        Multigraph {
            n: self.n,
            edges: ids.iter().map(|&e| self.edges[e]).collect(),
        }
    }

    /// Same graph without its loops, plus the map back to host edge ids.
    pub fn without_loops(&self) -> (Multigraph, Vec<EdgeId>) {
        let ids: Vec<EdgeId> = (0..self.edge_count()).filter(|&e| !self.is_loop(e)).collect();
        (self.edge_subgraph(&ids), ids)
    }
}

pub(crate) fn cut_of_mask(edges: &[(VertexId, VertexId)], mask: &[bool]) -> usize {
    edges.iter().filter(|&&(u, v)| mask[u] != mask[v]).count()
}

pub(crate) fn components_of<I>(n: usize, edges: I) -> (Vec<usize>, usize)
where
    I: IntoIterator<Item = (VertexId, VertexId)>,
{
    let mut dsu = Dsu::new(n);
    for (u, v) in edges {
        dsu.union(u, v);
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut out = vec![0; n];
    for v in 0..n {
        let r = dsu.find(v);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        out[v] = label[r];
    }
    (out, count)
}

/// Union-find with path halving.
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Result of [`Multigraph::induced`].
#[derive(Clone, Debug)]
pub struct Induced {
    pub graph: Multigraph,
    /// New vertex index -> host vertex.
    pub vertex_map: Vec<VertexId>,
    /// New edge index -> host edge.
    pub edge_map: Vec<EdgeId>,
}

/// A vertex set stored as a sorted, deduplicated id list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = VertexId>>(ids: I) -> Self {
        let mut v: Vec<VertexId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
    }

    /// Bits of `bits` below `n` (for enumeration at n <= 64).
    pub fn from_bits(bits: u64, n: usize) -> Self {
        VertexSet((0..n).filter(|&i| bits >> i & 1 == 1).collect())
    }

    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            if v < n {
                m[v] = true;
            }
        }
        m
    }

    pub fn complement(&self, n: usize) -> Self {
        let m = self.to_mask(n);
        VertexSet((0..n).filter(|&v| !m[v]).collect())
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

/// Ordered pair `(X, Y)` partitioning the vertex set, stored as side flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    in_x: Vec<bool>,
}

impl Bipartition {
    pub fn from_x_mask(in_x: Vec<bool>) -> Self {
        Bipartition { in_x }
    }

    pub fn from_sets(n: usize, x: &VertexSet, y: &VertexSet) -> Result<Self> {
        let mx = x.to_mask(n);
        let my = y.to_mask(n);
        if x.as_slice().iter().chain(y.as_slice()).any(|&v| v >= n) {
            return Err(Error::InvalidVertexSet("vertex out of range".into()));
        }
        if (0..n).any(|v| mx[v] == my[v]) {
            return Err(Error::InvalidVertexSet("X and Y must partition V".into()));
        }
        Ok(Bipartition { in_x: mx })
    }

    /// `X` = bits set in `bits`.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        Bipartition {
            in_x: (0..n).map(|i| bits >> i & 1 == 1).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.in_x.len()
    }

    pub fn in_x(&self, v: VertexId) -> bool {
        self.in_x[v]
    }

    pub fn x_mask(&self) -> &[bool] {
        &self.in_x
    }

    pub fn x(&self) -> VertexSet {
        VertexSet::from_mask(&self.in_x)
    }

    pub fn y(&self) -> VertexSet {
        VertexSet((0..self.in_x.len()).filter(|&v| !self.in_x[v]).collect())
    }

    pub fn swapped(&self) -> Self {
        Bipartition {
            in_x: self.in_x.iter().map(|b| !b).collect(),
        }
    }

    /// `(e_G(X), e_G(Y))`.
    pub fn intra_counts(&self, g: &Multigraph) -> (usize, usize) {
        let mut ex = 0;
        let mut ey = 0;
        for &(u, v) in g.edges() {
            if self.in_x[u] && self.in_x[v] {
                ex += 1;
            } else if !self.in_x[u] && !self.in_x[v] {
                ey += 1;
            }
        }
        (ex, ey)
    }

    pub fn is_intra(&self, g: &Multigraph, e: EdgeId) -> bool {
        let (u, v) = g.endpoints(e);
        self.in_x[u] == self.in_x[v]
    }

    /// Edges of `G[X,Y]`.
    pub fn crossing(&self, g: &Multigraph) -> Factor {
        Factor::from_mask_unchecked(
            g,
            (0..g.edge_count()).map(|e| !self.is_intra(g, e)).collect(),
        )
    }
}

/// Per-vertex residues modulo `k`, stored reduced to `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueMap {
    modulus: usize,
    values: Vec<usize>,
}

impl ResidueMap {
    pub fn new(modulus: usize, values: &[i64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let k = modulus as i64;
        Ok(ResidueMap {
            modulus,
            values: values.iter().map(|&x| x.rem_euclid(k) as usize).collect(),
        })
    }

    pub fn constant(modulus: usize, n: usize, value: i64) -> Result<Self> {
        ResidueMap::new(modulus, &vec![value; n])
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: VertexId) -> usize {
        self.values[v]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn total(&self) -> usize {
        self.values.iter().sum()
    }

    /// Residue of `x` in this modulus.
    pub fn reduce(&self, x: i64) -> usize {
        x.rem_euclid(self.modulus as i64) as usize
    }

    pub fn matches(&self, v: VertexId, x: i64) -> bool {
        self.reduce(x) == self.values[v]
    }

    pub fn check_len(&self, g: &Multigraph) -> Result<()> {
        if self.values.len() == g.vertex_count() {
            Ok(())
        } else {
            precondition(format!(
                "residue map has {} values for {} vertices",
                self.values.len(),
                g.vertex_count()
            ))
        }
    }

    /// Pointwise `self - other` (same modulus).
    pub fn sub_degrees(&self, degrees: &[usize]) -> ResidueMap {
        let k = self.modulus as i64;
        ResidueMap {
            modulus: self.modulus,
            values: self
                .values
                .iter()
                .zip(degrees)
                .map(|(&a, &d)| (a as i64 - d as i64).rem_euclid(k) as usize)
                .collect(),
        }
    }
}

/// Per-vertex integer function (bounds, targets, indicators).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntFunc(pub Vec<i64>);

impl IntFunc {
    pub fn constant(n: usize, c: i64) -> Self {
        IntFunc(vec![c; n])
    }

    /// `chi_u`: 1 at `u`, 0 elsewhere.
    pub fn indicator(n: usize, u: VertexId) -> Self {
        IntFunc((0..n).map(|v| i64::from(v == u)).collect())
    }

    /// `1 - chi_u`.
    pub fn co_indicator(n: usize, u: VertexId) -> Self {
        IntFunc((0..n).map(|v| i64::from(v != u)).collect())
    }

    pub fn get(&self, v: VertexId) -> i64 {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// `[n]_k`: the representative of `n` modulo `k` in `{-1, 0, ..., k-2}`.
pub fn residue_normalize(n: i64, k: i64) -> Result<i64> {
    if k <= 0 {
        return Err(Error::ZeroModulus);
    }
    let r = n.rem_euclid(k);
    Ok(if r == k - 1 { -1 } else { r })
}

/// Spanning subgraph of a host, as an edge-id subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    host: u64,
    n: usize,
    member: Vec<bool>,
}

impl Factor {
    pub fn empty(host: &Multigraph) -> Self {
        Factor::from_mask_unchecked(host, vec![false; host.edge_count()])
    }

    pub fn full(host: &Multigraph) -> Self {
        Factor::from_mask_unchecked(host, vec![true; host.edge_count()])
    }

    pub fn from_ids<I: IntoIterator<Item = EdgeId>>(host: &Multigraph, ids: I) -> Result<Self> {
        let mut member = vec![false; host.edge_count()];
        for e in ids {
            if e >= member.len() {
                return Err(Error::UnknownEdge(e));
            }
            member[e] = true;
        }
        Ok(Factor::from_mask_unchecked(host, member))
    }

    pub fn from_mask(host: &Multigraph, member: Vec<bool>) -> Result<Self> {
        if member.len() != host.edge_count() {
            return Err(Error::Precondition("membership mask length differs from edge count".into()));
        }
        Ok(Factor::from_mask_unchecked(host, member))
    }

    pub(crate) fn from_mask_unchecked(host: &Multigraph, member: Vec<bool>) -> Self {
        debug_assert_eq!(member.len(), host.edge_count());
        Factor {
            host: host.fingerprint(),
            n: host.vertex_count(),
            member,
        }
    }

    pub fn check_host(&self, host: &Multigraph) -> Result<()> {
        if self.host == host.fingerprint() && self.member.len() == host.edge_count() {
            Ok(())
        } else {
            Err(Error::HostMismatch)
        }
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.member.get(e).copied().unwrap_or(false)
    }

    pub fn mask(&self) -> &[bool] {
        &self.member
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        (0..self.member.len()).filter(|&e| self.member[e]).collect()
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Degrees in the factor (loops count twice).
    pub fn degrees(&self, host: &Multigraph) -> Vec<usize> {
        let mut d = vec![0; host.vertex_count()];
        for (e, &(u, v)) in host.edges().iter().enumerate() {
            if self.member[e] {
                d[u] += 1;
                d[v] += 1;
            }
        }
        d
    }

    pub fn complement(&self) -> Factor {
        Factor {
            host: self.host,
            n: self.n,
            member: self.member.iter().map(|b| !b).collect(),
        }
    }

    /// Union of two edge-disjoint factors of the same host.
    pub fn union(&self, other: &Factor) -> Result<Factor> {
        if self.host != other.host || self.member.len() != other.member.len() {
            return Err(Error::HostMismatch);
        }
        if let Some(e) = (0..self.member.len()).find(|&e| self.member[e] && other.member[e]) {
            return Err(Error::Overlap(e));
        }
        Ok(Factor {
            host: self.host,
            n: self.n,
            member: self
                .member
                .iter()
                .zip(&other.member)
                .map(|(a, b)| *a || *b)
                .collect(),
        })
    }

    /// The factor as a graph on the host's vertex set plus the map to host edge ids.
    pub fn graph(&self, host: &Multigraph) -> (Multigraph, Vec<EdgeId>) {
        let ids = self.edge_ids();
        (host.edge_subgraph(&ids), ids)
    }
}

/// Direction of every edge of a loopless host. `flipped[e] == false` means
/// the edge points from its first stored endpoint to its second.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    host: u64,
    flipped: Vec<bool>,
}

impl Orientation {
    pub fn new(host: &Multigraph, flipped: Vec<bool>) -> Result<Self> {
        if !host.is_loopless() {
            return precondition("orientations are defined only on loopless graphs");
        }
        if flipped.len() != host.edge_count() {
            return precondition("direction vector length differs from edge count");
        }
        Ok(Orientation {
            host: host.fingerprint(),
            flipped,
        })
    }

    /// Orientation in which edge `e` leaves `tails[e]`.
    pub fn from_tails(host: &Multigraph, tails: &[VertexId]) -> Result<Self> {
        if tails.len() != host.edge_count() {
            return precondition("tail vector length differs from edge count");
        }
        let mut flipped = Vec::with_capacity(tails.len());
        for (e, &t) in tails.iter().enumerate() {
            let (u, v) = host.endpoints(e);
            if t == u {
                flipped.push(false);
            } else if t == v {
                flipped.push(true);
            } else {
                return precondition(format!("vertex {t} is not an end of edge {e}"));
            }
        }
        Orientation::new(host, flipped)
    }

    pub fn check_host(&self, host: &Multigraph) -> Result<()> {
        if self.host == host.fingerprint() && self.flipped.len() == host.edge_count() {
            Ok(())
        } else {
            Err(Error::HostMismatch)
        }
    }

    pub fn tail(&self, host: &Multigraph, e: EdgeId) -> VertexId {
        let (u, v) = host.endpoints(e);
        if self.flipped[e] {
            v
        } else {
            u
        }
    }

    pub fn head(&self, host: &Multigraph, e: EdgeId) -> VertexId {
        let (u, v) = host.endpoints(e);
        if self.flipped[e] {
            u
        } else {
            v
        }
    }

    pub fn out_degrees(&self, host: &Multigraph) -> Vec<usize> {
        let mut d = vec![0; host.vertex_count()];
        for e in 0..host.edge_count() {
            d[self.tail(host, e)] += 1;
        }
        d
    }

    pub fn in_degrees(&self, host: &Multigraph) -> Vec<usize> {
        let mut d = vec![0; host.vertex_count()];
        for e in 0..host.edge_count() {
            d[self.head(host, e)] += 1;
        }
        d
    }

    pub fn flipped(&self) -> &[bool] {
        &self.flipped
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Multigraph;

    pub fn cycle(n: usize) -> Multigraph {
        Multigraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Multigraph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Multigraph::from_edges(n, e).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
        let mut e = Vec::new();
        for i in 0..a {
            for j in 0..b {
                e.push((i, a + j));
            }
        }
        Multigraph::from_edges(a + b, e).unwrap()
    }

    pub fn path(n: usize) -> Multigraph {
        Multigraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn star(leaves: usize) -> Multigraph {
        Multigraph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn degree_examples() {
        assert!((0..4).all(|v| cycle(4).degree(v).unwrap() == 2));
        let lp = Multigraph::from_edges(1, [(0, 0)]).unwrap();
        assert_eq!(lp.degree(0).unwrap(), 2);
        assert!((0..4).all(|v| complete(4).degree(v).unwrap() == 3));
        assert_eq!(cycle(4).degree(9), Err(Error::UnknownVertex(9)));
    }

    #[test]
    fn cut_examples() {
        assert_eq!(cycle(4).cut_degree(&VertexSet::new([0, 1])).unwrap(), 2);
        assert_eq!(complete(4).cut_degree(&VertexSet::new([1, 3])).unwrap(), 4);
        assert_eq!(cycle(4).multiply(2).cut_degree(&VertexSet::new([2])).unwrap(), 4);
        assert!(cycle(4).cut_degree(&VertexSet::new([])).is_err());
        assert!(cycle(4).cut_degree(&VertexSet::new(0..4)).is_err());
    }

    #[test]
    fn internal_and_cross_examples() {
        let k4 = complete(4);
        assert_eq!(k4.internal_edges(&VertexSet::new([0, 1, 2])).unwrap(), 3);
        let c4 = cycle(4);
        assert_eq!(c4.internal_edges(&VertexSet::new([0, 2])).unwrap(), 0);
        assert_eq!(c4.internal_edges(&VertexSet::new([1, 3])).unwrap(), 0);
        assert_eq!(
            k4.cross_edges(&VertexSet::new([0, 1]), &VertexSet::new([2, 3])).unwrap(),
            4
        );
        assert!(k4.cross_edges(&VertexSet::new([0, 1]), &VertexSet::new([1, 3])).is_err());
        let lp = Multigraph::from_edges(2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(lp.internal_edges(&VertexSet::new([0])).unwrap(), 1);
    }

    #[test]
    fn induced_examples() {
        let k4 = complete(4);
        let h = k4
            .bipartite_between(&VertexSet::new([0, 1]), &VertexSet::new([2, 3]))
            .unwrap();
        let (g, _) = h.graph(&k4);
        assert_eq!(g.edge_count(), 4);
        assert!(g.degrees().iter().all(|&d| d == 2));
        assert!(g.is_connected() && g.is_bipartite());
        let whole = k4.induced(&VertexSet::new(0..4)).unwrap();
        assert_eq!(whole.graph, k4);
        let tri = complete(3);
        let p = tri
            .bipartite_between(&VertexSet::new([0]), &VertexSet::new([1, 2]))
            .unwrap();
        assert_eq!(p.edge_ids(), vec![0, 1]);
        assert_eq!(p.degrees(&tri), vec![2, 1, 1]);
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_normalize(5, 3).unwrap(), -1);
        for k in 1..6 {
            assert_eq!(residue_normalize(0, k).unwrap(), if k == 1 { -1 } else { 0 });
            assert_eq!(residue_normalize(k - 1, k).unwrap(), -1);
        }
        assert_eq!(residue_normalize(3, 0), Err(Error::ZeroModulus));
    }

    #[test]
    fn factor_algebra() {
        let c4 = cycle(4);
        let m1 = Factor::from_ids(&c4, [0, 2]).unwrap();
        assert_eq!(m1.complement().complement(), m1);
        assert_eq!(m1.union(&Factor::empty(&c4)).unwrap(), m1);
        assert_eq!(m1.complement().edge_ids(), vec![1, 3]);
        assert_eq!(m1.union(&m1), Err(Error::Overlap(0)));
        let other = Factor::empty(&complete(4));
        assert_eq!(m1.union(&other), Err(Error::HostMismatch));
    }

    #[test]
    fn orientation_rejects_loops() {
        let g = Multigraph::from_edges(1, [(0, 0)]).unwrap();
        assert!(Orientation::new(&g, vec![false]).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Multigraph> {
        (1usize..8).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..20)
                .prop_map(move |e| Multigraph::from_edges(n, e).unwrap())
        })
    }

    proptest! {
        #[test]
        fn handshake(g in arb_graph()) {
            prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        }

        #[test]
        fn cut_identity(g in arb_graph(), bits in any::<u64>()) {
            let n = g.vertex_count();
            let a = VertexSet::from_bits(bits, n);
            prop_assume!(!a.is_empty() && a.len() < n);
            let d = g.degrees();
            let sum: usize = a.as_slice().iter().map(|&v| d[v]).sum();
            prop_assert_eq!(g.cut_degree(&a).unwrap(), sum - 2 * g.internal_edges(&a).unwrap());
        }

        #[test]
        fn normalize_is_congruent(n in -1000i64..1000, k in 1i64..30) {
            let r = residue_normalize(n, k).unwrap();
            prop_assert_eq!((r - n).rem_euclid(k), 0);
            prop_assert!((-1..=k - 2).contains(&r));
        }

        #[test]
        fn degree_additivity(g in arb_graph(), bits in any::<u64>()) {
            let m = g.edge_count();
            let f1 = Factor::from_ids(&g, (0..m).filter(|e| bits >> e & 1 == 1)).unwrap();
            let f2 = f1.complement();
            let u = f1.union(&f2).unwrap();
            let (d1, d2, du) = (f1.degrees(&g), f2.degrees(&g), u.degrees(&g));
            for v in 0..g.vertex_count() {
                prop_assert_eq!(du[v], d1[v] + d2[v]);
            }
        }
    }
}
