//! Maximum-cardinality matching: Edmonds' blossom algorithm for general
//! simple graphs, and augmenting paths for bipartite multigraphs.

use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// Maximum matching of a simple graph given by adjacency lists.
/// Returns `mate[v]` (`None` when unmatched).
pub fn max_matching(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut b = Blossom::new(adj);
    b.greedy();
    for v in 0..adj.len() {
        if b.mate[v] == NONE {
            let end = b.find_path(v);
            if end != NONE {
                b.augment(end);
            }
        }
    }
    b.mate.iter().map(|&m| (m != NONE).then_some(m)).collect()
}

/// Convenience: is there a perfect matching? Returns it when there is.
pub fn perfect_matching(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mate = max_matching(adj);
    mate.into_iter().collect()
}

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn greedy(&mut self) {
        for v in 0..self.adj.len() {
            if self.mate[v] != NONE {
                continue;
            }
            if let Some(&w) = self.adj[v].iter().find(|&&w| w != v && self.mate[w] == NONE) {
                self.mate[v] = w;
                self.mate[w] = v;
            }
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> usize {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for i in 0..self.adj[v].len() {
                let to = self.adj[v][i];
                if to == v || self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for u in 0..n {
                        if self.in_blossom[self.base[u]] {
                            self.base[u] = cur;
                            if !self.used[u] {
                                self.used[u] = true;
                                self.queue.push_back(u);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        NONE
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// Maximum matching in a bipartite multigraph with `left` and `right` sides.
/// `edges[i] = (l, r)`; returns, per left vertex, the index of its matched edge.
pub fn bipartite_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); left];
    for (i, &(l, _)) in edges.iter().enumerate() {
        adj[l].push(i);
    }
    let mut match_right: Vec<Option<usize>> = vec![None; right];
    let mut match_left: Vec<Option<usize>> = vec![None; left];
    for l in 0..left {
        let mut seen = vec![false; right];
        try_kuhn(l, &adj, edges, &mut seen, &mut match_right, &mut match_left);
    }
    match_left
}

fn try_kuhn(
    l: usize,
    adj: &[Vec<usize>],
    edges: &[(usize, usize)],
    seen: &mut [bool],
    match_right: &mut [Option<usize>],
    match_left: &mut [Option<usize>],
) -> bool {
    for &e in &adj[l] {
        let r = edges[e].1;
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let free = match match_right[r] {
            None => true,
            Some(e2) => try_kuhn(edges[e2].0, adj, edges, seen, match_right, match_left),
        };
        if free {
            match_right[r] = Some(e);
            match_left[l] = Some(e);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut a = vec![Vec::new(); n];
        for &(u, v) in edges {
            a[u].push(v);
            a[v].push(u);
        }
        a
    }

    #[test]
    fn odd_cycle_with_tail_needs_blossom() {
        // 5-cycle 0..4 plus pendant 5 on vertex 0: perfect matching on 6 vertices.
        let a = adj(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)]);
        let m = perfect_matching(&a).expect("perfect matching exists");
        for v in 0..6 {
            assert_eq!(m[m[v]], v);
        }
    }

    #[test]
    fn triangle_has_no_perfect_matching() {
        let a = adj(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(perfect_matching(&a).is_none());
        assert_eq!(max_matching(&a).iter().filter(|m| m.is_some()).count(), 2);
    }

    #[test]
    fn petersen_is_perfectly_matchable() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        assert!(perfect_matching(&adj(10, &e)).is_some());
    }

    #[test]
    fn bipartite_basic() {
        let e = [(0, 0), (0, 1), (1, 0)];
        let m = bipartite_matching(2, 2, &e);
        assert!(m.iter().all(|x| x.is_some()));
    }
}
