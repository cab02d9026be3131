//! Consistency graphs, star finding and the 𝒲 pruning rule.

use crate::party::{PartyId, PartySet};

/// Undirected graph over parties with an edge (i, j) iff both OK(i, j) and
/// OK(j, i) were recorded. A party that declared OK(i, i) has a self-loop,
/// which counts towards its degree; star conditions ignore loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyGraph {
    n: usize,
    ok: Vec<u64>,
    pruned: PartySet,
}

impl ConsistencyGraph {
    pub fn new(n: usize) -> ConsistencyGraph {
        assert!(n <= 64, "at most 64 parties");
        ConsistencyGraph { n, ok: vec![0; n], pruned: PartySet::EMPTY }
    }

    /// Graph whose edge set is exactly `edges` (both votes recorded for each).
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (PartyId, PartyId)>) -> ConsistencyGraph {
        let mut g = ConsistencyGraph::new(n);
        for (a, b) in edges {
            g.record_ok(a, b);
            g.record_ok(b, a);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Records OK(i, j). Returns true if this created a new edge.
    pub fn record_ok(&mut self, i: PartyId, j: PartyId) -> bool {
        if i >= self.n || j >= self.n {
            return false;
        }
        let before = self.has_edge(i, j);
        self.ok[i] |= 1 << j;
        !before && self.has_edge(i, j)
    }

    pub fn has_ok(&self, i: PartyId, j: PartyId) -> bool {
        i < self.n && j < self.n && self.ok[i] >> j & 1 == 1
    }

    /// Removes every edge incident with `i`, now and in the future.
    pub fn prune(&mut self, i: PartyId) {
        self.pruned.insert(i);
    }

    pub fn has_edge(&self, i: PartyId, j: PartyId) -> bool {
        !self.pruned.contains(i)
            && !self.pruned.contains(j)
            && self.has_ok(i, j)
            && self.has_ok(j, i)
    }

    pub fn neighbors(&self, i: PartyId) -> PartySet {
        PartySet::from_iter((0..self.n).filter(|&j| self.has_edge(i, j)))
    }

    pub fn degree(&self, i: PartyId) -> usize {
        self.neighbors(i).len()
    }

    /// Subgraph keeping only edges with both endpoints in `keep`.
    pub fn induced(&self, keep: &PartySet) -> ConsistencyGraph {
        let mut g = self.clone();
        for i in 0..self.n {
            if !keep.contains(i) {
                g.prune(i);
            }
        }
        g
    }

    fn adjacency(&self) -> Vec<u64> {
        (0..self.n).map(|i| self.neighbors(i).0).collect()
    }
}

/// An (n, t)-star (E, F) in some host graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Star {
    pub e: PartySet,
    pub f: PartySet,
}

/// Checks the star conditions against `g` for bound `t`.
pub fn is_star(g: &ConsistencyGraph, star: &Star, t: usize) -> bool {
    let n = g.n();
    if !star.e.is_subset(&star.f) || star.e.len() + 2 * t < n || star.f.len() + t < n {
        return false;
    }
    if !star.f.is_subset(&PartySet::all(n)) {
        return false;
    }
    star.e.iter().all(|e| star.f.iter().all(|f| e == f || g.has_edge(e, f)))
}

/// Maximum matching in a general graph (Edmonds' blossom algorithm).
/// `adj[v]` is the neighbor bitmask of `v`. Returns the mate of every vertex.
pub fn max_matching(adj: &[u64]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    for root in 0..n {
        if mate[root].is_some() {
            continue;
        }
        if let Some(end) = augmenting_path(adj, &mate, root) {
            let (parent, mut v) = end;
            loop {
                let pv = parent[v].expect("path vertex has a parent");
                let ppv = mate[pv];
                mate[v] = Some(pv);
                mate[pv] = Some(v);
                match ppv {
                    Some(next) => v = next,
                    None => break,
                }
            }
        }
    }
    mate
}

fn augmenting_path(adj: &[u64], mate: &[Option<usize>], root: usize) -> Option<(Vec<Option<usize>>, usize)> {
    let n = adj.len();
    let mut used = vec![false; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut base: Vec<usize> = (0..n).collect();
    used[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);

    let lca = |base: &[usize], parent: &[Option<usize>], mut a: usize, mut b: usize| -> usize {
        let mut seen = vec![false; n];
        loop {
            a = base[a];
            seen[a] = true;
            match mate[a] {
                None => break,
                Some(m) => a = parent[m].expect("alternating tree"),
            }
        }
        loop {
            b = base[b];
            if seen[b] {
                return b;
            }
            b = parent[mate[b].expect("alternating tree")].expect("alternating tree");
        }
    };

    fn mark_path(
        base: &[usize],
        mate: &[Option<usize>],
        parent: &mut [Option<usize>],
        blossom: &mut [bool],
        mut v: usize,
        b: usize,
        mut child: usize,
    ) {
        while base[v] != b {
            let m = mate[v].expect("blossom vertex is matched");
            blossom[base[v]] = true;
            blossom[base[m]] = true;
            parent[v] = Some(child);
            child = m;
            v = parent[m].expect("alternating tree");
        }
    }

    while let Some(v) = queue.pop_front() {
        for to in 0..n {
            if adj[v] >> to & 1 == 0 || base[v] == base[to] || mate[v] == Some(to) {
                continue;
            }
            if to == root || mate[to].is_some_and(|m| parent[m].is_some()) {
                let cur = lca(&base, &parent, v, to);
                let mut blossom = vec![false; n];
                mark_path(&base, mate, &mut parent, &mut blossom, v, cur, to);
                mark_path(&base, mate, &mut parent, &mut blossom, to, cur, v);
                for i in 0..n {
                    if blossom[base[i]] {
                        base[i] = cur;
                        if !used[i] {
                            used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to].is_none() {
                parent[to] = Some(v);
                match mate[to] {
                    None => return Some((parent, to)),
                    Some(m) => {
                        used[m] = true;
                        queue.push_back(m);
                    }
                }
            }
        }
    }
    None
}

/// Looks for an (n, t)-star in `g`. Always succeeds when `g` contains a clique
/// of size at least n - t.
///
/// Works on the complement graph: take a maximum matching there, drop the
/// unmatched vertices that close a triangle with a matched pair, and pair the
/// remaining unmatched vertices (E) with everything that is not a matched
/// complement-neighbour of them (F).
pub fn find_star(g: &ConsistencyGraph, t: usize) -> Option<Star> {
    let n = g.n();
    let all = PartySet::all(n);
    let adj = g.adjacency();
    let comp: Vec<u64> = (0..n).map(|v| !adj[v] & all.0 & !(1 << v)).collect();
    let mate = max_matching(&comp);
    let matched = PartySet::from_iter((0..n).filter(|&v| mate[v].is_some()));
    let unmatched = all.minus(&matched);
    let mut heads = PartySet::EMPTY;
    for v in unmatched.iter() {
        let closes = matched.iter().any(|u| {
            let w = mate[u].unwrap();
            comp[v] >> u & 1 == 1 && comp[v] >> w & 1 == 1
        });
        if closes {
            heads.insert(v);
        }
    }
    let c = unmatched.minus(&heads);
    let b = PartySet::from_iter(matched.iter().filter(|&u| comp[u] & c.0 != 0));
    let star = Star { e: c, f: all.minus(&b) };
    if is_star(g, &star, t) {
        Some(star)
    } else {
        None
    }
}

/// The largest set obtained by starting from the parties of degree ≥ n - t_s
/// and repeatedly removing members with fewer than n - t_s neighbours inside.
pub fn compute_w(g: &ConsistencyGraph, t_s: usize) -> PartySet {
    let n = g.n();
    let need = n.saturating_sub(t_s);
    let mut w = PartySet::from_iter((0..n).filter(|&i| g.degree(i) >= need));
    loop {
        let drop = w.iter().find(|&i| g.neighbors(i).intersect(&w).len() < need);
        match drop {
            Some(i) => w.remove(i),
            None => return w,
        }
    }
}
