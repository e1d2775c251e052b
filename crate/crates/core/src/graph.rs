//! Simple undirected graphs over dense `0..n` vertex ids and the basic
//! queries everything else is built on: neighborhoods, components,
//! separations, induced paths and holes, and exact stable sets.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

/// Largest vertex set handed to [`Graph::max_stable`] by default.
pub const DEFAULT_STABLE_CAP: usize = 30;

/// Immutable simple graph. Adjacency lists are sorted and symmetric.
/// Serializes as `{"n": .., "edges": [[u, v], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "crate::io::GraphDoc", into = "crate::io::GraphDoc")]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
}

/// Incremental construction helper; duplicate edges are ignored and loops
/// rejected at `add_edge` time.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    adj: Vec<BTreeSet<Vertex>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        assert!(u != v, "loop at vertex {u}");
        assert!(
            u < self.adj.len() && v < self.adj.len(),
            "edge {u}-{v} out of range"
        );
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    /// Adds the edges of the path `vs[0] - vs[1] - ...`.
    pub fn add_path(&mut self, vs: &[Vertex]) {
        for w in vs.windows(2) {
            self.add_edge(w[0], w[1]);
        }
    }

    /// Appends `len` fresh vertices forming a path and returns them in order.
    pub fn new_path(&mut self, len: usize) -> Vec<Vertex> {
        let vs: Vec<Vertex> = (0..len).map(|_| self.add_vertex()).collect();
        self.add_path(&vs);
        vs
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn build(self) -> Graph {
        Graph {
            adj: self
                .adj
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
        }
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::input(format!("loop at vertex {u}")));
            }
            if !adj[u].insert(v) {
                return Err(Error::input(format!("duplicate edge {u}-{v}")));
            }
            adj[v].insert(u);
        }
        Ok(Graph {
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle")
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("clique")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Graph::from_edges(a + b, &edges).expect("biclique")
    }

    /// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i ~ i+5.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Graph::from_edges(10, &edges).expect("petersen")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "vertex {v} out of range for n={}",
                self.n()
            )))
        }
    }

    pub fn check_set<'a>(&self, xs: impl IntoIterator<Item = &'a Vertex>) -> Result<()> {
        xs.into_iter().try_for_each(|&v| self.check_vertex(v))
    }

    /// N[X]: X together with every vertex having a neighbor in X.
    pub fn closed_neighborhood(&self, xs: &VertexSet) -> Result<VertexSet> {
        self.check_set(xs)?;
        let mut out = xs.clone();
        for &x in xs {
            out.extend(self.adj[x].iter().copied());
        }
        Ok(out)
    }

    /// N(X) = N[X] \ X.
    pub fn open_neighborhood(&self, xs: &VertexSet) -> Result<VertexSet> {
        let mut out = self.closed_neighborhood(xs)?;
        out.retain(|v| !xs.contains(v));
        Ok(out)
    }

    /// N_Y(x): neighbors of `x` inside `ys`.
    pub fn neighbors_in(&self, x: Vertex, ys: &VertexSet) -> VertexSet {
        self.adj[x]
            .iter()
            .copied()
            .filter(|v| ys.contains(v))
            .collect()
    }

    /// Connected components of G minus `removed`, ordered by smallest vertex.
    pub fn components(&self, removed: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_set(removed)?;
        let allowed: Vec<bool> = self.vertices().map(|v| !removed.contains(&v)).collect();
        Ok(self.components_masked(&allowed))
    }

    /// Components of the subgraph induced by `keep`.
    pub fn components_of(&self, keep: &VertexSet) -> Vec<VertexSet> {
        let allowed: Vec<bool> = self.vertices().map(|v| keep.contains(&v)).collect();
        self.components_masked(&allowed)
    }

    fn components_masked(&self, allowed: &[bool]) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if !allowed[s] || seen[s] {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                for &v in &self.adj[u] {
                    if allowed[v] && !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected_set(&self, xs: &VertexSet) -> bool {
        !xs.is_empty() && self.components_of(xs).len() == 1
    }

    /// Whether `m` separates `a` from `b`: no path from A to B avoids M.
    pub fn separates(&self, m: &VertexSet, a: &VertexSet, b: &VertexSet) -> Result<bool> {
        self.check_set(m.iter().chain(a).chain(b))?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::input("separated sets must be nonempty"));
        }
        if !a.is_disjoint(m) || !b.is_disjoint(m) || !a.is_disjoint(b) {
            return Err(Error::input("A, B and M must be pairwise disjoint"));
        }
        let comps = self.components(m)?;
        Ok(!comps.iter().any(|c| !c.is_disjoint(a) && !c.is_disjoint(b)))
    }

    /// The separation (L, M, R) witnessing `separates`, if any.
    pub fn separation(
        &self,
        m: &VertexSet,
        a: &VertexSet,
        b: &VertexSet,
    ) -> Result<Option<Separation>> {
        if !self.separates(m, a, b)? {
            return Ok(None);
        }
        let mut left = VertexSet::new();
        let mut right = VertexSet::new();
        for c in self.components(m)? {
            if c.is_disjoint(a) {
                right.extend(c);
            } else {
                left.extend(c);
            }
        }
        Ok(Some(Separation {
            left,
            middle: m.clone(),
            right,
        }))
    }

    pub fn is_stable(&self, xs: &VertexSet) -> bool {
        xs.iter()
            .all(|&u| self.adj[u].iter().all(|v| !xs.contains(v)))
    }

    pub fn is_clique(&self, xs: &VertexSet) -> bool {
        xs.iter()
            .all(|&u| xs.iter().all(|&v| u == v || self.has_edge(u, v)))
    }

    /// X and Y complete: disjoint and every pair adjacent.
    pub fn complete_between(&self, xs: &VertexSet, ys: &VertexSet) -> bool {
        xs.is_disjoint(ys) && xs.iter().all(|&x| ys.iter().all(|&y| self.has_edge(x, y)))
    }

    /// X and Y anticomplete: disjoint and no edges between them.
    pub fn anticomplete_between(&self, xs: &VertexSet, ys: &VertexSet) -> bool {
        xs.is_disjoint(ys)
            && xs
                .iter()
                .all(|&x| self.adj[x].iter().all(|y| !ys.contains(y)))
    }

    /// Induced path check: consecutive vertices adjacent, all others not,
    /// no repeats.
    pub fn is_induced_path(&self, vs: &[Vertex]) -> bool {
        if vs.is_empty() || vs.iter().any(|&v| v >= self.n()) {
            return false;
        }
        let distinct: VertexSet = vs.iter().copied().collect();
        if distinct.len() != vs.len() {
            return false;
        }
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if self.has_edge(vs[i], vs[j]) != (j == i + 1) {
                    return false;
                }
            }
        }
        true
    }

    /// Hole check: the cyclic sequence is an induced cycle of length >= 4.
    pub fn is_hole(&self, vs: &[Vertex]) -> bool {
        let k = vs.len();
        if k < 4 || vs.iter().any(|&v| v >= self.n()) {
            return false;
        }
        let distinct: VertexSet = vs.iter().copied().collect();
        if distinct.len() != k {
            return false;
        }
        for i in 0..k {
            for j in i + 1..k {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                if self.has_edge(vs[i], vs[j]) != consecutive {
                    return false;
                }
            }
        }
        true
    }

    /// Subgraph induced by `keep`; returns it with the new-to-old id map.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<Vertex>) {
        let old: Vec<Vertex> = keep.iter().copied().collect();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = old
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&u| new_id[u] != usize::MAX)
                    .map(|&u| new_id[u])
                    .collect()
            })
            .collect();
        (Graph { adj }, old)
    }

    /// Shortest path from `from` to any vertex of `targets` whose interior
    /// stays in `interior`. The start is not expanded through `targets`.
    /// Shortest paths through an allowed set are induced.
    pub fn shortest_path_via(
        &self,
        from: Vertex,
        targets: &VertexSet,
        interior: &VertexSet,
    ) -> Option<Vec<Vertex>> {
        if targets.contains(&from) {
            return Some(vec![from]);
        }
        let mut prev = vec![usize::MAX; self.n()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if prev[v] != usize::MAX {
                    continue;
                }
                if targets.contains(&v) {
                    let mut path = vec![v, u];
                    let mut cur = u;
                    while cur != from {
                        cur = prev[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                if interior.contains(&v) {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// Exact maximum stable set of G[X] under the default cap.
    pub fn max_stable(&self, xs: &VertexSet) -> Result<(usize, VertexSet)> {
        self.max_stable_with_cap(xs, DEFAULT_STABLE_CAP)
    }

    /// Exact maximum stable set of G[X]. The witness is the lexicographically
    /// least maximum stable set (sorted vertex lists compared element-wise).
    pub fn max_stable_with_cap(&self, xs: &VertexSet, cap: usize) -> Result<(usize, VertexSet)> {
        self.check_set(xs)?;
        if xs.len() > cap.min(64) {
            return Err(Error::resource(format!(
                "stable-set brute force on {} vertices exceeds cap {}",
                xs.len(),
                cap.min(64)
            )));
        }
        let verts: Vec<Vertex> = xs.iter().copied().collect();
        let k = verts.len();
        let mut nbr = vec![0u64; k];
        for i in 0..k {
            for j in 0..k {
                if i != j && self.has_edge(verts[i], verts[j]) {
                    nbr[i] |= 1 << j;
                }
            }
        }
        let mut search = StableSearch {
            nbr: &nbr,
            best: 0,
            best_mask: 0,
            found: false,
        };
        let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        search.run(all, 0, 0);
        let witness = (0..k)
            .filter(|&i| search.best_mask >> i & 1 == 1)
            .map(|i| verts[i])
            .collect();
        Ok((search.best, witness))
    }

    pub fn alpha(&self, xs: &VertexSet) -> Result<usize> {
        self.max_stable(xs).map(|(a, _)| a)
    }
}

struct StableSearch<'a> {
    nbr: &'a [u64],
    best: usize,
    best_mask: u64,
    found: bool,
}

impl StableSearch<'_> {
    // Include-first DFS in increasing index order visits equal-size sets in
    // lexicographic order, so the first maximum found is the least one.
    fn run(&mut self, cand: u64, chosen: u64, size: usize) {
        if cand == 0 {
            if size > self.best || !self.found {
                self.best = size;
                self.best_mask = chosen;
                self.found = true;
            }
            return;
        }
        if size + cand.count_ones() as usize <= self.best && self.found {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        let bit = 1u64 << v;
        self.run(cand & !bit & !self.nbr[v], chosen | bit, size + 1);
        self.run(cand & !bit, chosen, size);
    }
}

/// A separation (L, M, R): a partition of V(G) with L, R nonempty and
/// anticomplete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub left: VertexSet,
    pub middle: VertexSet,
    pub right: VertexSet,
}

impl Separation {
    pub fn is_valid(&self, g: &Graph) -> bool {
        let covered: usize = self.left.len() + self.middle.len() + self.right.len();
        let union: VertexSet = self
            .left
            .iter()
            .chain(&self.middle)
            .chain(&self.right)
            .copied()
            .collect();
        covered == g.n()
            && union.len() == g.n()
            && union.iter().all(|&v| v < g.n())
            && !self.left.is_empty()
            && !self.right.is_empty()
            && g.anticomplete_between(&self.left, &self.right)
    }
}

/// An induced path given by its vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathWitness {
    pub vertices: Vec<Vertex>,
}

impl PathWitness {
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Self> {
        if !g.is_induced_path(&vertices) {
            return Err(Error::input(format!("{vertices:?} is not an induced path")));
        }
        Ok(PathWitness { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn ends(&self) -> (Vertex, Vertex) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    /// P*: the path without its ends.
    pub fn interior(&self) -> VertexSet {
        if self.vertices.len() <= 2 {
            return VertexSet::new();
        }
        self.vertices[1..self.vertices.len() - 1]
            .iter()
            .copied()
            .collect()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }

    pub fn reversed(&self) -> PathWitness {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        PathWitness { vertices }
    }
}

pub fn set<I: IntoIterator<Item = Vertex>>(it: I) -> VertexSet {
    it.into_iter().collect()
}
