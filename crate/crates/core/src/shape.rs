//! Caterpillars, subdivided stars and their line graphs; P(H), legs and
//! simplicial vertices; connectifiers, their orders, and a bounded search
//! for a connectifier or an attached path.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Singleton,
    Caterpillar,
    LineOfCaterpillar,
    SubdividedStar,
    LineOfSubdividedStar,
}

impl ShapeKind {
    pub fn is_concentrated(self) -> bool {
        matches!(
            self,
            ShapeKind::Singleton | ShapeKind::SubdividedStar | ShapeKind::LineOfSubdividedStar
        )
    }
}

/// A tree whose edges are the vertices of a line graph H.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preimage {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    /// Tree edge index for each vertex of H.
    pub edge_of: BTreeMap<Vertex, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub kind: ShapeKind,
    pub vertices: VertexSet,
    /// P(H): the spine in order (for paths and caterpillar kinds), the root,
    /// or the root clique in increasing order.
    pub spine: Vec<Vertex>,
    pub legs: Vec<VertexSet>,
    /// Z(H): simplicial vertices.
    pub simplicial: VertexSet,
    pub is_path: bool,
    pub preimage: Option<Preimage>,
}

/// Tree structure over local ids `0..n`.
enum TreeForm {
    Path(Vec<usize>),
    Star(usize),
    Caterpillar(Vec<usize>),
}

/// Classifies a tree given by adjacency lists. `key(u, w)` ranks the
/// choices when extending the spine from an end branch vertex `u`.
fn tree_form(adj: &[Vec<usize>], key: &dyn Fn(usize, usize) -> usize) -> Option<TreeForm> {
    let n = adj.len();
    let deg = |v: usize| adj[v].len();
    let branch: Vec<usize> = (0..n).filter(|&v| deg(v) >= 3).collect();
    if branch.is_empty() {
        let start = (0..n).find(|&v| deg(v) <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&nx) = adj[cur].iter().find(|&&w| w != prev) {
            order.push(nx);
            prev = cur;
            cur = nx;
        }
        return Some(TreeForm::Path(order));
    }
    if branch.len() == 1 {
        return Some(TreeForm::Star(branch[0]));
    }
    if branch.iter().any(|&v| deg(v) > 3) {
        return None;
    }
    if branch.iter().any(|&u| adj[u].iter().any(|&w| deg(w) >= 3)) {
        return None;
    }
    // Strip non-branch leaves to get the minimal subtree on branch vertices.
    let mut alive = vec![true; n];
    let mut d: Vec<usize> = (0..n).map(deg).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| d[v] <= 1 && deg(v) < 3).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in &adj[v] {
            if alive[w] {
                d[w] -= 1;
                if d[w] == 1 && deg(w) < 3 {
                    stack.push(w);
                }
            }
        }
    }
    if (0..n).any(|v| alive[v] && d[v] > 2) {
        return None;
    }
    let ends: Vec<usize> = (0..n).filter(|&v| alive[v] && d[v] == 1).collect();
    if ends.len() != 2 {
        return None;
    }
    let mut core = vec![ends[0]];
    let mut prev = usize::MAX;
    let mut cur = ends[0];
    while cur != ends[1] {
        let nx = *adj[cur].iter().find(|&&w| alive[w] && w != prev)?;
        prev = cur;
        cur = nx;
        core.push(cur);
    }
    let extend = |end: usize, inner: usize| -> Vec<usize> {
        let first = *adj[end]
            .iter()
            .filter(|&&w| w != inner)
            .min_by_key(|&&w| key(end, w))
            .expect("branch end has outside neighbors");
        let mut out = vec![first];
        let (mut prev, mut cur) = (end, first);
        while let Some(&nx) = adj[cur].iter().find(|&&w| w != prev) {
            out.push(nx);
            prev = cur;
            cur = nx;
        }
        out
    };
    let mut head = extend(core[0], core[1]);
    head.reverse();
    let tail = extend(core[core.len() - 1], core[core.len() - 2]);
    let mut spine = head;
    spine.extend(core);
    spine.extend(tail);
    Some(TreeForm::Caterpillar(spine))
}

fn orient(mut v: Vec<Vertex>) -> Vec<Vertex> {
    if v.len() > 1 && v[v.len() - 1] < v[0] {
        v.reverse();
    }
    v
}

fn simplicial(g: &Graph, h: &VertexSet) -> VertexSet {
    h.iter()
        .copied()
        .filter(|&v| g.is_clique(&g.neighbors_in(v, h)))
        .collect()
}

fn finish(
    g: &Graph,
    h: &VertexSet,
    kind: ShapeKind,
    spine: Vec<Vertex>,
    is_path: bool,
    pre: Option<Preimage>,
) -> Shape {
    let ps: VertexSet = spine.iter().copied().collect();
    let rest: VertexSet = h.difference(&ps).copied().collect();
    Shape {
        kind,
        vertices: h.clone(),
        spine,
        legs: g.components_of(&rest),
        simplicial: simplicial(g, h),
        is_path,
        preimage: pre,
    }
}

/// Blocks (biconnected components, as vertex sets) of the graph on `h`.
fn blocks(g: &Graph, h: &VertexSet) -> Vec<VertexSet> {
    struct St<'a> {
        g: &'a Graph,
        h: &'a VertexSet,
        disc: BTreeMap<Vertex, usize>,
        low: BTreeMap<Vertex, usize>,
        time: usize,
        stack: Vec<(Vertex, Vertex)>,
        out: Vec<VertexSet>,
    }
    fn dfs(st: &mut St, u: Vertex, parent: Option<Vertex>) {
        st.time += 1;
        st.disc.insert(u, st.time);
        st.low.insert(u, st.time);
        let nbrs: Vec<Vertex> =
            st.g.neighbors(u)
                .iter()
                .copied()
                .filter(|w| st.h.contains(w))
                .collect();
        for w in nbrs {
            if Some(w) == parent {
                continue;
            }
            if !st.disc.contains_key(&w) {
                st.stack.push((u, w));
                dfs(st, w, Some(u));
                let lw = st.low[&w];
                if lw < st.low[&u] {
                    st.low.insert(u, lw);
                }
                if lw >= st.disc[&u] {
                    let mut b = VertexSet::new();
                    while let Some((x, y)) = st.stack.pop() {
                        b.insert(x);
                        b.insert(y);
                        if (x, y) == (u, w) {
                            break;
                        }
                    }
                    st.out.push(b);
                }
            } else if st.disc[&w] < st.disc[&u] {
                st.stack.push((u, w));
                let dw = st.disc[&w];
                if dw < st.low[&u] {
                    st.low.insert(u, dw);
                }
            }
        }
    }
    let mut st = St {
        g,
        h,
        disc: BTreeMap::new(),
        low: BTreeMap::new(),
        time: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    if let Some(&r) = h.iter().next() {
        dfs(&mut st, r, None);
    }
    st.out
}

/// A tree T with L(T) isomorphic to the graph on `h`, verified edge by edge.
pub fn line_graph_preimage(g: &Graph, h: &VertexSet) -> Option<Preimage> {
    if h.len() < 2 || !g.is_connected_set(h) {
        return None;
    }
    let bs = blocks(g, h);
    if bs.iter().any(|b| !g.is_clique(b)) {
        return None;
    }
    let mut member: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (i, b) in bs.iter().enumerate() {
        for &v in b {
            member.entry(v).or_default().push(i);
        }
    }
    let mut n = bs.len();
    let mut edges = Vec::new();
    let mut edge_of = BTreeMap::new();
    for &v in h {
        let ms = member.get(&v)?;
        let e = match ms.as_slice() {
            [a] => {
                n += 1;
                [*a, n - 1]
            }
            [a, b] => [*a, *b],
            _ => return None,
        };
        edge_of.insert(v, edges.len());
        edges.push(e);
    }
    let vs: Vec<Vertex> = h.iter().copied().collect();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let (a, b) = (edges[edge_of[&vs[i]]], edges[edge_of[&vs[j]]]);
            let share = a.iter().any(|x| b.contains(x));
            if share != g.has_edge(vs[i], vs[j]) {
                return None;
            }
        }
    }
    Some(Preimage { n, edges, edge_of })
}

/// Recognizes the five shape kinds on the subgraph induced by `h`.
pub fn classify_shape(g: &Graph, h: &VertexSet) -> Result<Option<Shape>> {
    g.check_set(h)?;
    if h.is_empty() || !g.is_connected_set(h) {
        return Err(Error::input("H must induce a nonempty connected graph"));
    }
    if h.len() == 1 {
        let v: Vec<Vertex> = h.iter().copied().collect();
        return Ok(Some(finish(g, h, ShapeKind::Singleton, v, true, None)));
    }
    let local: Vec<Vertex> = h.iter().copied().collect();
    let idx: BTreeMap<Vertex, usize> = local.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m: usize = local
        .iter()
        .map(|&v| g.neighbors_in(v, h).len())
        .sum::<usize>()
        / 2;
    if m + 1 == h.len() {
        let adj: Vec<Vec<usize>> = local
            .iter()
            .map(|&v| g.neighbors_in(v, h).iter().map(|w| idx[w]).collect())
            .collect();
        let key = |_u: usize, w: usize| local[w];
        let shape = match tree_form(&adj, &key) {
            Some(TreeForm::Path(p)) => {
                let spine = orient(p.into_iter().map(|i| local[i]).collect());
                finish(g, h, ShapeKind::Caterpillar, spine, true, None)
            }
            Some(TreeForm::Star(r)) => {
                finish(g, h, ShapeKind::SubdividedStar, vec![local[r]], false, None)
            }
            Some(TreeForm::Caterpillar(p)) => {
                let spine = orient(p.into_iter().map(|i| local[i]).collect());
                finish(g, h, ShapeKind::Caterpillar, spine, false, None)
            }
            None => return Ok(None),
        };
        return Ok(Some(shape));
    }
    let Some(pre) = line_graph_preimage(g, h) else {
        return Ok(None);
    };
    let mut adj = vec![Vec::new(); pre.n];
    let mut hv_of_edge: BTreeMap<(usize, usize), Vertex> = BTreeMap::new();
    for (&v, &e) in &pre.edge_of {
        let [a, b] = pre.edges[e];
        adj[a].push(b);
        adj[b].push(a);
        hv_of_edge.insert((a.min(b), a.max(b)), v);
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let hv = |a: usize, b: usize| hv_of_edge[&(a.min(b), a.max(b))];
    let key = |u: usize, w: usize| hv(u, w);
    let shape = match tree_form(&adj, &key) {
        Some(TreeForm::Star(r)) => {
            let clique: Vec<Vertex> = adj[r]
                .iter()
                .map(|&w| hv(r, w))
                .collect::<VertexSet>()
                .into_iter()
                .collect();
            finish(
                g,
                h,
                ShapeKind::LineOfSubdividedStar,
                clique,
                false,
                Some(pre),
            )
        }
        Some(TreeForm::Caterpillar(p)) => {
            let spine = orient(p.windows(2).map(|w| hv(w[0], w[1])).collect());
            finish(g, h, ShapeKind::LineOfCaterpillar, spine, false, Some(pre))
        }
        // A path preimage means H is a path, which the tree branch handles.
        Some(TreeForm::Path(_)) | None => return Ok(None),
    };
    Ok(Some(shape))
}

/// A connectifier (H, X): each x has a unique neighbor in H and those
/// neighbors are exactly the simplicial vertices of H; or H is a single
/// vertex adjacent to all of X.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectifier {
    pub shape: Shape,
    pub x: Vec<Vertex>,
    pub attach: BTreeMap<Vertex, Vertex>,
}

impl Connectifier {
    pub fn is_concentrated(&self) -> bool {
        self.shape.kind.is_concentrated()
    }
}

pub fn make_connectifier(g: &Graph, shape: Shape, x: &VertexSet) -> Result<Connectifier> {
    g.check_set(x)?;
    let h = &shape.vertices;
    if !h.is_disjoint(x) {
        return Err(Error::contract("X meets H"));
    }
    let mut attach = BTreeMap::new();
    for &v in x {
        let nb = g.neighbors_in(v, h);
        if shape.kind == ShapeKind::Singleton {
            if nb.is_empty() {
                return Err(Error::contract(format!(
                    "{v} is not adjacent to the singleton"
                )));
            }
        } else if nb.len() != 1 {
            return Err(Error::contract(format!(
                "{v} has {} neighbors in H",
                nb.len()
            )));
        }
        attach.insert(v, *nb.iter().next().unwrap());
    }
    if shape.kind != ShapeKind::Singleton {
        let hit: VertexSet = attach.values().copied().collect();
        if hit != shape.simplicial {
            return Err(Error::contract(
                "N_H(X) differs from the simplicial vertices of H",
            ));
        }
    }
    Ok(Connectifier {
        shape,
        x: x.iter().copied().collect(),
        attach,
    })
}

/// The order on X given by a non-concentrated connectifier: legs are ordered
/// by where they meet P(H), and X follows its legs. Vertices attached on
/// P(H) itself take their spine position.
pub fn connectifier_order(g: &Graph, c: &Connectifier) -> Result<Vec<Vertex>> {
    if c.is_concentrated() {
        return Err(Error::contract("concentrated connectifiers carry no order"));
    }
    let spine = &c.shape.spine;
    let pos: BTreeMap<Vertex, usize> = spine.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut keyed = Vec::new();
    for &x in &c.x {
        let z = c.attach[&x];
        let (lo, hi) = if let Some(&i) = pos.get(&z) {
            (i, i)
        } else {
            let leg = c
                .shape
                .legs
                .iter()
                .find(|l| l.contains(&z))
                .ok_or_else(|| Error::contract("attachment outside H"))?;
            let idx: Vec<usize> = leg
                .iter()
                .flat_map(|&v| g.neighbors(v).iter().filter_map(|w| pos.get(w).copied()))
                .collect();
            match (idx.iter().min(), idx.iter().max()) {
                (Some(&a), Some(&b)) => (a, b),
                _ => return Err(Error::contract("leg does not meet P(H)")),
            }
        };
        keyed.push((lo + hi, x));
    }
    keyed.sort();
    if keyed.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::contract(
            "two vertices of X share a leg; order undefined",
        ));
    }
    Ok(keyed.into_iter().map(|(_, x)| x).collect())
}

#[derive(Clone, Copy, Debug)]
pub struct ConnectOptions {
    /// Maximum number of candidate subgraphs examined.
    pub budget: usize,
    pub allow_singleton: bool,
    /// Require exactly one vertex of S' per simplicial vertex of H.
    pub one_per_attachment: bool,
    pub max_size: Option<usize>,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        ConnectOptions {
            budget: 200_000,
            allow_singleton: true,
            one_per_attachment: true,
            max_size: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum ConnectOutcome {
    Connectifier(Connectifier),
    /// H is a path and every vertex of `x` has a neighbor in it.
    Path {
        path: Vec<Vertex>,
        x: Vec<Vertex>,
    },
}

impl ConnectOutcome {
    pub fn x(&self) -> &[Vertex] {
        match self {
            ConnectOutcome::Connectifier(c) => &c.x,
            ConnectOutcome::Path { x, .. } => x,
        }
    }

    pub fn h(&self) -> VertexSet {
        match self {
            ConnectOutcome::Connectifier(c) => c.shape.vertices.clone(),
            ConnectOutcome::Path { path, .. } => path.iter().copied().collect(),
        }
    }
}

fn rank(o: &ConnectOutcome) -> usize {
    match o {
        ConnectOutcome::Path { .. } => 1,
        ConnectOutcome::Connectifier(c) => match c.shape.kind {
            ShapeKind::Singleton => 0,
            ShapeKind::Caterpillar => 2,
            ShapeKind::LineOfCaterpillar => 3,
            ShapeKind::SubdividedStar => 4,
            ShapeKind::LineOfSubdividedStar => 5,
        },
    }
}

fn try_candidate(
    g: &Graph,
    s: &VertexSet,
    hset: &VertexSet,
    h: usize,
    opts: &ConnectOptions,
) -> Result<Option<ConnectOutcome>> {
    let Some(shape) = classify_shape(g, hset)? else {
        return Ok(None);
    };
    if shape.kind == ShapeKind::Singleton {
        if !opts.allow_singleton {
            return Ok(None);
        }
        let v = *hset.iter().next().unwrap();
        let xs: VertexSet = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|u| s.contains(u))
            .take(h)
            .collect();
        if xs.len() < h {
            return Ok(None);
        }
        return Ok(Some(ConnectOutcome::Connectifier(make_connectifier(
            g, shape, &xs,
        )?)));
    }
    if shape.is_path {
        let xs: Vec<Vertex> = s
            .iter()
            .copied()
            .filter(|&x| !g.neighbors_in(x, hset).is_empty())
            .take(h)
            .collect();
        if xs.len() == h {
            return Ok(Some(ConnectOutcome::Path {
                path: shape.spine.clone(),
                x: xs,
            }));
        }
    }
    if shape.simplicial.len() > h || (opts.one_per_attachment && shape.simplicial.len() != h) {
        return Ok(None);
    }
    let mut by_z: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &x in s {
        let nb = g.neighbors_in(x, hset);
        if nb.len() == 1 {
            let z = *nb.iter().next().unwrap();
            if shape.simplicial.contains(&z) {
                by_z.entry(z).or_default().push(x);
            }
        }
    }
    if by_z.len() != shape.simplicial.len() {
        return Ok(None);
    }
    let mut chosen: VertexSet = by_z.values().map(|v| v[0]).collect();
    let mut spare: Vec<Vertex> = by_z.values().flat_map(|v| v[1..].iter().copied()).collect();
    spare.sort_unstable();
    for x in spare {
        if chosen.len() >= h {
            break;
        }
        chosen.insert(x);
    }
    if chosen.len() < h {
        return Ok(None);
    }
    Ok(Some(ConnectOutcome::Connectifier(make_connectifier(
        g, shape, &chosen,
    )?)))
}

/// Searches connected induced subgraphs H of G \ S by increasing size for
/// an h-subset S' of S with (H, S') a connectifier, or H a path meeting
/// every vertex of S'. Among hits of the smallest size, the preferred kind
/// is singleton, path, caterpillar, line of caterpillar, subdivided star,
/// line of subdivided star; ties go to the lexicographically least H.
pub fn find_connectifier(
    g: &Graph,
    s: &VertexSet,
    h: usize,
    opts: &ConnectOptions,
) -> Result<ConnectOutcome> {
    g.check_set(s)?;
    if h == 0 {
        return Err(Error::input("h must be positive"));
    }
    let rest: VertexSet = g.vertices().filter(|v| !s.contains(v)).collect();
    if rest.is_empty() || !g.is_connected_set(&rest) {
        return Err(Error::input("G \\ S must be nonempty and connected"));
    }
    if let Some(&v) = s
        .iter()
        .find(|&&v| g.neighbors(v).iter().all(|u| s.contains(u)))
    {
        return Err(Error::input(format!("{v} has no neighbor outside S")));
    }
    let max_size = opts.max_size.unwrap_or(rest.len()).min(rest.len());
    let mut level: BTreeSet<Vec<Vertex>> = rest.iter().map(|&v| vec![v]).collect();
    let mut examined = 0usize;
    for _size in 1..=max_size {
        let mut best: Option<((usize, Vec<Vertex>), ConnectOutcome)> = None;
        for hv in &level {
            examined += 1;
            if examined > opts.budget {
                return Err(Error::resource("connectifier search budget exhausted"));
            }
            let hset: VertexSet = hv.iter().copied().collect();
            if let Some(o) = try_candidate(g, s, &hset, h, opts)? {
                let key = (rank(&o), hv.clone());
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, o));
                }
            }
        }
        if let Some((_, o)) = best {
            return Ok(o);
        }
        let mut next = BTreeSet::new();
        for hv in &level {
            let hset: VertexSet = hv.iter().copied().collect();
            for &v in hv {
                for &w in g.neighbors(v) {
                    if rest.contains(&w) && !hset.contains(&w) {
                        let mut nv = hv.clone();
                        let pos = nv.binary_search(&w).unwrap_err();
                        nv.insert(pos, w);
                        next.insert(nv);
                    }
                }
            }
            if next.len() > opts.budget {
                return Err(Error::resource("connectifier search budget exhausted"));
            }
        }
        level = next;
    }
    Err(Error::resource(
        "no connectifier or path found within the size bound",
    ))
}
