//! (T, a)-strip-structures over smooth trees: axiom validation, rungs,
//! the tame / substantial / rich predicates, the pointwise order, and the
//! strip-structure carried by a pyramid with a trapped apex.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::detect::PyramidWitness;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

/// Upper bound on enumerated rungs per edge.
pub const RUNG_LIMIT: usize = 100_000;

/// A tree on `0..n` with at least three vertices and no vertex of degree two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothTree {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl SmoothTree {
    /// The star K_{1,k} with center 0 and edge `i` joining 0 and `i + 1`.
    pub fn star(k: usize) -> SmoothTree {
        SmoothTree {
            n: k + 1,
            edges: (1..=k).map(|i| [0, i]).collect(),
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    pub fn incident(&self, e: usize, v: usize) -> bool {
        self.edges[e].contains(&v)
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        if self.n < 3 {
            return Err("tree needs at least three vertices".into());
        }
        if self.edges.len() + 1 != self.n {
            return Err("a tree on n vertices has n - 1 edges".into());
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &[u, v] in &self.edges {
            if u >= self.n || v >= self.n || u == v {
                return Err(format!("bad tree edge {u}-{v}"));
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return Err("tree edges contain a cycle".into());
            }
            parent[ru] = rv;
        }
        if let Some(v) = (0..self.n).find(|&v| self.degree(v) == 2) {
            return Err(format!("tree vertex {v} has degree two"));
        }
        Ok(())
    }
}

mod ends_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        edge: usize,
        vertex: usize,
        set: VertexSet,
    }

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<(usize, usize), VertexSet>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Entry> = m
            .iter()
            .map(|(&(edge, vertex), set)| Entry {
                edge,
                vertex,
                set: set.clone(),
            })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<(usize, usize), VertexSet>, D::Error> {
        let v: Vec<Entry> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|e| ((e.edge, e.vertex), e.set)).collect())
    }
}

/// The map η with its host graph, apex and tree. Missing η(e, v) entries
/// are empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripStructure {
    pub graph: Graph,
    pub apex: Vertex,
    pub tree: SmoothTree,
    pub eta_vertex: Vec<VertexSet>,
    pub eta_edge: Vec<VertexSet>,
    #[serde(with = "ends_serde")]
    pub eta_ends: BTreeMap<(usize, usize), VertexSet>,
}

static EMPTY: VertexSet = BTreeSet::new();

impl StripStructure {
    pub fn eta_v(&self, v: usize) -> &VertexSet {
        self.eta_vertex.get(v).unwrap_or(&EMPTY)
    }

    pub fn eta_e(&self, e: usize) -> &VertexSet {
        self.eta_edge.get(e).unwrap_or(&EMPTY)
    }

    pub fn eta_ev(&self, e: usize, v: usize) -> &VertexSet {
        self.eta_ends.get(&(e, v)).unwrap_or(&EMPTY)
    }

    pub fn set_eta_ev(&mut self, e: usize, v: usize, set: VertexSet) {
        if set.is_empty() {
            self.eta_ends.remove(&(e, v));
        } else {
            self.eta_ends.insert((e, v), set);
        }
    }

    /// η(T): the union of all vertex and edge sets.
    pub fn eta_t(&self) -> VertexSet {
        self.eta_vertex
            .iter()
            .chain(self.eta_edge.iter())
            .flatten()
            .copied()
            .collect()
    }

    pub fn eta_plus(&self) -> VertexSet {
        let mut s = self.eta_t();
        s.insert(self.apex);
        s
    }

    /// η°(e): η(e) minus the sets at both ends of e.
    pub fn eta_circ(&self, e: usize) -> VertexSet {
        let [u, v] = self.tree.edges[e];
        self.eta_e(e)
            .iter()
            .copied()
            .filter(|x| !self.eta_ev(e, u).contains(x) && !self.eta_ev(e, v).contains(x))
            .collect()
    }

    /// B(v): union of η(e, v) over edges e at v.
    pub fn boundary(&self, v: usize) -> VertexSet {
        (0..self.tree.edges.len())
            .filter(|&e| self.tree.incident(e, v))
            .flat_map(|e| self.eta_ev(e, v).iter().copied())
            .collect()
    }

    /// Every tree object's set, for pointwise comparison.
    fn objects(&self) -> Vec<(String, &VertexSet)> {
        let mut out = Vec::new();
        for v in 0..self.tree.n {
            out.push((format!("v{v}"), self.eta_v(v)));
        }
        for e in 0..self.tree.edges.len() {
            out.push((format!("e{e}"), self.eta_e(e)));
            for v in 0..self.tree.n {
                out.push((format!("e{e},v{v}"), self.eta_ev(e, v)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripViolation {
    pub axiom: String,
    pub detail: String,
}

fn violation(axiom: &str, detail: String) -> StripViolation {
    StripViolation {
        axiom: axiom.to_string(),
        detail,
    }
}

/// Checks the tree, the range of η, and every axiom independently.
/// An empty list means `s` is a strip-structure.
pub fn validate_strip(s: &StripStructure) -> Vec<StripViolation> {
    let g = &s.graph;
    let t = &s.tree;
    let mut out = Vec::new();
    if let Err(e) = t.check() {
        out.push(violation("tree", e));
        return out;
    }
    if s.apex >= g.n() {
        out.push(violation("range", format!("apex {} out of range", s.apex)));
        return out;
    }
    if s.eta_vertex.len() > t.n || s.eta_edge.len() > t.edges.len() {
        out.push(violation("range", "more η sets than tree objects".into()));
    }
    for &(e, v) in s.eta_ends.keys() {
        if e >= t.edges.len() || v >= t.n {
            out.push(violation(
                "range",
                format!("η(e{e},v{v}) indexes no tree object"),
            ));
        }
    }
    let all_sets = s
        .eta_vertex
        .iter()
        .chain(s.eta_edge.iter())
        .chain(s.eta_ends.values());
    for set in all_sets {
        if let Some(&x) = set.iter().find(|&&x| x >= g.n() || x == s.apex) {
            out.push(violation(
                "range",
                format!("vertex {x} is the apex or out of range"),
            ));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let ne = t.edges.len();

    // S1
    let objs: Vec<(String, &VertexSet)> = (0..t.n)
        .map(|v| (format!("v{v}"), s.eta_v(v)))
        .chain((0..ne).map(|e| (format!("e{e}"), s.eta_e(e))))
        .collect();
    for i in 0..objs.len() {
        for j in i + 1..objs.len() {
            if let Some(x) = objs[i].1.intersection(objs[j].1).next() {
                out.push(violation(
                    "S1",
                    format!("{} and {} share vertex {x}", objs[i].0, objs[j].0),
                ));
            }
        }
    }
    // S2
    for v in (0..t.n).filter(|&v| t.is_leaf(v)) {
        if !s.eta_v(v).is_empty() {
            out.push(violation("S2", format!("leaf v{v} has nonempty η")));
        }
    }
    // S3
    for e in 0..ne {
        for v in 0..t.n {
            let ev = s.eta_ev(e, v);
            if !ev.is_subset(s.eta_e(e)) {
                out.push(violation("S3", format!("η(e{e},v{v}) not inside η(e{e})")));
            }
            if ev.is_empty() == t.incident(e, v) {
                out.push(violation(
                    "S3",
                    format!(
                        "η(e{e},v{v}) must be nonempty exactly when e{e} is incident with v{v}"
                    ),
                ));
            }
        }
    }
    // S4
    for e in 0..ne {
        for f in e + 1..ne {
            for v in 0..t.n {
                if !g.complete_between(s.eta_ev(e, v), s.eta_ev(f, v)) {
                    out.push(violation(
                        "S4",
                        format!("η(e{e},v{v}) and η(e{f},v{v}) not complete"),
                    ));
                }
            }
            for &x in s.eta_e(e) {
                for &y in g.neighbors(x) {
                    if !s.eta_e(f).contains(&y) {
                        continue;
                    }
                    let explained = (0..t.n)
                        .any(|v| s.eta_ev(e, v).contains(&x) && s.eta_ev(f, v).contains(&y));
                    if !explained {
                        out.push(violation(
                            "S4",
                            format!("stray edge {x}-{y} between η(e{e}) and η(e{f})"),
                        ));
                    }
                }
            }
        }
    }
    // S5
    for e in 0..ne {
        let [u, v] = t.edges[e];
        let (eu, ev) = (s.eta_ev(e, u), s.eta_ev(e, v));
        let circ = s.eta_circ(e);
        let only_u: VertexSet = eu.difference(ev).copied().collect();
        let only_v: VertexSet = ev.difference(eu).copied().collect();
        for &x in s.eta_e(e) {
            if eu.contains(&x) && ev.contains(&x) {
                continue;
            }
            let reach_u = reaches(g, x, &only_u, &circ, s.eta_e(e));
            let reach_v = reaches(g, x, &only_v, &circ, s.eta_e(e));
            if !(reach_u && reach_v) {
                out.push(violation(
                    "S5",
                    format!("vertex {x} of η(e{e}) is not on a path between both ends"),
                ));
            }
        }
    }
    // S6
    for v in 0..t.n {
        for e in 0..ne {
            let rest: VertexSet = s.eta_e(e).difference(s.eta_ev(e, v)).copied().collect();
            if !g.anticomplete_between(s.eta_v(v), &rest) {
                out.push(violation(
                    "S6",
                    format!("η(v{v}) touches η(e{e}) \\ η(e{e},v{v})"),
                ));
            }
        }
    }
    // S7
    for v in 0..t.n {
        let b = s.boundary(v);
        for d in g.components_of(s.eta_v(v)) {
            if d.iter()
                .all(|&x| g.neighbors(x).iter().all(|y| !b.contains(y)))
            {
                out.push(violation(
                    "S7",
                    format!("a component of η(v{v}) has no neighbor in B(v{v})"),
                ));
            }
        }
    }
    // S8
    let eta_t = s.eta_t();
    let mut allowed = VertexSet::new();
    for e in 0..ne {
        for &l in &t.edges[e] {
            if t.is_leaf(l) {
                let set = s.eta_ev(e, l);
                if set.iter().any(|&x| !g.has_edge(s.apex, x)) {
                    out.push(violation(
                        "S8",
                        format!("apex not complete to η(e{e},v{l})"),
                    ));
                }
                allowed.extend(set.iter().copied());
            }
        }
    }
    for &x in g.neighbors(s.apex) {
        if eta_t.contains(&x) && !allowed.contains(&x) {
            out.push(violation(
                "S8",
                format!("apex has extra neighbor {x} in η(T)"),
            ));
        }
    }
    out
}

/// Whether `x` reaches `targets` by a path whose interior lies in `via`,
/// all within `within`.
fn reaches(g: &Graph, x: Vertex, targets: &VertexSet, via: &VertexSet, within: &VertexSet) -> bool {
    if targets.contains(&x) {
        return true;
    }
    let mut seen = BTreeSet::from([x]);
    let mut stack = vec![x];
    while let Some(u) = stack.pop() {
        for &y in g.neighbors(u) {
            if !within.contains(&y) || !seen.insert(y) {
                continue;
            }
            if targets.contains(&y) {
                return true;
            }
            if via.contains(&y) {
                stack.push(y);
            }
        }
    }
    false
}

fn require_valid(s: &StripStructure) -> Result<()> {
    let v = validate_strip(s);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::contract(format!(
            "not a strip-structure: {} ({})",
            v[0].axiom, v[0].detail
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RungReport {
    /// Each rung as a vertex sequence from the first end of the edge.
    pub rungs: Vec<Vec<Vertex>>,
    pub long: Vec<bool>,
    /// η̃(e): vertices of η(e) in no rung.
    pub uncovered: VertexSet,
}

/// All η(e)-rungs of tree edge `e`.
pub fn rungs(s: &StripStructure, e: usize) -> Result<RungReport> {
    require_valid(s)?;
    if e >= s.tree.edges.len() {
        return Err(Error::input(format!("tree edge {e} out of range")));
    }
    rungs_unchecked(s, e)
}

fn rungs_unchecked(s: &StripStructure, e: usize) -> Result<RungReport> {
    let g = &s.graph;
    let [u, v] = s.tree.edges[e];
    let (eu, ev) = (s.eta_ev(e, u), s.eta_ev(e, v));
    let circ = s.eta_circ(e);
    let mut found: Vec<Vec<Vertex>> = eu.intersection(ev).map(|&x| vec![x]).collect();
    for &start in eu.difference(ev) {
        let mut path = vec![start];
        rung_dfs(g, &mut path, eu, ev, &circ, &mut found)?;
    }
    found.sort();
    let covered: VertexSet = found.iter().flatten().copied().collect();
    Ok(RungReport {
        long: found.iter().map(|p| p.len() > 1).collect(),
        uncovered: s.eta_e(e).difference(&covered).copied().collect(),
        rungs: found,
    })
}

fn rung_dfs(
    g: &Graph,
    path: &mut Vec<Vertex>,
    eu: &VertexSet,
    ev: &VertexSet,
    circ: &VertexSet,
    out: &mut Vec<Vec<Vertex>>,
) -> Result<()> {
    let last = *path.last().unwrap();
    for &w in g.neighbors(last) {
        let ok_end = ev.contains(&w) && !eu.contains(&w);
        if !(ok_end || circ.contains(&w)) || path.contains(&w) {
            continue;
        }
        if path[..path.len() - 1].iter().any(|&p| g.has_edge(p, w)) {
            continue;
        }
        path.push(w);
        if ok_end {
            if out.len() >= RUNG_LIMIT {
                return Err(Error::resource("rung enumeration limit reached"));
            }
            out.push(path.clone());
        } else {
            rung_dfs(g, path, eu, ev, circ, out)?;
        }
        path.pop();
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripFlags {
    pub tame: bool,
    pub substantial: bool,
    pub rich: bool,
}

/// `a` is trapped in `h` when N[N[a]] lies in `h` and each neighbor of `a`
/// has exactly two neighbors in `h`.
pub fn is_trapped(g: &Graph, a: Vertex, h: &VertexSet) -> bool {
    if !h.contains(&a) {
        return false;
    }
    let na: VertexSet = g.neighbors(a).iter().copied().collect();
    let nna = g.closed_neighborhood(&na).unwrap_or_default();
    nna.is_subset(h)
        && na
            .iter()
            .all(|&x| g.neighbors(x).iter().filter(|y| h.contains(y)).count() == 2)
}

pub fn classify_strip(s: &StripStructure) -> Result<StripFlags> {
    require_valid(s)?;
    let t = &s.tree;
    let mut tame = (0..t.n).all(|v| s.eta_v(v).is_empty());
    let mut substantial = true;
    for e in 0..t.edges.len() {
        let r = rungs_unchecked(s, e)?;
        tame &= r.uncovered.is_empty();
        substantial &= r.long.iter().any(|&l| l);
    }
    let leaves_ok = (0..t.edges.len()).all(|e| {
        t.edges[e]
            .iter()
            .filter(|&&l| t.is_leaf(l))
            .all(|&l| s.eta_ev(e, l).len() == 1)
    });
    let rich = leaves_ok && is_trapped(&s.graph, s.apex, &s.eta_plus());
    Ok(StripFlags {
        tame,
        substantial,
        rich,
    })
}

/// η ≤ η' pointwise over every tree object.
pub fn strip_leq(a: &StripStructure, b: &StripStructure) -> Result<bool> {
    if a.graph != b.graph || a.apex != b.apex || a.tree != b.tree {
        return Err(Error::input("strips must share graph, apex and tree"));
    }
    let (oa, ob) = (a.objects(), b.objects());
    Ok(oa
        .iter()
        .zip(ob.iter())
        .all(|((_, x), (_, y))| x.is_subset(y)))
}

/// The η of a pyramid over K_{1,3}: edge `i` carries P_i minus the apex,
/// with η(e_i, t0) = {b_i} and η(e_i, t_i) the apex neighbor on P_i.
/// No trapping check is made.
pub fn pyramid_eta(g: &Graph, p: &PyramidWitness) -> StripStructure {
    let tree = SmoothTree::star(3);
    let mut eta_ends = BTreeMap::new();
    let mut eta_edge = Vec::new();
    for i in 0..3 {
        eta_edge.push(p.paths[i][1..].iter().copied().collect::<VertexSet>());
        eta_ends.insert((i, 0), VertexSet::from([p.base[i]]));
        eta_ends.insert((i, i + 1), VertexSet::from([p.paths[i][1]]));
    }
    StripStructure {
        graph: g.clone(),
        apex: p.apex,
        tree,
        eta_vertex: vec![VertexSet::new(); 4],
        eta_edge,
        eta_ends,
    }
}

/// The strip-structure of a pyramid whose apex is trapped in it.
pub fn pyramid_to_strip(g: &Graph, p: &PyramidWitness) -> Result<StripStructure> {
    for &v in p.paths.iter().flatten() {
        g.check_vertex(v)?;
    }
    p.validate(g)
        .map_err(|e| Error::input(format!("invalid pyramid: {e}")))?;
    if !is_trapped(g, p.apex, &p.vertex_set()) {
        return Err(Error::contract("apex is not trapped in the pyramid"));
    }
    let s = pyramid_eta(g, p);
    require_valid(&s)?;
    Ok(s)
}

/// G' = G minus (N(Z') \ Σ) with Z' = N_Σ[a], relabeled; returns the new
/// graph, the new-to-old vertex map, and the pyramid in new labels.
pub fn reduce_to_trapped(
    g: &Graph,
    p: &PyramidWitness,
) -> Result<(Graph, Vec<Vertex>, PyramidWitness)> {
    p.validate(g)
        .map_err(|e| Error::input(format!("invalid pyramid: {e}")))?;
    let sigma = p.vertex_set();
    let mut zp = g.neighbors_in(p.apex, &sigma);
    zp.insert(p.apex);
    let drop: VertexSet = g
        .open_neighborhood(&zp)?
        .into_iter()
        .filter(|v| !sigma.contains(v))
        .collect();
    let keep: VertexSet = g.vertices().filter(|v| !drop.contains(v)).collect();
    let (h, map) = g.induced_subgraph(&keep);
    let mut inv = vec![usize::MAX; g.n()];
    for (new, &old) in map.iter().enumerate() {
        inv[old] = new;
    }
    let re = |v: Vertex| inv[v];
    let q = PyramidWitness {
        apex: re(p.apex),
        base: p.base.map(re),
        paths: p
            .paths
            .clone()
            .map(|path| path.into_iter().map(re).collect()),
    };
    Ok((h, map, q))
}

/// For a valid strip covering all of G: whether every component of
/// G \ N[z] meets at most one of the sets η°(e).
pub fn components_meet_one_edge(s: &StripStructure, z: &VertexSet) -> Result<bool> {
    require_valid(s)?;
    let g = &s.graph;
    let nz = g.closed_neighborhood(z)?;
    let circs: Vec<VertexSet> = (0..s.tree.edges.len()).map(|e| s.eta_circ(e)).collect();
    for comp in g.components(&nz)? {
        let hits = circs.iter().filter(|c| !c.is_disjoint(&comp)).count();
        if hits > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{set, GraphBuilder};

    /// Pyramid with given path lengths; apex 0.
    pub(crate) fn pyramid(lens: [usize; 3]) -> (Graph, PyramidWitness) {
        let mut b = GraphBuilder::new(1);
        let mut paths: Vec<Vec<Vertex>> = Vec::new();
        for &l in &lens {
            let mut p = vec![0];
            for _ in 0..l {
                let v = b.add_vertex();
                b.add_edge(*p.last().unwrap(), v);
                p.push(v);
            }
            paths.push(p);
        }
        let base = [paths[0][lens[0]], paths[1][lens[1]], paths[2][lens[2]]];
        b.add_edge(base[0], base[1]);
        b.add_edge(base[1], base[2]);
        b.add_edge(base[0], base[2]);
        let w = PyramidWitness {
            apex: 0,
            base,
            paths: [paths[0].clone(), paths[1].clone(), paths[2].clone()],
        };
        (b.build(), w)
    }

    #[test]
    fn pyramid_strip_is_tame_substantial_rich() {
        let (g, p) = pyramid([2, 2, 2]);
        let s = pyramid_to_strip(&g, &p).unwrap();
        assert!(validate_strip(&s).is_empty());
        let f = classify_strip(&s).unwrap();
        assert!(f.tame && f.substantial && f.rich);
        let r = rungs(&s, 0).unwrap();
        assert_eq!(r.rungs, vec![vec![p.base[0], p.paths[0][1]]]);
    }

    #[test]
    fn minimal_pyramid_strip_is_valid_but_not_substantial() {
        let (g, p) = pyramid([1, 2, 2]);
        let s = pyramid_eta(&g, &p);
        assert!(validate_strip(&s).is_empty());
        let f = classify_strip(&s).unwrap();
        assert!(!f.substantial && !f.rich);
        assert!(matches!(pyramid_to_strip(&g, &p), Err(Error::Contract(_))));
        let r = rungs(&s, 0).unwrap();
        assert_eq!(r.rungs, vec![vec![p.base[0]]]);
    }

    #[test]
    fn broken_strips_are_reported() {
        let (g, p) = pyramid([3, 3, 3]);
        let s = pyramid_eta(&g, &p);
        let mut moved = s.clone();
        let x = p.paths[0][2];
        moved.eta_edge[0].remove(&x);
        moved.eta_edge[1].insert(x);
        let axioms: Vec<String> = validate_strip(&moved)
            .into_iter()
            .map(|v| v.axiom)
            .collect();
        assert!(axioms.iter().any(|a| a == "S4" || a == "S1"), "{axioms:?}");

        let mut leaf = s.clone();
        leaf.eta_vertex[1].insert(x);
        leaf.eta_edge[0].remove(&x);
        let axioms: Vec<String> = validate_strip(&leaf).into_iter().map(|v| v.axiom).collect();
        assert!(axioms.contains(&"S2".to_string()));
    }

    #[test]
    fn untrapped_apex_is_contract_error() {
        let (g, p) = pyramid([2, 2, 2]);
        let mut b = GraphBuilder::new(g.n() + 1);
        for (u, v) in g.edges() {
            b.add_edge(u, v);
        }
        b.add_edge(p.paths[0][1], g.n());
        let h = b.build();
        assert!(matches!(pyramid_to_strip(&h, &p), Err(Error::Contract(_))));
        let (h2, map, q) = reduce_to_trapped(&h, &p).unwrap();
        assert_eq!(h2.n(), g.n());
        assert_eq!(map.len(), g.n());
        assert!(pyramid_to_strip(&h2, &q).is_ok());
    }

    #[test]
    fn order_is_pointwise() {
        let (g, p) = pyramid([3, 2, 2]);
        let s = pyramid_eta(&g, &p);
        assert!(strip_leq(&s, &s).unwrap());
        let mut bigger = s.clone();
        bigger.eta_vertex[0].insert(p.paths[0][2]);
        assert!(strip_leq(&s, &bigger).unwrap());
        assert!(!strip_leq(&bigger, &s).unwrap());
    }

    #[test]
    fn single_vertex_rung_and_uncovered_vertex() {
        // Tree K_{1,3}; edge 0 carries {x} at both ends plus an isolated y.
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let mut s = StripStructure {
            graph: g,
            apex: 0,
            tree: SmoothTree::star(3),
            eta_vertex: vec![VertexSet::new(); 4],
            eta_edge: vec![set([1, 2]), VertexSet::new(), VertexSet::new()],
            eta_ends: BTreeMap::new(),
        };
        s.set_eta_ev(0, 0, set([1]));
        s.set_eta_ev(0, 1, set([1]));
        let r = rungs_unchecked(&s, 0).unwrap();
        assert_eq!(r.rungs, vec![vec![1]]);
        assert_eq!(r.uncovered, set([2]));
    }

    #[test]
    fn strip_json_roundtrip() {
        let (g, p) = pyramid([2, 3, 2]);
        let s = pyramid_eta(&g, &p);
        let js = serde_json::to_string(&s).unwrap();
        let back: StripStructure = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }
}
