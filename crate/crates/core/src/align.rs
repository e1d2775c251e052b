//! Alignments of a vertex set along a path, their consistency type,
//! maximum stable sets of interval graphs, extraction of a consistent
//! alignment from a large stable set, and a common monotone subsequence
//! helper for comparing two orders.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, PathWitness, Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttachKind {
    /// Two non-adjacent neighbors on the path.
    Wide,
    /// A unique neighbor on the path.
    Spiky,
    /// Exactly two neighbors, adjacent on the path.
    Triangular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlignmentKind {
    Wide,
    Spiky,
    Triangular,
    Mixed,
}

impl From<AttachKind> for AlignmentKind {
    fn from(k: AttachKind) -> Self {
        match k {
            AttachKind::Wide => AlignmentKind::Wide,
            AttachKind::Spiky => AlignmentKind::Spiky,
            AttachKind::Triangular => AlignmentKind::Triangular,
        }
    }
}

/// An alignment (P, X): `order` lists X along P and `windows[l]` spans the
/// path indices of the neighbors of `order[l]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alignment {
    pub path: Vec<Vertex>,
    pub order: Vec<Vertex>,
    pub windows: Vec<(usize, usize)>,
    pub kind: AlignmentKind,
}

impl Alignment {
    pub fn is_consistent(&self) -> bool {
        self.kind != AlignmentKind::Mixed
    }
}

/// Sorted path indices of the neighbors of `x` on `path`.
pub fn path_neighbor_indices(g: &Graph, path: &[Vertex], x: Vertex) -> Vec<usize> {
    (0..path.len())
        .filter(|&i| g.has_edge(x, path[i]))
        .collect()
}

/// The attachment type of a vertex with the given sorted neighbor indices.
pub fn attach_kind(idx: &[usize]) -> Option<AttachKind> {
    match idx {
        [] => None,
        [_] => Some(AttachKind::Spiky),
        [i, j] if j - i == 1 => Some(AttachKind::Triangular),
        _ => Some(AttachKind::Wide),
    }
}

/// Window `[min, max]` of the path neighbors of `x`, if any.
pub fn window(g: &Graph, path: &[Vertex], x: Vertex) -> Option<(usize, usize)> {
    let idx = path_neighbor_indices(g, path, x);
    Some((*idx.first()?, *idx.last()?))
}

/// The alignment (P, X) if one exists. Reversing P reverses the order.
pub fn classify_alignment(g: &Graph, p: &PathWitness, x: &VertexSet) -> Result<Option<Alignment>> {
    g.check_set(x)?;
    g.check_set(&p.vertices)?;
    if !p.vertex_set().is_disjoint(x) {
        return Err(Error::input("X must be disjoint from the path"));
    }
    if x.is_empty() {
        return Ok(None);
    }
    let mut items = Vec::new();
    for &v in x {
        let idx = path_neighbor_indices(g, &p.vertices, v);
        let Some(kind) = attach_kind(&idx) else {
            return Ok(None);
        };
        items.push(((idx[0], *idx.last().unwrap()), v, kind));
    }
    items.sort();
    if items.windows(2).any(|w| w[0].0 .1 >= w[1].0 .0) {
        return Ok(None);
    }
    let first = items[0].2;
    let kind = if items.iter().all(|it| it.2 == first) {
        first.into()
    } else {
        AlignmentKind::Mixed
    };
    Ok(Some(Alignment {
        path: p.vertices.clone(),
        order: items.iter().map(|it| it.1).collect(),
        windows: items.iter().map(|it| it.0).collect(),
        kind,
    }))
}

/// Maximum set of pairwise disjoint closed intervals, as indices into
/// `windows`, by the earliest-right-endpoint sweep. Returned in sweep order.
pub fn interval_stable_set(windows: &[(usize, usize)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..windows.len()).collect();
    idx.sort_by_key(|&i| (windows[i].1, windows[i].0, i));
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for i in idx {
        if last.is_none_or(|r| windows[i].0 > r) {
            out.push(i);
            last = Some(windows[i].1);
        }
    }
    out
}

/// Largest number of intervals sharing a point, with one such point.
pub fn interval_max_overlap(windows: &[(usize, usize)]) -> (usize, Option<usize>) {
    let mut events: Vec<(usize, i32)> = Vec::new();
    for &(a, b) in windows {
        events.push((a, 1));
        events.push((b + 1, -1));
    }
    // Closing events at the same coordinate come first.
    events.sort_by_key(|&(x, d)| (x, d));
    let (mut cur, mut best, mut at) = (0i32, 0i32, None);
    for (x, d) in events {
        cur += d;
        if cur > best {
            best = cur;
            at = Some(x);
        }
    }
    (best as usize, at)
}

#[derive(Clone, Copy, Debug)]
pub struct ExtractOptions {
    /// Enforce |Y| >= 3s(d+1).
    pub check_size: bool,
    /// Verify the outside-path hypothesis.
    pub check_outside_paths: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            check_size: true,
            check_outside_paths: true,
        }
    }
}

/// Whether every two vertices of `y` are joined by a path whose interior
/// avoids N[P]: equivalently, all of `y` touch a common component of
/// G \ N[P].
pub fn outside_paths_exist(g: &Graph, p: &PathWitness, y: &VertexSet) -> Result<bool> {
    let np = g.closed_neighborhood(&p.vertex_set())?;
    let comps = g.components(&np)?;
    let mut comp_of = BTreeMap::new();
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of.insert(v, i);
        }
    }
    let touches: Vec<VertexSet> = y
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|u| comp_of.get(u).copied())
                .collect()
        })
        .collect();
    let ys: Vec<Vertex> = y.iter().copied().collect();
    for i in 0..ys.len() {
        for j in i + 1..ys.len() {
            if touches[i].is_disjoint(&touches[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An s-subset S of Y with (P, S) a consistent alignment, following the
/// interval-graph argument: a point covered by d+1 intervals contradicts
/// theta-freeness; otherwise a stable set of 3s intervals is split by
/// attachment type.
pub fn extract_consistent_alignment(
    g: &Graph,
    p: &PathWitness,
    y: &VertexSet,
    s: usize,
    d: usize,
    opts: &ExtractOptions,
) -> Result<Alignment> {
    g.check_set(y)?;
    if s == 0 || d == 0 {
        return Err(Error::input("s and d must be positive"));
    }
    if !g.is_induced_path(&p.vertices) {
        return Err(Error::input("P is not an induced path"));
    }
    if !p.vertex_set().is_disjoint(y) {
        return Err(Error::contract("hypothesis violated: Y meets P"));
    }
    if !g.is_stable(y) {
        return Err(Error::contract("hypothesis violated: Y is not stable"));
    }
    if opts.check_size && y.len() < 3 * s * (d + 1) {
        return Err(Error::contract(format!(
            "hypothesis violated: |Y| = {} < 3s(d+1) = {}",
            y.len(),
            3 * s * (d + 1)
        )));
    }
    for &pv in &p.vertices {
        let k = g.neighbors(pv).iter().filter(|v| y.contains(v)).count();
        if k >= d {
            return Err(Error::contract(format!(
                "hypothesis violated: path vertex {pv} has {k} >= d neighbors in Y"
            )));
        }
    }
    let ys: Vec<Vertex> = y.iter().copied().collect();
    let mut windows = Vec::new();
    for &v in &ys {
        match window(g, &p.vertices, v) {
            Some(w) => windows.push(w),
            None => {
                return Err(Error::contract(format!(
                    "hypothesis violated: {v} has no neighbor in P"
                )))
            }
        }
    }
    if opts.check_outside_paths && !outside_paths_exist(g, p, y)? {
        return Err(Error::contract(
            "hypothesis violated: some pair of Y has no path avoiding N[P]",
        ));
    }
    let (overlap, at) = interval_max_overlap(&windows);
    if overlap > d {
        return Err(Error::contract(format!(
            "theta hypothesis violated: {overlap} intervals share path vertex {}",
            p.vertices[at.unwrap_or(0)]
        )));
    }
    let stable = interval_stable_set(&windows);
    let take = stable.len().min(3 * s);
    let mut by_kind: BTreeMap<AttachKind, Vec<Vertex>> = BTreeMap::new();
    for &i in &stable[..take] {
        let kind =
            attach_kind(&path_neighbor_indices(g, &p.vertices, ys[i])).expect("has neighbor");
        by_kind.entry(kind).or_default().push(ys[i]);
    }
    let best = by_kind
        .iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
        .map(|(_, v)| v.clone())
        .unwrap_or_default();
    if best.len() < s {
        return Err(Error::contract(format!(
            "hypothesis violated: only {} intervals of one attachment type",
            best.len()
        )));
    }
    let chosen: VertexSet = best.into_iter().take(s).collect();
    let a = classify_alignment(g, p, &chosen)?
        .ok_or_else(|| Error::contract("extracted set is not an alignment"))?;
    debug_assert!(a.is_consistent());
    Ok(a)
}

/// Longest strictly increasing subsequence of `seq`, as indices.
fn lis_indices(seq: &[usize]) -> Vec<usize> {
    let n = seq.len();
    let mut len = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..i {
            if seq[j] < seq[i] && len[j] + 1 > len[i] {
                len[i] = len[j] + 1;
                prev[i] = j;
            }
        }
    }
    let Some(mut end) = (0..n).max_by_key(|&i| (len[i], std::cmp::Reverse(i))) else {
        return Vec::new();
    };
    let mut out = vec![end];
    while prev[end] != usize::MAX {
        end = prev[end];
        out.push(end);
    }
    out.reverse();
    out
}

/// A common subsequence of length `x` of two orders on the same set that
/// is monotone in both: the returned elements appear in `a`'s order, and
/// the flag tells whether `b` lists them in the same order (true) or
/// reversed (false). None if no such subsequence of length `x` exists.
pub fn common_monotone_subsequence(
    a: &[Vertex],
    b: &[Vertex],
    x: usize,
) -> Result<Option<(Vec<Vertex>, bool)>> {
    let pos: BTreeMap<Vertex, usize> = b.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    if a.len() != b.len() || pos.len() != b.len() || a.iter().any(|v| !pos.contains_key(v)) {
        return Err(Error::input("orders must list the same distinct elements"));
    }
    let seq: Vec<usize> = a.iter().map(|v| pos[v]).collect();
    let inc = lis_indices(&seq);
    if inc.len() >= x {
        return Ok(Some((inc[..x].iter().map(|&i| a[i]).collect(), true)));
    }
    let rev: Vec<usize> = seq.iter().map(|&p| b.len() - 1 - p).collect();
    let dec = lis_indices(&rev);
    if dec.len() >= x {
        return Ok(Some((dec[..x].iter().map(|&i| a[i]).collect(), false)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{set, GraphBuilder};

    /// Path p1..p6 on 0..5, extra vertices from 6 attached as given.
    fn path_with(attach: &[&[usize]]) -> (Graph, PathWitness) {
        let mut b = GraphBuilder::new(6 + attach.len());
        b.add_path(&[0, 1, 2, 3, 4, 5]);
        for (i, ns) in attach.iter().enumerate() {
            for &p in *ns {
                b.add_edge(6 + i, p - 1);
            }
        }
        let g = b.build();
        let p = PathWitness::new(&g, (0..6).collect()).unwrap();
        (g, p)
    }

    #[test]
    fn alignment_examples() {
        let (g, p) = path_with(&[&[2], &[5]]);
        let a = classify_alignment(&g, &p, &set([6, 7])).unwrap().unwrap();
        assert_eq!(a.kind, AlignmentKind::Spiky);
        assert_eq!(a.order, vec![6, 7]);

        let (g, p) = path_with(&[&[1, 2], &[4, 5]]);
        let a = classify_alignment(&g, &p, &set([6, 7])).unwrap().unwrap();
        assert_eq!(a.kind, AlignmentKind::Triangular);

        let (g, p) = path_with(&[&[1, 4], &[2]]);
        assert!(classify_alignment(&g, &p, &set([6, 7])).unwrap().is_none());
    }

    #[test]
    fn reversal_reverses_order() {
        let (g, p) = path_with(&[&[1, 3], &[5, 6]]);
        let a = classify_alignment(&g, &p, &set([6, 7])).unwrap().unwrap();
        let r = classify_alignment(&g, &p.reversed(), &set([6, 7]))
            .unwrap()
            .unwrap();
        let mut rev = a.order.clone();
        rev.reverse();
        assert_eq!(r.order, rev);
        assert_eq!(r.kind, a.kind);
        assert_eq!(a.kind, AlignmentKind::Mixed);
    }

    #[test]
    fn interval_examples() {
        assert_eq!(interval_stable_set(&[(0, 0), (2, 3), (5, 6)]).len(), 3);
        assert_eq!(interval_stable_set(&[(0, 9), (1, 8), (2, 7)]).len(), 1);
        assert_eq!(interval_max_overlap(&[(0, 2), (2, 4), (3, 5)]).0, 2);
        assert_eq!(interval_max_overlap(&[(0, 1), (2, 3)]).0, 1);
    }

    #[test]
    fn extraction_alternating_types() {
        // Alternating spiky / triangular windows; only spiky has 2 of 3 picks.
        let (g, p) = {
            let mut b = GraphBuilder::new(18 + 6);
            let path: Vec<usize> = (0..18).collect();
            b.add_path(&path);
            for i in 0..6 {
                let y = 18 + i;
                let base = 3 * i;
                b.add_edge(y, base);
                if i % 2 == 1 {
                    b.add_edge(y, base + 1);
                }
            }
            let g = b.build();
            let p = PathWitness::new(&g, path).unwrap();
            (g, p)
        };
        let y: VertexSet = (18..24).collect();
        let opts = ExtractOptions {
            check_size: false,
            check_outside_paths: false,
        };
        let a = extract_consistent_alignment(&g, &p, &y, 2, 2, &opts).unwrap();
        assert_eq!(a.order.len(), 2);
        assert!(a.is_consistent());
    }

    #[test]
    fn extraction_detects_overlap() {
        // Three intervals all containing p3 and p4, while every path vertex
        // has a single neighbor in Y; d = 2.
        let (g, p) = path_with(&[&[1, 5], &[2, 6], &[3, 4]]);
        let opts = ExtractOptions {
            check_size: false,
            check_outside_paths: false,
        };
        let r = extract_consistent_alignment(&g, &p, &set([6, 7, 8]), 1, 2, &opts);
        assert!(
            matches!(&r, Err(Error::Contract(m)) if m.contains("theta")),
            "{r:?}"
        );
    }

    #[test]
    fn monotone_subsequence() {
        let a = [0, 1, 2, 3, 4, 5, 6, 7, 8];
        let b = [2, 1, 0, 5, 4, 3, 8, 7, 6];
        let (s, same) = common_monotone_subsequence(&a, &b, 3).unwrap().unwrap();
        assert!(same);
        assert_eq!(s, vec![0, 3, 6]);
        let (s, same) = common_monotone_subsequence(&a, &[8, 7, 6, 5, 4, 3, 2, 1, 0], 3)
            .unwrap()
            .unwrap();
        assert!(!same);
        assert_eq!(s.len(), 3);
    }
}
