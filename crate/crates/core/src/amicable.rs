//! Trisections, the amiability pipeline (consistent alignment on D1,
//! connectifier or path in D2, order matching), and the amicability
//! construction: a pyramid or wheel whose separator core Z is small, lies
//! in the allowed region, and separates d_i from d_j.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::align::{
    attach_kind, classify_alignment, common_monotone_subsequence, extract_consistent_alignment,
    path_neighbor_indices, AlignmentKind, AttachKind, ExtractOptions,
};
use crate::detect::{PyramidWitness, Wheel};
use crate::error::{Error, Result};
use crate::graph::{Graph, PathWitness, Vertex, VertexSet};
use crate::separators::{
    pyramid_z, verify_pyramid_separation, verify_wheel_separation, wheel_z, VerifyOptions,
};
use crate::shape::{
    classify_shape, connectifier_order, find_connectifier, make_connectifier, ConnectOptions,
    ConnectOutcome, Connectifier, Shape, ShapeKind,
};

/// A candidate separation (D1, Y, D2) with D1 a path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trisection {
    pub d1: Vec<Vertex>,
    pub y: VertexSet,
    pub d2: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrisectionCheck {
    pub valid: bool,
    pub violation: Option<String>,
}

fn tri_fail(msg: impl Into<String>) -> TrisectionCheck {
    TrisectionCheck {
        valid: false,
        violation: Some(msg.into()),
    }
}

/// Checks every condition of an s-trisection with s = |Y|.
pub fn check_trisection(g: &Graph, t: &Trisection) -> TrisectionCheck {
    let d1: VertexSet = t.d1.iter().copied().collect();
    if d1.len() != t.d1.len() {
        return tri_fail("D1 repeats a vertex");
    }
    if d1.iter().chain(&t.y).chain(&t.d2).any(|&v| v >= g.n()) {
        return tri_fail("vertex out of range");
    }
    if !d1.is_disjoint(&t.y) || !d1.is_disjoint(&t.d2) || !t.y.is_disjoint(&t.d2) {
        return tri_fail("D1, Y, D2 are not pairwise disjoint");
    }
    if d1.len() + t.y.len() + t.d2.len() != g.n() {
        return tri_fail("D1, Y, D2 do not cover V(G)");
    }
    if d1.is_empty() || t.d2.is_empty() {
        return tri_fail("D1 and D2 must be nonempty");
    }
    if !g.anticomplete_between(&d1, &t.d2) {
        return tri_fail("D1 and D2 are not anticomplete");
    }
    if !g.is_stable(&t.y) {
        return tri_fail("Y is not stable");
    }
    let n1 = g.open_neighborhood(&d1).unwrap_or_default();
    if n1 != t.y {
        return tri_fail("N(D1) differs from Y");
    }
    let n2 = g.open_neighborhood(&t.d2).unwrap_or_default();
    if n2 != t.y {
        return tri_fail("N(D2) differs from Y");
    }
    if !g.is_induced_path(&t.d1) {
        return tri_fail("D1 is not a path");
    }
    for &y in &t.y {
        let private = t.d1.iter().any(|&d| {
            g.has_edge(d, y) && g.neighbors(d).iter().filter(|u| t.y.contains(u)).count() == 1
        });
        if !private {
            return tri_fail(format!("no vertex of D1 sees only {y} in Y"));
        }
    }
    TrisectionCheck {
        valid: true,
        violation: None,
    }
}

fn require_trisection(g: &Graph, t: &Trisection) -> Result<()> {
    let c = check_trisection(g, t);
    match c.violation {
        None => Ok(()),
        Some(v) => Err(Error::contract(format!("not a trisection: {v}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmiableKind {
    /// (H, X) is a connectifier; `concentrated` connectifiers carry no order.
    Connectifier { concentrated: bool },
    /// H is a path and (H, X) is a consistent alignment.
    Alignment,
}

/// H and X as given by amiability, with X in the order given by (D1, X).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmiableWitness {
    pub h: VertexSet,
    pub x: Vec<Vertex>,
    pub kind: AmiableKind,
}

#[derive(Clone, Copy, Debug)]
pub struct AmiabilityOptions {
    /// K_{1,t}-freeness parameter; bounds Y-neighbors of path vertices.
    pub t: usize,
    /// Size of the consistent alignment taken on D1; default: largest that succeeds.
    pub stage_one: Option<usize>,
    pub connect: ConnectOptions,
}

impl AmiabilityOptions {
    pub fn new(t: usize) -> Self {
        AmiabilityOptions {
            t,
            stage_one: None,
            connect: ConnectOptions {
                allow_singleton: false,
                ..Default::default()
            },
        }
    }
}

fn relaxed() -> ExtractOptions {
    ExtractOptions {
        check_size: false,
        check_outside_paths: true,
    }
}

/// Removes simplicial vertices of `h` that are not attachments of `x`,
/// one at a time (smallest first), until none is left.
fn prune_to_attachments(g: &Graph, h: &VertexSet, x: &[Vertex]) -> VertexSet {
    let mut h = h.clone();
    loop {
        let attached: VertexSet = x.iter().flat_map(|&v| g.neighbors_in(v, &h)).collect();
        let victim = h.iter().copied().find(|&v| {
            !attached.contains(&v) && h.len() > 1 && g.is_clique(&g.neighbors_in(v, &h))
        });
        match victim {
            Some(v) => {
                h.remove(&v);
            }
            None => return h,
        }
    }
}

/// Runs the amiability pipeline on a trisection and returns H and X of
/// size `x`, checking all three amiability conditions before returning.
pub fn amiability_search(
    g: &Graph,
    t: &Trisection,
    x: usize,
    opts: &AmiabilityOptions,
) -> Result<AmiableWitness> {
    require_trisection(g, t)?;
    if x == 0 {
        return Err(Error::input("x must be positive"));
    }
    let d1 = PathWitness::new(g, t.d1.clone())?;
    // Stage 1: a consistent alignment on D1, as large as possible.
    let sizes: Vec<usize> = match opts.stage_one {
        Some(s) => vec![s],
        None => (x..=t.y.len()).rev().collect(),
    };
    let mut stage1 = None;
    let mut last_err = Error::contract("Y is smaller than x");
    for s in sizes {
        match extract_consistent_alignment(g, &d1, &t.y, s, opts.t.max(1), &relaxed()) {
            Ok(a) => {
                stage1 = Some(a);
                break;
            }
            Err(e) => last_err = e,
        }
    }
    let stage1 = stage1.ok_or(last_err)?;
    let s_set: VertexSet = stage1.order.iter().copied().collect();

    // Stage 2: a connectifier or path in D2 for a subset of S.
    let mut keep = t.d2.clone();
    keep.extend(s_set.iter().copied());
    let (sub, map) = g.induced_subgraph(&keep);
    let inv: BTreeMap<Vertex, Vertex> = map.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let s_local: VertexSet = s_set.iter().map(|v| inv[v]).collect();
    let mut outcome = None;
    let mut last_err = Error::resource("no connectifier found");
    for h in (x..=s_set.len()).rev() {
        match find_connectifier(&sub, &s_local, h, &opts.connect) {
            Ok(o) => {
                outcome = Some(o);
                break;
            }
            Err(e) => last_err = e,
        }
    }
    let outcome = outcome.ok_or(last_err)?;
    let h2: VertexSet = outcome.h().iter().map(|&v| map[v]).collect();
    let s2: Vec<Vertex> = outcome.x().iter().map(|&v| map[v]).collect();
    let d1_order = |xs: &VertexSet| -> Result<Vec<Vertex>> {
        Ok(classify_alignment(g, &d1, xs)?
            .ok_or_else(|| Error::contract("subset of an alignment is not an alignment"))?
            .order)
    };

    // Stage 3: equalize the orders.
    let witness = match outcome {
        ConnectOutcome::Connectifier(c) if c.is_concentrated() => {
            let xs: VertexSet = d1_order(&s2.iter().copied().collect())?
                .into_iter()
                .take(x)
                .collect();
            let xv: Vec<Vertex> = xs.iter().copied().collect();
            let h = prune_to_attachments(g, &h2, &xv);
            AmiableWitness {
                h,
                x: d1_order(&xs)?,
                kind: AmiableKind::Connectifier { concentrated: true },
            }
        }
        ConnectOutcome::Connectifier(_) => {
            let shape = classify_shape(g, &h2)?
                .ok_or_else(|| Error::contract("connectifier shape lost"))?;
            let c = make_connectifier(g, shape, &s2.iter().copied().collect())?;
            let h_order = connectifier_order(g, &c)?;
            let a_order = d1_order(&s2.iter().copied().collect())?;
            let (sub_x, _) = common_monotone_subsequence(&a_order, &h_order, x)?
                .ok_or_else(|| Error::contract("no common monotone subsequence of length x"))?;
            let h = prune_to_attachments(g, &h2, &sub_x);
            let shape =
                classify_shape(g, &h)?.ok_or_else(|| Error::contract("pruned H lost its shape"))?;
            let concentrated = shape.kind.is_concentrated();
            AmiableWitness {
                h,
                x: sub_x,
                kind: AmiableKind::Connectifier { concentrated },
            }
        }
        ConnectOutcome::Path { path, .. } => {
            let hp: Vec<Vertex> = path.iter().map(|&v| map[v]).collect();
            let hpw = PathWitness::new(g, hp)?;
            let s2set: VertexSet = s2.iter().copied().collect();
            let mut best = None;
            for k in (x..=s2set.len()).rev() {
                if let Ok(a) =
                    extract_consistent_alignment(g, &hpw, &s2set, k, opts.t.max(1), &relaxed())
                {
                    best = Some(a);
                    break;
                }
            }
            let a = best.ok_or_else(|| Error::contract("no consistent alignment on the path"))?;
            let a_order = d1_order(&a.order.iter().copied().collect())?;
            let (sub_x, _) = common_monotone_subsequence(&a_order, &a.order, x)?
                .ok_or_else(|| Error::contract("no common monotone subsequence of length x"))?;
            AmiableWitness {
                h: hpw.vertex_set(),
                x: sub_x,
                kind: AmiableKind::Alignment,
            }
        }
    };
    check_amiable(g, &d1, t, &witness)?;
    Ok(witness)
}

/// Checks the amiability conditions for a witness.
pub fn check_amiable(
    g: &Graph,
    d1: &PathWitness,
    t: &Trisection,
    w: &AmiableWitness,
) -> Result<()> {
    let xs: VertexSet = w.x.iter().copied().collect();
    if !xs.is_subset(&t.y) || !w.h.is_subset(&t.d2) {
        return Err(Error::contract("X must lie in Y and H in D2"));
    }
    let a = classify_alignment(g, d1, &xs)?
        .ok_or_else(|| Error::contract("(D1, X) is not an alignment"))?;
    if !a.is_consistent() {
        return Err(Error::contract("(D1, X) is not consistent"));
    }
    if a.order != w.x {
        return Err(Error::contract("X is not listed in the order given by D1"));
    }
    let h_order = match &w.kind {
        AmiableKind::Alignment => {
            let shape = classify_shape(g, &w.h)?.filter(|s| s.is_path);
            let shape = shape.ok_or_else(|| Error::contract("H is not a path"))?;
            let hp = PathWitness::new(g, shape.spine)?;
            let b = classify_alignment(g, &hp, &xs)?
                .ok_or_else(|| Error::contract("(H, X) is not an alignment"))?;
            if !b.is_consistent() {
                return Err(Error::contract("(H, X) is not consistent"));
            }
            Some(b.order)
        }
        AmiableKind::Connectifier { concentrated } => {
            if w.h.len() < 2 {
                return Err(Error::contract(
                    "connectifier H must have more than one vertex",
                ));
            }
            let shape =
                classify_shape(g, &w.h)?.ok_or_else(|| Error::contract("H has no shape"))?;
            let c = make_connectifier(g, shape, &xs)?;
            if c.is_concentrated() != *concentrated {
                return Err(Error::contract("concentration flag mismatch"));
            }
            if *concentrated {
                None
            } else {
                Some(connectifier_order(g, &c)?)
            }
        }
    };
    if let Some(o) = h_order {
        let mut rev = o.clone();
        rev.reverse();
        if o != w.x && rev != w.x {
            return Err(Error::contract("orders given by (D1, X) and (H, X) differ"));
        }
    }
    Ok(())
}

/// The nine constructions of the amicability argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AmicableCase {
    #[serde(rename = "caterpillar-pyramid")]
    CaterpillarPyramid,
    #[serde(rename = "lineCat-spiky")]
    LineCatSpiky,
    #[serde(rename = "lineCat-wide")]
    LineCatWide,
    #[serde(rename = "star-pyramid")]
    StarPyramid,
    #[serde(rename = "lineStar-spiky")]
    LineStarSpiky,
    #[serde(rename = "lineStar-wide-pyramid")]
    LineStarWidePyramid,
    #[serde(rename = "lineStar-wide-specialwheel")]
    LineStarWideSpecialWheel,
    #[serde(rename = "align-specialwheel")]
    AlignSpecialWheel,
    #[serde(rename = "align-nonspecialwheel")]
    AlignNonspecialWheel,
}

impl AmicableCase {
    pub const ALL: [AmicableCase; 9] = [
        AmicableCase::CaterpillarPyramid,
        AmicableCase::LineCatSpiky,
        AmicableCase::LineCatWide,
        AmicableCase::StarPyramid,
        AmicableCase::LineStarSpiky,
        AmicableCase::LineStarWidePyramid,
        AmicableCase::LineStarWideSpecialWheel,
        AmicableCase::AlignSpecialWheel,
        AmicableCase::AlignNonspecialWheel,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            AmicableCase::CaterpillarPyramid => "caterpillar-pyramid",
            AmicableCase::LineCatSpiky => "lineCat-spiky",
            AmicableCase::LineCatWide => "lineCat-wide",
            AmicableCase::StarPyramid => "star-pyramid",
            AmicableCase::LineStarSpiky => "lineStar-spiky",
            AmicableCase::LineStarWidePyramid => "lineStar-wide-pyramid",
            AmicableCase::LineStarWideSpecialWheel => "lineStar-wide-specialwheel",
            AmicableCase::AlignSpecialWheel => "align-specialwheel",
            AmicableCase::AlignNonspecialWheel => "align-nonspecialwheel",
        }
    }

    pub fn from_tag(s: &str) -> Option<AmicableCase> {
        AmicableCase::ALL.into_iter().find(|c| c.tag() == s)
    }
}

/// A trisection with seven vertices X of Y and H in D2 given by amiability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmicabilityInstance {
    pub graph: Graph,
    pub trisection: Trisection,
    pub x: VertexSet,
    pub h: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum AmicableWitness {
    Pyramid(PyramidWitness),
    Wheel(Wheel),
}

/// Indices on D1 (0-based): i, j bound x_1 and x_7; i2, j2 span x_4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmicableIndices {
    pub i: usize,
    pub j: usize,
    pub i2: usize,
    pub j2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmicableResult {
    pub case: AmicableCase,
    #[serde(rename = "Z")]
    pub z: VertexSet,
    pub witness: AmicableWitness,
    /// x_1..x_7 in the order given by D1.
    pub order: Vec<Vertex>,
    pub indices: AmicableIndices,
    pub d_i: Vertex,
    pub d_j: Vertex,
    pub contained: bool,
    pub size_ok: bool,
    pub separated: bool,
    /// The separator verifier found no violating pair on the witness.
    pub theorem_check: bool,
    pub verified: bool,
}

/// Lexicographically least shortest path in `h` from `from` to `targets`.
fn lex_shortest_to(
    g: &Graph,
    h: &VertexSet,
    from: Vertex,
    targets: &VertexSet,
) -> Option<Vec<Vertex>> {
    let mut dist: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut q = VecDeque::new();
    for &t in targets {
        if h.contains(&t) {
            dist.insert(t, 0);
            q.push_back(t);
        }
    }
    while let Some(u) = q.pop_front() {
        let du = dist[&u];
        for &w in g.neighbors(u) {
            if h.contains(&w) && !dist.contains_key(&w) {
                dist.insert(w, du + 1);
                q.push_back(w);
            }
        }
    }
    let mut cur = from;
    let mut out = vec![cur];
    let mut d = *dist.get(&cur)?;
    while d > 0 {
        cur = *g
            .neighbors(cur)
            .iter()
            .filter(|w| dist.get(w) == Some(&(d - 1)))
            .min()?;
        out.push(cur);
        d -= 1;
    }
    Some(out)
}

fn concat(parts: &[&[Vertex]]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = Vec::new();
    for p in parts {
        for &v in *p {
            if out.last() != Some(&v) {
                out.push(v);
            }
        }
    }
    out
}

fn seg(path: &[Vertex], a: usize, b: usize) -> Vec<Vertex> {
    if a <= b {
        path[a..=b].to_vec()
    } else {
        let mut v = path[b..=a].to_vec();
        v.reverse();
        v
    }
}

fn hypothesis(msg: impl std::fmt::Display) -> Error {
    Error::contract(format!("class hypothesis violated: {msg}"))
}

/// Per-x anchors in a connectifier: r (attachment), L (r to s), s.
struct Anchor {
    r: Vertex,
    l: Vec<Vertex>,
    s: Vertex,
}

fn anchors(g: &Graph, c: &Connectifier, xs: &[Vertex]) -> Result<Vec<Anchor>> {
    let spine: VertexSet = c.shape.spine.iter().copied().collect();
    let target = g.closed_neighborhood(&spine)?;
    let target: VertexSet = target.intersection(&c.shape.vertices).copied().collect();
    xs.iter()
        .map(|x| {
            let r = c.attach[x];
            let l = lex_shortest_to(g, &c.shape.vertices, r, &target)
                .ok_or_else(|| Error::contract("attachment cannot reach P(H)"))?;
            let s = *l.last().unwrap();
            Ok(Anchor { r, l, s })
        })
        .collect()
}

struct Ctx<'a> {
    g: &'a Graph,
    d1: &'a [Vertex],
    x: [Vertex; 7],
    idx: AmicableIndices,
}

impl Ctx<'_> {
    fn d(&self, k: usize) -> Vertex {
        self.d1[k]
    }

    fn dseg(&self, a: usize, b: usize) -> Vec<Vertex> {
        seg(self.d1, a, b)
    }
}

/// Executes the amicability construction on one instance.
pub fn amicable_z(
    inst: &AmicabilityInstance,
    t: usize,
    verify: &VerifyOptions,
) -> Result<AmicableResult> {
    let g = &inst.graph;
    let tri = &inst.trisection;
    require_trisection(g, tri)?;
    if inst.x.len() != 7 || !inst.x.is_subset(&tri.y) {
        return Err(Error::input("X must be seven vertices of Y"));
    }
    if inst.h.is_empty() || !inst.h.is_subset(&tri.d2) || !g.is_connected_set(&inst.h) {
        return Err(Error::input("H must be a nonempty connected subset of D2"));
    }
    let d1w = PathWitness::new(g, tri.d1.clone())?;
    let a1 = classify_alignment(g, &d1w, &inst.x)?
        .ok_or_else(|| Error::contract("(D1, X) is not an alignment"))?;
    if !a1.is_consistent() {
        return Err(Error::contract("(D1, X) is not consistent"));
    }
    let order: [Vertex; 7] = a1.order.clone().try_into().expect("seven vertices");
    let nb = |x: Vertex| path_neighbor_indices(g, &tri.d1, x);
    let idx = AmicableIndices {
        i: *nb(order[0]).last().unwrap(),
        j: nb(order[6])[0],
        i2: nb(order[3])[0],
        j2: *nb(order[3]).last().unwrap(),
    };
    if !(idx.i + 2 < idx.i2 && idx.i2 <= idx.j2 && idx.j2 + 2 < idx.j) {
        return Err(Error::contract(format!(
            "index condition i+2 < i' <= j' < j-2 fails: {idx:?}"
        )));
    }
    let ctx = Ctx {
        g,
        d1: &tri.d1,
        x: order,
        idx,
    };
    let d1_kind = a1.kind;

    let shape = classify_shape(g, &inst.h)?;
    let path_case = shape
        .as_ref()
        .is_some_and(|s| s.is_path && inst.h.len() > 1);
    let (case, witness) = if path_case {
        align_case(&ctx, shape.as_ref().unwrap(), d1_kind, &inst.x)?
    } else {
        let shape = shape.ok_or_else(|| {
            Error::contract("H is neither a path nor one of the connectifier shapes")
        })?;
        if inst.h.len() < 2 {
            return Err(Error::contract(
                "connectifier H must have more than one vertex",
            ));
        }
        let c = make_connectifier(g, shape, &inst.x)?;
        let mut spine = c.shape.spine.clone();
        if !c.is_concentrated() {
            let ho = connectifier_order(g, &c)?;
            let mut rev = ho.clone();
            rev.reverse();
            if rev == a1.order {
                spine.reverse();
            } else if ho != a1.order {
                return Err(Error::contract("orders given by (D1, X) and (H, X) differ"));
            }
        }
        connectifier_case(&ctx, &c, &spine, d1_kind)?
    };

    let (z, theorem_check) = match &witness {
        AmicableWitness::Pyramid(p) => {
            p.validate(g)
                .map_err(|e| Error::contract(format!("constructed pyramid invalid: {e}")))?;
            (
                pyramid_z(g, p)?,
                verify_pyramid_separation(g, p, verify)?.ok(),
            )
        }
        AmicableWitness::Wheel(w) => {
            w.validate(g)
                .map_err(|e| Error::contract(format!("constructed wheel invalid: {e}")))?;
            (wheel_z(g, w)?, verify_wheel_separation(g, w, verify)?.ok())
        }
    };
    let mut allowed = tri.d2.clone();
    allowed.extend((idx.i + 2..=idx.j - 2).map(|k| tri.d1[k]));
    allowed.insert(order[3]);
    let contained = z.is_subset(&allowed);
    let size_ok = z.len() <= (2 * t).max(7);
    let (d_i, d_j) = (tri.d1[idx.i], tri.d1[idx.j]);
    let nz = g.closed_neighborhood(&z)?;
    let separated = !nz.contains(&d_i)
        && !nz.contains(&d_j)
        && g.separates(&nz, &VertexSet::from([d_i]), &VertexSet::from([d_j]))?;
    Ok(AmicableResult {
        case,
        z,
        witness,
        order: order.to_vec(),
        indices: idx,
        d_i,
        d_j,
        contained,
        size_ok,
        separated,
        theorem_check,
        verified: contained && size_ok && separated && theorem_check,
    })
}

fn connectifier_case(
    ctx: &Ctx,
    c: &Connectifier,
    spine: &[Vertex],
    d1_kind: AlignmentKind,
) -> Result<(AmicableCase, AmicableWitness)> {
    let g = ctx.g;
    let x = ctx.x;
    let ix = ctx.idx;
    let an = anchors(g, c, &[x[0], x[3], x[6]])?;
    let (a1, a4, a7) = (&an[0], &an[1], &an[2]);
    let rev = |v: &[Vertex]| v.iter().rev().copied().collect::<Vec<_>>();
    let pos: BTreeMap<Vertex, usize> = spine.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let spine_nbrs = |v: Vertex| -> Vec<usize> {
        let mut p: Vec<usize> = g
            .neighbors(v)
            .iter()
            .filter_map(|w| pos.get(w).copied())
            .collect();
        p.sort_unstable();
        p
    };
    let pyramid =
        |apex, base: [Vertex; 3], paths: [Vec<Vertex>; 3]| PyramidWitness { apex, base, paths };
    match c.shape.kind {
        ShapeKind::Caterpillar => {
            if d1_kind != AlignmentKind::Triangular {
                return Err(hypothesis(format!(
                    "caterpillar H forces a triangular D1 alignment, found {d1_kind:?}"
                )));
            }
            // p_l: the spine vertex at the foot of L_l.
            let foot = |a: &Anchor| -> Result<usize> {
                if let Some(&i) = pos.get(&a.s) {
                    return Ok(i);
                }
                match spine_nbrs(a.s).as_slice() {
                    [i] => Ok(*i),
                    _ => Err(Error::contract("caterpillar leg meets the spine twice")),
                }
            };
            let (p1, p4, p7) = (foot(a1)?, foot(a4)?, foot(a7)?);
            let paths = [
                concat(&[
                    &seg(spine, p4, p1),
                    &rev(&a1.l),
                    &[x[0]],
                    &ctx.dseg(ix.i, ix.i2),
                ]),
                concat(&[&[spine[p4]], &rev(&a4.l), &[x[3]]]),
                concat(&[
                    &seg(spine, p4, p7),
                    &rev(&a7.l),
                    &[x[6]],
                    &ctx.dseg(ix.j, ix.j2),
                ]),
            ];
            let base = [ctx.d(ix.i2), x[3], ctx.d(ix.j2)];
            Ok((
                AmicableCase::CaterpillarPyramid,
                AmicableWitness::Pyramid(pyramid(spine[p4], base, paths)),
            ))
        }
        ShapeKind::LineOfCaterpillar => {
            // (p_l, q_l): spine neighbors of s_l in order; equal when s_l is on the spine.
            let pq = |a: &Anchor| -> Result<(usize, usize)> {
                if let Some(&i) = pos.get(&a.s) {
                    return Ok((i, i));
                }
                match spine_nbrs(a.s).as_slice() {
                    [p, q] if q - p == 1 => Ok((*p, *q)),
                    _ => Err(Error::contract(
                        "line-of-caterpillar leg does not meet an edge of P(H)",
                    )),
                }
            };
            let ((_, q1), (p4, q4), (p7, _)) = (pq(a1)?, pq(a4)?, pq(a7)?);
            let tail1 = concat(&[&[x[0]], &a1.l, &seg(spine, q1, p4)]);
            let tail7 = concat(&[&[x[6]], &a7.l, &seg(spine, p7, q4)]);
            let base = [spine[p4], a4.s, spine[q4]];
            match d1_kind {
                AlignmentKind::Spiky => {
                    let apex = ctx.d(ix.i2);
                    let paths = [
                        concat(&[&ctx.dseg(ix.i2, ix.i), &tail1]),
                        concat(&[&[apex, x[3]], &a4.l]),
                        concat(&[&ctx.dseg(ix.j2, ix.j), &tail7]),
                    ];
                    Ok((
                        AmicableCase::LineCatSpiky,
                        AmicableWitness::Pyramid(pyramid(apex, base, paths)),
                    ))
                }
                AlignmentKind::Wide => {
                    let paths = [
                        concat(&[&[x[3]], &ctx.dseg(ix.i2, ix.i), &tail1]),
                        concat(&[&[x[3]], &a4.l]),
                        concat(&[&[x[3]], &ctx.dseg(ix.j2, ix.j), &tail7]),
                    ];
                    Ok((
                        AmicableCase::LineCatWide,
                        AmicableWitness::Pyramid(pyramid(x[3], base, paths)),
                    ))
                }
                k => Err(hypothesis(format!(
                    "line-of-caterpillar H forces spiky or wide D1, found {k:?}"
                ))),
            }
        }
        ShapeKind::SubdividedStar => {
            if d1_kind != AlignmentKind::Triangular || ix.j2 != ix.i2 + 1 {
                return Err(hypothesis(format!(
                    "subdivided-star H forces a triangular D1 alignment, found {d1_kind:?}"
                )));
            }
            let r = spine[0];
            let paths = [
                concat(&[&[r], &rev(&a1.l), &[x[0]], &ctx.dseg(ix.i, ix.i2)]),
                concat(&[&[r], &rev(&a4.l), &[x[3]]]),
                concat(&[&[r], &rev(&a7.l), &[x[6]], &ctx.dseg(ix.j, ix.j2)]),
            ];
            let base = [ctx.d(ix.i2), x[3], ctx.d(ix.j2)];
            Ok((
                AmicableCase::StarPyramid,
                AmicableWitness::Pyramid(pyramid(r, base, paths)),
            ))
        }
        ShapeKind::LineOfSubdividedStar => {
            let clique: VertexSet = spine.iter().copied().collect();
            let hv = |a: &Anchor| -> Result<Vertex> {
                if clique.contains(&a.s) {
                    return Ok(a.s);
                }
                let n = g.neighbors_in(a.s, &clique);
                match n.len() {
                    1 => Ok(*n.iter().next().unwrap()),
                    _ => Err(Error::contract(
                        "line-of-star leg meets the root clique twice",
                    )),
                }
            };
            let (h1, h4, h7) = (hv(a1)?, hv(a4)?, hv(a7)?);
            let tail1 = concat(&[&[x[0]], &a1.l, &[h1]]);
            let tail7 = concat(&[&[x[6]], &a7.l, &[h7]]);
            match d1_kind {
                AlignmentKind::Spiky => {
                    let apex = ctx.d(ix.i2);
                    let paths = [
                        concat(&[&ctx.dseg(ix.i2, ix.i), &tail1]),
                        concat(&[&[apex, x[3]], &a4.l, &[h4]]),
                        concat(&[&ctx.dseg(ix.j2, ix.j), &tail7]),
                    ];
                    Ok((
                        AmicableCase::LineStarSpiky,
                        AmicableWitness::Pyramid(pyramid(apex, [h1, h4, h7], paths)),
                    ))
                }
                AlignmentKind::Wide if !(a4.r == a4.s && a4.s == h4) => {
                    let paths = [
                        concat(&[&[x[3]], &ctx.dseg(ix.i2, ix.i), &tail1]),
                        concat(&[&[x[3]], &a4.l, &[h4]]),
                        concat(&[&[x[3]], &ctx.dseg(ix.j2, ix.j), &tail7]),
                    ];
                    Ok((
                        AmicableCase::LineStarWidePyramid,
                        AmicableWitness::Pyramid(pyramid(x[3], [h1, h4, h7], paths)),
                    ))
                }
                AlignmentKind::Wide => {
                    let hole = concat(&[
                        &[x[3]],
                        &ctx.dseg(ix.i2, ix.i),
                        &tail1,
                        &rev(&tail7),
                        &ctx.dseg(ix.j, ix.j2),
                    ]);
                    let w = Wheel::canonical(hole, h4);
                    if !w.is_special(g) {
                        return Err(Error::contract("expected a special wheel"));
                    }
                    Ok((
                        AmicableCase::LineStarWideSpecialWheel,
                        AmicableWitness::Wheel(w),
                    ))
                }
                k => Err(hypothesis(format!(
                    "line-of-star H forces spiky or wide D1, found {k:?}"
                ))),
            }
        }
        ShapeKind::Singleton => Err(Error::contract(
            "connectifier H must have more than one vertex",
        )),
    }
}

fn align_case(
    ctx: &Ctx,
    shape: &Shape,
    d1_kind: AlignmentKind,
    xs: &VertexSet,
) -> Result<(AmicableCase, AmicableWitness)> {
    let g = ctx.g;
    let x = ctx.x;
    let ix = ctx.idx;
    let hp = PathWitness::new(g, shape.spine.clone())?;
    let a2 = classify_alignment(g, &hp, xs)?
        .ok_or_else(|| Error::contract("(H, X) is not an alignment"))?;
    if !a2.is_consistent() {
        return Err(Error::contract("(H, X) is not consistent"));
    }
    let mut hpath = shape.spine.clone();
    let mut rev_order = a2.order.clone();
    rev_order.reverse();
    if rev_order == x {
        hpath.reverse();
    } else if a2.order != x {
        return Err(Error::contract("orders given by (D1, X) and (H, X) differ"));
    }
    let n1 = path_neighbor_indices(g, &hpath, x[0]);
    let n7 = path_neighbor_indices(g, &hpath, x[6]);
    let r = concat(&[&[x[0]], &seg(&hpath, *n1.last().unwrap(), n7[0]), &[x[6]]]);
    let hole = concat(&[&[ctx.d(ix.i)], &r, &ctx.dseg(ix.j, ix.i)]);
    // The last entry repeats d_i; drop it.
    let hole = hole[..hole.len() - 1].to_vec();
    let w = Wheel::canonical(hole, x[3]);
    let h_kind = attach_kind(&path_neighbor_indices(g, &hpath, x[3])).unwrap_or(AttachKind::Spiky);
    let d_kind = attach_kind(&path_neighbor_indices(g, ctx.d1, x[3])).unwrap_or(AttachKind::Spiky);
    let kinds = [d_kind, h_kind];
    let case = if kinds.contains(&AttachKind::Wide) {
        AmicableCase::AlignNonspecialWheel
    } else if kinds.contains(&AttachKind::Spiky) && kinds.contains(&AttachKind::Triangular) {
        AmicableCase::AlignSpecialWheel
    } else {
        return Err(hypothesis(format!(
            "alignments of kinds {d1_kind:?} and {:?} force a theta or prism",
            a2.kind
        )));
    };
    let special = w.is_special(g);
    if special != (case == AmicableCase::AlignSpecialWheel) {
        return Err(Error::contract(
            "wheel type does not match the alignment kinds",
        ));
    }
    Ok((case, AmicableWitness::Wheel(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    /// D1 and H both paths; x_l spiky on D1 at 4l+2 and `h_att` on H.
    fn align_instance(h_wide: bool) -> AmicabilityInstance {
        let k = 30;
        let mut b = GraphBuilder::new(0);
        let d1 = b.new_path(k);
        let hl = 30;
        let h = b.new_path(hl);
        let mut xs = Vec::new();
        for l in 0..7 {
            let x = b.add_vertex();
            b.add_edge(x, d1[4 * l + 2]);
            let base = 4 * l + 1;
            b.add_edge(x, h[base]);
            if h_wide {
                b.add_edge(x, h[base + 2]);
            } else {
                b.add_edge(x, h[base + 1]);
            }
            xs.push(x);
        }
        let g = b.build();
        AmicabilityInstance {
            trisection: Trisection {
                d1: d1.clone(),
                y: xs.iter().copied().collect(),
                d2: h.iter().copied().collect(),
            },
            graph: g,
            x: xs.iter().copied().collect(),
            h: h.iter().copied().collect(),
        }
    }

    #[test]
    fn trisection_checks() {
        let inst = align_instance(false);
        assert!(check_trisection(&inst.graph, &inst.trisection).valid);
        let mut bad = inst.trisection.clone();
        let x0 = *bad.y.iter().next().unwrap();
        bad.y.remove(&x0);
        bad.d2.insert(x0);
        assert!(!check_trisection(&inst.graph, &bad).valid);
    }

    #[test]
    fn align_special_wheel_case() {
        let inst = align_instance(false);
        let r = amicable_z(&inst, 3, &VerifyOptions::default()).unwrap();
        assert_eq!(r.case, AmicableCase::AlignSpecialWheel);
        assert_eq!(r.z.len(), 6);
        assert!(r.verified, "{r:?}");
    }

    #[test]
    fn align_nonspecial_wheel_case() {
        let inst = align_instance(true);
        let r = amicable_z(&inst, 3, &VerifyOptions::default()).unwrap();
        assert_eq!(r.case, AmicableCase::AlignNonspecialWheel);
        assert!(r.verified, "{r:?}");
    }

    #[test]
    fn amiability_on_paths() {
        let inst = align_instance(false);
        let w = amiability_search(&inst.graph, &inst.trisection, 3, &AmiabilityOptions::new(3))
            .unwrap();
        assert_eq!(w.x.len(), 3);
        assert_eq!(w.kind, AmiableKind::Alignment);
        let w = amiability_search(&inst.graph, &inst.trisection, 1, &AmiabilityOptions::new(3))
            .unwrap();
        assert_eq!(w.x.len(), 1);
    }

    #[test]
    fn case_tags_roundtrip() {
        for c in AmicableCase::ALL {
            assert_eq!(AmicableCase::from_tag(c.tag()), Some(c));
            let js = serde_json::to_string(&c).unwrap();
            assert_eq!(js, format!("\"{}\"", c.tag()));
        }
    }
}
