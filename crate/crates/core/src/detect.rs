//! Induced pattern detection with witnesses: K_{1,t}, thetas, prisms
//! (optionally admitting one zero-length path), pyramids, holes and wheels.
//!
//! Searches are exhaustive backtracking over induced paths. Every finder
//! returns the witness whose sorted vertex list is lexicographically least,
//! so results do not depend on iteration details. Exhaustive mode refuses
//! graphs above `DetectConfig::cap`; heuristic mode runs the same search
//! under a step budget and never reports absence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

pub const DEFAULT_DETECT_CAP: usize = 16;
const MASK_BITS: usize = 128;

type Mask = u128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// Bounded search; may find witnesses on larger graphs, never proves absence.
    Heuristic {
        step_budget: u64,
    },
}

#[derive(Clone, Copy, Debug)]
pub struct DetectConfig {
    pub cap: usize,
    pub mode: SearchMode,
    /// Require all prism paths to have length at least one.
    pub classical_prism: bool,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            cap: DEFAULT_DETECT_CAP,
            mode: SearchMode::Exhaustive,
            classical_prism: false,
        }
    }
}

impl DetectConfig {
    pub fn with_cap(cap: usize) -> Self {
        DetectConfig {
            cap,
            ..Default::default()
        }
    }
}

/// Outcome of a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", content = "witness", rename_all = "lowercase")]
pub enum Detection<W> {
    Found(W),
    Absent,
    /// Heuristic search ended without a witness.
    Undecided,
}

impl<W> Detection<W> {
    pub fn found(self) -> Option<W> {
        match self {
            Detection::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Detection::Found(_))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, Detection::Absent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarWitness {
    pub center: Vertex,
    pub leaves: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaWitness {
    pub ends: [Vertex; 2],
    /// Each path runs from `ends[0]` to `ends[1]`.
    pub paths: [Vec<Vertex>; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrismWitness {
    pub triangle_a: [Vertex; 3],
    pub triangle_b: [Vertex; 3],
    /// `paths[i]` runs from `triangle_a[i]` to `triangle_b[i]`; a single
    /// vertex when the two triangles share it.
    pub paths: [Vec<Vertex>; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PyramidWitness {
    pub apex: Vertex,
    pub base: [Vertex; 3],
    /// `paths[i]` runs from the apex to `base[i]`.
    pub paths: [Vec<Vertex>; 3],
}

/// A hole with a hub having at least three neighbors on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wheel {
    /// Cyclic vertex order of the hole.
    pub hole: Vec<Vertex>,
    pub hub: Vertex,
}

fn sorted_key(vs: impl IntoIterator<Item = Vertex>) -> Vec<Vertex> {
    let mut v: Vec<Vertex> = vs.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl StarWitness {
    pub fn vertices(&self) -> Vec<Vertex> {
        sorted_key(std::iter::once(self.center).chain(self.leaves.iter().copied()))
    }

    pub fn validate(&self, g: &Graph, t: usize) -> std::result::Result<(), String> {
        let leaves: VertexSet = self.leaves.iter().copied().collect();
        if leaves.len() != t || self.leaves.len() != t {
            return Err(format!("expected {t} distinct leaves"));
        }
        if leaves.contains(&self.center) {
            return Err("center among leaves".into());
        }
        if !leaves.iter().all(|&l| g.has_edge(self.center, l)) {
            return Err("leaf not adjacent to center".into());
        }
        if !g.is_stable(&leaves) {
            return Err("leaves not stable".into());
        }
        Ok(())
    }
}

impl ThetaWitness {
    pub fn vertices(&self) -> Vec<Vertex> {
        sorted_key(self.paths.iter().flatten().copied())
    }

    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        let [a, b] = self.ends;
        if a == b || g.has_edge(a, b) {
            return Err("ends must be distinct and non-adjacent".into());
        }
        let mut interiors = Vec::new();
        for p in &self.paths {
            if p.len() < 3 || p[0] != a || *p.last().unwrap() != b {
                return Err(format!(
                    "path {p:?} must run from {a} to {b} with length >= 2"
                ));
            }
            if !g.is_induced_path(p) {
                return Err(format!("{p:?} is not an induced path"));
            }
            interiors.push(p[1..p.len() - 1].iter().copied().collect::<VertexSet>());
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if !g.anticomplete_between(&interiors[i], &interiors[j]) {
                    return Err(format!(
                        "interiors {i} and {j} not disjoint and anticomplete"
                    ));
                }
            }
        }
        Ok(())
    }
}

impl PrismWitness {
    pub fn vertices(&self) -> Vec<Vertex> {
        sorted_key(self.paths.iter().flatten().copied())
    }

    pub fn validate(&self, g: &Graph, classical: bool) -> std::result::Result<(), String> {
        let ta: VertexSet = self.triangle_a.iter().copied().collect();
        let tb: VertexSet = self.triangle_b.iter().copied().collect();
        if ta.len() != 3 || tb.len() != 3 || !g.is_clique(&ta) || !g.is_clique(&tb) {
            return Err("triangles are not triangles".into());
        }
        let mut sets = Vec::new();
        for (i, p) in self.paths.iter().enumerate() {
            let (a, b) = (self.triangle_a[i], self.triangle_b[i]);
            if p.is_empty() || p[0] != a || *p.last().unwrap() != b {
                return Err(format!("path {i} must run from {a} to {b}"));
            }
            if !g.is_induced_path(p) {
                return Err(format!("path {i} is not induced"));
            }
            if classical && p.len() < 2 {
                return Err("classical prisms have no zero-length path".into());
            }
            sets.push(p.iter().copied().collect::<VertexSet>());
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if !sets[i].is_disjoint(&sets[j]) {
                    return Err(format!("paths {i} and {j} intersect"));
                }
                for &u in &sets[i] {
                    for &v in &sets[j] {
                        let allowed = (u == self.triangle_a[i] && v == self.triangle_a[j])
                            || (u == self.triangle_b[i] && v == self.triangle_b[j]);
                        if g.has_edge(u, v) != allowed {
                            return Err(format!(
                                "bad cross pair {u}-{v} between paths {i} and {j}"
                            ));
                        }
                    }
                }
                let mut cycle = self.paths[i].clone();
                cycle.extend(self.paths[j].iter().rev());
                if !g.is_hole(&cycle) {
                    return Err(format!("paths {i} and {j} do not form a hole"));
                }
            }
        }
        Ok(())
    }
}

impl PyramidWitness {
    pub fn vertices(&self) -> Vec<Vertex> {
        sorted_key(self.paths.iter().flatten().copied())
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.paths.iter().flatten().copied().collect()
    }

    /// Vertices of the paths other than the apex, per path.
    pub fn path_sets(&self) -> [VertexSet; 3] {
        let f = |p: &Vec<Vertex>| p[1..].iter().copied().collect::<VertexSet>();
        [f(&self.paths[0]), f(&self.paths[1]), f(&self.paths[2])]
    }

    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        let base: VertexSet = self.base.iter().copied().collect();
        if base.len() != 3 || !g.is_clique(&base) {
            return Err("base is not a triangle".into());
        }
        if base.contains(&self.apex) {
            return Err("apex lies in the base".into());
        }
        for (i, p) in self.paths.iter().enumerate() {
            if p.len() < 2 || p[0] != self.apex || *p.last().unwrap() != self.base[i] {
                return Err(format!(
                    "path {i} must run from the apex to {}",
                    self.base[i]
                ));
            }
            if !g.is_induced_path(p) {
                return Err(format!("path {i} is not induced"));
            }
        }
        let sets = self.path_sets();
        for i in 0..3 {
            for j in i + 1..3 {
                if !sets[i].is_disjoint(&sets[j]) {
                    return Err(format!("paths {i} and {j} intersect outside the apex"));
                }
                for &u in &sets[i] {
                    for &v in &sets[j] {
                        let allowed = u == self.base[i] && v == self.base[j];
                        if g.has_edge(u, v) != allowed {
                            return Err(format!("bad cross pair {u}-{v}"));
                        }
                    }
                }
                let mut cycle = self.paths[i].clone();
                cycle.extend(self.paths[j][1..].iter().rev());
                if !g.is_hole(&cycle) {
                    return Err(format!("paths {i} and {j} do not form a hole"));
                }
            }
        }
        Ok(())
    }
}

impl Wheel {
    /// Rotates and orients the hole so it starts at its smallest vertex and
    /// continues toward the smaller of that vertex's two hole neighbors.
    pub fn canonical(hole: Vec<Vertex>, hub: Vertex) -> Wheel {
        let k = hole.len();
        let start = (0..k).min_by_key(|&i| hole[i]).unwrap_or(0);
        let mut rot: Vec<Vertex> = (0..k).map(|i| hole[(start + i) % k]).collect();
        if k > 2 && rot[k - 1] < rot[1] {
            rot[1..].reverse();
        }
        Wheel { hole: rot, hub }
    }

    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        if !g.is_hole(&self.hole) {
            return Err("not a hole".into());
        }
        if self.hole.contains(&self.hub) {
            return Err("hub lies on the hole".into());
        }
        if self.spoke_positions(g).len() < 3 {
            return Err("hub has fewer than three hole neighbors".into());
        }
        Ok(())
    }

    /// Hole positions adjacent to the hub.
    fn spoke_positions(&self, g: &Graph) -> Vec<usize> {
        (0..self.hole.len())
            .filter(|&i| g.has_edge(self.hub, self.hole[i]))
            .collect()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.hole.iter().copied().chain([self.hub]).collect()
    }

    /// N_H(c): hub neighbors on the hole.
    pub fn hub_neighbors(&self, g: &Graph) -> VertexSet {
        self.spoke_positions(g)
            .into_iter()
            .map(|i| self.hole[i])
            .collect()
    }

    /// Sectors in cyclic order, each as the path from one spoke to the next.
    pub fn sectors(&self, g: &Graph) -> Vec<Vec<Vertex>> {
        let pos = self.spoke_positions(g);
        let k = self.hole.len();
        let mut out = Vec::new();
        for (idx, &s) in pos.iter().enumerate() {
            let e = pos[(idx + 1) % pos.len()];
            let mut sector = vec![self.hole[s]];
            let mut i = s;
            loop {
                i = (i + 1) % k;
                sector.push(self.hole[i]);
                if i == e {
                    break;
                }
            }
            out.push(sector);
        }
        out
    }

    /// Exactly three sectors, one of length one, the other two of length >= 2.
    pub fn is_special(&self, g: &Graph) -> bool {
        let sectors = self.sectors(g);
        if sectors.len() != 3 {
            return false;
        }
        let short = sectors.iter().filter(|s| s.len() == 2).count();
        short == 1
    }
}

/// Step counter shared by the searches; aborts heuristic runs at budget.
struct Budget {
    steps: u64,
    limit: Option<u64>,
    exhausted: bool,
}

impl Budget {
    fn new(mode: SearchMode) -> Self {
        Budget {
            steps: 0,
            limit: match mode {
                SearchMode::Exhaustive => None,
                SearchMode::Heuristic { step_budget } => Some(step_budget),
            },
            exhausted: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.steps += 1;
        if let Some(l) = self.limit {
            if self.steps > l {
                self.exhausted = true;
            }
        }
        !self.exhausted
    }
}

struct Ctx<'g> {
    g: &'g Graph,
    nbr: Vec<Mask>,
}

impl<'g> Ctx<'g> {
    fn new(g: &'g Graph) -> Self {
        let nbr = g
            .vertices()
            .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | bit(u)))
            .collect();
        Ctx { g, nbr }
    }

    /// Calls `f` on every induced path from `from` to `to` whose vertices
    /// other than the ends lie in `allowed`.
    fn induced_paths(
        &self,
        from: Vertex,
        to: Vertex,
        allowed: Mask,
        budget: &mut Budget,
        f: &mut dyn FnMut(&[Vertex]),
    ) {
        if from == to {
            f(&[from]);
            return;
        }
        let mut path = vec![from];
        // Vertices adjacent to some path vertex other than the last one.
        self.extend(&mut path, bit(from), 0, to, allowed, budget, f);
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        path: &mut Vec<Vertex>,
        on_path: Mask,
        blocked: Mask,
        to: Vertex,
        allowed: Mask,
        budget: &mut Budget,
        f: &mut dyn FnMut(&[Vertex]),
    ) {
        if !budget.tick() {
            return;
        }
        let last = *path.last().unwrap();
        let cand = self.nbr[last] & !on_path & !blocked;
        if cand & bit(to) != 0 {
            path.push(to);
            f(path);
            path.pop();
        }
        // Any vertex adjacent to `to` other than `to` itself would have to be
        // followed by `to`; that is handled at the next level.
        if self.nbr[last] & bit(to) != 0 {
            // `last` is adjacent to `to`; continuing would create a chord.
            return;
        }
        let mut rest = cand & allowed & !bit(to);
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            path.push(v);
            self.extend(
                path,
                on_path | bit(v),
                blocked | self.nbr[last],
                to,
                allowed,
                budget,
                f,
            );
            path.pop();
        }
    }
}

fn bit(v: Vertex) -> Mask {
    1 << v
}

fn mask_of<'a>(vs: impl IntoIterator<Item = &'a Vertex>) -> Mask {
    vs.into_iter().fold(0, |m, &v| m | bit(v))
}

fn full_mask(n: usize) -> Mask {
    if n == MASK_BITS {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

fn check_size(g: &Graph, cfg: &DetectConfig, what: &str) -> Result<()> {
    if g.n() > MASK_BITS {
        return Err(Error::resource(format!(
            "{what} detection supports at most {MASK_BITS} vertices, graph has {}",
            g.n()
        )));
    }
    if cfg.mode == SearchMode::Exhaustive && g.n() > cfg.cap {
        return Err(Error::resource(format!(
            "exhaustive {what} detection on {} vertices exceeds cap {}",
            g.n(),
            cfg.cap
        )));
    }
    Ok(())
}

fn conclude<W>(
    best: Option<(Vec<Vertex>, W)>,
    budget: &Budget,
    cfg: &DetectConfig,
) -> Detection<W> {
    match best {
        Some((_, w)) => Detection::Found(w),
        None if budget.exhausted || cfg.mode != SearchMode::Exhaustive => Detection::Undecided,
        None => Detection::Absent,
    }
}

fn keep_min<W>(best: &mut Option<(Vec<Vertex>, W)>, key: Vec<Vertex>, w: W) {
    if best.as_ref().is_none_or(|(k, _)| key < *k) {
        *best = Some((key, w));
    }
}

/// Lexicographically least stable `t`-subset of `cands` (sorted).
fn stable_subset(g: &Graph, cands: &[Vertex], t: usize) -> Option<Vec<Vertex>> {
    fn go(g: &Graph, cands: &[Vertex], t: usize, start: usize, acc: &mut Vec<Vertex>) -> bool {
        if acc.len() == t {
            return true;
        }
        for i in start..cands.len() {
            if cands.len() - i < t - acc.len() {
                return false;
            }
            let v = cands[i];
            if acc.iter().all(|&u| !g.has_edge(u, v)) {
                acc.push(v);
                if go(g, cands, t, i + 1, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    go(g, cands, t, 0, &mut acc).then_some(acc)
}

/// A vertex with `t` pairwise non-adjacent neighbors.
pub fn find_k1t(g: &Graph, t: usize) -> Result<Option<StarWitness>> {
    if t == 0 {
        return Err(Error::input("t must be at least 1"));
    }
    let mut best: Option<(Vec<Vertex>, StarWitness)> = None;
    for v in g.vertices() {
        if let Some(leaves) = stable_subset(g, g.neighbors(v), t) {
            let w = StarWitness { center: v, leaves };
            keep_min(&mut best, w.vertices(), w);
        }
    }
    Ok(best.map(|(_, w)| w))
}

pub fn find_theta(g: &Graph, cfg: &DetectConfig) -> Result<Detection<ThetaWitness>> {
    check_size(g, cfg, "theta")?;
    let ctx = Ctx::new(g);
    let mut budget = Budget::new(cfg.mode);
    let mut best: Option<(Vec<Vertex>, ThetaWitness)> = None;
    let all = full_mask(g.n());
    for a in g.vertices() {
        for b in a + 1..g.n() {
            if g.has_edge(a, b) || g.degree(a) < 3 || g.degree(b) < 3 {
                continue;
            }
            // (path, interior mask, closed neighborhood of interior)
            let mut paths: Vec<(Vec<Vertex>, Mask, Mask)> = Vec::new();
            let allowed = all & !bit(a) & !bit(b);
            ctx.induced_paths(a, b, allowed, &mut budget, &mut |p| {
                if p.len() >= 3 {
                    let interior = mask_of(&p[1..p.len() - 1]);
                    let closed = p[1..p.len() - 1]
                        .iter()
                        .fold(interior, |m, &v| m | ctx.nbr[v]);
                    paths.push((p.to_vec(), interior, closed));
                }
            });
            for i in 0..paths.len() {
                for j in i + 1..paths.len() {
                    if paths[i].1 & paths[j].2 != 0 {
                        continue;
                    }
                    for k in j + 1..paths.len() {
                        if paths[k].1 & (paths[i].2 | paths[j].2) != 0 {
                            continue;
                        }
                        let w = ThetaWitness {
                            ends: [a, b],
                            paths: [paths[i].0.clone(), paths[j].0.clone(), paths[k].0.clone()],
                        };
                        keep_min(&mut best, w.vertices(), w);
                    }
                }
            }
            if budget.exhausted {
                return Ok(conclude(best, &budget, cfg));
            }
        }
    }
    Ok(conclude(best, &budget, cfg))
}

fn triangles(g: &Graph) -> Vec<[Vertex; 3]> {
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        for &w in g.neighbors(v) {
            if w > v && g.has_edge(u, w) {
                out.push([u, v, w]);
            }
        }
    }
    out
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn find_prism(g: &Graph, cfg: &DetectConfig) -> Result<Detection<PrismWitness>> {
    check_size(g, cfg, "prism")?;
    let ctx = Ctx::new(g);
    let mut budget = Budget::new(cfg.mode);
    let mut best: Option<(Vec<Vertex>, PrismWitness)> = None;
    let tris = triangles(g);
    let all = full_mask(g.n());
    for (ia, ta) in tris.iter().enumerate() {
        for tb in &tris[ia + 1..] {
            let shared: Vec<Vertex> = ta.iter().copied().filter(|v| tb.contains(v)).collect();
            if shared.len() > 1 || (cfg.classical_prism && !shared.is_empty()) {
                continue;
            }
            for perm in PERMS {
                let bs = [tb[perm[0]], tb[perm[1]], tb[perm[2]]];
                if !prism_frame_ok(g, ta, &bs) {
                    continue;
                }
                let corners = mask_of(ta.iter().chain(bs.iter()));
                let allowed = all & !corners;
                let mut chosen: Vec<Vec<Vertex>> = Vec::new();
                prism_paths(
                    &ctx,
                    ta,
                    &bs,
                    allowed,
                    0,
                    &mut chosen,
                    &mut budget,
                    &mut |ps| {
                        let w = PrismWitness {
                            triangle_a: *ta,
                            triangle_b: bs,
                            paths: [ps[0].clone(), ps[1].clone(), ps[2].clone()],
                        };
                        keep_min(&mut best, w.vertices(), w);
                    },
                );
                if budget.exhausted {
                    return Ok(conclude(best, &budget, cfg));
                }
            }
        }
    }
    Ok(conclude(best, &budget, cfg))
}

/// Adjacencies among the six corners must be the triangles plus possibly
/// the pairs `a_i b_i`; a shared corner must be matched to itself.
fn prism_frame_ok(g: &Graph, ta: &[Vertex; 3], tb: &[Vertex; 3]) -> bool {
    for i in 0..3 {
        let shared_a = tb.contains(&ta[i]);
        let shared_b = ta.contains(&tb[i]);
        if (shared_a || shared_b) && ta[i] != tb[i] {
            return false;
        }
        for j in 0..3 {
            if i == j {
                continue;
            }
            if ta[i] == tb[j] {
                return false;
            }
            // A shared corner is both a and b; its edges are triangle edges.
            let shared = ta[j] == tb[j] || ta[i] == tb[i];
            if !shared && g.has_edge(ta[i], tb[j]) {
                return false;
            }
        }
    }
    // Two zero-length paths cannot occur (triangles share at most one vertex),
    // and a zero-length path forces the others to have length >= 2.
    let zero: Vec<usize> = (0..3).filter(|&i| ta[i] == tb[i]).collect();
    if !zero.is_empty() {
        for i in 0..3 {
            if ta[i] != tb[i] && g.has_edge(ta[i], tb[i]) {
                return false;
            }
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn prism_paths(
    ctx: &Ctx,
    ta: &[Vertex; 3],
    tb: &[Vertex; 3],
    allowed: Mask,
    i: usize,
    chosen: &mut Vec<Vec<Vertex>>,
    budget: &mut Budget,
    f: &mut dyn FnMut(&[Vec<Vertex>]),
) {
    if i == 3 {
        f(chosen);
        return;
    }
    let mut found: Vec<Vec<Vertex>> = Vec::new();
    ctx.induced_paths(ta[i], tb[i], allowed, budget, &mut |p| {
        found.push(p.to_vec())
    });
    for p in found {
        if !prism_compatible(ctx, ta, tb, i, &p, chosen) {
            continue;
        }
        let interior = if p.len() > 2 {
            mask_of(&p[1..p.len() - 1])
        } else {
            0
        };
        chosen.push(p);
        prism_paths(ctx, ta, tb, allowed & !interior, i + 1, chosen, budget, f);
        chosen.pop();
        if budget.exhausted {
            return;
        }
    }
}

fn prism_compatible(
    ctx: &Ctx,
    ta: &[Vertex; 3],
    tb: &[Vertex; 3],
    i: usize,
    p: &[Vertex],
    chosen: &[Vec<Vertex>],
) -> bool {
    for (j, q) in chosen.iter().enumerate() {
        for &u in p {
            for &v in q {
                if u == v {
                    return false;
                }
                let allowed = (u == ta[i] && v == ta[j]) || (u == tb[i] && v == tb[j]);
                if ctx.g.has_edge(u, v) != allowed {
                    return false;
                }
            }
        }
    }
    true
}

pub fn find_pyramid(g: &Graph, cfg: &DetectConfig) -> Result<Detection<PyramidWitness>> {
    check_size(g, cfg, "pyramid")?;
    let ctx = Ctx::new(g);
    let mut budget = Budget::new(cfg.mode);
    let mut best: Option<(Vec<Vertex>, PyramidWitness)> = None;
    let all = full_mask(g.n());
    for base in triangles(g) {
        for apex in g.vertices() {
            if base.contains(&apex) || g.degree(apex) < 3 {
                continue;
            }
            if base.iter().filter(|&&b| g.has_edge(apex, b)).count() > 1 {
                continue;
            }
            let allowed = all & !mask_of(&base) & !bit(apex);
            let mut chosen = Vec::new();
            pyramid_paths(
                &ctx,
                apex,
                &base,
                allowed,
                0,
                &mut chosen,
                &mut budget,
                &mut |ps| {
                    let w = PyramidWitness {
                        apex,
                        base,
                        paths: [ps[0].clone(), ps[1].clone(), ps[2].clone()],
                    };
                    keep_min(&mut best, w.vertices(), w);
                },
            );
            if budget.exhausted {
                return Ok(conclude(best, &budget, cfg));
            }
        }
    }
    Ok(conclude(best, &budget, cfg))
}

#[allow(clippy::too_many_arguments)]
fn pyramid_paths(
    ctx: &Ctx,
    apex: Vertex,
    base: &[Vertex; 3],
    allowed: Mask,
    i: usize,
    chosen: &mut Vec<Vec<Vertex>>,
    budget: &mut Budget,
    f: &mut dyn FnMut(&[Vec<Vertex>]),
) {
    if i == 3 {
        f(chosen);
        return;
    }
    let mut found: Vec<Vec<Vertex>> = Vec::new();
    ctx.induced_paths(apex, base[i], allowed, budget, &mut |p| {
        found.push(p.to_vec())
    });
    for p in found {
        let ok = chosen.iter().enumerate().all(|(j, q)| {
            p[1..].iter().all(|&u| {
                q[1..]
                    .iter()
                    .all(|&v| u != v && ctx.g.has_edge(u, v) == (u == base[i] && v == base[j]))
            })
        });
        if !ok {
            continue;
        }
        let interior = mask_of(&p[1..]);
        chosen.push(p);
        pyramid_paths(
            ctx,
            apex,
            base,
            allowed & !interior,
            i + 1,
            chosen,
            budget,
            f,
        );
        chosen.pop();
        if budget.exhausted {
            return;
        }
    }
}

/// All holes of length at least `min_len`, each in canonical rotation.
pub fn find_holes(g: &Graph, min_len: usize, cfg: &DetectConfig) -> Result<Vec<Vec<Vertex>>> {
    check_size(g, cfg, "hole")?;
    let ctx = Ctx::new(g);
    let mut budget = Budget::new(cfg.mode);
    let mut out = Vec::new();
    for s in g.vertices() {
        let above = full_mask(g.n()) & !full_mask(s + 1);
        let mut path = vec![s];
        hole_extend(
            &ctx,
            s,
            &mut path,
            bit(s),
            0,
            above,
            min_len.max(4),
            &mut budget,
            &mut out,
        );
        if budget.exhausted {
            return Err(Error::resource("hole enumeration budget exhausted"));
        }
    }
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn hole_extend(
    ctx: &Ctx,
    s: Vertex,
    path: &mut Vec<Vertex>,
    on_path: Mask,
    blocked: Mask,
    allowed: Mask,
    min_len: usize,
    budget: &mut Budget,
    out: &mut Vec<Vec<Vertex>>,
) {
    if !budget.tick() {
        return;
    }
    let last = *path.last().unwrap();
    // `blocked` holds neighbors of path vertices other than `s` and `last`.
    let mut cand = ctx.nbr[last] & allowed & !on_path & !blocked;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if path.len() >= 2 && ctx.nbr[s] & bit(v) != 0 {
            // v closes the cycle.
            if path.len() + 1 >= min_len && path[1] < v {
                let mut hole = path.clone();
                hole.push(v);
                out.push(hole);
            }
            continue;
        }
        let new_blocked = if path.len() >= 2 {
            blocked | ctx.nbr[last]
        } else {
            blocked
        };
        path.push(v);
        hole_extend(
            ctx,
            s,
            path,
            on_path | bit(v),
            new_blocked,
            allowed,
            min_len,
            budget,
            out,
        );
        path.pop();
    }
}

/// Every (hole, hub) pair with hole length at least `min_hole_len`.
pub fn find_wheels(g: &Graph, min_hole_len: usize, cfg: &DetectConfig) -> Result<Vec<Wheel>> {
    if min_hole_len < 4 {
        return Err(Error::input("minimum hole length must be at least 4"));
    }
    let holes = find_holes(g, min_hole_len, cfg)?;
    let mut out = Vec::new();
    for hole in holes {
        let on: VertexSet = hole.iter().copied().collect();
        for c in g.vertices() {
            if on.contains(&c) {
                continue;
            }
            if g.neighbors(c).iter().filter(|v| on.contains(v)).count() >= 3 {
                out.push(Wheel {
                    hole: hole.clone(),
                    hub: c,
                });
            }
        }
    }
    Ok(out)
}

/// The first forbidden pattern found when testing membership in C_t.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "lowercase")]
pub enum Violation {
    K1t(StarWitness),
    Theta(ThetaWitness),
    Prism(PrismWitness),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub member: bool,
    pub violation: Option<Violation>,
}

/// Theta- and prism-freeness, returning the first witness found.
pub fn theta_prism_free(g: &Graph, cfg: &DetectConfig) -> Result<Option<Violation>> {
    if let Some(w) = find_theta(g, cfg)?.found() {
        return Ok(Some(Violation::Theta(w)));
    }
    if let Some(w) = find_prism(g, cfg)?.found() {
        return Ok(Some(Violation::Prism(w)));
    }
    Ok(None)
}

/// Membership in C_t (theta-, prism- and K_{1,t}-free). The cheap star test
/// runs first.
pub fn in_class_ct(g: &Graph, t: usize, cfg: &DetectConfig) -> Result<ClassVerdict> {
    if cfg.mode != SearchMode::Exhaustive {
        return Err(Error::input("class membership needs exhaustive search"));
    }
    if let Some(w) = find_k1t(g, t)? {
        return Ok(ClassVerdict {
            member: false,
            violation: Some(Violation::K1t(w)),
        });
    }
    let violation = theta_prism_free(g, cfg)?;
    Ok(ClassVerdict {
        member: violation.is_none(),
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn cfg() -> DetectConfig {
        DetectConfig::default()
    }

    fn prism_graph() -> Graph {
        Graph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap()
    }

    /// Apex 0 adjacent to b3 = 5; paths 0-1-3 and 0-2-4; base {3, 4, 5}.
    pub(crate) fn minimal_pyramid() -> Graph {
        Graph::from_edges(
            6,
            &[
                (0, 1),
                (1, 3),
                (0, 2),
                (2, 4),
                (0, 5),
                (3, 4),
                (4, 5),
                (3, 5),
            ],
        )
        .unwrap()
    }

    fn star(t: usize) -> Graph {
        let edges: Vec<_> = (1..=t).map(|i| (0, i)).collect();
        Graph::from_edges(t + 1, &edges).unwrap()
    }

    #[test]
    fn k1t_examples() {
        assert!(find_k1t(&star(3), 3).unwrap().is_some());
        assert!(find_k1t(&Graph::cycle(6), 3).unwrap().is_none());
        let w = find_k1t(&Graph::petersen(), 3).unwrap().unwrap();
        assert_eq!(w.vertices(), vec![0, 1, 2, 6]);
        assert!(w.validate(&Graph::petersen(), 3).is_ok());
        assert!(find_k1t(&Graph::petersen(), 4).unwrap().is_none());
    }

    #[test]
    fn theta_examples() {
        let k23 = Graph::complete_bipartite(3, 2);
        let w = find_theta(&k23, &cfg()).unwrap().found().unwrap();
        assert_eq!(w.ends, [3, 4]);
        assert!(w.validate(&k23).is_ok());
        assert!(find_theta(&Graph::cycle(7), &cfg()).unwrap().is_absent());
    }

    #[test]
    fn prism_examples() {
        let p = prism_graph();
        let w = find_prism(&p, &cfg()).unwrap().found().unwrap();
        assert!(w.validate(&p, true).is_ok());
        assert!(find_prism(&Graph::complete(4), &cfg()).unwrap().is_absent());
    }

    #[test]
    fn line_wheel_is_a_prism_only_in_the_extended_sense() {
        // C6 plus a hub adjacent to 0,1 and 3,4: two triangles sharing the hub.
        let mut b = GraphBuilder::new(7);
        for i in 0..6 {
            b.add_edge(i, (i + 1) % 6);
        }
        for v in [0, 1, 3, 4] {
            b.add_edge(6, v);
        }
        let g = b.build();
        let w = find_prism(&g, &cfg()).unwrap().found().unwrap();
        assert!(w.validate(&g, false).is_ok());
        assert!(w.paths.iter().any(|p| p == &vec![6]));
        let classical = DetectConfig {
            classical_prism: true,
            ..cfg()
        };
        assert!(find_prism(&g, &classical).unwrap().is_absent());
    }

    #[test]
    fn pyramid_examples() {
        let g = minimal_pyramid();
        let w = find_pyramid(&g, &cfg()).unwrap().found().unwrap();
        assert_eq!(w.apex, 0);
        assert!(w.validate(&g).is_ok());
        assert!(find_pyramid(&Graph::path(8), &cfg()).unwrap().is_absent());
    }

    fn c8_hub(spokes: &[usize]) -> Graph {
        let mut b = GraphBuilder::new(9);
        for i in 0..8 {
            b.add_edge(i, (i + 1) % 8);
        }
        for &s in spokes {
            b.add_edge(8, s);
        }
        b.build()
    }

    #[test]
    fn wheel_examples() {
        // h1..h8 are 0..7.
        let g = c8_hub(&[0, 2, 4]);
        let ws = find_wheels(&g, 4, &cfg()).unwrap();
        assert_eq!(ws.len(), 1);
        assert!(!ws[0].is_special(&g));
        assert_eq!(ws[0].sectors(&g).len(), 3);

        let g = c8_hub(&[0, 1, 4]);
        let ws = find_wheels(&g, 4, &cfg()).unwrap();
        let big: Vec<_> = ws.iter().filter(|w| w.hole.len() == 8).collect();
        assert_eq!(big.len(), 1);
        assert!(big[0].is_special(&g));
        let mut lens: Vec<usize> = big[0].sectors(&g).iter().map(|s| s.len() - 1).collect();
        lens.sort();
        assert_eq!(lens, vec![1, 3, 4]);

        let mut b = GraphBuilder::new(6);
        for i in 0..5 {
            b.add_edge(i, (i + 1) % 5);
            b.add_edge(5, i);
        }
        assert!(find_wheels(&b.build(), 6, &cfg()).unwrap().is_empty());
    }

    #[test]
    fn class_examples() {
        assert!(in_class_ct(&Graph::cycle(9), 3, &cfg()).unwrap().member);
        let v = in_class_ct(&Graph::complete_bipartite(2, 3), 5, &cfg()).unwrap();
        assert!(matches!(v.violation, Some(Violation::Theta(_))));
        let v = in_class_ct(&prism_graph(), 5, &cfg()).unwrap();
        assert!(matches!(v.violation, Some(Violation::Prism(_))));
    }

    #[test]
    fn exhaustive_cap_is_resource_error() {
        let g = Graph::cycle(20);
        assert!(matches!(find_theta(&g, &cfg()), Err(Error::Resource(_))));
        let heur = DetectConfig {
            mode: SearchMode::Heuristic {
                step_budget: 10_000,
            },
            ..cfg()
        };
        assert_eq!(find_theta(&g, &heur).unwrap(), Detection::Undecided);
    }

    #[test]
    fn holes_are_listed_once() {
        assert_eq!(find_holes(&Graph::cycle(7), 4, &cfg()).unwrap().len(), 1);
        // K_{2,3} has three 4-holes.
        assert_eq!(
            find_holes(&Graph::complete_bipartite(2, 3), 4, &cfg())
                .unwrap()
                .len(),
            3
        );
    }
}
