//! Balanced separators, the separator-to-decomposition recursion, tree
//! decomposition checks, exact tree independence number for tiny graphs,
//! and maximum-weight stable set by dynamic programming over bags.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::detect::find_k1t;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::weights::{format_rational, ratio, rational_serde, Rational, WeightFn};

/// Largest graph accepted by [`exact_tia_small`].
pub const EXACT_TIA_CAP: usize = 10;
/// Largest graph accepted by [`MinAlphaOracle`].
pub const MIN_ALPHA_ORACLE_CAP: usize = 16;
/// Most stable subsets enumerated per bag in [`mwis_on_decomposition`].
pub const STABLE_SUBSET_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub balanced: bool,
    #[serde(with = "rational_serde")]
    pub heaviest: Rational,
    #[serde(with = "rational_serde::vec")]
    pub component_weights: Vec<Rational>,
}

fn require_normal(w: &WeightFn, g: &Graph) -> Result<()> {
    if w.n() != g.n() {
        return Err(Error::input(format!(
            "weight function has {} entries for {} vertices",
            w.n(),
            g.n()
        )));
    }
    if !w.is_normal() {
        return Err(Error::contract(format!(
            "weight function is not normal (total {})",
            format_rational(&w.total())
        )));
    }
    Ok(())
}

/// Exact check that every component of G \ X weighs at most 1/2.
pub fn is_balanced(g: &Graph, w: &WeightFn, x: &VertexSet) -> Result<BalanceReport> {
    require_normal(w, g)?;
    let comps = g.components(x)?;
    let component_weights: Vec<Rational> = comps.iter().map(|c| w.weight(c)).collect();
    let heaviest = component_weights
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    Ok(BalanceReport {
        balanced: heaviest <= ratio(1, 2),
        heaviest,
        component_weights,
    })
}

/// A set Y whose closed neighborhood is a balanced separator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedSeparatorCert {
    #[serde(rename = "Y")]
    pub y: VertexSet,
    #[serde(rename = "NY")]
    pub ny: VertexSet,
    pub w: WeightFn,
    #[serde(with = "rational_serde::vec")]
    pub component_weights: Vec<Rational>,
}

/// Calls `f` on every k-subset of 0..n in lexicographic order until it returns true.
fn for_each_combination(
    n: usize,
    k: usize,
    mut f: impl FnMut(&[Vertex]) -> Result<bool>,
) -> Result<bool> {
    if k > n {
        return Ok(false);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx)? {
            return Ok(true);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Smallest Y (lexicographically least among ties) with |Y| ≤ kmax and
/// N[Y] balanced. Balanced hint sets cap the sizes that need searching.
pub fn balanced_separator_search(
    g: &Graph,
    w: &WeightFn,
    kmax: usize,
    hints: &[VertexSet],
) -> Result<Option<BalancedSeparatorCert>> {
    require_normal(w, g)?;
    let mut limit = kmax.min(g.n());
    for h in hints {
        g.check_set(h)?;
        if h.len() < limit && is_balanced(g, w, &g.closed_neighborhood(h)?)?.balanced {
            limit = h.len();
        }
    }
    for k in 0..=limit {
        let mut found = None;
        for_each_combination(g.n(), k, |ys| {
            let y: VertexSet = ys.iter().copied().collect();
            let ny = g.closed_neighborhood(&y)?;
            let rep = is_balanced(g, w, &ny)?;
            if rep.balanced {
                found = Some(BalancedSeparatorCert {
                    y,
                    ny,
                    w: w.clone(),
                    component_weights: rep.component_weights,
                });
                return Ok(true);
            }
            Ok(false)
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarAlphaReport {
    pub alpha: usize,
    pub bound: usize,
    pub ok: bool,
}

/// α(N[Y]) against |Y|·t in a K_{1,t}-free graph.
pub fn star_alpha_bound(g: &Graph, y: &VertexSet, t: usize) -> Result<StarAlphaReport> {
    g.check_set(y)?;
    if let Some(star) = find_k1t(g, t)? {
        return Err(Error::contract(format!(
            "graph contains K1,{t} centered at {}",
            star.center
        )));
    }
    let alpha = g.alpha(&g.closed_neighborhood(y)?)?;
    let bound = y.len() * t;
    Ok(StarAlphaReport {
        alpha,
        bound,
        ok: alpha <= bound,
    })
}

/// A tree with a bag per node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub valid: bool,
    pub violation: Option<String>,
}

impl TreeDecomposition {
    pub fn single_bag(g: &Graph) -> Self {
        TreeDecomposition {
            bags: vec![g.vertex_set()],
            edges: vec![],
        }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    /// Checks the tree shape and the three decomposition axioms.
    pub fn validate(&self, g: &Graph) -> DecompositionCheck {
        match self.first_violation(g) {
            None => DecompositionCheck {
                valid: true,
                violation: None,
            },
            Some(v) => DecompositionCheck {
                valid: false,
                violation: Some(v),
            },
        }
    }

    fn first_violation(&self, g: &Graph) -> Option<String> {
        let k = self.bags.len();
        if k == 0 {
            return Some("tree has no nodes".into());
        }
        if self.edges.len() != k - 1 {
            return Some(format!(
                "tree has {} nodes but {} edges",
                k,
                self.edges.len()
            ));
        }
        if let Some(&(a, b)) = self
            .edges
            .iter()
            .find(|&&(a, b)| a >= k || b >= k || a == b)
        {
            return Some(format!("bad tree edge ({a}, {b})"));
        }
        let adj = self.adjacency();
        if reach(&adj, 0, |_| true).len() != k {
            return Some("tree is not connected".into());
        }
        if let Some(v) = self.bags.iter().flatten().find(|&&v| v >= g.n()) {
            return Some(format!("bag vertex {v} out of range"));
        }
        for v in g.vertices() {
            let holding: Vec<usize> = (0..k).filter(|&i| self.bags[i].contains(&v)).collect();
            if holding.is_empty() {
                return Some(format!("vertex coverage: {v} is in no bag"));
            }
            if reach(&adj, holding[0], |i| self.bags[i].contains(&v)).len() != holding.len() {
                return Some(format!("connectivity: nodes holding {v} are not connected"));
            }
        }
        if let Some((u, v)) = g
            .edges()
            .find(|&(u, v)| !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)))
        {
            return Some(format!("edge coverage: edge {u}-{v} is in no bag"));
        }
        None
    }

    /// Maximum over bags of α(G[bag]).
    pub fn tia_of(&self, g: &Graph) -> Result<usize> {
        self.bags
            .iter()
            .map(|b| g.alpha(b))
            .try_fold(0, |m, a| Ok(m.max(a?)))
    }

    /// Bag size → number of bags.
    pub fn bag_size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for b in &self.bags {
            *h.entry(b.len()).or_insert(0) += 1;
        }
        h
    }
}

fn reach(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut out = vec![start];
    seen[start] = true;
    let mut q = VecDeque::from([start]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if !seen[w] && allowed(w) {
                seen[w] = true;
                out.push(w);
                q.push_back(w);
            }
        }
    }
    out
}

/// Supplies balanced separators for the decomposition recursion.
pub trait SeparatorOracle {
    fn separator(&self, g: &Graph, w: &WeightFn) -> Result<VertexSet>;
}

/// Exhaustive search: the balanced set of least α, then least size, then
/// lexicographically least.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinAlphaOracle;

impl SeparatorOracle for MinAlphaOracle {
    fn separator(&self, g: &Graph, w: &WeightFn) -> Result<VertexSet> {
        let n = g.n();
        if n > MIN_ALPHA_ORACLE_CAP {
            return Err(Error::resource(format!(
                "exhaustive separator search on {n} vertices exceeds cap {MIN_ALPHA_ORACLE_CAP}"
            )));
        }
        require_normal(w, g)?;
        let mut best: Option<(usize, usize, Vec<Vertex>)> = None;
        for mask in 0u32..(1u32 << n) {
            let xs: Vec<Vertex> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if let Some((ba, bs, _)) = &best {
                if *ba == 0 && xs.len() > *bs {
                    continue;
                }
            }
            let x: VertexSet = xs.iter().copied().collect();
            if !is_balanced(g, w, &x)?.balanced {
                continue;
            }
            let key = (g.alpha(&x)?, xs.len(), xs);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        // V(G) itself is always balanced.
        Ok(best
            .map(|(_, _, xs)| xs.into_iter().collect())
            .unwrap_or_default())
    }
}

/// N[Y] for the smallest Y found by [`balanced_separator_search`].
#[derive(Clone, Debug, Default)]
pub struct ClosedNeighborhoodOracle {
    pub kmax: usize,
    pub hints: Vec<VertexSet>,
}

impl SeparatorOracle for ClosedNeighborhoodOracle {
    fn separator(&self, g: &Graph, w: &WeightFn) -> Result<VertexSet> {
        balanced_separator_search(g, w, self.kmax, &self.hints)?
            .map(|c| c.ny)
            .ok_or_else(|| {
                Error::contract(format!(
                    "no Y with |Y| <= {} has a balanced N[Y]",
                    self.kmax
                ))
            })
    }
}

/// Builds a tree decomposition from an oracle that returns balanced sets of
/// stable-set number at most `s`.
///
/// Each node handles a region C with boundary W = N(C), keeping α(W) ≤ 4s.
/// If α(W) ≤ 3s the oracle sees weight uniform on C; otherwise the weight
/// sits on a maximum stable set I of W, with a small share ε = 1/(2|I|+2)
/// spread over C so the separator must meet C. The bag is W ∪ (X ∩ C),
/// so α(bag) ≤ 5s, and the children are the components of C \ X.
pub fn bs_to_tree_decomposition(
    g: &Graph,
    s: usize,
    oracle: &dyn SeparatorOracle,
) -> Result<TreeDecomposition> {
    if s == 0 {
        return Err(Error::input("s must be at least 1"));
    }
    if g.n() == 0 {
        return Ok(TreeDecomposition {
            bags: vec![VertexSet::new()],
            edges: vec![],
        });
    }
    let mut td = TreeDecomposition::default();
    let mut stack: Vec<(VertexSet, VertexSet, Option<usize>)> =
        vec![(g.vertex_set(), VertexSet::new(), None)];
    let mut call = 0usize;
    while let Some((c, w, parent)) = stack.pop() {
        let (aw, iset) = g.max_stable(&w)?;
        let weight = if aw > 3 * s {
            let eps = Rational::one() / Rational::from_integer((2 * iset.len() + 2).into());
            let on_i = (Rational::one() - &eps) / Rational::from_integer(iset.len().into());
            let on_c = eps / Rational::from_integer(c.len().into());
            let mut vals = vec![Rational::zero(); g.n()];
            for &v in &iset {
                vals[v] = on_i.clone();
            }
            for &v in &c {
                vals[v] = on_c.clone();
            }
            WeightFn::new(vals)?
        } else {
            WeightFn::uniform_on(g.n(), &c)
        };
        call += 1;
        let x = oracle.separator(g, &weight)?;
        g.check_set(&x)?;
        let rep = is_balanced(g, &weight, &x)?;
        if !rep.balanced {
            return Err(Error::contract(format!(
                "oracle call {call} returned an unbalanced set (heaviest component {})",
                format_rational(&rep.heaviest)
            )));
        }
        let ax = g.alpha(&x)?;
        if ax > s {
            return Err(Error::contract(format!(
                "oracle call {call} returned a set with stable-set number {ax} > s = {s}"
            )));
        }
        let xc: VertexSet = x.intersection(&c).copied().collect();
        // An empty cut is progress only when the region already falls apart.
        if xc.is_empty() && g.components_of(&c).len() < 2 {
            return Err(Error::contract(format!(
                "oracle call {call} returned a set missing the region"
            )));
        }
        let node = td.bags.len();
        td.bags.push(w.union(&xc).copied().collect());
        if let Some(p) = parent {
            td.edges.push((p, node));
        }
        let rest: VertexSet = c.difference(&xc).copied().collect();
        let comps = g.components_of(&rest);
        for comp in comps.into_iter().rev() {
            let nc = g.open_neighborhood(&comp)?;
            stack.push((comp, nc, Some(node)));
        }
    }
    Ok(td)
}

/// Exact tree independence number for graphs on at most [`EXACT_TIA_CAP`]
/// vertices, by dynamic programming over elimination prefixes.
pub fn exact_tia_small(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > EXACT_TIA_CAP {
        return Err(Error::resource(format!(
            "exact tree independence number on {n} vertices exceeds cap {EXACT_TIA_CAP}"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let full = (1usize << n) - 1;
    let nbr: Vec<usize> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect();
    // alpha[m] for every vertex mask.
    let mut alpha = vec![0u8; 1 << n];
    for m in 1..=full {
        let v = m.trailing_zeros() as usize;
        let without = alpha[m & !(1 << v)];
        let with = 1 + alpha[m & !(1 << v) & !nbr[v]];
        alpha[m] = without.max(with);
    }
    // Vertices outside S ∪ {v} reachable from v through S.
    let q = |s: usize, v: usize| -> usize {
        let mut seen: usize = 1 << v;
        let mut frontier: usize = 1 << v;
        let mut out = 0;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = nbr[u] & !seen;
            seen |= fresh;
            out |= fresh & !s;
            frontier |= fresh & s;
        }
        out
    };
    let mut best = vec![u8::MAX; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let mut b = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let bag = q(prev, v) | 1 << v;
            b = b.min(best[prev].max(alpha[bag]));
        }
        best[s] = b;
    }
    Ok(best[full] as usize)
}

/// Decomposition from eliminating vertices in `order`.
pub fn elimination_decomposition(g: &Graph, order: &[Vertex]) -> Result<TreeDecomposition> {
    let n = g.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        g.check_vertex(v)?;
        if pos[v] != usize::MAX {
            return Err(Error::input(format!(
                "vertex {v} repeated in elimination order"
            )));
        }
        pos[v] = i;
    }
    if order.len() != n {
        return Err(Error::input("elimination order must list every vertex"));
    }
    if n == 0 {
        return Ok(TreeDecomposition {
            bags: vec![VertexSet::new()],
            edges: vec![],
        });
    }
    let mut adj: Vec<VertexSet> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let later: VertexSet = adj[v].iter().copied().filter(|&u| pos[u] > i).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        match later.iter().min_by_key(|&&u| pos[u]) {
            Some(&p) => edges.push((i, pos[p])),
            None => roots.push(i),
        }
        let mut bag = later;
        bag.insert(v);
        bags.push(bag);
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    Ok(TreeDecomposition { bags, edges })
}

/// Exact value for small graphs, otherwise labelled bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiaEstimate {
    pub exact: Option<usize>,
    pub lower: usize,
    pub upper: usize,
}

fn is_chordal(g: &Graph) -> bool {
    let mut left = g.vertex_set();
    while !left.is_empty() {
        let simplicial = left
            .iter()
            .copied()
            .find(|&v| g.is_clique(&g.neighbors_in(v, &left)));
        match simplicial {
            Some(v) => {
                left.remove(&v);
            }
            None => return false,
        }
    }
    true
}

/// Upper bound from a min-degree elimination; lower bound 2 when G has a hole.
pub fn tia_estimate(g: &Graph) -> Result<TiaEstimate> {
    let lower = match (g.n(), g.m(), is_chordal(g)) {
        (0, _, _) => 0,
        (_, _, false) => 2,
        _ => 1,
    };
    let mut left = g.vertex_set();
    let mut adj: Vec<VertexSet> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut order = Vec::new();
    while let Some(&v) = left.iter().min_by_key(|&&v| (adj[v].len(), v)) {
        left.remove(&v);
        order.push(v);
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    let upper = elimination_decomposition(g, &order)?.tia_of(g)?;
    let exact = if g.n() <= EXACT_TIA_CAP {
        Some(exact_tia_small(g)?)
    } else {
        None
    };
    Ok(TiaEstimate {
        exact,
        lower: exact.unwrap_or(lower),
        upper: exact.unwrap_or(upper),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwisResult {
    #[serde(with = "rational_serde")]
    pub value: Rational,
    pub witness: VertexSet,
}

fn stable_subsets(g: &Graph, bag: &VertexSet) -> Result<Vec<VertexSet>> {
    let verts: Vec<Vertex> = bag.iter().copied().collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        g: &Graph,
        verts: &[Vertex],
        i: usize,
        cur: &mut Vec<Vertex>,
        out: &mut Vec<VertexSet>,
    ) -> Result<()> {
        if out.len() >= STABLE_SUBSET_LIMIT {
            return Err(Error::resource(format!(
                "bag has more than {STABLE_SUBSET_LIMIT} stable subsets"
            )));
        }
        if i == verts.len() {
            out.push(cur.iter().copied().collect());
            return Ok(());
        }
        go(g, verts, i + 1, cur, out)?;
        if cur.iter().all(|&u| !g.has_edge(u, verts[i])) {
            cur.push(verts[i]);
            go(g, verts, i + 1, cur, out)?;
            cur.pop();
        }
        Ok(())
    }
    go(g, &verts, 0, &mut cur, &mut out)?;
    Ok(out)
}

/// Maximum-weight stable set by dynamic programming over the stable
/// subsets of each bag.
pub fn mwis_on_decomposition(
    g: &Graph,
    td: &TreeDecomposition,
    weights: &[Rational],
) -> Result<MwisResult> {
    if weights.len() != g.n() {
        return Err(Error::input(format!(
            "{} weights for {} vertices",
            weights.len(),
            g.n()
        )));
    }
    if let Some(v) = td.validate(g).violation {
        return Err(Error::contract(format!("invalid tree decomposition: {v}")));
    }
    let wsum = |s: &VertexSet| s.iter().fold(Rational::zero(), |a, &v| a + &weights[v]);
    let k = td.bags.len();
    let adj = td.adjacency();
    let order = reach(&adj, 0, |_| true);
    let mut parent = vec![usize::MAX; k];
    for &u in &order {
        for &w in &adj[u] {
            if w != 0 && parent[w] == usize::MAX && parent[u] != w {
                parent[w] = u;
            }
        }
    }
    let children: Vec<Vec<usize>> = (0..k)
        .map(|u| adj[u].iter().copied().filter(|&w| parent[w] == u).collect())
        .collect();
    let subsets: Vec<Vec<VertexSet>> = td
        .bags
        .iter()
        .map(|b| stable_subsets(g, b))
        .collect::<Result<_>>()?;
    let mut value: Vec<Vec<Rational>> = vec![Vec::new(); k];
    // For node u and child c: best child subset index per key S ∩ B_c.
    let mut pick: Vec<BTreeMap<VertexSet, usize>> = vec![BTreeMap::new(); k];
    for &u in order.iter().rev() {
        let bag = &td.bags[u];
        let mut vals: Vec<Rational> = subsets[u].iter().map(&wsum).collect();
        for &c in &children[u] {
            let mut best: BTreeMap<VertexSet, (Rational, usize)> = BTreeMap::new();
            for (i, sc) in subsets[c].iter().enumerate() {
                let key: VertexSet = sc.intersection(bag).copied().collect();
                let gain = &value[c][i] - wsum(&key);
                match best.get(&key) {
                    Some((b, _)) if *b >= gain => {}
                    _ => {
                        best.insert(key, (gain, i));
                    }
                }
            }
            for (i, s) in subsets[u].iter().enumerate() {
                let key: VertexSet = s.intersection(&td.bags[c]).copied().collect();
                let (gain, _) = &best[&key];
                vals[i] += gain;
            }
            pick[c] = best.into_iter().map(|(key, (_, i))| (key, i)).collect();
        }
        value[u] = vals;
    }
    let (root_idx, root_val) = value[0]
        .iter()
        .enumerate()
        .fold(None::<(usize, &Rational)>, |acc, (i, v)| match acc {
            Some((_, b)) if b >= v => acc,
            _ => Some((i, v)),
        })
        .expect("root has the empty subset");
    let mut chosen = vec![usize::MAX; k];
    chosen[0] = root_idx;
    let mut witness = VertexSet::new();
    for &u in &order {
        let s = &subsets[u][chosen[u]];
        witness.extend(s.iter().copied());
        for &c in &children[u] {
            let key: VertexSet = s.intersection(&td.bags[c]).copied().collect();
            chosen[c] = pick[c][&key];
        }
    }
    Ok(MwisResult {
        value: root_val.clone(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::set;

    #[test]
    fn balance_examples() {
        let c4 = Graph::cycle(4);
        let w = WeightFn::uniform(4);
        let r = is_balanced(&c4, &w, &set([0])).unwrap();
        assert!(!r.balanced);
        assert_eq!(r.heaviest, ratio(3, 4));
        assert!(is_balanced(&c4, &w, &set([0, 2])).unwrap().balanced);
        assert!(is_balanced(&c4, &w, &c4.vertex_set()).unwrap().balanced);
        assert!(is_balanced(&c4, &WeightFn::zero(4), &set([0])).is_err());
    }

    #[test]
    fn exactly_half_is_balanced() {
        let p = Graph::path(2);
        assert!(
            is_balanced(&p, &WeightFn::uniform(2), &set([0]))
                .unwrap()
                .balanced
        );
    }

    #[test]
    fn separator_search_examples() {
        let p9 = Graph::path(9);
        let c = balanced_separator_search(&p9, &WeightFn::uniform(9), 1, &[])
            .unwrap()
            .unwrap();
        // Both {3} and the middle vertex work; the tie-break picks {3}.
        assert_eq!(c.y, set([3]));
        let mid = p9.closed_neighborhood(&set([4])).unwrap();
        assert!(
            is_balanced(&p9, &WeightFn::uniform(9), &mid)
                .unwrap()
                .balanced
        );
        let c12 = Graph::cycle(12);
        let c = balanced_separator_search(&c12, &WeightFn::uniform(12), 3, &[])
            .unwrap()
            .unwrap();
        assert_eq!(c.y.len(), 2);
        let k5 = Graph::complete(5);
        let c = balanced_separator_search(&k5, &WeightFn::uniform(5), 2, &[])
            .unwrap()
            .unwrap();
        assert_eq!(c.y, set([0]));
        assert!(
            balanced_separator_search(&c12, &WeightFn::uniform(12), 1, &[])
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn hints_do_not_change_the_answer() {
        let c12 = Graph::cycle(12);
        let w = WeightFn::uniform(12);
        let a = balanced_separator_search(&c12, &w, 3, &[]).unwrap();
        let b = balanced_separator_search(&c12, &w, 3, &[set([5, 11])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn star_alpha_examples() {
        let p = Graph::petersen();
        let r = star_alpha_bound(&p, &set([0]), 4).unwrap();
        assert_eq!((r.alpha, r.bound, r.ok), (3, 4, true));
        let r = star_alpha_bound(&p, &set([]), 4).unwrap();
        assert_eq!((r.alpha, r.bound), (0, 0));
        assert!(star_alpha_bound(&p, &set([0]), 3).is_err());
        let k = Graph::complete(5);
        assert_eq!(star_alpha_bound(&k, &set([1, 2]), 2).unwrap().alpha, 1);
    }

    #[test]
    fn decompositions_from_oracles() {
        let p5 = Graph::path(5);
        let td = bs_to_tree_decomposition(
            &p5,
            2,
            &ClosedNeighborhoodOracle {
                kmax: 1,
                hints: vec![],
            },
        )
        .unwrap();
        assert!(td.validate(&p5).valid);
        assert!(td.tia_of(&p5).unwrap() <= 2);
        let one = Graph::empty(1);
        let td = bs_to_tree_decomposition(&one, 1, &MinAlphaOracle).unwrap();
        assert_eq!(td.bags.len(), 1);
        let c12 = Graph::cycle(12);
        let td = bs_to_tree_decomposition(&c12, 2, &MinAlphaOracle).unwrap();
        assert!(td.validate(&c12).valid);
        assert!(td.tia_of(&c12).unwrap() <= 10);
    }

    #[test]
    fn oracle_contract_is_enforced() {
        let p5 = Graph::path(5);
        let e = bs_to_tree_decomposition(
            &p5,
            1,
            &ClosedNeighborhoodOracle {
                kmax: 1,
                hints: vec![],
            },
        )
        .unwrap_err();
        assert!(e.to_string().contains("oracle call 1"), "{e}");
    }

    #[test]
    fn validation_catches_each_axiom() {
        let p4 = Graph::path(4);
        let good = TreeDecomposition {
            bags: vec![set([0, 1]), set([1, 2]), set([2, 3])],
            edges: vec![(0, 1), (1, 2)],
        };
        assert!(good.validate(&p4).valid);
        assert_eq!(good.tia_of(&p4).unwrap(), 1);
        let mut no_edge = good.clone();
        no_edge.bags[1] = set([1]);
        assert!(no_edge
            .validate(&p4)
            .violation
            .unwrap()
            .contains("edge coverage"));
        let split = TreeDecomposition {
            bags: vec![set([0, 1]), set([2, 3]), set([1, 2])],
            edges: vec![(0, 1), (1, 2)],
        };
        assert!(split
            .validate(&p4)
            .violation
            .unwrap()
            .contains("connectivity"));
        let td = TreeDecomposition::single_bag(&Graph::petersen());
        assert!(td.validate(&Graph::petersen()).valid);
        assert_eq!(td.tia_of(&Graph::petersen()).unwrap(), 4);
    }

    #[test]
    fn exact_tia_examples() {
        assert_eq!(exact_tia_small(&Graph::path(7)).unwrap(), 1);
        assert_eq!(exact_tia_small(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(exact_tia_small(&Graph::complete(5)).unwrap(), 1);
        assert_eq!(exact_tia_small(&Graph::empty(3)).unwrap(), 1);
        assert!(exact_tia_small(&Graph::path(11)).is_err());
    }

    #[test]
    fn elimination_decomposition_is_valid() {
        let g = Graph::petersen();
        let order: Vec<Vertex> = g.vertices().collect();
        let td = elimination_decomposition(&g, &order).unwrap();
        assert!(td.validate(&g).valid);
        let e = tia_estimate(&g).unwrap();
        assert_eq!(e.exact, Some(e.lower));
    }

    #[test]
    fn mwis_examples() {
        let p4 = Graph::path(4);
        let td = TreeDecomposition {
            bags: vec![set([0, 1]), set([1, 2]), set([2, 3])],
            edges: vec![(0, 1), (1, 2)],
        };
        let w = [1, 2, 3, 1].map(|x| ratio(x, 1));
        let r = mwis_on_decomposition(&p4, &td, &w).unwrap();
        assert_eq!(r.value, ratio(4, 1));
        assert_eq!(r.witness, set([0, 2]));
        let k3 = Graph::complete(3);
        let r = mwis_on_decomposition(
            &k3,
            &TreeDecomposition::single_bag(&k3),
            &[5, 1, 2].map(|x| ratio(x, 1)),
        )
        .unwrap();
        assert_eq!(r.value, ratio(5, 1));
    }
}
