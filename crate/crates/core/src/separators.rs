//! Separator cores for wheels and pyramids, and verification that their
//! closed neighborhoods separate the vertices they are meant to separate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::detect::{theta_prism_free, DetectConfig, PyramidWitness, Wheel};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

/// Whether (theta, prism)-freeness was checked or taken on trust.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypotheses {
    Verified,
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorReport {
    #[serde(rename = "Z")]
    pub z: VertexSet,
    #[serde(rename = "NZ")]
    pub nz: VertexSet,
    pub separated_pairs: Vec<(Vertex, Vertex)>,
    /// Pairs that should be separated but are not.
    pub violations: Vec<(Vertex, Vertex)>,
    /// Component index of each vertex of G \ N[Z].
    pub component_map: BTreeMap<Vertex, usize>,
    pub hypotheses: Hypotheses,
}

impl SeparatorReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// How the class hypothesis is handled.
#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub detect: DetectConfig,
    /// Skip the class check entirely.
    pub assume_class: bool,
}

impl VerifyOptions {
    pub fn with_cap(cap: usize) -> Self {
        VerifyOptions {
            detect: DetectConfig::with_cap(cap),
            assume_class: false,
        }
    }
}

fn check_wheel(g: &Graph, w: &Wheel) -> Result<()> {
    g.check_vertex(w.hub)?;
    for &v in &w.hole {
        g.check_vertex(v)?;
    }
    w.validate(g)
        .map_err(|e| Error::input(format!("invalid wheel: {e}")))
}

fn check_pyramid(g: &Graph, p: &PyramidWitness) -> Result<()> {
    for &v in p.paths.iter().flatten().chain(p.base.iter()) {
        g.check_vertex(v)?;
    }
    p.validate(g)
        .map_err(|e| Error::input(format!("invalid pyramid: {e}")))
}

/// For a special wheel: the length-one sector `(a, b)` and the hub
/// neighbor `d` off that sector.
fn special_parts(g: &Graph, w: &Wheel) -> Option<(Vertex, Vertex, Vertex)> {
    if !w.is_special(g) {
        return None;
    }
    let short = w.sectors(g).into_iter().find(|s| s.len() == 2)?;
    let (a, b) = (short[0], short[1]);
    let d = *w.hub_neighbors(g).iter().find(|&&v| v != a && v != b)?;
    Some((a, b, d))
}

fn hole_closed_nbhd(w: &Wheel, v: Vertex) -> VertexSet {
    let k = w.hole.len();
    let i = w.hole.iter().position(|&x| x == v).expect("vertex on hole");
    [w.hole[(i + k - 1) % k], v, w.hole[(i + 1) % k]]
        .into_iter()
        .collect()
}

/// Z(W): N_H(c) plus c for non-special wheels; {a, b, c} plus N_H[d] for
/// special ones.
pub fn wheel_z(g: &Graph, w: &Wheel) -> Result<VertexSet> {
    check_wheel(g, w)?;
    Ok(match special_parts(g, w) {
        Some((a, b, d)) => {
            let mut z = hole_closed_nbhd(w, d);
            z.extend([a, b, w.hub]);
            z
        }
        None => {
            let mut z = w.hub_neighbors(g);
            z.insert(w.hub);
            z
        }
    })
}

/// Z(Σ): the apex, its neighbors in Σ, and the base.
pub fn pyramid_z(g: &Graph, p: &PyramidWitness) -> Result<VertexSet> {
    check_pyramid(g, p)?;
    let sigma = p.vertex_set();
    let mut z: VertexSet = g.neighbors_in(p.apex, &sigma);
    z.insert(p.apex);
    z.extend(p.base);
    Ok(z)
}

fn hypotheses(g: &Graph, opts: &VerifyOptions) -> Result<Hypotheses> {
    if opts.assume_class || g.n() > opts.detect.cap {
        return Ok(Hypotheses::Assumed);
    }
    match theta_prism_free(g, &opts.detect)? {
        None => Ok(Hypotheses::Verified),
        Some(v) => Err(Error::contract(format!(
            "hypothesis violated: graph is not (theta, prism)-free: {}",
            serde_json::to_string(&v)?
        ))),
    }
}

/// Checks separation of every cross-group pair outside N[Z].
fn report(
    g: &Graph,
    z: VertexSet,
    groups: &[VertexSet],
    hyp: Hypotheses,
) -> Result<SeparatorReport> {
    let nz = g.closed_neighborhood(&z)?;
    let comps = g.components(&nz)?;
    let mut component_map = BTreeMap::new();
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            component_map.insert(v, i);
        }
    }
    let outside: Vec<Vec<Vertex>> = groups
        .iter()
        .map(|s| s.iter().copied().filter(|v| !nz.contains(v)).collect())
        .collect();
    let mut separated_pairs = Vec::new();
    let mut violations = Vec::new();
    for i in 0..outside.len() {
        for j in i + 1..outside.len() {
            for &a in &outside[i] {
                for &b in &outside[j] {
                    let pair = (a.min(b), a.max(b));
                    if component_map[&a] != component_map[&b] {
                        separated_pairs.push(pair);
                    } else {
                        violations.push(pair);
                    }
                }
            }
        }
    }
    separated_pairs.sort_unstable();
    violations.sort_unstable();
    Ok(SeparatorReport {
        z,
        nz,
        separated_pairs,
        violations,
        component_map,
        hypotheses: hyp,
    })
}

/// Verifies that N[Z(W)] separates every pair of vertices lying in the
/// interiors of distinct sectors and outside N[Z(W)].
pub fn verify_wheel_separation(
    g: &Graph,
    w: &Wheel,
    opts: &VerifyOptions,
) -> Result<SeparatorReport> {
    let z = wheel_z(g, w)?;
    if w.is_special(g) {
        let short_long = w.sectors(g).iter().any(|s| s.len() > 2 && s.len() < 4);
        if short_long {
            return Err(Error::contract(
                "hypothesis violated: long sectors of a special wheel must have length at least 3",
            ));
        }
    } else if w.hole.len() < 7 {
        return Err(Error::contract(
            "hypothesis violated: hole of a non-special wheel must have length at least 7",
        ));
    }
    let hyp = hypotheses(g, opts)?;
    let groups: Vec<VertexSet> = w
        .sectors(g)
        .iter()
        .map(|s| s[1..s.len() - 1].iter().copied().collect())
        .collect();
    report(g, z, &groups, hyp)
}

/// Verifies that N[Z(Σ)] separates every pair of vertices on distinct
/// paths of Σ and outside N[Z(Σ)].
pub fn verify_pyramid_separation(
    g: &Graph,
    p: &PyramidWitness,
    opts: &VerifyOptions,
) -> Result<SeparatorReport> {
    let z = pyramid_z(g, p)?;
    let hyp = hypotheses(g, opts)?;
    report(g, z, &p.path_sets(), hyp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{set, GraphBuilder};

    /// Hole h1..hk as vertices 0..k-1 and hub k adjacent to the given
    /// one-based hole labels.
    fn wheel(k: usize, spokes: &[usize]) -> (Graph, Wheel) {
        let mut b = GraphBuilder::new(k + 1);
        for i in 0..k {
            b.add_edge(i, (i + 1) % k);
        }
        for &s in spokes {
            b.add_edge(k, s - 1);
        }
        let g = b.build();
        let w = Wheel::canonical((0..k).collect(), k);
        (g, w)
    }

    #[test]
    fn wheel_z_examples() {
        let (g, w) = wheel(8, &[1, 3, 5]);
        assert_eq!(wheel_z(&g, &w).unwrap(), set([8, 0, 2, 4]));
        let (g, w) = wheel(8, &[1, 2, 5]);
        assert_eq!(wheel_z(&g, &w).unwrap(), set([0, 1, 8, 3, 4, 5]));
        let (g, w) = wheel(12, &[1, 5, 9]);
        assert_eq!(wheel_z(&g, &w).unwrap(), set([12, 0, 4, 8]));
    }

    #[test]
    fn invalid_wheel_is_input_error() {
        let (g, _) = wheel(8, &[1, 3, 5]);
        let bad = Wheel {
            hole: vec![0, 1, 2, 3],
            hub: 8,
        };
        assert!(matches!(wheel_z(&g, &bad), Err(Error::Input(_))));
    }

    #[test]
    fn c12_wheel_separates() {
        let (g, w) = wheel(12, &[1, 5, 9]);
        let r = verify_wheel_separation(&g, &w, &VerifyOptions::default()).unwrap();
        assert_eq!(r.hypotheses, Hypotheses::Verified);
        assert!(r.ok());
        assert!(r.separated_pairs.contains(&(2, 6)));
        assert_eq!(r.separated_pairs.len(), 3);
    }

    #[test]
    fn short_hole_is_contract_error() {
        let (g, w) = wheel(6, &[1, 3, 5]);
        assert!(matches!(
            verify_wheel_separation(&g, &w, &VerifyOptions::default()),
            Err(Error::Contract(_))
        ));
    }

    fn pyramid(lens: [usize; 3]) -> (Graph, PyramidWitness) {
        let mut b = GraphBuilder::new(1);
        let apex = 0;
        let mut paths: Vec<Vec<Vertex>> = Vec::new();
        for &l in &lens {
            let mut p = vec![apex];
            for _ in 0..l {
                let v = b.add_vertex();
                b.add_edge(*p.last().unwrap(), v);
                p.push(v);
            }
            paths.push(p);
        }
        let base = [
            *paths[0].last().unwrap(),
            *paths[1].last().unwrap(),
            *paths[2].last().unwrap(),
        ];
        b.add_edge(base[0], base[1]);
        b.add_edge(base[1], base[2]);
        b.add_edge(base[0], base[2]);
        let w = PyramidWitness {
            apex,
            base,
            paths: [paths[0].clone(), paths[1].clone(), paths[2].clone()],
        };
        (b.build(), w)
    }

    #[test]
    fn pyramid_z_sizes() {
        let (g, p) = pyramid([3, 3, 3]);
        assert_eq!(pyramid_z(&g, &p).unwrap().len(), 7);
        let (g, p) = pyramid([2, 2, 1]);
        assert_eq!(pyramid_z(&g, &p).unwrap().len(), 6);
    }

    #[test]
    fn pyramid_555_separates() {
        let (g, p) = pyramid([5, 5, 5]);
        let r = verify_pyramid_separation(&g, &p, &VerifyOptions::default()).unwrap();
        assert!(r.ok());
        assert!(!r.separated_pairs.is_empty());
        let (g, p) = pyramid([2, 2, 1]);
        let r = verify_pyramid_separation(&g, &p, &VerifyOptions::default()).unwrap();
        assert!(r.separated_pairs.is_empty() && r.ok());
    }
}
