//! The ten acceptance criteria. Each prints one PASS/FAIL line; the test
//! fails if any criterion fails. Run with `--nocapture` to see the lines.

use std::time::{Duration, Instant};

use treealpha::align::{
    classify_alignment, extract_consistent_alignment, interval_stable_set, ExtractOptions,
};
use treealpha::amicable::{amicable_z, AmicableCase};
use treealpha::campaign::{campaign, CampaignName, CampaignParams, CampaignReport};
use treealpha::decomp::{elimination_decomposition, mwis_on_decomposition, star_alpha_bound};
use treealpha::detect::find_k1t;
use treealpha::generate::{
    amicable_instance, generate, Family, GenWitness, GeneratorSpec, SeededRng,
};
use treealpha::graph::{Graph, GraphBuilder, PathWitness, Vertex, VertexSet};
use treealpha::separators::VerifyOptions;
use treealpha::strip::{
    classify_strip, pyramid_to_strip, reduce_to_trapped, strip_leq, validate_strip, StripStructure,
};
use treealpha::weights::{ratio, Rational};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect()
}

/// α by plain subset enumeration.
fn brute_alpha(g: &Graph, xs: &VertexSet) -> usize {
    let verts: Vec<Vertex> = xs.iter().copied().collect();
    let adj = adjacency_masks(g);
    let mut best = 0;
    for mask in 0u32..(1u32 << verts.len()) {
        let chosen: Vec<Vertex> = (0..verts.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| verts[i])
            .collect();
        let bits = chosen.iter().fold(0u64, |m, &v| m | 1 << v);
        if chosen.iter().all(|&v| adj[v] & bits == 0) {
            best = best.max(chosen.len());
        }
    }
    best
}

/// Maximum-weight stable set by include/exclude recursion.
fn brute_mwis(adj: &[u64], w: &[Rational], left: u64) -> Rational {
    if left == 0 {
        return Rational::from_integer(0.into());
    }
    let v = left.trailing_zeros() as usize;
    let without = brute_mwis(adj, w, left & !(1 << v));
    let with = &w[v] + brute_mwis(adj, w, left & !(1 << v) & !adj[v]);
    without.max(with)
}

fn campaign_line(r: &CampaignReport, min_verified: usize) -> Outcome {
    outcome(
        r.violated == 0 && r.verified >= min_verified,
        format!(
            "verified {} violated {} skipped {} no-sample {}",
            r.verified, r.violated, r.skipped, r.no_sample
        ),
    )
}

fn criterion_1() -> (Outcome, CampaignReport) {
    let start = Instant::now();
    let r = campaign(CampaignName::WheelSep, 200, 42, &CampaignParams::default());
    let pairs: usize = r.results.iter().map(|t| t.checked).sum();
    let elapsed = start.elapsed();
    let mut o = campaign_line(&r, 200);
    o.pass &= elapsed <= Duration::from_secs(300);
    o.detail = format!(
        "{}; {pairs} pairs separated; {:.1}s",
        o.detail,
        elapsed.as_secs_f64()
    );
    (o, r)
}

fn criterion_2() -> (Outcome, CampaignReport) {
    let r = campaign(
        CampaignName::SpecialWheelSep,
        200,
        42,
        &CampaignParams::default(),
    );
    (campaign_line(&r, 200), r)
}

fn criterion_3() -> (Outcome, CampaignReport) {
    let r = campaign(
        CampaignName::PyramidSep,
        200,
        42,
        &CampaignParams::default(),
    );
    (campaign_line(&r, 200), r)
}

/// Adds a vertex to a strip's host graph with the given neighbors.
fn with_extra_vertex(s: &StripStructure, nbrs: &[Vertex]) -> (StripStructure, Vertex) {
    let g = &s.graph;
    let x = g.n();
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    edges.extend(nbrs.iter().map(|&u| (u, x)));
    let mut out = s.clone();
    out.graph = Graph::from_edges(x + 1, &edges).unwrap();
    (out, x)
}

fn ends_remark_holds(s: &StripStructure) -> bool {
    s.tree.edges.iter().enumerate().all(|(e, &[u, v])| {
        let (a, b) = (s.eta_ev(e, u), s.eta_ev(e, v));
        !(a.is_subset(b) || b.is_subset(a)) || a == b
    })
}

fn criterion_4() -> Outcome {
    let mut strips = 0;
    let mut bad = Vec::new();
    let mut mutants = 0;
    let mut comparisons = 0;
    let mut seed = 0u64;
    while mutants < 100 && seed < 1000 {
        let mut rng = SeededRng::new(seed);
        seed += 1;
        let lengths = [rng.range(2, 6), rng.range(2, 6), rng.range(2, 6)];
        let gen = generate(&GeneratorSpec {
            family: Family::Pyramid {
                lengths,
                pendants: rng.range(0, 3),
            },
            seed: rng.next_u64(),
        })
        .unwrap();
        let GenWitness::Pyramid(p) = &gen.witness else {
            unreachable!()
        };
        let (g2, _, p2) = reduce_to_trapped(&gen.graph, p).unwrap();
        let s = match pyramid_to_strip(&g2, &p2) {
            Ok(s) => s,
            Err(e) => {
                bad.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        strips += 1;
        let flags = classify_strip(&s).unwrap();
        if !validate_strip(&s).is_empty() || !(flags.tame && flags.substantial && flags.rich) {
            bad.push(format!("seed {seed}: strip flags {flags:?}"));
        }
        // Mutation: a pendant inside η(t0) at a base vertex, or a bypass
        // vertex joined to P_i[j] and P_i[j+2] added to η(e_i).
        let i = rng.below(3);
        let path = &p2.paths[i];
        let (mut m, x) = if path.len() >= 4 && rng.percent(50) {
            let j = rng.range(1, path.len() - 3);
            let (mut m, x) = with_extra_vertex(&s, &[path[j], path[j + 2]]);
            m.eta_edge[i].insert(x);
            (m, x)
        } else {
            let (mut m, x) = with_extra_vertex(&s, &[p2.base[i]]);
            m.eta_vertex[0].insert(x);
            (m, x)
        };
        if rng.percent(25) {
            // A random move that usually breaks an axiom; only valid results count.
            let e = rng.below(3);
            m.eta_edge[e].remove(&x);
            m.eta_edge[(e + 1) % 3].insert(x);
            m.eta_vertex[0].remove(&x);
        }
        if !validate_strip(&m).is_empty() {
            continue;
        }
        mutants += 1;
        if !ends_remark_holds(&m) {
            bad.push(format!("seed {seed}: eta(e,u) ⊆ eta(e,v) without equality"));
        }
        // The original η read in the mutant's graph sits below the mutant.
        let lift = StripStructure {
            graph: m.graph.clone(),
            ..s.clone()
        };
        if validate_strip(&lift).is_empty() && strip_leq(&lift, &m).unwrap() {
            comparisons += 1;
            let (a, b) = (classify_strip(&lift).unwrap(), classify_strip(&m).unwrap());
            if a.substantial && !b.substantial {
                bad.push(format!("seed {seed}: substantial not monotone"));
            }
        }
    }
    outcome(
        bad.is_empty() && mutants >= 100,
        format!("{strips} pyramid strips valid+tame+substantial+rich; {mutants} valid mutants, {comparisons} ≤-pairs; {} failures {:?}", bad.len(), bad.first()),
    )
}

/// A path with |Y| = 3s(d+1) attached vertices meeting the extraction
/// hypotheses, plus one vertex outside N[P] adjacent to all of Y.
fn extraction_instance(
    rng: &mut SeededRng,
    s: usize,
    d: usize,
) -> Option<(Graph, PathWitness, VertexSet)> {
    let count = 3 * s * (d + 1);
    let len = 4 * count + 4;
    let mut windows: Vec<Vec<usize>> = Vec::new();
    let mut load = vec![0usize; len];
    for _ in 0..count {
        let mut placed = false;
        for _ in 0..200 {
            let start = rng.below(len - 3);
            let w = match rng.below(3) {
                0 => vec![start],
                1 => vec![start, start + 1],
                _ => vec![start, start + 2],
            };
            let span = w[0]..=*w.last().unwrap();
            let cover_ok = span.clone().all(|i| {
                windows
                    .iter()
                    .filter(|o| o[0] <= i && i <= *o.last().unwrap())
                    .count()
                    < d
            });
            if cover_ok && w.iter().all(|&i| load[i] + 1 < d) {
                for &i in &w {
                    load[i] += 1;
                }
                windows.push(w);
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    let mut b = GraphBuilder::new(0);
    let p = b.new_path(len);
    let hub = b.add_vertex();
    let mut y = VertexSet::new();
    for w in &windows {
        let v = b.add_vertex();
        for &i in w {
            b.add_edge(v, p[i]);
        }
        b.add_edge(v, hub);
        y.insert(v);
    }
    let g = b.build();
    let pw = PathWitness::new(&g, p).ok()?;
    Some((g, pw, y))
}

fn brute_interval_stable(windows: &[(usize, usize)]) -> usize {
    let k = windows.len();
    let mut best = 0;
    for mask in 0u32..(1 << k) {
        let chosen: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        let disjoint = chosen.iter().enumerate().all(|(a, &i)| {
            chosen[a + 1..]
                .iter()
                .all(|&j| windows[i].1 < windows[j].0 || windows[j].1 < windows[i].0)
        });
        if disjoint {
            best = best.max(chosen.len());
        }
    }
    best
}

fn criterion_5() -> Outcome {
    let mut done = 0;
    let mut bad = Vec::new();
    let mut seed = 0;
    let opts = ExtractOptions {
        check_size: true,
        check_outside_paths: true,
    };
    while done < 100 && seed < 2000 {
        let mut rng = SeededRng::new(seed);
        seed += 1;
        let s = rng.range(1, 3);
        let d = rng.range(2, 3);
        let Some((g, p, y)) = extraction_instance(&mut rng, s, d) else {
            continue;
        };
        done += 1;
        match extract_consistent_alignment(&g, &p, &y, s, d, &opts) {
            Ok(a) => {
                let set: VertexSet = a.order.iter().copied().collect();
                let re = classify_alignment(&g, &p, &set).unwrap();
                if a.order.len() != s || !re.is_some_and(|r| r.is_consistent()) {
                    bad.push(format!("seed {seed}: bad output"));
                }
            }
            Err(e) => bad.push(format!("seed {seed}: {e}")),
        }
    }
    let mut interval_ok = 0;
    for seed in 0..300u64 {
        let mut rng = SeededRng::new(seed);
        let k = rng.range(0, 12);
        let windows: Vec<(usize, usize)> = (0..k)
            .map(|_| {
                let a = rng.below(20);
                (a, a + rng.below(4))
            })
            .collect();
        let got = interval_stable_set(&windows);
        let disjoint = got.iter().enumerate().all(|(a, &i)| {
            got[a + 1..]
                .iter()
                .all(|&j| windows[i].1 < windows[j].0 || windows[j].1 < windows[i].0)
        });
        if disjoint && got.len() == brute_interval_stable(&windows) {
            interval_ok += 1;
        } else {
            bad.push(format!("interval seed {seed}"));
        }
    }
    outcome(
        done >= 100 && bad.is_empty(),
        format!(
            "{done} extractions, {interval_ok}/300 interval sets match brute force; failures {:?}",
            bad.first()
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut per_case = Vec::new();
    let mut bad = Vec::new();
    for case in AmicableCase::ALL {
        let mut ok = 0;
        for seed in 0..12u64 {
            let mut rng = SeededRng::new(seed * 131 + case as u64);
            let (inst, t) = amicable_instance(&mut rng, case).unwrap();
            match amicable_z(&inst, t, &VerifyOptions::default()) {
                Ok(r) if r.case == case && r.contained && r.size_ok && r.separated => ok += 1,
                Ok(r) => bad.push(format!(
                    "{}: got {} {:?}",
                    case.tag(),
                    r.case.tag(),
                    (r.contained, r.size_ok, r.separated)
                )),
                Err(e) => bad.push(format!("{}: {e}", case.tag())),
            }
        }
        per_case.push(format!("{}={ok}", case.tag()));
    }
    outcome(
        bad.is_empty(),
        format!("{}; failures {:?}", per_case.join(" "), bad.first()),
    )
}

fn criterion_7() -> Outcome {
    let mut done = 0;
    let mut bad = Vec::new();
    let mut seed = 0;
    while done < 100 && seed < 5000 {
        let mut rng = SeededRng::new(seed);
        seed += 1;
        let n = rng.range(6, 14);
        let t = rng.range(2, 4);
        let p = rng.range(10, 50) as u32;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.percent(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        if find_k1t(&g, t).unwrap().is_some() {
            continue;
        }
        done += 1;
        let k = rng.range(0, 3);
        let mut all: Vec<Vertex> = g.vertices().collect();
        rng.shuffle(&mut all);
        let y: VertexSet = all[..k].iter().copied().collect();
        let r = star_alpha_bound(&g, &y, t).unwrap();
        let alpha = brute_alpha(&g, &g.closed_neighborhood(&y).unwrap());
        if r.alpha != alpha || alpha > k * t || !r.ok {
            bad.push(format!(
                "seed {seed}: alpha {alpha} vs {} bound {}",
                r.alpha,
                k * t
            ));
        }
    }
    outcome(
        done >= 100 && bad.is_empty(),
        format!("{done} instances; failures {:?}", bad.first()),
    )
}

fn criterion_8() -> (Outcome, CampaignReport) {
    let r = campaign(
        CampaignName::DecompPipeline,
        100,
        42,
        &CampaignParams::default(),
    );
    let trees = campaign(
        CampaignName::DecompPipeline,
        30,
        43,
        &CampaignParams {
            size: None,
            trees_only: true,
        },
    );
    let tree_tia_ok = trees.results.iter().all(|t| t.detail.contains("s=1 "));
    let o = outcome(
        r.violated == 0 && r.verified == 100 && trees.verified == 30 && tree_tia_ok,
        format!(
            "{} graphs verified (valid, tia ≤ 5s, exact cross-check n ≤ 8); trees {}/30 with s=1",
            r.verified, trees.verified
        ),
    );
    (o, r)
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    for seed in 0..200u64 {
        let mut rng = SeededRng::new(seed);
        let n = rng.range(1, 18);
        let p = rng.range(10, 50) as u32;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.percent(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        let w: Vec<Rational> = (0..n)
            .map(|_| ratio(rng.range(0, 20) as i64, rng.range(1, 6) as i64))
            .collect();
        let mut order: Vec<Vertex> = g.vertices().collect();
        rng.shuffle(&mut order);
        let td = elimination_decomposition(&g, &order).unwrap();
        let r = mwis_on_decomposition(&g, &td, &w).unwrap();
        let adj = adjacency_masks(&g);
        let expect = brute_mwis(&adj, &w, if n == 64 { u64::MAX } else { (1u64 << n) - 1 });
        let wit_sum = r
            .witness
            .iter()
            .fold(Rational::from_integer(0.into()), |a, &v| a + &w[v]);
        if r.value != expect || wit_sum != expect || !g.is_stable(&r.witness) {
            bad.push(format!("seed {seed}: {} vs {}", r.value, expect));
        }
    }
    outcome(
        bad.is_empty(),
        format!("200 graphs exact; failures {:?}", bad.first()),
    )
}

fn criterion_10(
    previous: &[(CampaignName, CampaignReport, usize, u64, CampaignParams)],
) -> Outcome {
    let mut same = 0;
    for (name, report, trials, seed, params) in previous {
        let again = campaign(*name, *trials, *seed, params);
        if serde_json::to_string_pretty(report).unwrap()
            == serde_json::to_string_pretty(&again).unwrap()
        {
            same += 1;
        }
    }
    outcome(
        same == previous.len(),
        format!("{same}/{} campaign reruns byte-identical", previous.len()),
    )
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    let mut record = |k: usize, name: &str, o: Outcome| {
        let line = format!(
            "{} criterion {k} ({name}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        println!("{line}");
        lines.push((o.pass, line));
    };
    let (o1, r1) = criterion_1();
    record(1, "wheel separation", o1);
    let (o2, r2) = criterion_2();
    record(2, "special-wheel separation", o2);
    let (o3, r3) = criterion_3();
    record(3, "pyramid separation", o3);
    record(4, "strip axioms", criterion_4());
    record(5, "consistent alignment extraction", criterion_5());
    record(6, "amicability construction", criterion_6());
    record(7, "star-cover bound", criterion_7());
    let (o8, r8) = criterion_8();
    record(8, "balanced separators to tree decomposition", o8);
    record(9, "MWIS over decompositions", criterion_9());
    let amicable = campaign(CampaignName::Amicable, 45, 42, &CampaignParams::default());
    let d = CampaignParams::default();
    let previous = vec![
        (CampaignName::WheelSep, r1, 200, 42, d),
        (CampaignName::SpecialWheelSep, r2, 200, 42, d),
        (CampaignName::PyramidSep, r3, 200, 42, d),
        (CampaignName::Amicable, amicable, 45, 42, d),
        (CampaignName::DecompPipeline, r8, 100, 42, d),
    ];
    record(10, "determinism", criterion_10(&previous));
    let failed: Vec<&String> = lines.iter().filter(|(p, _)| !p).map(|(_, l)| l).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:#?}");
}
