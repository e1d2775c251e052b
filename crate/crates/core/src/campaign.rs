//! Reproducible verification campaigns over generated instances. Trials run
//! in parallel; results are merged by trial index, so a campaign with a
//! given seed always produces the same report bytes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amicable::{amicable_z, AmicableCase};
use crate::decomp::{
    bs_to_tree_decomposition, exact_tia_small, MinAlphaOracle, SeparatorOracle, TreeDecomposition,
};
use crate::detect::{theta_prism_free, DetectConfig};
use crate::error::{Error, Result};
use crate::generate::{amicable_instance, generate, Family, GenWitness, GeneratorSpec, SeededRng};
use crate::graph::{Graph, VertexSet};
use crate::separators::{
    pyramid_z, verify_pyramid_separation, verify_wheel_separation, wheel_z, Hypotheses,
    SeparatorReport, VerifyOptions,
};

/// Largest wheel instance (vertices) in the wheel campaigns.
pub const WHEEL_MAX_N: usize = 16;
/// Largest pyramid instance; also the detection cap used to class-check it.
pub const PYRAMID_MAX_N: usize = 22;
/// Samples drawn per trial before giving up on finding a class member.
pub const CLASS_ATTEMPTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CampaignName {
    WheelSep,
    SpecialWheelSep,
    PyramidSep,
    Amicable,
    DecompPipeline,
}

impl CampaignName {
    pub const ALL: [CampaignName; 5] = [
        CampaignName::WheelSep,
        CampaignName::SpecialWheelSep,
        CampaignName::PyramidSep,
        CampaignName::Amicable,
        CampaignName::DecompPipeline,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            CampaignName::WheelSep => "wheel-sep",
            CampaignName::SpecialWheelSep => "special-wheel-sep",
            CampaignName::PyramidSep => "pyramid-sep",
            CampaignName::Amicable => "amicable",
            CampaignName::DecompPipeline => "decomp-pipeline",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.tag() == s)
    }
}

/// Optional size overrides; `None` keeps each campaign's defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignParams {
    /// Inclusive range for hole lengths, pyramid path lengths or graph sizes.
    pub size: Option<(usize, usize)>,
    /// decomp-pipeline: generate only trees.
    #[serde(default)]
    pub trees_only: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialStatus {
    Verified,
    Violated,
    /// The instance made the statement vacuous (nothing to check).
    SkippedVacuous,
    /// No instance satisfying the hypotheses was found.
    NoSample,
}

/// An instance that can be replayed through the campaign's verifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub graph: Graph,
    pub witness: GenWitness,
    pub spec: Option<GeneratorSpec>,
    /// Extra verifier input (t for amicable, s-search limit unused otherwise).
    #[serde(default)]
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub index: usize,
    pub seed: u64,
    pub status: TrialStatus,
    pub n: usize,
    /// Number of checked items (separated pairs, bags, ...).
    pub checked: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureArtifact {
    pub campaign: CampaignName,
    pub index: usize,
    pub instance: Instance,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub campaign: CampaignName,
    pub seed: u64,
    pub trials: usize,
    pub verified: usize,
    pub violated: usize,
    pub skipped: usize,
    pub no_sample: usize,
    pub results: Vec<TrialResult>,
    pub failures: Vec<FailureArtifact>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.violated == 0
    }
}

/// Seeds for each trial: the first `trials` outputs of the seeded generator.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut rng = SeededRng::new(seed);
    (0..trials).map(|_| rng.next_u64()).collect()
}

pub fn campaign(
    name: CampaignName,
    trials: usize,
    seed: u64,
    params: &CampaignParams,
) -> CampaignReport {
    let seeds = trial_seeds(seed, trials);
    let outcomes: Vec<(TrialResult, Option<Instance>)> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| run_trial(name, i, s, params))
        .collect();
    let mut report = CampaignReport {
        campaign: name,
        seed,
        trials,
        verified: 0,
        violated: 0,
        skipped: 0,
        no_sample: 0,
        results: Vec::with_capacity(trials),
        failures: Vec::new(),
    };
    for (r, inst) in outcomes {
        match r.status {
            TrialStatus::Verified => report.verified += 1,
            TrialStatus::Violated => report.violated += 1,
            TrialStatus::SkippedVacuous => report.skipped += 1,
            TrialStatus::NoSample => report.no_sample += 1,
        }
        if r.status == TrialStatus::Violated {
            if let Some(instance) = inst {
                report.failures.push(FailureArtifact {
                    campaign: name,
                    index: r.index,
                    instance,
                    detail: r.detail.clone(),
                });
            }
        }
        report.results.push(r);
    }
    report
}

/// Outcome of the verifier on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: TrialStatus,
    pub checked: usize,
    pub detail: String,
}

fn verdict(status: TrialStatus, checked: usize, detail: impl Into<String>) -> Verdict {
    Verdict {
        status,
        checked,
        detail: detail.into(),
    }
}

fn run_trial(
    name: CampaignName,
    index: usize,
    seed: u64,
    params: &CampaignParams,
) -> (TrialResult, Option<Instance>) {
    let mut rng = SeededRng::new(seed);
    let inst = match sample(name, &mut rng, index, params) {
        Ok(Some(inst)) => inst,
        Ok(None) => {
            return (
                TrialResult {
                    index,
                    seed,
                    status: TrialStatus::NoSample,
                    n: 0,
                    checked: 0,
                    detail: "no instance satisfying the hypotheses".into(),
                },
                None,
            )
        }
        Err(e) => {
            return (
                TrialResult {
                    index,
                    seed,
                    status: TrialStatus::NoSample,
                    n: 0,
                    checked: 0,
                    detail: format!("generation failed: {e}"),
                },
                None,
            )
        }
    };
    let v = replay(name, &inst);
    (
        TrialResult {
            index,
            seed,
            status: v.status,
            n: inst.graph.n(),
            checked: v.checked,
            detail: v.detail,
        },
        Some(inst),
    )
}

fn in_class(g: &Graph, cap: usize) -> Result<bool> {
    Ok(theta_prism_free(g, &DetectConfig::with_cap(cap))?.is_none())
}

/// True when at least two groups keep a vertex outside N[z], i.e. the
/// separation claim is not vacuous.
fn has_pairs(g: &Graph, z: &VertexSet, groups: &[VertexSet]) -> Result<bool> {
    let nz = g.closed_neighborhood(z)?;
    Ok(groups
        .iter()
        .filter(|s| s.iter().any(|v| !nz.contains(v)))
        .count()
        >= 2)
}

fn sample(
    name: CampaignName,
    rng: &mut SeededRng,
    index: usize,
    params: &CampaignParams,
) -> Result<Option<Instance>> {
    match name {
        CampaignName::WheelSep | CampaignName::SpecialWheelSep => {
            let special = name == CampaignName::SpecialWheelSep;
            let (lo, hi) = params.size.unwrap_or((7, 12));
            for _ in 0..CLASS_ATTEMPTS {
                let hole = rng.range(
                    lo.max(special as usize * 9),
                    hi.max(lo).max(special as usize * 9),
                );
                let spokes = if special {
                    3
                } else {
                    rng.range(3, (hole / 2).clamp(3, 6))
                };
                let mut pendants = rng.range(0, 4);
                let gen_seed = rng.next_u64();
                let gen = loop {
                    let spec = GeneratorSpec {
                        family: Family::Wheel {
                            hole,
                            spokes,
                            special,
                            even: false,
                            pendants,
                        },
                        seed: gen_seed,
                    };
                    let g = generate(&spec)?;
                    if g.graph.n() <= WHEEL_MAX_N || pendants == 0 {
                        break g;
                    }
                    pendants -= 1;
                };
                if gen.graph.n() > WHEEL_MAX_N {
                    continue;
                }
                let GenWitness::Wheel(w) = &gen.witness else {
                    unreachable!()
                };
                let sectors = w.sectors(&gen.graph);
                if special && sectors.iter().filter(|s| s.len() > 3).count() < 2 {
                    continue;
                }
                if !special && w.is_special(&gen.graph) {
                    continue;
                }
                let interiors: Vec<VertexSet> = sectors
                    .iter()
                    .map(|s| s[1..s.len() - 1].iter().copied().collect())
                    .collect();
                if !has_pairs(&gen.graph, &wheel_z(&gen.graph, w)?, &interiors)? {
                    continue;
                }
                if !in_class(&gen.graph, WHEEL_MAX_N)? {
                    continue;
                }
                return Ok(Some(Instance {
                    graph: gen.graph,
                    witness: gen.witness,
                    spec: Some(gen.spec),
                    t: 0,
                }));
            }
            Ok(None)
        }
        CampaignName::PyramidSep => {
            let (lo, hi) = params.size.unwrap_or((3, 6));
            for _ in 0..CLASS_ATTEMPTS {
                let lengths = [rng.range(lo, hi), rng.range(lo, hi), rng.range(lo, hi)];
                let mut pendants = rng.range(0, 3);
                let gen_seed = rng.next_u64();
                let gen = loop {
                    let spec = GeneratorSpec {
                        family: Family::Pyramid { lengths, pendants },
                        seed: gen_seed,
                    };
                    let g = generate(&spec)?;
                    if g.graph.n() <= PYRAMID_MAX_N || pendants == 0 {
                        break g;
                    }
                    pendants -= 1;
                };
                if gen.graph.n() > PYRAMID_MAX_N {
                    continue;
                }
                let GenWitness::Pyramid(p) = &gen.witness else {
                    unreachable!()
                };
                if !has_pairs(&gen.graph, &pyramid_z(&gen.graph, p)?, &p.path_sets())?
                    || !in_class(&gen.graph, PYRAMID_MAX_N)?
                {
                    continue;
                }
                return Ok(Some(Instance {
                    graph: gen.graph,
                    witness: gen.witness,
                    spec: Some(gen.spec),
                    t: 0,
                }));
            }
            Ok(None)
        }
        CampaignName::Amicable => {
            let case = AmicableCase::ALL[index % AmicableCase::ALL.len()];
            let gen_seed = rng.next_u64();
            let (inst, t) = amicable_instance(&mut SeededRng::new(gen_seed), case)?;
            Ok(Some(Instance {
                graph: inst.graph.clone(),
                witness: GenWitness::Amicable {
                    t,
                    instance: Box::new(inst),
                },
                spec: Some(GeneratorSpec {
                    family: Family::TrisectionInstance { case },
                    seed: gen_seed,
                }),
                t,
            }))
        }
        CampaignName::DecompPipeline => {
            let (lo, hi) = params.size.unwrap_or((4, 12));
            let n = rng.range(lo.max(1), hi.max(lo));
            let tree = params.trees_only || index.is_multiple_of(3);
            let mut edges = Vec::new();
            if tree {
                for v in 1..n {
                    edges.push((rng.below(v), v));
                }
            } else {
                let p = rng.range(15, 45) as u32;
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.percent(p) {
                            edges.push((u, v));
                        }
                    }
                }
            }
            Ok(Some(Instance {
                graph: Graph::from_edges(n, &edges)?,
                witness: GenWitness::None,
                spec: None,
                t: 0,
            }))
        }
    }
}

fn separator_verdict(rep: Result<SeparatorReport>) -> Verdict {
    match rep {
        Err(e) => verdict(TrialStatus::Violated, 0, format!("verifier error: {e}")),
        Ok(r) if !r.ok() => verdict(
            TrialStatus::Violated,
            r.separated_pairs.len(),
            format!(
                "{} pairs not separated, first {:?}",
                r.violations.len(),
                r.violations[0]
            ),
        ),
        Ok(r) if r.hypotheses != Hypotheses::Verified => verdict(
            TrialStatus::Violated,
            0,
            "class hypothesis was not verified",
        ),
        Ok(r) if r.separated_pairs.is_empty() => {
            verdict(TrialStatus::SkippedVacuous, 0, "no pairs to separate")
        }
        Ok(r) => verdict(
            TrialStatus::Verified,
            r.separated_pairs.len(),
            format!("|Z|={} pairs={}", r.z.len(), r.separated_pairs.len()),
        ),
    }
}

/// Runs the campaign's verifier on one instance; used for trials and for
/// replaying failure artifacts.
pub fn replay(name: CampaignName, inst: &Instance) -> Verdict {
    let g = &inst.graph;
    match (name, &inst.witness) {
        (CampaignName::WheelSep | CampaignName::SpecialWheelSep, GenWitness::Wheel(w)) => {
            separator_verdict(verify_wheel_separation(
                g,
                w,
                &VerifyOptions::with_cap(WHEEL_MAX_N),
            ))
        }
        (CampaignName::PyramidSep, GenWitness::Pyramid(p)) => separator_verdict(
            verify_pyramid_separation(g, p, &VerifyOptions::with_cap(PYRAMID_MAX_N)),
        ),
        (CampaignName::Amicable, GenWitness::Amicable { t, instance }) => {
            match amicable_z(instance, *t, &VerifyOptions::default()) {
                Err(e) => verdict(
                    TrialStatus::Violated,
                    0,
                    format!("construction failed: {e}"),
                ),
                Ok(r) if r.verified => verdict(
                    TrialStatus::Verified,
                    r.z.len(),
                    format!("{} |Z|={} t={t}", r.case.tag(), r.z.len()),
                ),
                Ok(r) => verdict(
                    TrialStatus::Violated,
                    r.z.len(),
                    format!(
                        "{}: contained={} size_ok={} separated={} theorem_check={}",
                        r.case.tag(),
                        r.contained,
                        r.size_ok,
                        r.separated,
                        r.theorem_check
                    ),
                ),
            }
        }
        (CampaignName::DecompPipeline, _) => decomp_verdict(g),
        _ => verdict(
            TrialStatus::Violated,
            0,
            "instance does not match the campaign",
        ),
    }
}

/// Smallest s for which the oracle honors its contract on every call, with
/// the decomposition built at that s.
pub fn decompose_min_s(
    g: &Graph,
    oracle: &dyn SeparatorOracle,
) -> Result<(usize, TreeDecomposition)> {
    let mut s = 1;
    loop {
        match bs_to_tree_decomposition(g, s, oracle) {
            Ok(td) => return Ok((s, td)),
            Err(Error::Contract(msg)) if msg.contains("stable-set number") && s < g.n().max(1) => {
                s += 1
            }
            Err(e) => return Err(e),
        }
    }
}

fn decomp_verdict(g: &Graph) -> Verdict {
    let (s, td) = match decompose_min_s(g, &MinAlphaOracle) {
        Ok(x) => x,
        Err(e) => {
            return verdict(
                TrialStatus::Violated,
                0,
                format!("decomposition failed: {e}"),
            )
        }
    };
    let check = td.validate(g);
    if let Some(v) = check.violation {
        return verdict(
            TrialStatus::Violated,
            td.bags.len(),
            format!("invalid decomposition: {v}"),
        );
    }
    let tia = match td.tia_of(g) {
        Ok(t) => t,
        Err(e) => return verdict(TrialStatus::Violated, 0, format!("bag alpha failed: {e}")),
    };
    if tia > 5 * s {
        return verdict(
            TrialStatus::Violated,
            td.bags.len(),
            format!("tia {tia} > 5s = {}", 5 * s),
        );
    }
    let mut detail = format!("s={s} tia={tia} bags={}", td.bags.len());
    if g.n() <= 8 {
        match exact_tia_small(g) {
            Ok(exact) if tia < exact || tia > 5 * exact.max(1) => {
                return verdict(
                    TrialStatus::Violated,
                    td.bags.len(),
                    format!("{detail}: outside [exact, 5*exact] with exact={exact}"),
                )
            }
            Ok(exact) => detail.push_str(&format!(" exact={exact}")),
            Err(e) => return verdict(TrialStatus::Violated, 0, format!("exact tia failed: {e}")),
        }
    }
    verdict(TrialStatus::Verified, td.bags.len(), detail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_deterministic() {
        assert_eq!(trial_seeds(42, 5), trial_seeds(42, 5));
        assert_ne!(trial_seeds(42, 5), trial_seeds(43, 5));
    }

    #[test]
    fn small_campaigns_pass_and_repeat() {
        for name in CampaignName::ALL {
            let a = campaign(name, 6, 9, &CampaignParams::default());
            assert!(a.passed(), "{name:?}: {:?}", a.results);
            let b = campaign(name, 6, 9, &CampaignParams::default());
            assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap()
            );
        }
    }

    #[test]
    fn vacuous_pyramids_are_skipped() {
        let r = campaign(
            CampaignName::PyramidSep,
            5,
            1,
            &CampaignParams {
                size: Some((1, 2)),
                trees_only: false,
            },
        );
        assert_eq!(r.violated, 0);
        assert_eq!(r.skipped + r.no_sample, 5, "{:?}", r.results);
    }

    #[test]
    fn tree_pipeline_stays_within_five() {
        let r = campaign(
            CampaignName::DecompPipeline,
            8,
            3,
            &CampaignParams {
                size: None,
                trees_only: true,
            },
        );
        assert_eq!(r.verified, 8);
    }

    #[test]
    fn tags_roundtrip() {
        for c in CampaignName::ALL {
            assert_eq!(CampaignName::from_tag(c.tag()), Some(c));
        }
    }
}
