//! Command-line front end. Exit codes: 0 pass, 1 violation or broken
//! contract, 2 resource cap hit, 3 bad input or I/O failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use treealpha::align::{classify_alignment, extract_consistent_alignment, ExtractOptions};
use treealpha::amicable::{amicable_z, AmicabilityInstance};
use treealpha::campaign::{
    campaign, replay, CampaignName, CampaignParams, FailureArtifact, TrialStatus,
};
use treealpha::decomp::{
    bs_to_tree_decomposition, mwis_on_decomposition, ClosedNeighborhoodOracle, TreeDecomposition,
};
use treealpha::detect::{
    find_k1t, find_prism, find_pyramid, find_theta, find_wheels, DetectConfig, Detection,
    SearchMode,
};
use treealpha::error::{Error, Result};
use treealpha::generate::{generate, GeneratorSpec};
use treealpha::graph::{PathWitness, Vertex, VertexSet};
use treealpha::io::{read_graph, to_text};
use treealpha::separators::{verify_pyramid_separation, verify_wheel_separation, VerifyOptions};
use treealpha::shape::{classify_shape, find_connectifier, ConnectOptions};
use treealpha::strip::{
    classify_strip, pyramid_to_strip, reduce_to_trapped, validate_strip, StripStructure,
};
use treealpha::weights::{format_rational, parse_rational, Rational};

#[derive(Parser)]
#[command(
    name = "treealpha",
    version,
    about = "Separators and tree decompositions for (theta, prism)-free graphs"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Search for an induced theta, prism, pyramid, K_{1,t} or wheel.
    Detect(DetectArgs),
    /// Verify that N[Z] separates a detected wheel or pyramid.
    Separate(SeparateArgs),
    /// Strip-structure tools.
    #[command(subcommand)]
    Strip(StripCmd),
    /// Alignment tools.
    #[command(subcommand)]
    Align(AlignCmd),
    /// Connectifier tools.
    #[command(subcommand)]
    Connect(ConnectCmd),
    /// Amicability construction.
    #[command(subcommand)]
    Amicable(AmicableCmd),
    /// Tree decomposition from balanced separators N[Y], |Y| ≤ kmax.
    Decompose(DecomposeArgs),
    /// Maximum-weight stable set over a tree decomposition.
    Mwis(MwisArgs),
    /// Generate an instance from a JSON generator spec.
    Generate(GenerateArgs),
    /// Run a seeded verification campaign.
    Campaign(CampaignArgs),
    /// Re-run a campaign failure artifact.
    Replay { artifact: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pattern {
    Theta,
    Prism,
    Pyramid,
    K1t,
    Wheel,
}

#[derive(Args)]
struct DetectConfigArgs {
    /// Largest graph searched exhaustively.
    #[arg(long, default_value_t = treealpha::detect::DEFAULT_DETECT_CAP)]
    cap: usize,
    /// Bounded search with this step budget; never proves absence.
    #[arg(long)]
    heuristic_budget: Option<u64>,
    /// Require every prism path to have length at least one.
    #[arg(long)]
    classical_prism: bool,
}

impl DetectConfigArgs {
    fn config(&self) -> DetectConfig {
        DetectConfig {
            cap: self.cap,
            mode: match self.heuristic_budget {
                Some(step_budget) => SearchMode::Heuristic { step_budget },
                None => SearchMode::Exhaustive,
            },
            classical_prism: self.classical_prism,
        }
    }
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long, value_enum)]
    pattern: Pattern,
    /// Star size for k1t.
    #[arg(long, default_value_t = 3)]
    t: usize,
    /// Shortest hole for wheels.
    #[arg(long, default_value_t = 4)]
    min_hole: usize,
    #[command(flatten)]
    detect: DetectConfigArgs,
    graph: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeparateFrom {
    Wheel,
    Pyramid,
}

#[derive(Args)]
struct SeparateArgs {
    #[arg(long, value_enum)]
    from: SeparateFrom,
    /// Skip the (theta, prism)-freeness check.
    #[arg(long)]
    assume_class: bool,
    #[command(flatten)]
    detect: DetectConfigArgs,
    graph: PathBuf,
}

#[derive(Subcommand)]
enum StripCmd {
    /// Check the strip axioms of a strip-structure JSON document.
    Validate { file: PathBuf },
    /// Strip-structure of the first pyramid found, after trapping its apex.
    FromPyramid {
        #[command(flatten)]
        detect: DetectConfigArgs,
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum AlignCmd {
    /// Classify (P, X): P a comma-separated induced path, X a vertex list.
    Classify {
        #[arg(long)]
        path: String,
        #[arg(long)]
        set: String,
        graph: PathBuf,
    },
    /// Extract a consistent alignment of size s from Y.
    Extract {
        #[arg(long)]
        path: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        d: usize,
        /// Skip the |Y| ≥ 3s(d+1) check.
        #[arg(long)]
        no_size_check: bool,
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum ConnectCmd {
    /// Classify the shape of the induced subgraph on a vertex list.
    Classify {
        #[arg(long)]
        set: String,
        graph: PathBuf,
    },
    /// Find a connectifier for S with at least h attachments.
    Find {
        #[arg(long)]
        set: String,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        budget: Option<usize>,
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum AmicableCmd {
    /// Build Z for an amicability instance JSON document.
    Run {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        assume_class: bool,
        instance: PathBuf,
    },
}

#[derive(Args)]
struct DecomposeArgs {
    /// Stable-set bound promised for the separators.
    #[arg(long)]
    s: usize,
    /// Largest |Y| searched.
    #[arg(long)]
    kmax: usize,
    /// Also write the decomposition JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    graph: PathBuf,
}

#[derive(Args)]
struct MwisArgs {
    /// Tree decomposition JSON (as written by `decompose`).
    #[arg(long)]
    td: PathBuf,
    /// Weights: a JSON array of numbers or "p/q" strings, or whitespace-separated rationals.
    #[arg(long)]
    weights: PathBuf,
    graph: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator spec: a JSON file path or inline JSON.
    spec: String,
    /// Write only the graph, in the `p n m` / `e u v` text format.
    #[arg(long)]
    graph_only: bool,
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(value_parser = parse_campaign)]
    name: CampaignName,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Inclusive size range override, as lo..hi.
    #[arg(long, value_parser = parse_range)]
    size: Option<(usize, usize)>,
    /// Decomposition campaign on trees only.
    #[arg(long)]
    trees_only: bool,
    /// Directory for failure artifacts.
    #[arg(long)]
    artifacts: Option<PathBuf>,
}

fn parse_campaign(s: &str) -> std::result::Result<CampaignName, String> {
    CampaignName::from_tag(s).ok_or_else(|| {
        let names: Vec<&str> = CampaignName::ALL.iter().map(|c| c.tag()).collect();
        format!("unknown campaign {s}; expected one of {}", names.join(", "))
    })
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

fn parse_list(s: &str) -> Result<Vec<Vertex>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Input(format!("bad vertex {t:?}")))
        })
        .collect()
}

fn parse_set(s: &str) -> Result<VertexSet> {
    Ok(parse_list(s)?.into_iter().collect())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn read_weights(path: &Path, n: usize) -> Result<Vec<Rational>> {
    let src = fs::read_to_string(path)?;
    let tokens: Vec<String> = match serde_json::from_str::<serde_json::Value>(&src) {
        Ok(serde_json::Value::Array(items)) => items
            .into_iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            })
            .collect(),
        _ => src.split_whitespace().map(str::to_string).collect(),
    };
    if tokens.len() != n {
        return Err(Error::Input(format!(
            "{} weights for {n} vertices",
            tokens.len()
        )));
    }
    tokens.iter().map(|t| parse_rational(t)).collect()
}

/// What a command produced: a document, its text rendering, and whether it
/// reports a violation.
struct Output {
    doc: serde_json::Value,
    text: String,
    violated: bool,
}

fn out<T: Serialize>(value: &T, text: impl Into<String>, violated: bool) -> Result<Output> {
    Ok(Output {
        doc: serde_json::to_value(value)?,
        text: text.into(),
        violated,
    })
}

fn list(xs: impl IntoIterator<Item = Vertex>) -> String {
    xs.into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn detection_text<W: std::fmt::Debug>(d: &Detection<W>) -> String {
    match d {
        Detection::Found(w) => format!("found {w:?}"),
        Detection::Absent => "none".into(),
        _ => "none found (heuristic search, absence not proven)".into(),
    }
}

fn run_detect(a: &DetectArgs) -> Result<Output> {
    let g = read_graph(&a.graph)?;
    let cfg = a.detect.config();
    match a.pattern {
        Pattern::Theta => {
            let d = find_theta(&g, &cfg)?;
            out(&d, detection_text(&d), false)
        }
        Pattern::Prism => {
            let d = find_prism(&g, &cfg)?;
            out(&d, detection_text(&d), false)
        }
        Pattern::Pyramid => {
            let d = find_pyramid(&g, &cfg)?;
            out(&d, detection_text(&d), false)
        }
        Pattern::K1t => {
            let w = find_k1t(&g, a.t)?;
            let text = match &w {
                Some(w) => format!("found {w:?}"),
                None => "none".into(),
            };
            out(&w, text, false)
        }
        Pattern::Wheel => {
            let ws = find_wheels(&g, a.min_hole, &cfg)?;
            let text = if ws.is_empty() {
                "none".to_string()
            } else {
                ws.iter()
                    .map(|w| format!("hub {} hole {}", w.hub, list(w.hole.iter().copied())))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            out(&ws, text, false)
        }
    }
}

fn run_separate(a: &SeparateArgs) -> Result<Output> {
    let g = read_graph(&a.graph)?;
    let opts = VerifyOptions {
        detect: a.detect.config(),
        assume_class: a.assume_class,
    };
    let report = match a.from {
        SeparateFrom::Wheel => {
            // First wheel meeting the hypotheses of the separation theorems.
            let wheels = find_wheels(&g, 4, &a.detect.config())?;
            let mut last = Error::Input("no wheel in the graph".into());
            let mut found = None;
            for w in wheels {
                match verify_wheel_separation(&g, &w, &opts) {
                    Ok(r) => {
                        found = Some(r);
                        break;
                    }
                    Err(e) => last = e,
                }
            }
            found.ok_or(last)?
        }
        SeparateFrom::Pyramid => {
            let p = find_pyramid(&g, &a.detect.config())?
                .found()
                .ok_or_else(|| Error::Input("no pyramid in the graph".into()))?;
            verify_pyramid_separation(&g, &p, &opts)?
        }
    };
    let text = format!(
        "Z = {}\nseparated pairs {}, violations {}, hypotheses {:?}",
        list(report.z.iter().copied()),
        report.separated_pairs.len(),
        report.violations.len(),
        report.hypotheses
    );
    let bad = !report.ok();
    out(&report, text, bad)
}

fn run_strip(c: &StripCmd) -> Result<Output> {
    let file = match c {
        StripCmd::Validate { file } => file,
        StripCmd::FromPyramid { detect, graph } => {
            let g = read_graph(graph)?;
            let p = find_pyramid(&g, &detect.config())?
                .found()
                .ok_or_else(|| Error::Input("no pyramid in the graph".into()))?;
            let (h, _, q) = reduce_to_trapped(&g, &p)?;
            let s = pyramid_to_strip(&h, &q)?;
            let text = serde_json::to_string(&s)?;
            return out(&s, text, false);
        }
    };
    let s: StripStructure = read_json(file)?;
    let violations = validate_strip(&s);
    let flags = if violations.is_empty() {
        Some(classify_strip(&s)?)
    } else {
        None
    };
    let text = if violations.is_empty() {
        format!("valid; {:?}", flags.unwrap())
    } else {
        violations
            .iter()
            .map(|v| format!("{}: {}", v.axiom, v.detail))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let bad = !violations.is_empty();
    out(
        &json!({ "valid": violations.is_empty(), "violations": violations, "flags": flags }),
        text,
        bad,
    )
}

fn run_align(c: &AlignCmd) -> Result<Output> {
    match c {
        AlignCmd::Classify { path, set, graph } => {
            let g = read_graph(graph)?;
            let p = PathWitness::new(&g, parse_list(path)?)?;
            let a = classify_alignment(&g, &p, &parse_set(set)?)?;
            let text = match &a {
                Some(a) => format!("{:?}, order {}", a.kind, list(a.order.iter().copied())),
                None => "not an alignment".into(),
            };
            out(&a, text, false)
        }
        AlignCmd::Extract {
            path,
            set,
            s,
            d,
            no_size_check,
            graph,
        } => {
            let g = read_graph(graph)?;
            let p = PathWitness::new(&g, parse_list(path)?)?;
            let opts = ExtractOptions {
                check_size: !no_size_check,
                check_outside_paths: true,
            };
            let a = extract_consistent_alignment(&g, &p, &parse_set(set)?, *s, *d, &opts)?;
            let text = format!("{:?}, order {}", a.kind, list(a.order.iter().copied()));
            out(&a, text, false)
        }
    }
}

fn run_connect(c: &ConnectCmd) -> Result<Output> {
    match c {
        ConnectCmd::Classify { set, graph } => {
            let g = read_graph(graph)?;
            let shape = classify_shape(&g, &parse_set(set)?)?;
            let text = match &shape {
                Some(s) => format!("{:?}", s.kind),
                None => "no shape".into(),
            };
            out(&shape, text, false)
        }
        ConnectCmd::Find {
            set,
            h,
            budget,
            graph,
        } => {
            let g = read_graph(graph)?;
            let mut opts = ConnectOptions::default();
            if let Some(b) = budget {
                opts.budget = *b;
            }
            let found = find_connectifier(&g, &parse_set(set)?, *h, &opts)?;
            let text = format!(
                "H = {}\nX = {}",
                list(found.h()),
                list(found.x().iter().copied())
            );
            out(&found, text, false)
        }
    }
}

fn run_amicable(c: &AmicableCmd) -> Result<Output> {
    let AmicableCmd::Run {
        t,
        assume_class,
        instance,
    } = c;
    let inst: AmicabilityInstance = read_json(instance)?;
    let opts = VerifyOptions {
        assume_class: *assume_class,
        ..VerifyOptions::default()
    };
    let r = amicable_z(&inst, *t, &opts)?;
    let text = format!(
        "case {}\nZ = {}\ncontained {} size_ok {} separated {} verified {}",
        r.case.tag(),
        list(r.z.iter().copied()),
        r.contained,
        r.size_ok,
        r.separated,
        r.verified
    );
    let bad = !r.verified;
    out(&r, text, bad)
}

fn run_decompose(a: &DecomposeArgs) -> Result<Output> {
    let g = read_graph(&a.graph)?;
    let oracle = ClosedNeighborhoodOracle {
        kmax: a.kmax,
        hints: Vec::new(),
    };
    let td = bs_to_tree_decomposition(&g, a.s, &oracle)?;
    let check = td.validate(&g);
    let tia = td.tia_of(&g)?;
    let hist = td.bag_size_histogram();
    if let Some(path) = &a.out {
        fs::write(path, serde_json::to_string_pretty(&td)?)?;
    }
    let text = format!(
        "{} bags, max bag alpha {tia} (bound {}), valid {}\nbag sizes {:?}",
        td.bags.len(),
        5 * a.s,
        check.valid,
        hist
    );
    let bad = !check.valid || tia > 5 * a.s;
    let report = json!({ "max_bag_alpha": tia, "bag_size_histogram": hist, "check": check });
    out(&json!({ "td": td, "report": report }), text, bad)
}

fn run_mwis(a: &MwisArgs) -> Result<Output> {
    let g = read_graph(&a.graph)?;
    let doc: serde_json::Value = read_json(&a.td)?;
    // Accept both a bare decomposition and the `decompose` output.
    let td: TreeDecomposition = serde_json::from_value(doc.get("td").cloned().unwrap_or(doc))?;
    let w = read_weights(&a.weights, g.n())?;
    let r = mwis_on_decomposition(&g, &td, &w)?;
    let text = format!(
        "value {}\nset {}",
        format_rational(&r.value),
        list(r.witness.iter().copied())
    );
    out(&r, text, false)
}

fn run_generate(a: &GenerateArgs) -> Result<Output> {
    let src = if Path::new(&a.spec).exists() {
        fs::read_to_string(&a.spec)?
    } else {
        a.spec.clone()
    };
    let spec: GeneratorSpec = serde_json::from_str(&src)?;
    let gen = generate(&spec)?;
    if a.graph_only {
        return out(&gen.graph, to_text(&gen.graph), false);
    }
    let text = format!("{}witness {:?}", to_text(&gen.graph), gen.witness);
    out(&gen, text, false)
}

fn artifact_name(a: &FailureArtifact) -> String {
    format!("{}-{:05}.json", a.campaign.tag(), a.index)
}

fn run_campaign(a: &CampaignArgs) -> Result<Output> {
    let params = CampaignParams {
        size: a.size,
        trees_only: a.trees_only,
    };
    let r = campaign(a.name, a.trials, a.seed, &params);
    if let Some(dir) = &a.artifacts {
        fs::create_dir_all(dir)?;
        for f in &r.failures {
            fs::write(dir.join(artifact_name(f)), serde_json::to_string_pretty(f)?)?;
        }
    }
    let text = format!(
        "{} seed {}: {} trials, verified {}, violated {}, skipped {}, no sample {}",
        a.name.tag(),
        a.seed,
        r.trials,
        r.verified,
        r.violated,
        r.skipped,
        r.no_sample
    );
    let bad = !r.passed();
    out(&r, text, bad)
}

fn run_replay(path: &Path) -> Result<Output> {
    let f: FailureArtifact = read_json(path)?;
    let v = replay(f.campaign, &f.instance);
    let text = format!("{:?}: {}", v.status, v.detail);
    let bad = v.status == TrialStatus::Violated;
    out(&v, text, bad)
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Detect(a) => run_detect(a),
        Command::Separate(a) => run_separate(a),
        Command::Strip(c) => run_strip(c),
        Command::Align(c) => run_align(c),
        Command::Connect(c) => run_connect(c),
        Command::Amicable(c) => run_amicable(c),
        Command::Decompose(a) => run_decompose(a),
        Command::Mwis(a) => run_mwis(a),
        Command::Generate(a) => run_generate(a),
        Command::Campaign(a) => run_campaign(a),
        Command::Replay { artifact } => run_replay(artifact),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&o.doc).expect("JSON value")
                ),
                Format::Text => println!("{}", o.text.trim_end()),
            }
            ExitCode::from(if o.violated { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
