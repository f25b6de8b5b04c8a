//! `kcirc`: analyze k-circular matroids of multigraphs from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 unreadable input,
//! 3 infeasible k, 4 resource limit, 5 hypothesis unmet.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use kcirc_core::corpus::{self, Mutant};
use kcirc_core::uniqueness::search_equal_matroid;
use kcirc_core::{
    BaseWitness, EdgeSet, Error, KContext, Multigraph, SearchBounds, StarReport, StarStatus,
    DEFAULT_ENUMERATION_LIMIT,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "kcirc", version, about = "k-circular matroids of multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Circuits,
    Bases,
    Cocircuits,
    Nonsep,
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Graph file: {"vertices": [..], "edges": [{"id", "ends": [u, v]}, ..]}.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Largest edge count for subset enumeration.
    #[arg(long, env = "KCIRC_MAX_EDGES", default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    max_edges: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Excess, cacti membership, kernel and core, matroid connectivity,
    /// ranks and vertex-star statuses.
    Analyze(GraphArgs),
    /// List a set family of M_k(G) with its predicate-versus-oracle check.
    Enumerate {
        #[arg(value_enum)]
        family: Family,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Try to certify that G is the only graph with its k-circular matroid.
    Certify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Search for a rival graph when no certificate applies.
        #[arg(long)]
        search: bool,
        /// Largest edge count the rival search accepts.
        #[arg(long, default_value_t = 7)]
        search_max_edges: usize,
        /// Wall-clock limit for the rival search, in seconds.
        #[arg(long, default_value_t = 600)]
        max_time: u64,
    },
    /// Check every predicate against its oracle on all small multigraphs.
    Corpus {
        #[arg(long, default_value_t = 6)]
        max_edges: usize,
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        /// Also check this many seeded random multigraphs.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, hide = true)]
        inject_mutant: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::UnknownVertex(_)
            | Error::UnknownEdge(_)
            | Error::DuplicateLabel(_)
            | Error::DanglingEndpoint { .. }
            | Error::Json(_)
            | Error::GroundMismatch => 2,
            Error::KZero(_) => 3,
            Error::TooLarge { .. } | Error::EnumerationLimit { .. } => 4,
            Error::HypothesisUnmet(_) => 5,
            Error::Internal(_) => 1,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("kcirc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Analyze(a) => analyze(&a),
        Command::Enumerate { family, graph } => enumerate(family, &graph),
        Command::Certify {
            graph,
            search,
            search_max_edges,
            max_time,
        } => certify(&graph, search, search_max_edges, max_time),
        Command::Corpus {
            max_edges,
            max_vertices,
            random,
            seed,
            format,
            inject_mutant,
        } => run_corpus(max_edges, max_vertices, random, seed, format, inject_mutant),
    }
}

fn load(a: &GraphArgs) -> Result<(Multigraph, usize), Failure> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| Failure::new(2, format!("{}: {e}", a.input.display())))?;
    if text.trim().is_empty() {
        return Err(Failure::new(2, format!("{}: empty input", a.input.display())));
    }
    let g = Multigraph::from_json(&text)?;
    let k = usize::try_from(a.k).map_err(|_| Failure::new(3, format!("k must be nonnegative, got {}", a.k)))?;
    Ok((g, k))
}

fn labels(g: &Multigraph, x: EdgeSet) -> Vec<String> {
    g.edge_labels(x)
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// `key: value` lines mirroring a JSON object; nested values stay JSON.
fn text_of(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (key, val) in map {
            match val {
                Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                    let _ = writeln!(out, "{key}:");
                    for item in items {
                        let _ = writeln!(out, "  {item}");
                    }
                }
                Value::String(s) => {
                    let _ = writeln!(out, "{key}: {s}");
                }
                other => {
                    let _ = writeln!(out, "{key}: {other}");
                }
            }
        }
    }
    out
}

fn emit(v: &Value, format: Format) -> String {
    match format {
        Format::Text => text_of(v),
        _ => render(v),
    }
}

fn subgraph(g: Option<Multigraph>) -> Value {
    g.map_or(Value::Null, |h| {
        json!({
            "vertices": h.vertices(),
            "edges": h.edges().iter().map(|e| e.id.clone()).collect::<Vec<_>>(),
        })
    })
}

fn dot(g: &Multigraph, reports: Option<&[StarReport]>) -> String {
    let mut out = String::from("graph G {\n  node [style=filled];\n");
    for (i, v) in g.vertices().iter().enumerate() {
        let rep = reports.and_then(|r| r.iter().find(|r| r.index == i));
        let (color, status) = match rep.map(|r| r.status) {
            Some(StarStatus::Small) => ("palegreen", "small"),
            Some(StarStatus::Tight) => ("gold", "tight"),
            Some(StarStatus::Big) => ("salmon", "big"),
            None => ("lightgray", "none"),
        };
        let _ = writeln!(out, "  {v:?} [fillcolor={color}, tooltip={status:?}];");
    }
    for e in g.edges() {
        let (u, v) = (&g.vertices()[e.ends.0], &g.vertices()[e.ends.1]);
        let _ = writeln!(out, "  {u:?} -- {v:?} [label={:?}];", e.id);
    }
    out.push_str("}\n");
    out
}

fn analyze(a: &GraphArgs) -> Outcome {
    let (g, k) = load(a)?;
    let ctx = KContext::with_limit(g.clone(), k, a.max_edges);
    let member = g.membership();
    let (nontrivial, connected) = if k == 0 {
        (Value::Null, Value::Null)
    } else {
        (json!(ctx.is_nontrivial()?), json!(ctx.is_connected()?))
    };
    let oracle_rank = match ctx.matroid() {
        Ok(m) => json!(m.rank()),
        Err(Error::EnumerationLimit { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let mut report = json!({
        "k": k,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "delta": g.delta(),
        "tree_components": g.tree_component_count(),
        "isolated_vertices": g.isolated_vertices(),
        "cacti": member.is_cacti,
        "cactus": member.is_cactus,
        "leaves": member.leaves,
        "cycle_components": member.cycle_components,
        "kernel": subgraph(g.kernel()),
        "core": subgraph(g.core()),
        "nontrivial": nontrivial,
        "connected": connected,
        "oracle_rank": oracle_rank,
    });
    let obj = report.as_object_mut().expect("object");
    let mut reports = None;
    if k >= 1 && ctx.is_connected()? {
        let r = ctx.rank_formulas()?;
        let stars = ctx.classify()?;
        obj.insert("rank".into(), json!(r.rho));
        obj.insert("corank".into(), json!(r.rho_star));
        obj.insert("stars".into(), serde_json::to_value(&stars).expect("reports serialize"));
        reports = Some(stars);
    } else if k >= 1 && !ctx.is_nontrivial()? {
        obj.insert("message".into(), json!(format!("M_{k} trivial")));
    } else if k >= 1 {
        obj.insert("message".into(), json!(format!("M_{k} disconnected")));
    }
    let out = match a.format {
        Format::Dot => dot(&g, reports.as_deref()),
        f => emit(&report, f),
    };
    Ok((out, 0))
}

fn enumerate(family: Family, a: &GraphArgs) -> Outcome {
    let (g, k) = load(a)?;
    let ctx = KContext::with_limit(g.clone(), k, a.max_edges);
    let m = ctx.matroid()?;
    let connected = k >= 1 && ctx.is_connected()?;
    let (name, sets, agrees): (&str, Vec<EdgeSet>, Value) = match family {
        Family::Circuits => {
            let sets = m.circuits().to_vec();
            let by_definition = sets.iter().all(|&c| {
                let h = g.induced_by_edges(c).expect("circuit within E");
                if k == 0 {
                    h.delta() == 0 && h.is_connected() && (0..h.vertex_count()).all(|v| h.degree(v) == 2)
                } else {
                    h.delta() == k as i64 && h.is_cacti()
                }
            });
            let nontrivial = k == 0 || ctx.is_nontrivial()? == !sets.is_empty();
            ("circuits", sets, json!(by_definition && nontrivial))
        }
        Family::Bases => {
            let sets = m.bases().to_vec();
            let agrees = if connected {
                let mut structural = Vec::new();
                for b in g.all_edges().subsets() {
                    if ctx.is_base_by_structure(b)? {
                        structural.push(b);
                    }
                }
                structural.sort_unstable();
                json!(structural == sets)
            } else {
                Value::Null
            };
            ("bases", sets, agrees)
        }
        Family::Cocircuits => {
            let sets = m.cocircuits().to_vec();
            let agrees = if connected {
                let mut predicted = Vec::new();
                for &b in m.bases() {
                    for e in b {
                        predicted.push(ctx.predicted_fundamental_cocircuit(BaseWitness { base: b, element: e })?);
                    }
                }
                predicted.sort_unstable();
                predicted.dedup();
                json!(predicted == sets)
            } else {
                Value::Null
            };
            ("cocircuits", sets, agrees)
        }
        Family::Nonsep => {
            if k == 0 {
                return Err(Error::KZero("nonsep").into());
            }
            if !connected {
                return Err(Failure::new(5, format!("M_{k}(G) is not connected")));
            }
            let sets = ctx.nonsep_stars()?;
            let oracle = ctx.nonsep_cocircuits_oracle()?;
            let agrees = json!(sets == oracle);
            ("nonsep", sets, agrees)
        }
    };
    let report = json!({
        "family": name,
        "k": k,
        "count": sets.len(),
        "sets": sets.iter().map(|&x| labels(&g, x)).collect::<Vec<_>>(),
        "predicate_matches_oracle": agrees,
    });
    let code = if agrees == json!(false) { 1 } else { 0 };
    Ok((emit(&report, a.format), code))
}

fn certify(a: &GraphArgs, search: bool, search_max_edges: usize, max_time: u64) -> Outcome {
    let (g, k) = load(a)?;
    if k == 0 {
        return Err(Error::KZero("certify").into());
    }
    let ctx = KContext::with_limit(g, k, a.max_edges);
    if !ctx.is_connected()? {
        return Err(Failure::new(5, format!("M_{k}(G) is not connected")));
    }
    let mut cert = ctx.certify_unique()?;
    if search {
        let bounds = SearchBounds {
            max_edges: search_max_edges,
            time_limit: Duration::from_secs(max_time),
            ..SearchBounds::default()
        };
        let outcome = search_equal_matroid(&ctx, bounds)?;
        cert = cert.with_search(&outcome);
    }
    let v = serde_json::to_value(&cert).expect("certificate serializes");
    let out = match a.format {
        Format::Dot => match &cert.counterexample {
            Some(h) => dot(h, None),
            None => dot(ctx.graph(), None),
        },
        f => emit(&v, f),
    };
    Ok((out, 0))
}

fn run_corpus(
    max_edges: usize,
    max_vertices: usize,
    random: usize,
    seed: u64,
    format: Format,
    inject_mutant: bool,
) -> Outcome {
    if max_edges > DEFAULT_ENUMERATION_LIMIT || max_vertices == 0 {
        return Err(Failure::new(4, format!("corpus bounds out of range: {max_edges} edges, {max_vertices} vertices")));
    }
    let mut graphs = corpus::exhaustive(max_edges, max_vertices);
    graphs.extend(corpus::random(seed, random, max_edges.max(8), max_vertices.max(6)));
    let cfg = corpus::Config {
        max_edges,
        max_vertices,
        mutant: inject_mutant.then_some(Mutant::StrictNontriviality),
        ..corpus::Config::default()
    };
    let report = corpus::run(&graphs, &cfg);
    let criteria: Vec<Value> = report
        .tallies
        .iter()
        .map(|t| {
            json!({
                "criterion": t.number,
                "description": t.criterion.describe(),
                "checked": t.checked,
                "failures": t.failures,
                "first_failure": t.first_failure.as_ref().map(|f| json!({
                    "k": f.k,
                    "graph": f.graph,
                    "detail": f.detail,
                })),
            })
        })
        .collect();
    let disagreements: Vec<Value> = report
        .probe_disagreements()
        .map(|p| json!({"k": p.k, "graph": p.graph, "profile_condition": p.profile_condition, "no_rival": p.no_rival}))
        .collect();
    let v = json!({
        "graphs": report.graphs,
        "instances": report.instances,
        "passed": report.passed(),
        "criteria": criteria,
        "probe_checked": report.probe.len(),
        "probe_disagreements": disagreements,
    });
    let out = match format {
        Format::Json | Format::Dot => render(&v),
        Format::Text => {
            let mut s = format!("{} graphs, {} instances\n", report.graphs, report.instances);
            for t in &report.tallies {
                let _ = writeln!(
                    s,
                    "{} criterion {}: {} ({} checks, {} failures)",
                    if t.failures == 0 { "PASS" } else { "FAIL" },
                    t.number,
                    t.criterion.describe(),
                    t.checked,
                    t.failures
                );
                if let Some(f) = &t.first_failure {
                    let _ = writeln!(s, "  first failure: {f}");
                }
            }
            s
        }
    };
    Ok((out, if report.passed() { 0 } else { 1 }))
}
