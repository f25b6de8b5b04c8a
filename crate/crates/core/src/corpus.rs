//! Small-multigraph corpora and the predicate-versus-oracle harness.
//!
//! [`exhaustive`] lists every multigraph (loops, parallel edges and isolated
//! vertices allowed) within the size bounds, one per isomorphism class;
//! every property checked here is invariant under relabeling. [`run`] walks a
//! corpus in order of increasing size, so the first recorded failure of each
//! criterion is a smallest one.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{components_of, degrees_of, endpoints_of, kernel_of};
use crate::stars::StarStatus;
use crate::uniqueness::{search_equal_matroid, SearchBounds, Verdict};
use crate::{BaseWitness, EdgeSet, KContext, Multigraph, Result};

/// Acceptance criteria checked against the corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Criterion {
    CircuitAxioms,
    Nontriviality,
    Connectivity,
    BasesAndRanks,
    FundamentalCocircuits,
    StarCocircuits,
    NonseparatingStars,
    CocircuitSizeBound,
    KernelEdgeDeletion,
    CertificateSoundness,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Criterion::CircuitAxioms,
        Criterion::Nontriviality,
        Criterion::Connectivity,
        Criterion::BasesAndRanks,
        Criterion::FundamentalCocircuits,
        Criterion::StarCocircuits,
        Criterion::NonseparatingStars,
        Criterion::CocircuitSizeBound,
        Criterion::KernelEdgeDeletion,
        Criterion::CertificateSoundness,
    ];

    /// Number in the acceptance list.
    pub fn number(self) -> usize {
        match self {
            Criterion::CircuitAxioms => 1,
            Criterion::Nontriviality => 2,
            Criterion::Connectivity => 3,
            Criterion::BasesAndRanks => 4,
            Criterion::FundamentalCocircuits => 5,
            Criterion::StarCocircuits => 6,
            Criterion::NonseparatingStars => 7,
            Criterion::CocircuitSizeBound => 8,
            Criterion::KernelEdgeDeletion => 9,
            Criterion::CertificateSoundness => 12,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Criterion::CircuitAxioms => "C_k(G) satisfies the circuit axioms",
            Criterion::Nontriviality => "nontriviality predicate matches a nonempty C_k(G)",
            Criterion::Connectivity => "connectivity predicate matches matroid connectivity",
            Criterion::BasesAndRanks => "base structure and rank formulas match the oracle",
            Criterion::FundamentalCocircuits => "typed fundamental cocircuits match the oracle",
            Criterion::StarCocircuits => "star-is-cocircuit predicate matches the oracle",
            Criterion::NonseparatingStars => "non-separating cocircuits are the predicted stars",
            Criterion::CocircuitSizeBound => "every cocircuit has at most corank + 1 elements",
            Criterion::KernelEdgeDeletion => "edge deletion around the kernel behaves as claimed",
            Criterion::CertificateSoundness => "certified graphs have no rival in a complete search",
        }
    }
}

/// Deliberately broken predicates for exercising the harness itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutant {
    /// Nontriviality tested with `<` instead of `<=`.
    StrictNontriviality,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub max_edges: usize,
    pub max_vertices: usize,
    /// Run the rival search on certified instances with at most this many
    /// edges.
    pub search_max_edges: usize,
    pub mutant: Option<Mutant>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_edges: 6,
            max_vertices: 5,
            search_max_edges: 6,
            mutant: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub graph: Multigraph,
    pub k: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "k={k} graph={} : {}", self.graph.to_json(), self.detail),
            None => write!(f, "graph={} : {}", self.graph.to_json(), self.detail),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tally {
    pub criterion: Criterion,
    pub number: usize,
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<Failure>,
}

impl Tally {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

/// Outcome of the main-theorem probe on one 3-connected instance: the
/// status-profile condition against an empty rival search.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeResult {
    pub graph: Multigraph,
    pub k: usize,
    pub profile_condition: bool,
    pub no_rival: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub graphs: usize,
    pub instances: usize,
    pub tallies: Vec<Tally>,
    pub probe: Vec<ProbeResult>,
}

impl Report {
    pub fn tally(&self, c: Criterion) -> &Tally {
        self.tallies
            .iter()
            .find(|t| t.criterion == c)
            .expect("every criterion has a tally")
    }

    pub fn passed(&self) -> bool {
        self.tallies.iter().all(|t| t.failures == 0)
    }

    /// Probe instances where the two sides disagree.
    pub fn probe_disagreements(&self) -> impl Iterator<Item = &ProbeResult> {
        self.probe.iter().filter(|p| p.profile_condition != p.no_rival)
    }
}

/// Every multigraph with `1..=max_vertices` vertices and `0..=max_edges`
/// edges, one per isomorphism class, ordered by edge count then vertex
/// count. Vertices are `1..=n`, edges `e1..em`.
pub fn exhaustive(max_edges: usize, max_vertices: usize) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for m in 0..=max_edges {
        for n in 1..=max_vertices {
            out.extend(classes(n, m).into_iter().map(|pairs| build(n, &pairs)));
        }
    }
    out
}

fn build(n: usize, pairs: &[(usize, usize)]) -> Multigraph {
    let width = pairs.len().to_string().len();
    Multigraph::new(
        (1..=n).map(|i| i.to_string()),
        pairs.iter().enumerate().map(|(i, &(u, v))| {
            (format!("e{:0width$}", i + 1), (u + 1).to_string(), (v + 1).to_string())
        }),
    )
    .expect("generated graphs are well formed")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let x = left.remove(i);
            prefix.push(x);
            go(prefix, left, out);
            prefix.pop();
            left.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Sorted pair multisets of size `m` on `n` vertices that are lexicographic
/// minima of their orbit under vertex permutations.
fn classes(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        let cand: Vec<(usize, usize)> = idx.iter().map(|&i| pairs[i]).collect();
        let canonical = perms.iter().all(|p| {
            let mut img: Vec<(usize, usize)> = cand
                .iter()
                .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                .collect();
            img.sort_unstable();
            img >= cand
        });
        if canonical {
            out.push(cand);
        }
        // next multiset: nondecreasing index sequence
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] + 1 < pairs.len() {
                let next = idx[i] + 1;
                for slot in &mut idx[i..] {
                    *slot = next;
                }
                break;
            }
        }
    }
}

/// A random multigraph on `n` vertices with `m` edges; each edge picks both
/// ends uniformly, so loops and parallel edges occur.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Multigraph {
    let pairs: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            (u.min(v), u.max(v))
        })
        .collect();
    build(n, &pairs)
}

/// `count` seeded random multigraphs with sizes drawn up to the bounds.
pub fn random(seed: u64, count: usize, max_edges: usize, max_vertices: usize) -> Vec<Multigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_vertices);
            let m = rng.gen_range(0..=max_edges);
            random_graph(&mut rng, n, m)
        })
        .collect()
}

/// Failures of one graph, keyed by criterion, plus probe rows.
#[derive(Default)]
struct GraphResult {
    checked: Vec<(Criterion, u64)>,
    failures: Vec<(Criterion, Failure)>,
    probe: Vec<ProbeResult>,
    instances: usize,
}

struct Checker<'a> {
    g: &'a Multigraph,
    cfg: &'a Config,
    out: GraphResult,
}

impl Checker<'_> {
    fn check(&mut self, c: Criterion, k: Option<usize>, ok: bool, detail: impl FnOnce() -> String) {
        match self.out.checked.iter_mut().find(|(x, _)| *x == c) {
            Some((_, n)) => *n += 1,
            None => self.out.checked.push((c, 1)),
        }
        if !ok {
            self.out.failures.push((
                c,
                Failure {
                    graph: self.g.clone(),
                    k,
                    detail: detail(),
                },
            ));
        }
    }

    fn fail_on_error<T>(&mut self, c: Criterion, k: Option<usize>, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(c, k, false, || format!("error: {e}"));
                None
            }
        }
    }

    fn nontrivial(&self, k: usize) -> bool {
        let bound = self.g.delta() + self.g.tree_component_count() as i64;
        match self.cfg.mutant {
            Some(Mutant::StrictNontriviality) => (k as i64) < bound,
            None => k as i64 <= bound,
        }
    }

    fn run(mut self) -> GraphResult {
        let g = self.g;
        let top = g.delta() + g.tree_component_count() as i64;
        self.kernel_suite();
        for k in 0..=(top.max(0) as usize + 1) {
            self.out.instances += 1;
            let ctx = KContext::new(g.clone(), k);
            let Some(m) = self.fail_on_error(Criterion::CircuitAxioms, Some(k), ctx.matroid()) else {
                continue;
            };
            if k as i64 <= top {
                let why = m.validation_failure();
                self.check(Criterion::CircuitAxioms, Some(k), why.is_none(), || why.unwrap_or_default());
            }
            let bound = m.corank() + 1;
            let big = m.cocircuits().iter().find(|c| c.len() > bound).copied();
            self.check(Criterion::CocircuitSizeBound, Some(k), big.is_none(), || {
                format!("cocircuit {:?} exceeds corank + 1 = {bound}", big.map(|b| g.edge_labels(b)))
            });
            if k == 0 {
                continue;
            }
            let (pred, oracle) = (self.nontrivial(k), !m.circuits().is_empty());
            self.check(Criterion::Nontriviality, Some(k), pred == oracle, || {
                format!("predicate {pred}, circuits nonempty {oracle}")
            });
            let Some(pred) = self.fail_on_error(Criterion::Connectivity, Some(k), ctx.is_connected()) else {
                continue;
            };
            let oracle = m.is_connected();
            self.check(Criterion::Connectivity, Some(k), pred == oracle, || {
                format!("predicate {pred}, oracle {oracle}")
            });
            if pred && oracle {
                self.connected_instance(&ctx);
            }
        }
        self.out
    }

    fn connected_instance(&mut self, ctx: &KContext) {
        let g = self.g;
        let k = Some(ctx.k());
        let m = ctx.matroid().expect("matroid already built");
        let Some(r) = self.fail_on_error(Criterion::BasesAndRanks, k, ctx.rank_formulas()) else {
            return;
        };
        self.check(Criterion::BasesAndRanks, k, r.rho == m.rank() && r.rho_star == m.corank(), || {
            format!("formulas ({}, {}), oracle ({}, {})", r.rho, r.rho_star, m.rank(), m.corank())
        });
        for b in g.all_edges().subsets() {
            let pred = ctx.is_base_by_structure(b).unwrap_or(false);
            let oracle = m.is_base(b);
            self.check(Criterion::BasesAndRanks, k, pred == oracle, || {
                format!("base {:?}: predicate {pred}, oracle {oracle}", g.edge_labels(b))
            });
        }

        for &b in m.bases() {
            for e in b {
                let w = BaseWitness { base: b, element: e };
                let pred = ctx.predicted_fundamental_cocircuit(w);
                let oracle = m.fundamental(w);
                let ok = matches!((&pred, &oracle), (Ok(p), Ok(o)) if p == o);
                self.check(Criterion::FundamentalCocircuits, k, ok, || {
                    format!(
                        "base {:?} element {}: predicted {:?}, oracle {:?}",
                        g.edge_labels(b),
                        g.edges()[e].id,
                        pred.map(|x| g.edge_labels(x)),
                        oracle.map(|x| g.edge_labels(x))
                    )
                });
            }
        }

        let Some(reports) = self.fail_on_error(Criterion::StarCocircuits, k, ctx.classify()) else {
            return;
        };
        for rep in &reports {
            if rep.status == StarStatus::Big {
                continue;
            }
            let pred = ctx.star_is_cocircuit(rep.index).unwrap_or(!m.cocircuits().contains(&rep.star));
            let oracle = m.cocircuits().contains(&rep.star);
            self.check(Criterion::StarCocircuits, k, pred == oracle, || {
                format!("vertex {}: predicate {pred}, oracle {oracle}", rep.vertex)
            });
        }

        let pred = ctx.nonsep_stars().unwrap_or_default();
        let oracle = ctx.nonsep_cocircuits_oracle().unwrap_or_default();
        let stars = g.star_multiset();
        self.check(Criterion::NonseparatingStars, k, pred == oracle, || {
            format!(
                "predicted {:?}, oracle {:?}",
                pred.iter().map(|&x| g.edge_labels(x)).collect::<Vec<_>>(),
                oracle.iter().map(|&x| g.edge_labels(x)).collect::<Vec<_>>()
            )
        });
        let stray = oracle.iter().find(|c| stars.binary_search(c).is_err()).copied();
        self.check(Criterion::NonseparatingStars, k, stray.is_none(), || {
            format!("non-separating cocircuit {:?} is not a star", stray.map(|x| g.edge_labels(x)))
        });
        for &c in m.cocircuits() {
            let p = ctx.is_nonsep_set(c).unwrap_or(false);
            let o = m.delete(c).is_connected();
            self.check(Criterion::NonseparatingStars, k, p == o, || {
                format!("cocircuit {:?}: set predicate {p}, oracle {o}", g.edge_labels(c))
            });
        }
        if g.is_3_connected() && g.delta() >= ctx.k() as i64 {
            let mut small: Vec<EdgeSet> = reports
                .iter()
                .filter(|r| r.status == StarStatus::Small)
                .map(|r| r.star)
                .collect();
            small.sort_unstable();
            small.dedup();
            self.check(Criterion::NonseparatingStars, k, small == oracle, || {
                "3-connected: small stars differ from non-separating cocircuits".into()
            });
        }

        self.soundness(ctx, &reports);
    }

    fn soundness(&mut self, ctx: &KContext, reports: &[crate::StarReport]) {
        let g = self.g;
        let k = ctx.k();
        if g.edge_count() > self.cfg.search_max_edges {
            return;
        }
        let three = g.is_3_connected() && g.delta() >= k as i64;
        let Some(cert) = self.fail_on_error(Criterion::CertificateSoundness, Some(k), ctx.certify_unique())
        else {
            return;
        };
        let certified = cert.verdict == Verdict::Certified;
        if !certified && !three {
            return;
        }
        let bounds = SearchBounds {
            max_edges: self.cfg.search_max_edges,
            ..SearchBounds::default()
        };
        let Some(outcome) =
            self.fail_on_error(Criterion::CertificateSoundness, Some(k), search_equal_matroid(ctx, bounds))
        else {
            return;
        };
        if !outcome.complete {
            return;
        }
        if certified {
            self.check(Criterion::CertificateSoundness, Some(k), outcome.graphs.is_empty(), || {
                format!(
                    "certified by {} but rival {}",
                    cert.theorem.map(|t| t.name()).unwrap_or("?"),
                    outcome.graphs[0].to_json()
                )
            });
        }
        if three {
            let small = reports.iter().filter(|r| r.status == StarStatus::Small).count();
            let tight = reports.iter().filter(|r| r.status == StarStatus::Tight).count();
            let n = g.vertex_count();
            self.out.probe.push(ProbeResult {
                graph: g.clone(),
                k,
                profile_condition: small == n || (small + 1 == n && tight == 1),
                no_rival: outcome.graphs.is_empty(),
            });
        }
    }

    /// Edge deletion around the kernel, on connected graphs with a cycle.
    fn kernel_suite(&mut self) {
        let g = self.g;
        if !g.is_connected() || g.edge_count() < g.vertex_count() {
            return;
        }
        let c = Criterion::KernelEdgeDeletion;
        let ends = g.ends();
        let all_v = g.all_vertices();
        let all_e = g.all_edges();
        let Some((kv, ke)) = kernel_of(&ends, all_v, all_e) else {
            self.check(c, None, false, || "kernel missing on a graph with a cycle".into());
            return;
        };
        // Independent kernel: union of all edge sets inducing minimum
        // degree at least two.
        let union = all_e
            .subsets()
            .filter(|&x| {
                let d = degrees_of(&ends, x);
                !x.is_empty() && crate::graph::mask_iter(endpoints_of(&ends, x)).all(|v| d[v] >= 2)
            })
            .fold(EdgeSet::EMPTY, |a, x| a | x);
        self.check(c, None, ke == union && kv == endpoints_of(&ends, ke), || {
            format!("kernel {:?}, leafless union {:?}", g.edge_labels(ke), g.edge_labels(union))
        });
        let cyclomatic = g.edge_count() as i64 - g.vertex_count() as i64 + 1;
        for e in all_e {
            let name = &g.edges()[e].id;
            let (u, v) = ends[e];
            let parts = components_of(&ends, all_v, all_e.without(e));
            if ke.contains(e) {
                let inside = kv >> u & 1 == 1 && kv >> v & 1 == 1;
                self.check(c, None, inside, || format!("(c0) kernel edge {name} has an end outside"));
                if cyclomatic == 1 {
                    let ok = parts.len() == 1 && parts[0].is_tree();
                    self.check(c, None, ok, || format!("(c2) unicyclic minus kernel edge {name} is not a tree"));
                } else {
                    let ok = parts.iter().all(|p| !p.is_tree());
                    self.check(c, None, ok, || format!("(c3) deleting kernel edge {name} leaves a tree"));
                }
            } else {
                let trees: Vec<_> = parts.iter().filter(|p| p.is_tree()).collect();
                let other = parts.iter().find(|p| !p.is_tree());
                let ok = parts.len() == 2 && trees.len() == 1 && other.is_some_and(|o| kv & !o.vertices == 0);
                self.check(c, None, ok, || format!("(c1) deleting non-kernel edge {name}"));
            }
            if parts.len() == 2 {
                let ok = parts.iter().all(|p| p.vertices & kv == 0 || !p.is_tree());
                self.check(c, None, ok, || format!("(c4) kernel vertex in a tree side of {name}"));
            }
        }
    }
}

/// Runs every criterion over `graphs`, in order.
pub fn run(graphs: &[Multigraph], cfg: &Config) -> Report {
    let results: Vec<GraphResult> = graphs
        .par_iter()
        .map(|g| {
            Checker {
                g,
                cfg,
                out: GraphResult::default(),
            }
            .run()
        })
        .collect();
    let mut tallies: Vec<Tally> = Criterion::ALL
        .iter()
        .map(|&c| Tally {
            criterion: c,
            number: c.number(),
            checked: 0,
            failures: 0,
            first_failure: None,
        })
        .collect();
    let mut probe = Vec::new();
    let mut instances = 0;
    for r in results {
        instances += r.instances;
        for (c, n) in r.checked {
            tallies.iter_mut().find(|t| t.criterion == c).unwrap().checked += n;
        }
        for (c, f) in r.failures {
            let t = tallies.iter_mut().find(|t| t.criterion == c).unwrap();
            t.failures += 1;
            t.first_failure.get_or_insert(f);
        }
        probe.extend(r.probe);
    }
    Report {
        graphs: graphs.len(),
        instances,
        tallies,
        probe,
    }
}
