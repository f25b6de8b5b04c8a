//! Unique definability of `G` by `M_k(G)`: strong isomorphism, theorem
//! certificates, and exhaustive search for a rival graph with the same
//! k-circular matroid.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::kcirc::{circuits_k_limited, is_k_circuit};
use crate::stars::StarStatus;
use crate::{EdgeSet, Edge, Error, KContext, Multigraph, Result};

/// `ν: V(G) -> V(G')` carrying the ends of every edge label onto its ends
/// in `G'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongIsoWitness {
    /// `(v, ν(v))` in the vertex order of `G`.
    pub mapping: Vec<(String, String)>,
}

impl StrongIsoWitness {
    /// Checks the witness edge by edge.
    pub fn verify(&self, g: &Multigraph, g2: &Multigraph) -> bool {
        if self.mapping.len() != g.vertex_count() || g.edge_label_set() != g2.edge_label_set() {
            return false;
        }
        let nu: Vec<Option<usize>> = self
            .mapping
            .iter()
            .map(|(_, w)| g2.vertex_index(w).ok())
            .collect();
        let mut seen = vec![false; g2.vertex_count()];
        for w in nu.iter() {
            match w {
                Some(w) if !seen[*w] => seen[*w] = true,
                _ => return false,
            }
        }
        g.edges().iter().zip(g2.edges()).all(|(a, b)| {
            let (x, y) = (nu[a.ends.0].unwrap(), nu[a.ends.1].unwrap());
            (x.min(y), x.max(y)) == b.ends
        })
    }
}

/// A strong isomorphism `g -> g2`, if one exists. Both graphs must carry the
/// same edge labels.
///
/// A bijection matching every star of `g` to an equal star of `g2` is a
/// strong isomorphism, so equal stars are paired greedily.
pub fn strong_isomorphism(g: &Multigraph, g2: &Multigraph) -> Result<Option<StrongIsoWitness>> {
    if g.edge_label_set() != g2.edge_label_set() {
        return Err(Error::GroundMismatch);
    }
    if g.vertex_count() != g2.vertex_count() || g.star_multiset() != g2.star_multiset() {
        return Ok(None);
    }
    let mut used = vec![false; g2.vertex_count()];
    let mut mapping = Vec::with_capacity(g.vertex_count());
    for (v, &s) in g.stars().iter().enumerate() {
        let w = (0..g2.vertex_count())
            .find(|&w| !used[w] && g2.stars()[w] == s)
            .ok_or_else(|| Error::Internal("star multisets agree but matching failed".into()))?;
        used[w] = true;
        mapping.push((g.vertices()[v].clone(), g2.vertices()[w].clone()));
    }
    let witness = StrongIsoWitness { mapping };
    if !witness.verify(g, g2) {
        return Err(Error::Internal("star matching is not a strong isomorphism".into()));
    }
    Ok(Some(witness))
}

/// Sufficient conditions for `G` to be uniquely defined by `M_k(G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// 3-connected, `C_k(G)` nonempty, every vertex small.
    ThreeConnectedAllSmall,
    /// 3-connected, `|E| - |V| >= k`, one tight vertex and the rest small.
    ThreeConnectedOneTight,
    /// `M_k(G)` connected and every vertex star a non-separating cocircuit.
    AllStarsNonseparating,
    /// `k >= 2`: `G` and every `G - x` are cacti-graphs with excess `>= k`.
    VertexDeletionsCacti,
    /// `k = 1`: `G` and every `G - x` are cacti with excess `>= 1`.
    VertexDeletionsCactus,
    /// Every star non-separating except at one vertex `v`, which carries all
    /// loops, is not big, and leaves no tree component when deleted.
    OneExceptionalVertex,
    /// Graph form of [`TheoremId::OneExceptionalVertex`] for `k >= 2`.
    OneExceptionalVertexCacti,
    /// Graph form of [`TheoremId::OneExceptionalVertex`] for `k = 1`.
    OneExceptionalVertexCactus,
}

impl TheoremId {
    pub fn name(self) -> &'static str {
        match self {
            TheoremId::ThreeConnectedAllSmall => "three-connected-all-small",
            TheoremId::ThreeConnectedOneTight => "three-connected-one-tight",
            TheoremId::AllStarsNonseparating => "all-stars-nonseparating",
            TheoremId::VertexDeletionsCacti => "vertex-deletions-cacti",
            TheoremId::VertexDeletionsCactus => "vertex-deletions-cactus",
            TheoremId::OneExceptionalVertex => "one-exceptional-vertex",
            TheoremId::OneExceptionalVertexCacti => "one-exceptional-vertex-cacti",
            TheoremId::OneExceptionalVertexCactus => "one-exceptional-vertex-cactus",
        }
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
}

fn hyp(name: impl Into<String>, holds: bool) -> Hypothesis {
    Hypothesis {
        name: name.into(),
        holds,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Certified,
    NotUnique,
    Unknown,
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Verdict::Certified => "certified",
            Verdict::NotUnique => "not_unique",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessCertificate {
    pub verdict: Verdict,
    pub theorem: Option<TheoremId>,
    /// For a certificate, the hypotheses of the certifying theorem; otherwise
    /// every evaluated hypothesis, prefixed by its theorem.
    pub hypotheses: Vec<Hypothesis>,
    pub counterexample: Option<Multigraph>,
    pub search_complete: bool,
    #[serde(skip)]
    pub exceptional_vertex: Option<String>,
}

impl UniquenessCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    /// Folds a search outcome into a certificate-less verdict.
    pub fn with_search(mut self, outcome: &SearchOutcome) -> Self {
        if self.verdict == Verdict::Certified {
            return self;
        }
        if let Some(g) = outcome.graphs.first() {
            self.verdict = Verdict::NotUnique;
            self.counterexample = Some(g.clone());
        }
        self.search_complete = outcome.complete;
        self
    }
}

/// Per-vertex facts shared by the theorem checks.
struct Profile {
    connected: bool,
    statuses: Vec<StarStatus>,
    /// `S(x)` is a non-separating cocircuit.
    nonsep: Vec<bool>,
    /// `Δ(G - x) >= k` and `G - x` in the class matching `k`.
    deletion_ok: Vec<bool>,
    /// `G - x` has no tree component.
    no_tree_left: Vec<bool>,
}

impl KContext {
    fn profile(&self) -> Result<Profile> {
        let g = self.graph();
        let n = g.vertex_count();
        let k = self.k() as i64;
        let deletion_ok = (0..n)
            .map(|x| {
                let (vm, em) = g.minus_vertex_masks(x);
                em.len() as i64 - vm.count_ones() as i64 >= k && self.in_class(vm, em)
            })
            .collect();
        let no_tree_left = (0..n)
            .map(|x| {
                let (vm, em) = g.minus_vertex_masks(x);
                g.components_masked(vm, em).iter().all(|c| !c.is_tree())
            })
            .collect();
        let connected = self.is_connected()?;
        let (statuses, nonsep) = if connected {
            let reports = self.classify()?;
            (
                reports.iter().map(|r| r.status).collect(),
                reports.iter().map(|r| r.is_nonseparating).collect(),
            )
        } else {
            (Vec::new(), vec![false; n])
        };
        Ok(Profile {
            connected,
            statuses,
            nonsep,
            deletion_ok,
            no_tree_left,
        })
    }

    /// The unique vertex failing `ok`, if exactly one does, with the shared
    /// conditions on it: loops only there, not big, no tree left by deleting
    /// it.
    fn exceptional(&self, p: &Profile, ok: &[bool]) -> (Option<usize>, Vec<Hypothesis>) {
        let g = self.graph();
        let bad: Vec<usize> = (0..ok.len()).filter(|&x| !ok[x]).collect();
        let v = match bad.as_slice() {
            [v] => Some(*v),
            _ => None,
        };
        let loops_at_v = v.is_some_and(|v| g.edges().iter().all(|e| !e.is_loop() || e.ends.0 == v));
        let not_big = v.is_some_and(|v| p.connected && p.statuses[v] != StarStatus::Big);
        let no_tree = v.is_some_and(|v| p.no_tree_left[v]);
        (
            v,
            vec![
                hyp("exactly one exceptional vertex v", v.is_some()),
                hyp("every loop is incident to v", loops_at_v),
                hyp("v is not big", not_big),
                hyp("G - v has no tree component", no_tree),
            ],
        )
    }

    /// Evaluates the certificate theorems in a fixed order and returns the
    /// first whose hypotheses all hold, else [`Verdict::Unknown`]. Failing
    /// every check proves nothing.
    pub fn certify_unique(&self) -> Result<UniquenessCertificate> {
        if self.k() == 0 {
            return Err(Error::KZero("certify_unique"));
        }
        let g = self.graph();
        let k = self.k();
        let p = self.profile()?;
        let three = g.is_3_connected();
        let nontrivial = self.is_nontrivial()?;
        let all = |f: &dyn Fn(usize) -> bool| (0..g.vertex_count()).all(f);
        let count = |s: StarStatus| p.statuses.iter().filter(|&&t| t == s).count();
        let delta_ok = g.delta() >= k as i64;
        let class = if k == 1 { g.is_cactus() } else { g.is_cacti() };
        let class_name = if k == 1 { "cactus" } else { "cacti-graph" };

        let mut checks: Vec<(TheoremId, Vec<Hypothesis>, Option<usize>)> = vec![
            (
                TheoremId::ThreeConnectedAllSmall,
                vec![
                    hyp("G is 3-connected", three),
                    hyp("C_k(G) is nonempty", nontrivial),
                    hyp("every vertex is small", p.connected && count(StarStatus::Small) == g.vertex_count()),
                ],
                None,
            ),
            (
                TheoremId::ThreeConnectedOneTight,
                vec![
                    hyp("G is 3-connected", three),
                    hyp("|E| - |V| >= k", delta_ok),
                    hyp(
                        "one vertex is tight and the rest are small",
                        p.connected
                            && count(StarStatus::Tight) == 1
                            && count(StarStatus::Small) + 1 == g.vertex_count(),
                    ),
                ],
                None,
            ),
            (
                TheoremId::AllStarsNonseparating,
                vec![
                    hyp("M_k(G) is connected", p.connected),
                    hyp("every vertex star is a non-separating cocircuit", p.connected && all(&|x| p.nonsep[x])),
                ],
                None,
            ),
        ];
        let (deletions, exceptional_graph) = if k == 1 {
            (TheoremId::VertexDeletionsCactus, TheoremId::OneExceptionalVertexCactus)
        } else {
            (TheoremId::VertexDeletionsCacti, TheoremId::OneExceptionalVertexCacti)
        };
        let base = vec![
            hyp("Δ(G) >= k", delta_ok),
            hyp(format!("G is a {class_name}"), class),
        ];
        let mut h = base.clone();
        h.push(hyp(
            format!("Δ(G - x) >= k and G - x is a {class_name} for every vertex x"),
            all(&|x| p.deletion_ok[x]),
        ));
        checks.push((deletions, h, None));

        let (v, mut h) = self.exceptional(&p, &p.nonsep);
        h.insert(0, hyp("M_k(G) is connected", p.connected));
        checks.push((TheoremId::OneExceptionalVertex, h, v));

        let (v, exc) = self.exceptional(&p, &p.deletion_ok);
        let mut h = base;
        h.push(hyp(
            format!("Δ(G - x) >= k and G - x is a {class_name} for every vertex x except v"),
            v.is_some(),
        ));
        h.extend(exc.into_iter().skip(1));
        checks.push((exceptional_graph, h, v));

        if let Some((id, hs, v)) = checks.iter().find(|(_, hs, _)| hs.iter().all(|h| h.holds)) {
            return Ok(UniquenessCertificate {
                verdict: Verdict::Certified,
                theorem: Some(*id),
                hypotheses: hs.clone(),
                counterexample: None,
                search_complete: false,
                exceptional_vertex: v.map(|v| g.vertices()[v].clone()),
            });
        }
        Ok(UniquenessCertificate {
            verdict: Verdict::Unknown,
            theorem: None,
            hypotheses: checks
                .into_iter()
                .flat_map(|(id, hs, _)| {
                    hs.into_iter()
                        .map(move |h| hyp(format!("{}: {}", id.name(), h.name), h.holds))
                })
                .collect(),
            counterexample: None,
            search_complete: false,
            exceptional_vertex: None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_edges: usize,
    pub max_vertices: usize,
    pub time_limit: Duration,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_edges: 7,
            max_vertices: 8,
            time_limit: Duration::from_secs(600),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Rivals `G'` with `M_k(G') = M_k(G)`, one per strong-isomorphism
    /// class, excluding the class of `G`; sorted by star multiset.
    pub graphs: Vec<Multigraph>,
    /// False when a bound cut the search short.
    pub complete: bool,
}

struct Search<'a> {
    ends: Vec<(usize, usize)>,
    n: usize,
    m: usize,
    /// Depth at which a placement is reported.
    stop: usize,
    k: usize,
    target: &'a [bool],
    /// Every target element lies in a circuit, so no edge of a rival may
    /// end at a vertex of degree one.
    leafless: bool,
    deg: [u8; 64],
    deadline: Instant,
    timed_out: &'a AtomicBool,
}

impl Search<'_> {
    /// Every subset containing the newest edge `i` agrees with the target.
    fn consistent(&self, i: usize) -> bool {
        let low = EdgeSet::full(i);
        low.subsets().all(|s| {
            let x = s.with(i);
            is_k_circuit(&self.ends, x, self.k) == self.target[x.bits() as usize]
        })
    }

    /// The edges after `i` can still lift every used vertex to degree two.
    fn degrees_reachable(&self, i: usize, used: usize) -> bool {
        if !self.leafless {
            return true;
        }
        let deficit: usize = self.deg[..used].iter().map(|&d| 2usize.saturating_sub(d as usize)).sum();
        deficit <= 2 * (self.m - i - 1)
    }

    fn dfs(&mut self, i: usize, used: usize, out: &mut Vec<Vec<(usize, usize)>>) {
        if i == self.stop {
            out.push(self.ends.clone());
            return;
        }
        if self.timed_out.load(Ordering::Relaxed) {
            return;
        }
        if Instant::now() > self.deadline {
            self.timed_out.store(true, Ordering::Relaxed);
            return;
        }
        // New vertices appear in index order: `used` is the next fresh one.
        for u in 0..=used.min(self.n - 1) {
            let v_max = if u == used { used + 1 } else { used };
            for v in u..=v_max.min(self.n - 1) {
                self.ends[i] = (u, v);
                self.deg[u] += 1;
                self.deg[v] += 1;
                let next = used.max(v + 1);
                if self.degrees_reachable(i, next) && self.consistent(i) {
                    self.dfs(i + 1, next, out);
                }
                self.deg[u] -= 1;
                self.deg[v] -= 1;
            }
        }
    }
}

/// All graphs `G'` on the edge labels of `G` and `|V(G)|` vertices with
/// `M_k(G') = M_k(G)`, one per strong-isomorphism class, minus the class of
/// `G` itself. Edges are placed in label order onto vertex pairs, new
/// vertices introduced in order, and each placement is rejected as soon as
/// some subset ending at the new edge disagrees with `C_k(G)`.
pub fn search_equal_matroid(ctx: &KContext, bounds: SearchBounds) -> Result<SearchOutcome> {
    ctx.require_connected("search_equal_matroid")?;
    let g = ctx.graph();
    let (n, m) = (g.vertex_count(), g.edge_count());
    if m > bounds.max_edges || n > bounds.max_vertices || m > ctx.limit() {
        return Ok(SearchOutcome {
            graphs: Vec::new(),
            complete: false,
        });
    }
    let mut target = vec![false; 1 << m];
    for c in ctx.matroid()?.circuits() {
        target[c.bits() as usize] = true;
    }
    let covered = ctx.matroid()?.circuits().iter().fold(EdgeSet::EMPTY, |a, &c| a | c);
    let leafless = covered == g.all_edges();
    let timed_out = AtomicBool::new(false);
    let deadline = Instant::now() + bounds.time_limit;
    let fresh = || Search {
        ends: vec![(0, 0); m],
        n,
        m,
        stop: m,
        k: ctx.k(),
        target: &target,
        leafless,
        deg: [0; 64],
        deadline,
        timed_out: &timed_out,
    };

    // Split on the placements of the first two edges.
    let split = m.min(2);
    let mut prefixes = Vec::new();
    {
        let mut s = fresh();
        s.stop = split;
        s.dfs(0, 0, &mut prefixes);
    }
    let mut found: Vec<Vec<(usize, usize)>> = prefixes
        .par_iter()
        .flat_map_iter(|prefix| {
            let mut s = fresh();
            s.ends[..split].copy_from_slice(&prefix[..split]);
            for &(u, v) in &prefix[..split] {
                s.deg[u] += 1;
                s.deg[v] += 1;
            }
            let used = prefix[..split].iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
            let mut out = Vec::new();
            s.dfs(split, used, &mut out);
            out
        })
        .collect();
    found.sort();

    let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let own = g.star_multiset();
    let mut graphs: BTreeMap<Vec<EdgeSet>, Multigraph> = BTreeMap::new();
    for ends in found {
        let edges = g
            .edges()
            .iter()
            .zip(&ends)
            .map(|(e, &ends)| Edge {
                id: e.id.clone(),
                ends,
            })
            .collect();
        let h = Multigraph::from_indexed(labels.clone(), edges);
        let key = h.star_multiset();
        if key == own || graphs.contains_key(&key) {
            continue;
        }
        if circuits_k_limited(&h, ctx.k(), ctx.limit())? != ctx.matroid()?.circuits() {
            return Err(Error::Internal("search produced a graph with a different matroid".into()));
        }
        graphs.insert(key, h);
    }
    Ok(SearchOutcome {
        graphs: graphs.into_values().collect(),
        complete: !timed_out.load(Ordering::Relaxed),
    })
}

/// Members of `stars` that are not vertex stars of `rival`.
pub fn stars_missing_from(rival: &Multigraph, stars: &[EdgeSet]) -> Vec<EdgeSet> {
    let theirs = rival.star_multiset();
    stars
        .iter()
        .copied()
        .filter(|s| theirs.binary_search(s).is_err())
        .collect()
}
