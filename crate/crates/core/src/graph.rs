//! Edge-labeled multigraphs (loops and parallel edges allowed) and the
//! graph-theoretic predicates and constructions used by the matroid code.
//!
//! Vertices and edges are addressed by their index in the sorted label
//! order; vertex sets are `u64` masks and edge sets are [`EdgeSet`]s. A loop
//! counts twice toward the degree `d(v)` but once toward the star size
//! `s(v)`. A component is a *cycle component* when it is connected and every
//! vertex has degree exactly two, which includes a single vertex with one
//! loop and a digon. An isolated vertex is a tree component.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{EdgeSet, Error, Result, MAX_LABELS};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    /// Endpoint indices, `ends.0 <= ends.1`; equal for a loop.
    pub ends: (usize, usize),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }
}

/// A finite multigraph with opaque string labels on vertices and edges.
///
/// Both label lists are kept sorted, so serialization and every derived
/// family are deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Multigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    stars: Vec<EdgeSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    /// `s(v)`: number of distinct incident edges.
    pub star_size: Vec<usize>,
    /// `d(v)`: loops counted twice.
    pub degree: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub is_cacti: bool,
    pub is_cactus: bool,
    pub leaves: Vec<String>,
    pub cycle_components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NontreeTreeSplit {
    /// Union of the non-tree components of `G - x`.
    pub g_x: Option<Multigraph>,
    /// Union of the tree components of `G - x`.
    pub g_up_x: Option<Multigraph>,
}

/// One connected component of a masked subgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Component {
    pub vertices: u64,
    pub edges: EdgeSet,
    /// Every vertex has degree exactly 2.
    pub two_regular: bool,
}

impl Component {
    pub fn vertex_count(&self) -> usize {
        self.vertices.count_ones() as usize
    }

    pub fn excess(&self) -> i64 {
        self.edges.len() as i64 - self.vertex_count() as i64
    }

    pub fn is_tree(&self) -> bool {
        self.excess() == -1
    }

    /// Number of independent cycles; 0 for a tree, 1 for unicyclic.
    pub fn cyclomatic(&self) -> i64 {
        self.excess() + 1
    }
}

#[inline]
pub(crate) fn mask_iter(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    EdgeSet::full(n).bits()
}

/// Union-find over at most 64 vertices.
pub(crate) struct Dsu {
    parent: [u8; 64],
}

impl Dsu {
    pub fn new() -> Self {
        let mut parent = [0u8; 64];
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u8;
        }
        Dsu { parent }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let gp = self.parent[self.parent[x] as usize];
            self.parent[x] = gp;
            x = gp as usize;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb) as u8;
        }
    }
}

/// Components of the subgraph with vertex mask `vmask` and edge set `emask`
/// over the endpoint table `ends`. Every endpoint of `emask` must lie in
/// `vmask`. Components are ordered by their smallest vertex.
pub(crate) fn components_of(ends: &[(usize, usize)], vmask: u64, emask: EdgeSet) -> Vec<Component> {
    let mut dsu = Dsu::new();
    let mut deg = [0u8; 64];
    for i in emask {
        let (u, v) = ends[i];
        deg[u] += 1;
        deg[v] += 1;
        dsu.union(u, v);
    }
    let mut slot = [usize::MAX; 64];
    let mut out: Vec<Component> = Vec::new();
    for v in mask_iter(vmask) {
        let r = dsu.find(v);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Component {
                vertices: 0,
                edges: EdgeSet::EMPTY,
                two_regular: true,
            });
        }
        let c = &mut out[slot[r]];
        c.vertices |= 1 << v;
        if deg[v] != 2 {
            c.two_regular = false;
        }
    }
    for i in emask {
        let r = dsu.find(ends[i].0);
        out[slot[r]].edges = out[slot[r]].edges.with(i);
    }
    out
}

/// Degrees (loops count 2) of the edge set `emask`.
pub(crate) fn degrees_of(ends: &[(usize, usize)], emask: EdgeSet) -> [u8; 64] {
    let mut deg = [0u8; 64];
    for i in emask {
        let (u, v) = ends[i];
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

/// Vertices touched by `emask`.
pub(crate) fn endpoints_of(ends: &[(usize, usize)], emask: EdgeSet) -> u64 {
    emask
        .iter()
        .fold(0u64, |m, i| m | 1 << ends[i].0 | 1 << ends[i].1)
}

/// Cacti membership (`no isolated vertex, no leaf, no cycle component`) and
/// connectivity of a masked subgraph.
pub(crate) fn cacti_of(ends: &[(usize, usize)], vmask: u64, emask: EdgeSet) -> (bool, bool) {
    let deg = degrees_of(ends, emask);
    if mask_iter(vmask).any(|v| deg[v] < 2) {
        return (false, false);
    }
    let comps = components_of(ends, vmask, emask);
    let cacti = comps.iter().all(|c| !c.two_regular);
    (cacti, cacti && comps.len() == 1)
}

/// Iterative leaf pruning: strips vertices of degree at most one (and their
/// edges) until none remain. Returns the surviving vertex and edge masks.
pub(crate) fn prune_leaves(ends: &[(usize, usize)], vmask: u64, emask: EdgeSet) -> (u64, EdgeSet) {
    let mut deg = degrees_of(ends, emask);
    let mut vm = vmask;
    let mut em = emask;
    loop {
        let low = mask_iter(vm).filter(|&v| deg[v] <= 1).fold(0u64, |m, v| m | 1 << v);
        if low == 0 {
            return (vm, em);
        }
        vm &= !low;
        for i in em {
            let (u, v) = ends[i];
            if low >> u & 1 == 1 || low >> v & 1 == 1 {
                em = em.without(i);
                deg[u] -= 1;
                deg[v] -= 1;
            }
        }
    }
}

/// Kernel masks of a masked subgraph; `None` when it is a forest.
pub(crate) fn kernel_of(ends: &[(usize, usize)], vmask: u64, emask: EdgeSet) -> Option<(u64, EdgeSet)> {
    let (vm, em) = prune_leaves(ends, vmask, emask);
    (!em.is_empty()).then_some((vm, em))
}

/// Core masks: the kernel minus its cycle components; `None` unless some
/// component carries at least two cycles.
pub(crate) fn core_of(ends: &[(usize, usize)], vmask: u64, emask: EdgeSet) -> Option<(u64, EdgeSet)> {
    let (vm, em) = kernel_of(ends, vmask, emask)?;
    let keep: Vec<Component> = components_of(ends, vm, em)
        .into_iter()
        .filter(|c| !c.two_regular)
        .collect();
    if keep.is_empty() {
        return None;
    }
    Some(keep.iter().fold((0, EdgeSet::EMPTY), |(v, e), c| (v | c.vertices, e | c.edges)))
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    ends: [String; 2],
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

impl TryFrom<GraphJson> for Multigraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        Multigraph::new(
            j.vertices,
            j.edges.into_iter().map(|e| {
                let [u, v] = e.ends;
                (e.id, u, v)
            }),
        )
    }
}

impl From<Multigraph> for GraphJson {
    fn from(g: Multigraph) -> Self {
        GraphJson {
            edges: g
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    ends: [g.vertices[e.ends.0].clone(), g.vertices[e.ends.1].clone()],
                })
                .collect(),
            vertices: g.vertices,
        }
    }
}

impl Multigraph {
    /// Builds a multigraph from vertex labels and `(edge id, end, end)`
    /// triples. Labels are sorted; duplicates and unknown endpoints are
    /// rejected.
    pub fn new<V, S, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        S: Into<String>,
        E: IntoIterator<Item = (S, S, S)>,
    {
        let mut vs: Vec<String> = vertices.into_iter().map(Into::into).collect();
        vs.sort();
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].clone()));
        }
        if vs.len() > MAX_LABELS {
            return Err(Error::TooLarge {
                what: "vertex",
                actual: vs.len(),
                limit: MAX_LABELS,
            });
        }
        let index = |label: &str, edge: &str| {
            vs.binary_search_by(|x| x.as_str().cmp(label))
                .map_err(|_| Error::DanglingEndpoint {
                    edge: edge.to_owned(),
                    vertex: label.to_owned(),
                })
        };
        let mut es = Vec::new();
        for (id, u, v) in edges {
            let (id, u, v): (String, String, String) = (id.into(), u.into(), v.into());
            let (a, b) = (index(&u, &id)?, index(&v, &id)?);
            es.push(Edge {
                id,
                ends: (a.min(b), a.max(b)),
            });
        }
        es.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = es.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateLabel(w[0].id.clone()));
        }
        if es.len() > MAX_LABELS {
            return Err(Error::TooLarge {
                what: "edge",
                actual: es.len(),
                limit: MAX_LABELS,
            });
        }
        Ok(Self::assemble(vs, es))
    }

    fn assemble(vertices: Vec<String>, edges: Vec<Edge>) -> Self {
        let mut stars = vec![EdgeSet::EMPTY; vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            stars[e.ends.0] = stars[e.ends.0].with(i);
            stars[e.ends.1] = stars[e.ends.1].with(i);
        }
        Multigraph {
            vertices,
            edges,
            stars,
        }
    }

    /// Builds from already-indexed parts. Vertex labels must be sorted and
    /// unique; edges are sorted here.
    pub(crate) fn from_indexed(vertices: Vec<String>, mut edges: Vec<Edge>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        Self::assemble(vertices, edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn empty() -> Self {
        Multigraph::assemble(Vec::new(), Vec::new())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.edges.len())
    }

    pub(crate) fn all_vertices(&self) -> u64 {
        full_mask(self.vertices.len())
    }

    pub(crate) fn ends(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| e.ends).collect()
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices
            .binary_search_by(|x| x.as_str().cmp(label))
            .map_err(|_| Error::UnknownVertex(label.to_owned()))
    }

    pub fn edge_index(&self, label: &str) -> Result<usize> {
        self.edges
            .binary_search_by(|e| e.id.as_str().cmp(label))
            .map_err(|_| Error::UnknownEdge(label.to_owned()))
    }

    pub fn edge_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<EdgeSet> {
        labels
            .iter()
            .map(|l| self.edge_index(l.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(EdgeSet::from_indices)
    }

    pub fn edge_labels(&self, set: EdgeSet) -> Vec<String> {
        set.iter().map(|i| self.edges[i].id.clone()).collect()
    }

    pub fn edge_label_set(&self) -> BTreeSet<String> {
        self.edges.iter().map(|e| e.id.clone()).collect()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{v}")))
        }
    }

    pub(crate) fn check_edges(&self, x: EdgeSet) -> Result<()> {
        match (x - self.all_edges()).first() {
            None => Ok(()),
            Some(i) => Err(Error::UnknownEdge(format!("#{i}"))),
        }
    }

    /// `Δ(G) = |E| - |V|`.
    pub fn delta(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64
    }

    /// Number of loops at `v`.
    pub fn loops_at(&self, v: usize) -> usize {
        self.stars[v].iter().filter(|&i| self.edges[i].is_loop()).count()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.stars[v].len() + self.loops_at(v)
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let n = self.vertices.len();
        DegreeProfile {
            star_size: (0..n).map(|v| self.stars[v].len()).collect(),
            degree: (0..n).map(|v| self.degree(v)).collect(),
        }
    }

    /// `S(v, G)`: the edges incident to `v`, a loop listed once.
    pub fn star(&self, v: usize) -> Result<EdgeSet> {
        self.check_vertex(v)?;
        Ok(self.stars[v])
    }

    pub(crate) fn star_unchecked(&self, v: usize) -> EdgeSet {
        self.stars[v]
    }

    pub(crate) fn stars(&self) -> &[EdgeSet] {
        &self.stars
    }

    /// Edges with both ends in `vmask`.
    pub(crate) fn edges_within(&self, vmask: u64) -> EdgeSet {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| vmask >> e.ends.0 & 1 == 1 && vmask >> e.ends.1 & 1 == 1)
            .map(|(i, _)| i)
            .collect()
    }

    /// The subgraph on `vmask` and `emask`, labels preserved. Endpoints of
    /// `emask` must lie inside `vmask`.
    pub(crate) fn restrict(&self, vmask: u64, emask: EdgeSet) -> Multigraph {
        let mut remap = [usize::MAX; 64];
        let mut vertices = Vec::new();
        for v in mask_iter(vmask) {
            remap[v] = vertices.len();
            vertices.push(self.vertices[v].clone());
        }
        let edges = emask
            .iter()
            .map(|i| {
                let e = &self.edges[i];
                Edge {
                    id: e.id.clone(),
                    ends: (remap[e.ends.0], remap[e.ends.1]),
                }
            })
            .collect();
        Multigraph::from_indexed(vertices, edges)
    }

    pub(crate) fn components_masked(&self, vmask: u64, emask: EdgeSet) -> Vec<Component> {
        components_of(&self.ends(), vmask, emask)
    }

    pub(crate) fn components_all(&self) -> Vec<Component> {
        self.components_masked(self.all_vertices(), self.all_edges())
    }

    /// `G<X>`: edge set `x`, vertex set the endpoints of `x`.
    pub fn induced_by_edges(&self, x: EdgeSet) -> Result<Multigraph> {
        self.check_edges(x)?;
        Ok(self.restrict(endpoints_of(&self.ends(), x), x))
    }

    /// `G<E>`: `G` without its isolated vertices.
    pub fn without_isolated(&self) -> Multigraph {
        self.restrict(endpoints_of(&self.ends(), self.all_edges()), self.all_edges())
    }

    pub fn isolated_vertices(&self) -> Vec<String> {
        (0..self.vertex_count())
            .filter(|&v| self.stars[v].is_empty())
            .map(|v| self.vertices[v].clone())
            .collect()
    }

    pub fn components(&self) -> Vec<Multigraph> {
        self.components_all()
            .into_iter()
            .map(|c| self.restrict(c.vertices, c.edges))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components_all().len() == 1
    }

    /// `F(G)`, the union of the tree components, and their number.
    pub fn tree_forest(&self) -> (Multigraph, usize) {
        let trees: Vec<Component> = self.components_all().into_iter().filter(Component::is_tree).collect();
        let (vm, em) = trees
            .iter()
            .fold((0u64, EdgeSet::EMPTY), |(v, e), c| (v | c.vertices, e | c.edges));
        (self.restrict(vm, em), trees.len())
    }

    /// Number of tree components, `cmp(F(G))`.
    pub fn tree_component_count(&self) -> usize {
        self.components_all().iter().filter(|c| c.is_tree()).count()
    }

    pub fn membership(&self) -> Membership {
        let deg = degrees_of(&self.ends(), self.all_edges());
        let comps = self.components_all();
        let isolated = (0..self.vertex_count()).any(|v| deg[v] == 0);
        let leaves: Vec<String> = (0..self.vertex_count())
            .filter(|&v| deg[v] == 1)
            .map(|v| self.vertices[v].clone())
            .collect();
        let cycle_components = comps.iter().filter(|c| c.two_regular && !c.edges.is_empty()).count();
        let is_cacti = !isolated && leaves.is_empty() && cycle_components == 0;
        Membership {
            is_cacti,
            is_cactus: is_cacti && comps.len() == 1,
            leaves,
            cycle_components,
        }
    }

    /// `G ∈ G_⋈`.
    pub fn is_cacti(&self) -> bool {
        cacti_of(&self.ends(), self.all_vertices(), self.all_edges()).0
    }

    /// `G ∈ CG_⋈`.
    pub fn is_cactus(&self) -> bool {
        cacti_of(&self.ends(), self.all_vertices(), self.all_edges()).1
    }

    /// `⌊G⌋`, absent for a forest.
    pub fn kernel(&self) -> Option<Multigraph> {
        kernel_of(&self.ends(), self.all_vertices(), self.all_edges()).map(|(v, e)| self.restrict(v, e))
    }

    /// `[G]`, absent unless some component has at least two cycles.
    pub fn core(&self) -> Option<Multigraph> {
        core_of(&self.ends(), self.all_vertices(), self.all_edges()).map(|(v, e)| self.restrict(v, e))
    }

    /// `G - x`: drops `x` and every incident edge.
    pub fn delete_vertex(&self, x: usize) -> Result<Multigraph> {
        self.check_vertex(x)?;
        let keep = self.all_vertices() & !(1u64 << x);
        Ok(self.restrict(keep, self.all_edges() - self.stars[x]))
    }

    /// `G - K`: drops the edges only, every vertex stays.
    pub fn delete_edges(&self, k: EdgeSet) -> Result<Multigraph> {
        self.check_edges(k)?;
        Ok(self.restrict(self.all_vertices(), self.all_edges() - k))
    }

    /// Masks of `G - x`.
    pub(crate) fn minus_vertex_masks(&self, x: usize) -> (u64, EdgeSet) {
        (self.all_vertices() & !(1u64 << x), self.all_edges() - self.stars[x])
    }

    /// Splits `G - x` into `G_x` (non-tree components) and `G^x` (tree
    /// components).
    pub fn nontree_tree_split(&self, x: usize) -> Result<NontreeTreeSplit> {
        self.check_vertex(x)?;
        let (vm, em) = self.minus_vertex_masks(x);
        let comps = self.components_masked(vm, em);
        let pick = |tree: bool| {
            let sel: Vec<&Component> = comps.iter().filter(|c| c.is_tree() == tree).collect();
            (!sel.is_empty()).then(|| {
                let (v, e) = sel
                    .iter()
                    .fold((0u64, EdgeSet::EMPTY), |(v, e), c| (v | c.vertices, e | c.edges));
                self.restrict(v, e)
            })
        };
        Ok(NontreeTreeSplit {
            g_x: pick(false),
            g_up_x: pick(true),
        })
    }

    fn connected_within(&self, vmask: u64) -> bool {
        vmask != 0 && self.components_masked(vmask, self.edges_within(vmask)).len() == 1
    }

    /// At least four vertices, no loops, and no set of at most two vertices
    /// whose removal disconnects the graph. Parallel edges are allowed.
    pub fn is_3_connected(&self) -> bool {
        let n = self.vertex_count();
        if n < 4 || self.has_loops() {
            return false;
        }
        let all = self.all_vertices();
        if !self.connected_within(all) {
            return false;
        }
        for a in 0..n {
            if !self.connected_within(all & !(1 << a)) {
                return false;
            }
            for b in a + 1..n {
                if !self.connected_within(all & !(1 << a) & !(1 << b)) {
                    return false;
                }
            }
        }
        true
    }

    /// For a 3-connected graph, the first vertex `x` with
    /// `d(x) > |E| - |V|`, if any.
    pub fn wheel_check(&self) -> Result<Option<usize>> {
        if !self.is_3_connected() {
            return Err(Error::HypothesisUnmet("wheel check needs a 3-connected graph".into()));
        }
        let delta = self.delta();
        Ok((0..self.vertex_count()).find(|&x| self.degree(x) as i64 > delta))
    }

    /// `x` is adjacent by exactly one edge to every other vertex, every other
    /// vertex has degree 3, and `G - x` is a single cycle.
    pub fn is_wheel_with_center(&self, x: usize) -> bool {
        let n = self.vertex_count();
        if x >= n || n < 4 || self.has_loops() {
            return false;
        }
        if self.degree(x) != n - 1 || (0..n).any(|z| z != x && self.degree(z) != 3) {
            return false;
        }
        let mut seen = 0u64;
        for i in self.stars[x] {
            let e = &self.edges[i];
            let other = if e.ends.0 == x { e.ends.1 } else { e.ends.0 };
            if seen >> other & 1 == 1 {
                return false;
            }
            seen |= 1 << other;
        }
        let (vm, em) = self.minus_vertex_masks(x);
        let comps = self.components_masked(vm, em);
        comps.len() == 1 && comps[0].two_regular
    }

    /// Star family as a sorted multiset.
    pub fn star_multiset(&self) -> Vec<EdgeSet> {
        let mut s = self.stars.clone();
        s.sort_unstable();
        s
    }
}
