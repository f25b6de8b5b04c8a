//! The k-circular matroid `M_k(G)` and its graph characterizations.
//!
//! For `k >= 1` the circuits of `M_k(G)` are the edge sets `C` with
//! `Δ(G<C>) = k` and `G<C>` a cacti-graph; `M_0(G)` is the cycle matroid.
//! Every predicate in [`KContext`] answers from graph structure alone; the
//! matroid returned by [`KContext::matroid`] is the brute-force oracle they
//! are tested against.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::graph::{cacti_of, components_of, degrees_of, endpoints_of, kernel_of, mask_iter, Component};
use crate::{EdgeSet, Error, Matroid, Multigraph, Result, DEFAULT_ENUMERATION_LIMIT};

/// `G<x>` is a circuit of `M_k(G)` (`k >= 1`).
pub(crate) fn is_k_circuit(ends: &[(usize, usize)], x: EdgeSet, k: usize) -> bool {
    let vmask = endpoints_of(ends, x);
    if x.len() as i64 - vmask.count_ones() as i64 != k as i64 {
        return false;
    }
    let deg = degrees_of(ends, x);
    let mut any_two = false;
    for v in mask_iter(vmask) {
        match deg[v] {
            0 | 1 => return false,
            2 => any_two = true,
            _ => {}
        }
    }
    !any_two || components_of(ends, vmask, x).iter().all(|c| !c.two_regular)
}

/// `x` is the edge set of a cycle (loops and digons included).
pub(crate) fn is_cycle_edge_set(ends: &[(usize, usize)], x: EdgeSet) -> bool {
    if x.is_empty() {
        return false;
    }
    let vmask = endpoints_of(ends, x);
    if x.len() != vmask.count_ones() as usize {
        return false;
    }
    let deg = degrees_of(ends, x);
    mask_iter(vmask).all(|v| deg[v] == 2) && components_of(ends, vmask, x).len() == 1
}

fn is_circuit_for(ends: &[(usize, usize)], x: EdgeSet, k: usize) -> bool {
    if k == 0 {
        is_cycle_edge_set(ends, x)
    } else {
        is_k_circuit(ends, x, k)
    }
}

/// `C_k(G)` with the default enumeration limit.
pub fn circuits_k(g: &Multigraph, k: usize) -> Result<Vec<EdgeSet>> {
    circuits_k_limited(g, k, DEFAULT_ENUMERATION_LIMIT)
}

/// `C_k(G)` by exhaustive scan of the subset lattice, ascending mask order.
/// `k = 0` yields the cycle edge sets.
pub fn circuits_k_limited(g: &Multigraph, k: usize, limit: usize) -> Result<Vec<EdgeSet>> {
    let m = g.edge_count();
    if m > limit {
        return Err(Error::EnumerationLimit { edges: m, limit });
    }
    let ends = g.ends();
    let top = 1u64 << m;
    let mut out: Vec<EdgeSet> = if m >= 12 {
        (1..top)
            .into_par_iter()
            .map(EdgeSet)
            .filter(|&x| is_circuit_for(&ends, x, k))
            .collect()
    } else {
        (1..top)
            .map(EdgeSet)
            .filter(|&x| is_circuit_for(&ends, x, k))
            .collect()
    };
    out.sort_unstable();
    Ok(out)
}

/// `M_k(G)` over the sorted edge labels of `g`.
pub fn k_circular_matroid(g: &Multigraph, k: usize, limit: usize) -> Result<Matroid> {
    let circuits = circuits_k_limited(g, k, limit)?;
    Ok(Matroid::from_masks(
        g.edges().iter().map(|e| e.id.clone()).collect(),
        circuits,
    ))
}

fn require_k(k: usize, what: &'static str) -> Result<()> {
    if k == 0 {
        Err(Error::KZero(what))
    } else {
        Ok(())
    }
}

/// `k <= Δ(G) + cmp(F(G))`: `M_k(G)` has a circuit.
pub fn is_nontrivial(g: &Multigraph, k: usize) -> Result<bool> {
    require_k(k, "is_nontrivial")?;
    Ok(k as i64 <= g.delta() + g.tree_component_count() as i64)
}

/// Graph description of a connected `M_k(G)`: nontrivial and `G<E>` is a
/// cacti-graph (`k >= 2`) or a cactus (`k = 1`). Isolated vertices are
/// ignored since `M_k(G)` cannot see them.
pub fn is_connected_k(g: &Multigraph, k: usize) -> Result<bool> {
    if !is_nontrivial(g, k)? {
        return Ok(false);
    }
    let h = g.without_isolated();
    Ok(if k == 1 { h.is_cactus() } else { h.is_cacti() })
}

/// The class `G - K` (or `G - x`) must belong to for non-separation.
fn in_class(ends: &[(usize, usize)], k: usize, vmask: u64, emask: EdgeSet) -> bool {
    let (cacti, cactus) = cacti_of(ends, vmask, emask);
    if k == 1 {
        cactus
    } else {
        cacti
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankFormulas {
    pub rho: usize,
    pub rho_star: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CocircuitType {
    /// The root edge lies outside the kernel of its base component.
    Type1,
    /// The root edge lies on the only cycle of a unicyclic base component.
    Type2,
    /// The root edge lies in the core of a base component with at least two
    /// cycles.
    Type3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocircuitTypeTag {
    pub kind: CocircuitType,
    /// Edges of the component `A` of `G<B>` containing the root.
    pub component: EdgeSet,
    /// Vertices of `A`.
    pub component_vertices: Vec<usize>,
}

/// A graph with a fixed `k`, plus its lazily built `M_k(G)`.
///
/// The context holds `G<E>`: isolated vertices are dropped on construction,
/// so vertex indices, stars and the rank formulas refer to the edge-bearing
/// vertices only.
#[derive(Debug)]
pub struct KContext {
    graph: Multigraph,
    k: usize,
    limit: usize,
    ends: Vec<(usize, usize)>,
    matroid: OnceLock<Matroid>,
}

impl Clone for KContext {
    fn clone(&self) -> Self {
        KContext {
            graph: self.graph.clone(),
            k: self.k,
            limit: self.limit,
            ends: self.ends.clone(),
            matroid: self.matroid.clone(),
        }
    }
}

impl KContext {
    pub fn new(graph: Multigraph, k: usize) -> Self {
        Self::with_limit(graph, k, DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn with_limit(graph: Multigraph, k: usize, limit: usize) -> Self {
        let graph = graph.without_isolated();
        let ends = graph.ends();
        KContext {
            graph,
            k,
            limit,
            ends,
            matroid: OnceLock::new(),
        }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub(crate) fn ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    /// `M_k(G)`, enumerated on first use.
    pub fn matroid(&self) -> Result<&Matroid> {
        let m = self.graph.edge_count();
        if m > self.limit {
            return Err(Error::EnumerationLimit {
                edges: m,
                limit: self.limit,
            });
        }
        Ok(self.matroid.get_or_init(|| {
            k_circular_matroid(&self.graph, self.k, self.limit).expect("edge count checked against limit")
        }))
    }

    pub fn is_nontrivial(&self) -> Result<bool> {
        is_nontrivial(&self.graph, self.k)
    }

    pub fn is_connected(&self) -> Result<bool> {
        is_connected_k(&self.graph, self.k)
    }

    pub(crate) fn require_connected(&self, what: &'static str) -> Result<()> {
        require_k(self.k, what)?;
        if self.is_connected()? {
            Ok(())
        } else {
            Err(Error::HypothesisUnmet(format!(
                "{what} needs a connected M_{}(G)",
                self.k
            )))
        }
    }

    /// `ρ_k = |V| - 1 + k`, `ρ*_k = |E| - |V| + 1 - k`; refused unless
    /// `M_k(G)` is connected.
    pub fn rank_formulas(&self) -> Result<RankFormulas> {
        self.require_connected("rank_formulas")?;
        let (n, m) = (self.graph.vertex_count(), self.graph.edge_count());
        Ok(RankFormulas {
            rho: n - 1 + self.k,
            rho_star: m + 1 - n - self.k,
        })
    }

    /// Same class test the non-separation predicates use.
    pub(crate) fn in_class(&self, vmask: u64, emask: EdgeSet) -> bool {
        in_class(&self.ends, self.k, vmask, emask)
    }

    /// `B` is a base iff `Δ(G<B>) = k - 1`, `B` spans `V(G)` and `G<B>` has
    /// no tree component.
    pub fn is_base_by_structure(&self, b: EdgeSet) -> Result<bool> {
        self.require_connected("is_base_by_structure")?;
        self.graph.check_edges(b)?;
        Ok(self.base_shape(b))
    }

    fn base_shape(&self, b: EdgeSet) -> bool {
        let all = self.graph.all_vertices();
        if endpoints_of(&self.ends, b) != all {
            return false;
        }
        if b.len() as i64 - all.count_ones() as i64 != self.k as i64 - 1 {
            return false;
        }
        components_of(&self.ends, all, b).iter().all(|c| !c.is_tree())
    }

    fn root_component(&self, w: BaseWitnessRef) -> Result<Component> {
        self.require_connected("cocircuit_type")?;
        self.graph.check_edges(w.base)?;
        if !w.base.contains(w.element) {
            return Err(Error::HypothesisUnmet(format!(
                "element {} is not in the base",
                w.element
            )));
        }
        if !self.base_shape(w.base) {
            return Err(Error::HypothesisUnmet(format!("{:?} is not a base", w.base)));
        }
        components_of(&self.ends, self.graph.all_vertices(), w.base)
            .into_iter()
            .find(|c| c.edges.contains(w.element))
            .ok_or_else(|| Error::Internal("root edge in no component".into()))
    }

    /// Classifies `K(e, B)` as type 1, 2 or 3 by where `e` sits in its
    /// component `A` of `G<B>`.
    pub fn cocircuit_type(&self, w: crate::BaseWitness) -> Result<CocircuitTypeTag> {
        let a = self.root_component(BaseWitnessRef::from(w))?;
        let kind = self.classify_root(&a, w.element)?;
        Ok(CocircuitTypeTag {
            kind,
            component: a.edges,
            component_vertices: mask_iter(a.vertices).collect(),
        })
    }

    fn classify_root(&self, a: &Component, e: usize) -> Result<CocircuitType> {
        let (_, kernel_edges) = kernel_of(&self.ends, a.vertices, a.edges)
            .ok_or_else(|| Error::Internal("base component without a cycle".into()))?;
        if !kernel_edges.contains(e) {
            return Ok(CocircuitType::Type1);
        }
        match a.cyclomatic() {
            1 => Ok(CocircuitType::Type2),
            c if c >= 2 => {
                let (_, core_edges) = crate::graph::core_of(&self.ends, a.vertices, a.edges)
                    .ok_or_else(|| Error::Internal("multicyclic component without a core".into()))?;
                if core_edges.contains(e) {
                    Ok(CocircuitType::Type3)
                } else {
                    Err(Error::Internal("kernel edge outside the core".into()))
                }
            }
            _ => Err(Error::Internal("acyclic base component".into())),
        }
    }

    /// Edges outside `B` with an end in `vmask`.
    fn outside_touching(&self, base: EdgeSet, vmask: u64) -> EdgeSet {
        (self.graph.all_edges() - base)
            .iter()
            .filter(|&f| {
                let (u, v) = self.ends[f];
                vmask >> u & 1 == 1 || vmask >> v & 1 == 1
            })
            .collect()
    }

    /// `K(e, B)` read off the graph:
    /// type 1: `e` plus non-base edges touching the tree side of `A - e`;
    /// type 2: `e` plus non-base edges touching `A`;
    /// type 3: `e` plus every non-base edge.
    pub fn predicted_fundamental_cocircuit(&self, w: crate::BaseWitness) -> Result<EdgeSet> {
        let a = self.root_component(BaseWitnessRef::from(w))?;
        let e = w.element;
        let root = EdgeSet::singleton(e);
        match self.classify_root(&a, e)? {
            CocircuitType::Type1 => {
                let parts = components_of(&self.ends, a.vertices, a.edges.without(e));
                let trees: Vec<&Component> = parts.iter().filter(|c| c.is_tree()).collect();
                match (parts.len(), trees.as_slice()) {
                    (2, [t]) => Ok(root | self.outside_touching(w.base, t.vertices)),
                    _ => Err(Error::Internal(format!(
                        "type 1 root {e}: A - e has {} components, {} trees",
                        parts.len(),
                        trees.len()
                    ))),
                }
            }
            CocircuitType::Type2 => {
                let parts = components_of(&self.ends, a.vertices, a.edges.without(e));
                if parts.len() != 1 || !parts[0].is_tree() {
                    return Err(Error::Internal(format!("type 2 root {e}: A - e is not a tree")));
                }
                Ok(root | self.outside_touching(w.base, a.vertices))
            }
            CocircuitType::Type3 => Ok(root | (self.graph.all_edges() - w.base)),
        }
    }

    /// `K` is non-separating iff `Δ(G - K) >= k` and `G - K` is a cactus
    /// (`k = 1`) or a cacti-graph (`k >= 2`). Vertices left isolated by the
    /// deletion are dropped: they carry no element of `M_k(G) \ K`.
    pub fn is_nonsep_set(&self, k_set: EdgeSet) -> Result<bool> {
        self.require_connected("is_nonsep_set")?;
        self.graph.check_edges(k_set)?;
        let rest = self.graph.all_edges() - k_set;
        let vmask = endpoints_of(&self.ends, rest);
        Ok(rest.len() as i64 - vmask.count_ones() as i64 >= self.k as i64 && self.in_class(vmask, rest))
    }
}

#[derive(Clone, Copy)]
struct BaseWitnessRef {
    base: EdgeSet,
    element: usize,
}

impl From<crate::BaseWitness> for BaseWitnessRef {
    fn from(w: crate::BaseWitness) -> Self {
        BaseWitnessRef {
            base: w.base,
            element: w.element,
        }
    }
}
