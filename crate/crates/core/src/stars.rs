//! Vertex stars of `G` against `M_k(G)`: k-status, the star-as-cocircuit
//! test, non-separating cocircuits and witness bases.

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{degrees_of, kernel_of};
use crate::{EdgeSet, Error, KContext, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StarStatus {
    /// `s(x) < ρ* + 1`.
    Small,
    /// `s(x) = ρ* + 1`.
    Tight,
    /// `s(x) > ρ* + 1`.
    Big,
}

impl StarStatus {
    pub fn of(size: usize, rho_star: usize) -> Self {
        match size.cmp(&(rho_star + 1)) {
            std::cmp::Ordering::Less => StarStatus::Small,
            std::cmp::Ordering::Equal => StarStatus::Tight,
            std::cmp::Ordering::Greater => StarStatus::Big,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StarStatus::Small => "small",
            StarStatus::Tight => "tight",
            StarStatus::Big => "big",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub vertex: String,
    #[serde(skip)]
    pub index: usize,
    #[serde(skip)]
    pub star: EdgeSet,
    #[serde(rename = "star")]
    pub star_labels: Vec<String>,
    pub size: usize,
    pub status: StarStatus,
    #[serde(rename = "cocircuit")]
    pub is_cocircuit: bool,
    #[serde(rename = "nonseparating")]
    pub is_nonseparating: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessMode {
    /// A base `B` with `x` outside the kernel of `G<B>`.
    AvoidKernel,
    /// A base `B` in which `x` is a leaf of `G<B>`.
    Leaf,
}

impl KContext {
    fn status_of(&self, x: usize) -> Result<StarStatus> {
        let r = self.rank_formulas()?;
        self.graph().check_vertex(x)?;
        Ok(StarStatus::of(self.graph().star_unchecked(x).len(), r.rho_star))
    }

    fn require_not_big(&self, x: usize, what: &str) -> Result<()> {
        if self.status_of(x)? == StarStatus::Big {
            Err(Error::HypothesisUnmet(format!(
                "{what}: vertex {} is big",
                self.graph().vertices()[x]
            )))
        } else {
            Ok(())
        }
    }

    fn minus_vertex_has_tree(&self, x: usize) -> bool {
        let (vm, em) = self.graph().minus_vertex_masks(x);
        self.graph().components_masked(vm, em).iter().any(|c| c.is_tree())
    }

    /// Non-separation of `S(x)` read from `G - x`: `s(x) <= ρ*` and `G - x`
    /// in the class matching `k`.
    fn star_nonsep(&self, x: usize, rho_star: usize) -> bool {
        let (vm, em) = self.graph().minus_vertex_masks(x);
        self.graph().star_unchecked(x).len() <= rho_star && self.in_class(vm, em)
    }

    /// One report per vertex, in vertex order.
    pub fn classify(&self) -> Result<Vec<StarReport>> {
        let r = self.rank_formulas()?;
        let g = self.graph();
        Ok((0..g.vertex_count())
            .map(|x| {
                let star = g.star_unchecked(x);
                let status = StarStatus::of(star.len(), r.rho_star);
                // A cocircuit has at most ρ* + 1 elements, so a big star is
                // never one.
                let is_cocircuit = status != StarStatus::Big && !self.minus_vertex_has_tree(x);
                StarReport {
                    vertex: g.vertices()[x].clone(),
                    index: x,
                    star,
                    star_labels: g.edge_labels(star),
                    size: star.len(),
                    status,
                    is_cocircuit,
                    is_nonseparating: self.star_nonsep(x, r.rho_star),
                }
            })
            .collect())
    }

    /// `S(x)` is a cocircuit iff `G - x` has no tree component; defined for
    /// vertices that are not big.
    pub fn star_is_cocircuit(&self, x: usize) -> Result<bool> {
        self.require_not_big(x, "star_is_cocircuit")?;
        Ok(!self.minus_vertex_has_tree(x))
    }

    /// `NC*_k(G)` as the stars `S(x)` with `s(x) <= ρ*` and `G - x` in the
    /// class; sorted and deduplicated.
    pub fn nonsep_stars(&self) -> Result<Vec<EdgeSet>> {
        let r = self.rank_formulas()?;
        let mut out: Vec<EdgeSet> = (0..self.graph().vertex_count())
            .filter(|&x| self.star_nonsep(x, r.rho_star))
            .map(|x| self.graph().star_unchecked(x))
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Oracle for [`Self::nonsep_stars`]: cocircuits `K` with `M_k(G) \ K`
    /// connected.
    pub fn nonsep_cocircuits_oracle(&self) -> Result<Vec<EdgeSet>> {
        self.require_connected("nonsep_cocircuits_oracle")?;
        let m = self.matroid()?;
        let mut out: Vec<EdgeSet> = m
            .cocircuits()
            .par_iter()
            .copied()
            .filter(|&k| m.delete(k).is_connected())
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Whether a kernel-avoiding witness base exists for `x`: the component
    /// of `G` containing `x` still has a cycle once `x` is removed.
    pub fn avoid_kernel_expected(&self, x: usize) -> Result<bool> {
        self.require_not_big(x, "avoid_kernel_expected")?;
        let g = self.graph();
        let q = g
            .components_all()
            .into_iter()
            .find(|c| c.vertices >> x & 1 == 1)
            .ok_or_else(|| Error::Internal("vertex in no component".into()))?;
        let vm = q.vertices & !(1u64 << x);
        let em = q.edges - g.star_unchecked(x);
        Ok(g.components_masked(vm, em).iter().any(|c| !c.is_tree()))
    }

    /// Sufficient condition for a leaf witness base: `x` not big, `G - x`
    /// without tree components, and `x` shares its component with another
    /// vertex.
    pub fn leaf_expected(&self, x: usize) -> Result<bool> {
        self.require_not_big(x, "leaf_expected")?;
        let g = self.graph();
        let alone = g
            .components_all()
            .iter()
            .any(|c| c.vertices == 1u64 << x);
        Ok(!alone && !self.minus_vertex_has_tree(x))
    }

    /// First base (in the oracle's base order) satisfying `mode` at `x`.
    pub fn find_witness_base(&self, x: usize, mode: WitnessMode) -> Result<Option<EdgeSet>> {
        self.require_not_big(x, "find_witness_base")?;
        let ends = self.ends();
        let all = self.graph().all_vertices();
        let bases = self.matroid()?.bases();
        Ok(bases.iter().copied().find(|&b| match mode {
            WitnessMode::AvoidKernel => match kernel_of(ends, all, b) {
                Some((kv, _)) => kv >> x & 1 == 0,
                None => true,
            },
            WitnessMode::Leaf => degrees_of(ends, b)[x] == 1,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use crate::{BaseWitness, Multigraph};

    fn statuses(g: Multigraph, k: usize) -> Vec<StarStatus> {
        KContext::new(g, k)
            .classify()
            .unwrap()
            .iter()
            .map(|r| r.status)
            .collect()
    }

    #[test]
    fn classify_complete_graphs() {
        assert_eq!(statuses(complete(4), 1), vec![StarStatus::Tight; 4]);
        assert_eq!(statuses(complete(5), 1), vec![StarStatus::Small; 5]);
        assert_eq!(statuses(complete(4), 2), vec![StarStatus::Big; 4]);
        assert!(KContext::new(cycle(4), 1).classify().is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = &KContext::new(complete(4), 1).classify().unwrap()[0];
        assert_eq!(
            serde_json::to_string(r).unwrap(),
            r#"{"vertex":"1","star":["12","13","14"],"size":3,"status":"Tight","cocircuit":true,"nonseparating":false}"#
        );
    }

    #[test]
    fn star_cocircuit_examples() {
        for (g, k) in [(complete(5), 1), (complete(4), 1)] {
            let ctx = KContext::new(g, k);
            let cocircuits = ctx.matroid().unwrap().cocircuits().to_vec();
            for x in 0..ctx.graph().vertex_count() {
                assert!(ctx.star_is_cocircuit(x).unwrap());
                assert!(cocircuits.contains(&ctx.graph().star(x).unwrap()));
            }
        }
        assert!(KContext::new(complete(4), 2).star_is_cocircuit(0).is_err());
    }

    /// Two thetas joined by a bridge `bc`; at `k = 1` vertex `b` is tight and
    /// `G - b` leaves `a` isolated.
    fn bridged_thetas() -> Multigraph {
        Multigraph::new(
            ["a", "b", "c", "d"],
            [
                ("p1", "a", "b"),
                ("p2", "a", "b"),
                ("p3", "a", "b"),
                ("q1", "c", "d"),
                ("q2", "c", "d"),
                ("q3", "c", "d"),
                ("m", "b", "c"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn star_not_cocircuit_when_tree_left() {
        let g = bridged_thetas();
        let ctx = KContext::new(g.clone(), 1);
        let b = g.vertex_index("b").unwrap();
        assert_eq!(ctx.rank_formulas().unwrap().rho_star, 3);
        assert_eq!(ctx.classify().unwrap()[b].status, StarStatus::Tight);
        assert!(!ctx.star_is_cocircuit(b).unwrap());
        assert!(!ctx.matroid().unwrap().cocircuits().contains(&g.star(b).unwrap()));
    }

    #[test]
    fn nonsep_examples() {
        let k5 = KContext::new(complete(5), 1);
        let mut stars: Vec<EdgeSet> = (0..5).map(|x| k5.graph().star(x).unwrap()).collect();
        stars.sort();
        assert_eq!(k5.nonsep_stars().unwrap(), stars);
        assert!(KContext::new(complete(4), 1).nonsep_stars().unwrap().is_empty());
        assert!(KContext::new(complete(4), 1).nonsep_cocircuits_oracle().unwrap().is_empty());
        assert!(KContext::new(complete(5), 5).nonsep_stars().unwrap().is_empty());
    }

    #[test]
    fn witness_bases_k4() {
        let k4 = complete(4);
        let ctx = KContext::new(k4.clone(), 1);
        for x in 0..4 {
            let b = ctx.find_witness_base(x, WitnessMode::Leaf).unwrap().unwrap();
            let e = (b & k4.star(x).unwrap()).first().unwrap();
            assert_eq!(
                ctx.matroid().unwrap().fundamental(BaseWitness { base: b, element: e }).unwrap(),
                k4.star(x).unwrap()
            );
            assert!(ctx.avoid_kernel_expected(x).unwrap());
            assert!(ctx.find_witness_base(x, WitnessMode::AvoidKernel).unwrap().is_some());
        }
    }

    #[test]
    fn witness_leaf_absent_for_lone_vertex() {
        let g = disjoint_union(&theta(3), &bouquet(2));
        let v = g.vertex_index("b.v").unwrap();
        let ctx = KContext::new(g.clone(), 2);
        assert!(ctx.is_connected().unwrap());
        assert_eq!(ctx.classify().unwrap()[v].status, StarStatus::Tight);
        assert!(!ctx.leaf_expected(v).unwrap());
        assert_eq!(ctx.find_witness_base(v, WitnessMode::Leaf).unwrap(), None);
        assert!(ctx.star_is_cocircuit(v).unwrap());
        assert!(ctx.matroid().unwrap().cocircuits().contains(&g.star(v).unwrap()));
    }
}
