//! Randomized checks of the graph predicates against the matroid oracle on
//! multigraphs with up to 10 edges.

use kcirc_core::kcirc::{circuits_k_limited, is_connected_k, is_nontrivial, k_circular_matroid};
use kcirc_core::{BaseWitness, EdgeSet, KContext, Matroid, Multigraph};
use proptest::prelude::*;

fn multigraph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_vertices).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_edges).prop_map(move |pairs| {
            Multigraph::new(
                (0..n).map(|i| format!("v{i}")),
                pairs
                    .iter()
                    .enumerate()
                    .map(|(i, &(u, v))| (format!("e{i:02}"), format!("v{u}"), format!("v{v}"))),
            )
            .unwrap()
        })
    })
}

fn k_range(g: &Multigraph) -> std::ops::RangeInclusive<usize> {
    0..=(g.delta() + g.tree_component_count() as i64 + 1).max(0) as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn circuits_form_a_matroid(g in multigraph(6, 10)) {
        for k in k_range(&g) {
            let m = k_circular_matroid(&g, k, 16).unwrap();
            prop_assert!(m.validation_failure().is_none(), "k={k} {}", g.to_json());
            if k >= 1 {
                prop_assert_eq!(is_nontrivial(&g, k).unwrap(), !m.circuits().is_empty());
                prop_assert_eq!(is_connected_k(&g, k).unwrap(), m.is_connected());
            }
        }
    }

    #[test]
    fn circuits_are_an_antichain(g in multigraph(5, 9), k in 0usize..4) {
        let cs = circuits_k_limited(&g, k, 16).unwrap();
        for (i, a) in cs.iter().enumerate() {
            for b in &cs[i + 1..] {
                prop_assert!(!a.is_subset(*b) && !b.is_subset(*a));
            }
        }
    }

    #[test]
    fn structure_matches_oracle_when_connected(g in multigraph(5, 8), k in 1usize..4) {
        let ctx = KContext::new(g.clone(), k);
        prop_assume!(ctx.is_connected().unwrap());
        let m = ctx.matroid().unwrap();
        let r = ctx.rank_formulas().unwrap();
        prop_assert_eq!((r.rho, r.rho_star), (m.rank(), m.corank()));
        for &b in m.bases() {
            prop_assert!(ctx.is_base_by_structure(b).unwrap());
            for e in b {
                let w = BaseWitness { base: b, element: e };
                prop_assert_eq!(ctx.predicted_fundamental_cocircuit(w).unwrap(), m.fundamental(w).unwrap());
            }
        }
        prop_assert_eq!(ctx.nonsep_stars().unwrap(), ctx.nonsep_cocircuits_oracle().unwrap());
    }

    #[test]
    fn json_round_trip(g in multigraph(6, 10)) {
        prop_assert_eq!(Multigraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn matroid_json_round_trip(g in multigraph(4, 7), k in 0usize..3) {
        let m = k_circular_matroid(&g, k, 16).unwrap();
        prop_assert_eq!(Matroid::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn isolated_vertices_do_not_change_the_matroid(g in multigraph(4, 7), extra in 1usize..3, k in 0usize..3) {
        let h = kcirc_core::families::with_isolated(&g, extra);
        let (a, b) = (k_circular_matroid(&g, k, 16).unwrap(), k_circular_matroid(&h, k, 16).unwrap());
        prop_assert_eq!(a.circuits(), b.circuits());
    }

    #[test]
    fn edge_deletion_commutes_with_matroid_deletion(g in multigraph(5, 8), k in 0usize..3, mask in any::<u64>()) {
        let kset = EdgeSet(mask) & g.all_edges();
        let m = k_circular_matroid(&g, k, 16).unwrap();
        let h = g.delete_edges(kset).unwrap();
        prop_assert_eq!(m.delete(kset), k_circular_matroid(&h, k, 16).unwrap());
    }
}
