//! Strong isomorphism, certificates and rival search.

use kcirc_core::corpus::exhaustive;
use kcirc_core::families::{complete, cycle, theta, wheel};
use kcirc_core::kcirc::circuits_k;
use kcirc_core::uniqueness::{search_equal_matroid, stars_missing_from, strong_isomorphism};
use kcirc_core::{Error, KContext, Multigraph, SearchBounds, Verdict};
use proptest::prelude::*;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Brute force: some vertex bijection carries every edge's ends.
fn brute_force_iso(g: &Multigraph, h: &Multigraph) -> bool {
    g.vertex_count() == h.vertex_count()
        && permutations(g.vertex_count()).iter().any(|p| {
            g.edges().iter().zip(h.edges()).all(|(a, b)| {
                let (x, y) = (p[a.ends.0], p[a.ends.1]);
                (x.min(y), x.max(y)) == b.ends
            })
        })
}

fn graph_on(n: usize, pairs: &[(usize, usize)], names: &[String]) -> Multigraph {
    Multigraph::new(
        names[..n].to_vec(),
        pairs
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (format!("e{i}"), names[u].clone(), names[v].clone())),
    )
    .unwrap()
}

fn names(prefix: &str) -> Vec<String> {
    (0..6).map(|i| format!("{prefix}{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn strong_isomorphism_matches_brute_force(
        n in 1usize..=6,
        raw in prop::collection::vec((0usize..6, 0usize..6), 0..8),
        other in prop::collection::vec((0usize..6, 0usize..6), 0..8),
        perm in Just((0usize..6).collect::<Vec<_>>()).prop_shuffle(),
        relabel in any::<bool>(),
    ) {
        let pairs: Vec<(usize, usize)> = raw.iter().map(|&(u, v)| (u % n, v % n)).collect();
        let g = graph_on(n, &pairs, &names("a"));
        let h = if relabel {
            // same graph under a vertex permutation with fresh names
            let perm: Vec<usize> = perm.iter().copied().filter(|&x| x < n).collect();
            let moved: Vec<(usize, usize)> = pairs.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
            graph_on(n, &moved, &names("b"))
        } else {
            let mut o: Vec<(usize, usize)> = other.iter().map(|&(u, v)| (u % n, v % n)).collect();
            o.resize(pairs.len(), (0, 0));
            graph_on(n, &o, &names("b"))
        };
        let w = strong_isomorphism(&g, &h).unwrap();
        prop_assert_eq!(w.is_some(), brute_force_iso(&g, &h));
        prop_assert_eq!(w.is_some(), g.star_multiset() == h.star_multiset());
        if let Some(w) = w {
            prop_assert!(w.verify(&g, &h));
        }
        if relabel {
            prop_assert!(brute_force_iso(&g, &h));
        }
    }
}

#[test]
fn strong_isomorphism_examples() {
    let t = cycle(3);
    let renamed = Multigraph::new(["x", "y", "z"], [("e1", "y", "z"), ("e2", "z", "x"), ("e3", "x", "y")]).unwrap();
    assert!(strong_isomorphism(&t, &renamed).unwrap().is_some());

    let k4 = complete(4);
    let swapped = Multigraph::new(
        ["1", "2", "3", "4"],
        [
            ("12", "2", "1"),
            ("13", "2", "3"),
            ("14", "2", "4"),
            ("23", "1", "3"),
            ("24", "1", "4"),
            ("34", "3", "4"),
        ],
    )
    .unwrap();
    assert!(strong_isomorphism(&k4, &swapped).unwrap().is_some());

    // same stars as sets, different multisets: a theta and a 3-loop bouquet
    // relabeled onto the theta's edges
    let th = theta(3);
    let loops = Multigraph::new(["a", "b"], [("p1", "a", "a"), ("p2", "a", "a"), ("p3", "a", "a")]).unwrap();
    assert!(strong_isomorphism(&th, &loops).unwrap().is_none());

    assert!(matches!(strong_isomorphism(&k4, &t), Err(Error::GroundMismatch)));
}

#[test]
fn k4_rivals_share_the_matroid() {
    let k4 = complete(4);
    let ctx = KContext::new(k4.clone(), 1);
    let outcome = search_equal_matroid(&ctx, SearchBounds::default()).unwrap();
    assert!(outcome.complete);
    assert!(!outcome.graphs.is_empty());
    for h in &outcome.graphs {
        assert_eq!(circuits_k(h, 1).unwrap(), ctx.matroid().unwrap().circuits());
        assert!(strong_isomorphism(&k4, h).unwrap().is_none());
        assert_eq!(h.vertex_count(), 4);
    }
    let cert = ctx.certify_unique().unwrap();
    assert_eq!(cert.verdict, Verdict::Unknown);
    let cert = cert.with_search(&outcome);
    assert_eq!(cert.verdict, Verdict::NotUnique);
    assert!(cert.search_complete);
}

#[test]
fn search_is_deterministic() {
    let ctx = KContext::new(complete(4), 1);
    let a = search_equal_matroid(&ctx, SearchBounds::default()).unwrap();
    let b = search_equal_matroid(&ctx, SearchBounds::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn search_respects_bounds() {
    let ctx = KContext::new(complete(4), 1);
    let tight = SearchBounds {
        max_edges: 5,
        ..SearchBounds::default()
    };
    let out = search_equal_matroid(&ctx, tight).unwrap();
    assert!(!out.complete && out.graphs.is_empty());
    let timed = SearchBounds {
        time_limit: std::time::Duration::ZERO,
        ..SearchBounds::default()
    };
    assert!(!search_equal_matroid(&ctx, timed).unwrap().complete);
}

#[test]
fn triangle_with_doubled_edge() {
    let g = Multigraph::new(["1", "2", "3"], [("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3"), ("d", "1", "3")]).unwrap();
    let ctx = KContext::new(g, 1);
    assert!(ctx.is_connected().unwrap());
    let cert = ctx.certify_unique().unwrap();
    let outcome = search_equal_matroid(&ctx, SearchBounds::default()).unwrap();
    assert!(outcome.complete);
    if cert.verdict == Verdict::Certified {
        assert!(outcome.graphs.is_empty());
    }
}

#[test]
fn search_hits_keep_nonseparating_stars() {
    for g in exhaustive(6, 5) {
        let top = (g.delta() + g.tree_component_count() as i64).max(0) as usize;
        for k in 1..=top {
            let ctx = KContext::new(g.clone(), k);
            if !ctx.is_connected().unwrap() {
                continue;
            }
            let outcome = search_equal_matroid(&ctx, SearchBounds::default()).unwrap();
            assert!(outcome.complete);
            let nonsep = ctx.nonsep_stars().unwrap();
            for h in &outcome.graphs {
                assert_eq!(h.vertex_count(), ctx.graph().vertex_count());
                assert!(
                    stars_missing_from(h, &nonsep).is_empty(),
                    "k={k} {} rival {}",
                    g.to_json(),
                    h.to_json()
                );
            }
            if ctx.certify_unique().unwrap().verdict == Verdict::Certified {
                assert!(outcome.graphs.is_empty(), "k={k} {}", g.to_json());
            }
        }
    }
}

#[test]
fn certificates_on_named_graphs() {
    let k5 = KContext::new(complete(5), 1).certify_unique().unwrap();
    assert_eq!(k5.verdict, Verdict::Certified);
    let k4 = KContext::new(complete(4), 2).certify_unique().unwrap();
    assert_eq!(k4.verdict, Verdict::Unknown);
    let k5_5 = KContext::new(complete(5), 5).certify_unique().unwrap();
    assert_eq!(k5_5.verdict, Verdict::Unknown);
    assert!(matches!(KContext::new(complete(4), 0).certify_unique(), Err(Error::KZero(_))));
    let json: serde_json::Value = serde_json::from_str(&k4.to_json()).unwrap();
    assert_eq!(json["verdict"], "unknown");
    assert!(json["theorem"].is_null() && json["counterexample"].is_null());
}

/// All labeled simple graphs on `n` vertices.
fn simple_graphs(n: usize) -> impl Iterator<Item = Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let chosen: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        graph_on(n, &chosen, &names("v"))
    })
}

#[test]
fn high_degree_vertex_of_simple_3_connected_graph_is_a_wheel_center() {
    let mut three_connected = 0;
    for n in 4..=6 {
        for g in simple_graphs(n).filter(|g| g.is_3_connected()) {
            three_connected += 1;
            if let Some(x) = g.wheel_check().unwrap() {
                assert!(g.is_wheel_with_center(x), "{}", g.to_json());
            }
        }
    }
    assert!(three_connected > 0);
    assert_eq!(wheel(6).wheel_check().unwrap(), Some(wheel(6).vertex_index("0").unwrap()));
}

#[test]
fn high_degree_claim_needs_simple_graphs() {
    // K4 with one doubled edge is 3-connected, and an end of the doubled
    // edge has degree 4 > |E| - |V| = 3, but it is no wheel.
    let g = kcirc_core::families::add_edge(&complete(4), "12b", "1", "2");
    assert!(g.is_3_connected());
    let x = g.wheel_check().unwrap().unwrap();
    assert!(!g.is_wheel_with_center(x));
}

#[test]
fn cycle_matroid_of_simple_3_connected_graphs_is_connected() {
    for n in 4..=5 {
        for g in simple_graphs(n).filter(|g| g.is_3_connected()) {
            let m = KContext::new(g.clone(), 0);
            let m = m.matroid().unwrap();
            assert!(m.is_connected(), "{}", g.to_json());
            assert_eq!(m.rank(), g.vertex_count() - 1);
        }
    }
}
