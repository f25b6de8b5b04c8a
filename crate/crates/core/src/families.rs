//! Named graph families with fixed labels, used by tests, benchmarks and
//! the CLI's self-checks.

use crate::Multigraph;

fn build(vertices: Vec<String>, edges: Vec<(String, String, String)>) -> Multigraph {
    Multigraph::new(vertices, edges).expect("family constructors produce valid graphs")
}

fn pair_label(i: usize, j: usize, n: usize) -> String {
    if n < 10 {
        format!("{i}{j}")
    } else {
        format!("{i}-{j}")
    }
}

/// `K_n` on vertices `1..=n`; edge `ij` joins `i < j`.
pub fn complete(n: usize) -> Multigraph {
    let vs = (1..=n).map(|i| i.to_string()).collect();
    let mut es = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            es.push((pair_label(i, j, n), i.to_string(), j.to_string()));
        }
    }
    build(vs, es)
}

/// Cycle on `1..=n` with edges `e1..en`; `n = 1` is a loop, `n = 2` a digon.
pub fn cycle(n: usize) -> Multigraph {
    let vs = (1..=n).map(|i| i.to_string()).collect();
    let es = (1..=n)
        .map(|i| (format!("e{i}"), i.to_string(), (i % n + 1).to_string()))
        .collect();
    build(vs, es)
}

/// Path on `n` vertices `1..=n`.
pub fn path(n: usize) -> Multigraph {
    let vs = (1..=n).map(|i| i.to_string()).collect();
    let es = (1..n)
        .map(|i| (format!("e{i}"), i.to_string(), (i + 1).to_string()))
        .collect();
    build(vs, es)
}

/// Two vertices `a`, `b` joined by `m` parallel edges `p1..pm`.
pub fn theta(m: usize) -> Multigraph {
    let es = (1..=m)
        .map(|i| (format!("p{i}"), "a".to_owned(), "b".to_owned()))
        .collect();
    build(vec!["a".into(), "b".into()], es)
}

/// One vertex `v` carrying `m` loops `l1..lm`.
pub fn bouquet(m: usize) -> Multigraph {
    let es = (1..=m)
        .map(|i| (format!("l{i}"), "v".to_owned(), "v".to_owned()))
        .collect();
    build(vec!["v".into()], es)
}

/// `K_{1,m}` with center `0` and leaves `1..=m`.
pub fn star_graph(m: usize) -> Multigraph {
    let vs = (0..=m).map(|i| i.to_string()).collect();
    let es = (1..=m)
        .map(|i| (format!("e{i}"), "0".to_owned(), i.to_string()))
        .collect();
    build(vs, es)
}

/// Wheel on `n` vertices: center `0`, rim cycle `1..n-1` (edges `r*`),
/// spokes `s*`. `wheel(4)` is `K_4` up to labels.
pub fn wheel(n: usize) -> Multigraph {
    assert!(n >= 4, "a wheel needs at least 4 vertices");
    let rim = n - 1;
    let vs = (0..n).map(|i| i.to_string()).collect();
    let mut es = Vec::new();
    for i in 1..=rim {
        es.push((format!("s{i}"), "0".to_owned(), i.to_string()));
        es.push((format!("r{i}"), i.to_string(), (i % rim + 1).to_string()));
    }
    build(vs, es)
}

/// Disjoint union; labels of `g` get prefix `a.` and labels of `h` get `b.`.
pub fn disjoint_union(g: &Multigraph, h: &Multigraph) -> Multigraph {
    let mut vs = Vec::new();
    let mut es = Vec::new();
    for (p, x) in [("a.", g), ("b.", h)] {
        vs.extend(x.vertices().iter().map(|v| format!("{p}{v}")));
        es.extend(x.edges().iter().map(|e| {
            (
                format!("{p}{}", e.id),
                format!("{p}{}", x.vertices()[e.ends.0]),
                format!("{p}{}", x.vertices()[e.ends.1]),
            )
        }));
    }
    build(vs, es)
}

/// Adds `count` isolated vertices `x1, x2, ..`.
pub fn with_isolated(g: &Multigraph, count: usize) -> Multigraph {
    let mut vs = g.vertices().to_vec();
    vs.extend((1..=count).map(|i| format!("x{i}")));
    build(vs, edge_triples(g))
}

/// Adds a new vertex `new_vertex` joined to `at` by edge `edge`.
pub fn pendant(g: &Multigraph, at: &str, new_vertex: &str, edge: &str) -> Multigraph {
    let mut vs = g.vertices().to_vec();
    vs.push(new_vertex.to_owned());
    let mut es = edge_triples(g);
    es.push((edge.to_owned(), at.to_owned(), new_vertex.to_owned()));
    build(vs, es)
}

/// Adds an edge between existing vertices (a loop when `u == v`).
pub fn add_edge(g: &Multigraph, edge: &str, u: &str, v: &str) -> Multigraph {
    let mut es = edge_triples(g);
    es.push((edge.to_owned(), u.to_owned(), v.to_owned()));
    build(g.vertices().to_vec(), es)
}

pub fn edge_triples(g: &Multigraph) -> Vec<(String, String, String)> {
    g.edges()
        .iter()
        .map(|e| {
            (
                e.id.clone(),
                g.vertices()[e.ends.0].clone(),
                g.vertices()[e.ends.1].clone(),
            )
        })
        .collect()
}
