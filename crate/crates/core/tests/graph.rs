mod common;

use common::{floyd_warshall, random_graph};
use proptest::prelude::*;
use rolewalk::graph::generate::{erdos_renyi, random_permutation, relabel};
use rolewalk::graph::{bfs_within, merge_disjoint, BfsScratch};
use rolewalk::{Graph, NodeId};

#[test]
fn bfs_matches_floyd_warshall_on_200_graphs() {
    for case in 0..200u64 {
        let n = 2 + (case as usize * 7) % 59;
        let p = [0.03, 0.08, 0.15, 0.4][case as usize % 4];
        let g = random_graph(n, p, case);
        let d = floyd_warshall(&g);
        let mut scratch = BfsScratch::new(n);
        for k in [1u32, 2, 4, n as u32] {
            for a in 0..n as NodeId {
                let bfs = bfs_within(&g, a, k).unwrap();
                scratch.run(&g, a, k);
                for v in 0..n as NodeId {
                    let want = d[a as usize][v as usize].filter(|&x| x <= k);
                    assert_eq!(bfs.dist(v), want, "case {case} k {k} anchor {a} node {v}");
                    assert_eq!(scratch.dist(v), want);
                }
                let inside = d[a as usize].iter().filter(|x| x.is_some_and(|x| x <= k)).count();
                assert_eq!(bfs.len(), inside);
            }
        }
    }
}

#[test]
fn er_mean_degree_close_to_target() {
    let n = 5000;
    let g = erdos_renyi(n, 10.0, 11).unwrap();
    let mean = 2.0 * g.edge_count() as f64 / n as f64;
    // Edge count is binomial with sd ~ sqrt(25000) ~ 158, i.e. 0.6% of the mean.
    assert!((mean - 10.0).abs() < 0.3, "mean degree {mean}");
}

#[test]
fn relabel_preserves_degree_sequence() {
    let g = erdos_renyi(300, 6.0, 4).unwrap();
    let perm = random_permutation(300, 9);
    let h = relabel(&g, &perm).unwrap();
    assert_eq!(h.edge_count(), g.edge_count());
    for v in g.nodes() {
        assert_eq!(g.degree(v).unwrap(), h.degree(perm[v as usize]).unwrap());
    }
    for (u, v) in g.edges() {
        assert!(h.has_edge(perm[u as usize], perm[v as usize]));
    }
}

fn edge_list() -> impl Strategy<Value = (usize, Vec<(NodeId, NodeId)>)> {
    (1usize..40).prop_flat_map(|n| {
        let e = (0..n as NodeId, 0..n as NodeId);
        (Just(n), prop::collection::vec(e, 0..120))
    })
}

proptest! {
    #[test]
    fn adjacency_is_symmetric_sorted_and_simple((n, edges) in edge_list()) {
        let g = Graph::from_edges(n, edges.clone()).unwrap();
        let mut degree_sum = 0;
        for v in g.nodes() {
            let nb = g.neighbors(v);
            degree_sum += nb.len();
            prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!nb.contains(&v));
            for &u in nb {
                prop_assert!(g.neighbors(u).contains(&v));
            }
        }
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
        for (u, v) in edges {
            prop_assert_eq!(g.has_edge(u, v), u != v);
        }
    }

    #[test]
    fn merge_keeps_both_halves((n, edges) in edge_list(), (m, more) in edge_list()) {
        let a = Graph::from_edges(n, edges).unwrap();
        let b = Graph::from_edges(m, more).unwrap();
        let (u, off) = merge_disjoint(&a, &b);
        prop_assert_eq!(off, n);
        prop_assert_eq!(u.node_count(), n + m);
        prop_assert_eq!(u.edge_count(), a.edge_count() + b.edge_count());
        for (x, y) in b.edges() {
            prop_assert!(u.has_edge(x + off as NodeId, y + off as NodeId));
        }
    }
}
