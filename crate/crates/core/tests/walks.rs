mod common;

use std::collections::HashMap;

use common::random_graph;
use proptest::prelude::*;
use rolewalk::graph::generate::{erdos_renyi, planted_roles};
use rolewalk::role::role_context;
use rolewalk::walk::{anchor_rng, walk_anchor_nodes};
use rolewalk::{build_corpus, Graph, NodeId, Variant, WalkParams};

#[test]
fn corpus_identical_across_thread_counts() {
    let g = erdos_renyi(700, 6.0, 3).unwrap();
    for variant in [Variant::Sp, Variant::Wl, Variant::Plain] {
        let p = WalkParams {
            gamma: 5,
            ..WalkParams::default()
        };
        let one = build_corpus(&g, variant, &p, 1).unwrap();
        for threads in [2, 3, 8] {
            assert_eq!(one, build_corpus(&g, variant, &p, threads).unwrap(), "{variant} {threads}");
        }
    }
}

#[test]
fn default_walks_give_800_tokens_per_node() {
    let (g, _) = planted_roles(5, 4, 5, 1).unwrap();
    let c = build_corpus(&g, Variant::Sp, &WalkParams::default(), 1).unwrap();
    assert_eq!(c.walk_count(), 80 * g.node_count());
    assert_eq!(c.len(), 800 * g.node_count());
    for (i, w) in c.walks().enumerate() {
        // Walk i belongs to anchor i / 80; the anchor is the only node token.
        assert_eq!(w[0] as usize, i / 80);
        assert!(w[1..].iter().all(|&t| t == w[0] || t as usize >= g.node_count()));
    }
}

/// Exact probability of every walk of `len` nodes from `anchor` that stays
/// inside `inside`, by enumeration.
fn walk_distribution(g: &Graph, anchor: NodeId, inside: &dyn Fn(NodeId) -> bool, len: usize) -> HashMap<Vec<NodeId>, f64> {
    let mut out = HashMap::new();
    let mut stack = vec![(vec![anchor], 1.0)];
    while let Some((w, p)) = stack.pop() {
        let cur = *w.last().unwrap();
        let next: Vec<NodeId> = g.neighbors(cur).iter().copied().filter(|&u| inside(u)).collect();
        if w.len() == len || next.is_empty() {
            *out.entry(w).or_insert(0.0) += p;
            continue;
        }
        for &u in &next {
            let mut w2 = w.clone();
            w2.push(u);
            stack.push((w2, p / next.len() as f64));
        }
    }
    out
}

#[test]
fn walks_follow_uniform_transition_probabilities() {
    // Tail beyond radius 2 must never be entered.
    let g = Graph::from_edges(7, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 4)]).unwrap();
    let (anchor, k, len) = (0, 2, 5);
    let ctx = role_context(&g, anchor, k, Variant::Sp).unwrap();
    let exact = walk_distribution(&g, anchor, &|u| ctx.bfs.contains(u), len);
    assert!((exact.values().sum::<f64>() - 1.0).abs() < 1e-12);

    let samples = 60_000;
    let params = WalkParams {
        k,
        gamma: samples,
        lambda: len,
        seed: 17,
    };
    let walks = walk_anchor_nodes(&g, &ctx, &params, &mut anchor_rng(17, anchor));
    let mut seen: HashMap<Vec<NodeId>, f64> = HashMap::new();
    for w in walks {
        assert!(exact.contains_key(&w), "impossible walk {w:?}");
        *seen.entry(w).or_insert(0.0) += 1.0 / samples as f64;
    }
    let tv: f64 = exact
        .iter()
        .map(|(w, p)| (p - seen.get(w).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
        / 2.0;
    // With ~40 outcomes and 60k draws the expected distance is about 0.01.
    assert!(tv < 0.025, "total variation {tv}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walks_step_along_edges_inside_radius(n in 2usize..25, seed in any::<u64>(), k in 1u32..4) {
        let g = random_graph(n, 0.2, seed);
        let params = WalkParams { k, gamma: 6, lambda: 8, seed };
        for a in 0..n as NodeId {
            let ctx = role_context(&g, a, k, Variant::Sp).unwrap();
            for w in walk_anchor_nodes(&g, &ctx, &params, &mut anchor_rng(seed, a)) {
                prop_assert_eq!(w[0], a);
                let stuck = g.neighbors(a).is_empty();
                prop_assert_eq!(w.len(), if stuck { 1 } else { 8 });
                for s in w.windows(2) {
                    prop_assert!(g.has_edge(s[0], s[1]));
                    prop_assert!(ctx.bfs.contains(s[1]));
                }
            }
        }
    }
}
