//! Synthetic graphs: random graphs for benchmarking and small fixtures with
//! known structural roles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphLabels, NodeId};
use crate::error::{Error, Result};

/// G(n, p) with `p = avg_degree / (n - 1)`, sampled by geometric skipping so
/// the cost is linear in the number of edges. Identical for a fixed seed.
pub fn erdos_renyi(n: usize, avg_degree: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 nodes, got {n}")));
    }
    if !(avg_degree > 0.0) || avg_degree > (n - 1) as f64 {
        return Err(Error::InvalidParameter(format!(
            "average degree {avg_degree} not in (0, {}]",
            n - 1
        )));
    }
    let p = avg_degree / (n - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((v as NodeId, w as NodeId));
            }
        }
    } else {
        // Batagelj & Brandes skip sampling over the lower triangle.
        let log_q = (1.0 - p).ln();
        let mut v: usize = 1;
        let mut w: i64 = -1;
        while v < n {
            let r: f64 = rng.gen();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v as NodeId, w as NodeId));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Class ids used by [`planted_roles`].
pub mod role_class {
    pub const HUB: u32 = 0;
    pub const SPOKE: u32 = 1;
    /// Path node next to a hub; the node `j` steps from the nearer hub gets `PATH + j - 1`.
    pub const PATH: u32 = 2;
}

/// `copies` identical star motifs joined in a ring. Each motif is a hub with
/// `motif_size - 1` pendant spokes; consecutive hubs are joined through
/// `path_len` path nodes.
///
/// Classes are the automorphism orbits: hub, spoke, and one class per path
/// position counted from the nearer hub (`path1`, `path2`, ...). Node
/// indices are shuffled with `seed` so nothing downstream can lean on index
/// order.
///
/// Nodes: `copies * (motif_size + path_len)`.
/// Edges: the same.
pub fn planted_roles(
    motif_size: usize,
    copies: usize,
    path_len: usize,
    seed: u64,
) -> Result<(Graph, GraphLabels)> {
    if copies < 2 {
        return Err(Error::InvalidParameter("need at least 2 motif copies".into()));
    }
    if motif_size < 2 {
        return Err(Error::InvalidParameter("motif needs a hub and a spoke".into()));
    }
    if path_len < 1 {
        return Err(Error::InvalidParameter("path length must be at least 1".into()));
    }
    let block = motif_size + path_len;
    let n = copies * block;
    let mut classes = vec![0u32; n];
    let mut edges = Vec::new();
    for c in 0..copies {
        let hub = c * block;
        classes[hub] = role_class::HUB;
        for s in 1..motif_size {
            edges.push((hub, hub + s));
            classes[hub + s] = role_class::SPOKE;
        }
        let next_hub = ((c + 1) % copies) * block;
        let mut prev = hub;
        for p in 0..path_len {
            let node = hub + motif_size + p;
            classes[node] = role_class::PATH + p.min(path_len - 1 - p) as u32;
            edges.push((prev, node));
            prev = node;
        }
        edges.push((prev, next_hub));
    }

    let mut perm: Vec<NodeId> = (0..n as NodeId).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let g = Graph::from_edges(
        n,
        edges
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v])),
    )?;
    let mut class_of = vec![None; n];
    for (old, &c) in classes.iter().enumerate() {
        class_of[perm[old] as usize] = Some(c);
    }
    let names = ["hub", "spoke"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..=path_len.div_ceil(2)).map(|j| format!("path{j}")))
        .collect();
    Ok((g, GraphLabels::new(class_of, names)?))
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| ((i - 1) as NodeId, i as NodeId))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs 3 nodes");
    Graph::from_edges(n, (0..n).map(|i| (i as NodeId, ((i + 1) % n) as NodeId))).unwrap()
}

/// Star with the center at index 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i as NodeId))).unwrap()
}

/// Two `clique`-cliques joined by a path of `bridge` intermediate nodes.
/// Returns the graph and the two clique nodes carrying the bridge, which
/// are automorphic.
pub fn barbell(clique: usize, bridge: usize) -> (Graph, [NodeId; 2]) {
    assert!(clique >= 2, "clique needs 2 nodes");
    let n = 2 * clique + bridge;
    let mut edges = Vec::new();
    for base in [0, clique + bridge] {
        for i in 0..clique {
            for j in i + 1..clique {
                edges.push(((base + i) as NodeId, (base + j) as NodeId));
            }
        }
    }
    let left = clique - 1;
    let right = clique + bridge;
    let mut prev = left;
    for b in 0..bridge {
        edges.push((prev as NodeId, (clique + b) as NodeId));
        prev = clique + b;
    }
    edges.push((prev as NodeId, right as NodeId));
    (
        Graph::from_edges(n, edges).unwrap(),
        [left as NodeId, right as NodeId],
    )
}

/// Anchor `a` with three neighbors. `b` and `d` both have degree 3, but `d`
/// shares a triangle with `a` through `c` while `b` leads away to two
/// leaves. Returns the graph and `[a, b, d]`.
///
/// ```text
///   f   g
///    \ /
///     b
///     |
///     a --- c
///      \   /
///        d --- e
/// ```
pub fn triangle_contrast_motif() -> (Graph, [NodeId; 3]) {
    let names = ["a", "b", "c", "d", "e", "f", "g"];
    let edges = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 4), (1, 5), (1, 6)];
    let g = Graph::from_edges(names.len(), edges)
        .unwrap()
        .with_names(names.iter().map(|s| s.to_string()).collect())
        .unwrap();
    (g, [0, 1, 3])
}

/// Apply a node permutation: node `v` of `g` becomes `perm[v]`. Names move
/// with their nodes.
pub fn relabel(g: &Graph, perm: &[NodeId]) -> Result<Graph> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    if perm.len() != n
        || !perm
            .iter()
            .all(|&p| (p as usize) < n && !std::mem::replace(&mut seen[p as usize], true))
    {
        return Err(Error::InvalidParameter("not a permutation".into()));
    }
    let h = Graph::from_edges(n, g.edges().map(|(u, v)| (perm[u as usize], perm[v as usize])))?;
    if g.has_names() {
        let mut names = vec![String::new(); n];
        for v in g.nodes() {
            names[perm[v as usize] as usize] = g.name(v);
        }
        h.with_names(names)
    } else {
        Ok(h)
    }
}

/// Random permutation of `0..n`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<NodeId> {
    let mut perm: Vec<NodeId> = (0..n as NodeId).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}
