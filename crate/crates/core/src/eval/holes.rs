use serde::{Deserialize, Serialize};

use super::constraint::all_constraints;
use crate::embed::{cosine, NodeEmbeddings};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Outcome of ranking nodes by similarity to the strongest structural-hole
/// spanner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoleReport {
    pub top_n: usize,
    /// Size of `truth ∩ predicted`.
    pub hits: usize,
    /// Lowest-constraint node.
    pub spanner: NodeId,
    /// `top_n` lowest-constraint nodes, ascending.
    pub truth: Vec<NodeId>,
    /// `top_n` nodes most cosine-similar to `spanner`, descending.
    pub predicted: Vec<NodeId>,
    /// Isolated nodes, left out of both rankings.
    pub excluded: usize,
    /// Hits expected from embeddings unrelated to structure.
    pub random_baseline: f64,
}

/// Expected hits when `spanner` is in both lists of length `t` and the rest
/// of the predicted list is a uniform draw from the other `m - 1` nodes.
pub fn expected_random_hits(m: usize, t: usize) -> f64 {
    if m <= 1 || t == 0 {
        return t.min(m) as f64;
    }
    1.0 + ((t - 1) * (t - 1)) as f64 / (m - 1) as f64
}

/// Ground truth: the `top_n` nodes of lowest constraint. Prediction: the
/// `top_n` nodes with highest cosine similarity to the lowest-constraint
/// node. The spanner belongs to both lists. Ties break by node index;
/// `top_n` is capped at the number of non-isolated nodes.
pub fn structural_hole_eval(g: &Graph, emb: &NodeEmbeddings, top_n: usize) -> Result<HoleReport> {
    if top_n == 0 {
        return Err(Error::InvalidParameter("top_n must be at least 1".into()));
    }
    if emb.len() != g.node_count() {
        return Err(Error::LabelMismatch(format!(
            "{} embedding rows for {} nodes",
            emb.len(),
            g.node_count()
        )));
    }
    let constraint = all_constraints(g);
    let mut ranked: Vec<(f64, NodeId)> = constraint
        .iter()
        .enumerate()
        .filter_map(|(v, c)| c.map(|c| (c, v as NodeId)))
        .collect();
    let excluded = g.node_count() - ranked.len();
    if ranked.is_empty() {
        return Err(Error::Empty("non-isolated nodes".into()));
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let t = top_n.min(ranked.len());
    let spanner = ranked[0].1;
    let truth: Vec<NodeId> = ranked[..t].iter().map(|&(_, v)| v).collect();

    let anchor = emb.row(spanner);
    let mut by_sim: Vec<(f64, NodeId)> = ranked
        .iter()
        .map(|&(_, v)| {
            let s = if v == spanner { f64::INFINITY } else { cosine(anchor, emb.row(v)) };
            (s, v)
        })
        .collect();
    by_sim.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let predicted: Vec<NodeId> = by_sim[..t].iter().map(|&(_, v)| v).collect();

    let mut in_truth = vec![false; g.node_count()];
    for &v in &truth {
        in_truth[v as usize] = true;
    }
    let hits = predicted.iter().filter(|&&v| in_truth[v as usize]).count();
    Ok(HoleReport {
        top_n: t,
        hits,
        spanner,
        truth,
        predicted,
        excluded,
        random_baseline: expected_random_hits(ranked.len(), t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::erdos_renyi;

    fn embeddings(n: usize, dim: usize, f: impl Fn(usize, usize) -> f32) -> NodeEmbeddings {
        let data = (0..n).flat_map(|v| (0..dim).map(move |j| (v, j))).map(|(v, j)| f(v, j)).collect();
        NodeEmbeddings::new((0..n).map(|i| i.to_string()).collect(), dim, data).unwrap()
    }

    #[test]
    fn full_list_hits_everything() {
        let g = erdos_renyi(40, 4.0, 2).unwrap();
        let emb = embeddings(40, 3, |v, j| ((v * 7 + j) as f32).cos());
        let r = structural_hole_eval(&g, &emb, 1000).unwrap();
        assert_eq!(r.top_n, 40 - r.excluded);
        assert_eq!(r.hits, r.top_n);
    }

    #[test]
    fn rank_features_hit_every_time() {
        let g = erdos_renyi(80, 5.0, 3).unwrap();
        let c = all_constraints(&g);
        let mut order: Vec<usize> = (0..80).filter(|&v| c[v].is_some()).collect();
        order.sort_by(|&a, &b| c[a].unwrap().total_cmp(&c[b].unwrap()).then(a.cmp(&b)));
        let mut rank = vec![0usize; 80];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        // Unit vectors whose angle to the spanner grows with constraint rank.
        let emb = embeddings(80, 2, |v, j| {
            let a = rank[v] as f32 * 0.01;
            if j == 0 { a.cos() } else { a.sin() }
        });
        let r = structural_hole_eval(&g, &emb, 20).unwrap();
        assert_eq!(r.hits, 20);
        assert_eq!(r.spanner as usize, order[0]);
    }

    #[test]
    fn baseline_formula() {
        assert_eq!(expected_random_hits(10, 10), 10.0);
        assert_eq!(expected_random_hits(10, 1), 1.0);
        assert!((expected_random_hits(101, 11) - 2.0).abs() < 1e-12);
    }
}
