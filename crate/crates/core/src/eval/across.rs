use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::logreg::LogRegParams;
use super::report::{EvalReport, RunScore};
use super::within::score_split;
use crate::embed::NodeEmbeddings;
use crate::error::{Error, Result};
use crate::graph::{merge_disjoint, Graph, GraphLabels, NodeId};
use crate::pipeline::{embed_graph, RunConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcrossParams {
    /// Independent embeddings of the union; repeat `r` uses seed `cfg.seed + r`.
    pub repeats: usize,
    pub logreg: LogRegParams,
}

impl Default for AcrossParams {
    fn default() -> Self {
        AcrossParams {
            repeats: 10,
            logreg: LogRegParams::default(),
        }
    }
}

fn check_pair(g: &Graph, l: &GraphLabels, which: &str) -> Result<()> {
    if g.node_count() != l.node_count() {
        return Err(Error::LabelMismatch(format!(
            "graph {which} has {} nodes but its labels cover {}",
            g.node_count(),
            l.node_count()
        )));
    }
    Ok(())
}

/// Train on every labeled node of the first graph and test on every
/// labeled node of the second, given embeddings of their disjoint union in
/// which the second graph starts at row `offset`.
pub fn transfer_scores(
    union: &NodeEmbeddings,
    labels_a: &GraphLabels,
    labels_b: &GraphLabels,
    offset: usize,
    logreg: &LogRegParams,
) -> Result<RunScore> {
    if labels_a.class_names() != labels_b.class_names() {
        return Err(Error::LabelMismatch(format!(
            "label vocabularies differ: {:?} vs {:?}",
            labels_a.class_names(),
            labels_b.class_names()
        )));
    }
    if offset != labels_a.node_count() || union.len() != offset + labels_b.node_count() {
        return Err(Error::LabelMismatch(format!(
            "{} embedding rows do not cover {} + {} nodes",
            union.len(),
            labels_a.node_count(),
            labels_b.node_count()
        )));
    }
    let train: Vec<(NodeId, u32)> = labels_a.labeled().collect();
    let test: Vec<(NodeId, u32)> = labels_b
        .labeled()
        .map(|(v, c)| (v + offset as NodeId, c))
        .collect();
    if test.is_empty() {
        return Err(Error::Empty("labeled nodes in the target graph".into()));
    }
    let [micro_f1, macro_f1, majority_micro_f1, majority_macro_f1] =
        score_split(union, &train, &test, logreg)?;
    Ok(RunScore {
        train_ratio: None,
        repeat: 0,
        train_size: train.len(),
        test_size: test.len(),
        micro_f1,
        macro_f1,
        majority_micro_f1,
        majority_macro_f1,
    })
}

/// Embed `g_a ∪ g_b` with `cfg`, train on `g_a`, report F1 on `g_b`.
pub fn across_network_eval(
    g_a: &Graph,
    labels_a: &GraphLabels,
    g_b: &Graph,
    labels_b: &GraphLabels,
    cfg: &RunConfig,
    params: &AcrossParams,
) -> Result<EvalReport> {
    check_pair(g_a, labels_a, "A")?;
    check_pair(g_b, labels_b, "B")?;
    if labels_a.class_names() != labels_b.class_names() {
        return Err(Error::LabelMismatch(format!(
            "label vocabularies differ: {:?} vs {:?}",
            labels_a.class_names(),
            labels_b.class_names()
        )));
    }
    if params.repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    let cpu0 = crate::resources::user_cpu_secs();
    let t0 = Instant::now();
    let (union, offset) = merge_disjoint(g_a, g_b);
    let mut runs = Vec::with_capacity(params.repeats);
    for repeat in 0..params.repeats {
        let cfg_r = RunConfig {
            seed: cfg.seed.wrapping_add(repeat as u64),
            ..cfg.clone()
        };
        let emb = embed_graph(&union, &cfg_r)?.embeddings;
        let mut score = transfer_scores(&emb, labels_a, labels_b, offset, &params.logreg)?;
        score.repeat = repeat;
        runs.push(score);
    }
    Ok(EvalReport::from_runs(
        "across",
        runs,
        t0.elapsed().as_secs_f64(),
        crate::resources::user_cpu_secs() - cpu0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatched_vocabularies_rejected() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let a = GraphLabels::from_classes(&[0, 1, 0]);
        let b = GraphLabels::new(vec![Some(0); 3], vec!["x".into()]).unwrap();
        let cfg = RunConfig::default();
        assert!(matches!(
            across_network_eval(&g, &a, &g, &b, &cfg, &AcrossParams::default()),
            Err(Error::LabelMismatch(_))
        ));
    }

    #[test]
    fn transfer_on_informative_rows() {
        // Rows 0..4 are graph A, 4..8 graph B; feature = class.
        let classes = [0u32, 1, 0, 1, 1, 0, 1, 0];
        let data: Vec<f32> = classes
            .iter()
            .flat_map(|&c| if c == 0 { [1.0, 0.0] } else { [0.0, 1.0] })
            .collect();
        let emb = NodeEmbeddings::new((0..8).map(|i| i.to_string()).collect(), 2, data).unwrap();
        let la = GraphLabels::from_classes(&classes[..4]);
        let lb = GraphLabels::from_classes(&classes[4..]);
        let s = transfer_scores(&emb, &la, &lb, 4, &LogRegParams::default()).unwrap();
        assert_eq!((s.train_size, s.test_size), (4, 4));
        assert_eq!(s.macro_f1, 1.0);
        assert!(transfer_scores(&emb, &la, &lb, 3, &LogRegParams::default()).is_err());
    }
}
