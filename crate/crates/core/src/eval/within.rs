use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::logreg::{train_logreg, LogRegParams};
use super::metrics::{f1_scores, majority_class};
use super::report::{EvalReport, RunScore};
use crate::embed::NodeEmbeddings;
use crate::error::{Error, Result};
use crate::graph::{GraphLabels, NodeId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WithinParams {
    pub train_ratio: f64,
    pub repeats: usize,
    pub seed: u64,
    /// Fresh shuffles tried when a training split holds fewer than two classes.
    pub max_resamples: usize,
    pub logreg: LogRegParams,
}

impl Default for WithinParams {
    fn default() -> Self {
        WithinParams {
            train_ratio: 0.8,
            repeats: 10,
            seed: 0,
            max_resamples: 100,
            logreg: LogRegParams::default(),
        }
    }
}

/// Feature row of node `v` in double precision.
pub(crate) fn features(emb: &NodeEmbeddings, v: NodeId) -> Vec<f64> {
    emb.row(v).iter().map(|&x| x as f64).collect()
}

/// Train on `train`, score on `test`, with the majority baseline alongside.
pub(crate) fn score_split(
    emb: &NodeEmbeddings,
    train: &[(NodeId, u32)],
    test: &[(NodeId, u32)],
    logreg: &LogRegParams,
) -> Result<[f64; 4]> {
    let x: Vec<Vec<f64>> = train.iter().map(|&(v, _)| features(emb, v)).collect();
    let y: Vec<u32> = train.iter().map(|&(_, c)| c).collect();
    let model = train_logreg(&x, &y, logreg)?;
    let truth: Vec<u32> = test.iter().map(|&(_, c)| c).collect();
    let pred: Vec<u32> = test
        .iter()
        .map(|&(v, _)| model.predict_one(&features(emb, v)))
        .collect();
    let (micro, macro_f1) = f1_scores(&pred, &truth);
    let majority = majority_class(&y).expect("training split is non-empty");
    let (maj_micro, maj_macro) = f1_scores(&vec![majority; truth.len()], &truth);
    Ok([micro, macro_f1, maj_micro, maj_macro])
}

/// Number of training nodes for `ratio` of `m` labeled nodes; both sides
/// keep at least one node.
pub fn train_size(m: usize, ratio: f64) -> usize {
    ((ratio * m as f64).round() as usize).clamp(1, m.saturating_sub(1).max(1))
}

/// Uniform random split of `labeled`, reshuffling until the training part
/// holds at least two classes.
/// Training and test halves of a split, as `(node, class)` pairs.
pub type Split = (Vec<(NodeId, u32)>, Vec<(NodeId, u32)>);

pub fn random_split(
    labeled: &[(NodeId, u32)],
    ratio: f64,
    rng: &mut ChaCha8Rng,
    max_resamples: usize,
) -> Result<Split> {
    let n_train = train_size(labeled.len(), ratio);
    let mut order = labeled.to_vec();
    for _ in 0..=max_resamples {
        order.shuffle(rng);
        let first = order[0].1;
        if order[..n_train].iter().any(|&(_, c)| c != first) {
            let test = order.split_off(n_train);
            return Ok((order, test));
        }
    }
    Err(Error::SingleClass(1))
}

fn check_inputs(emb: &NodeEmbeddings, labels: &GraphLabels) -> Result<Vec<(NodeId, u32)>> {
    if emb.len() != labels.node_count() {
        return Err(Error::LabelMismatch(format!(
            "{} embedding rows for {} labeled-graph nodes",
            emb.len(),
            labels.node_count()
        )));
    }
    let labeled: Vec<(NodeId, u32)> = labels.labeled().collect();
    if labeled.len() < 2 {
        return Err(Error::Empty("labeled nodes (need at least 2)".into()));
    }
    let first = labeled[0].1;
    if labeled.iter().all(|&(_, c)| c == first) {
        return Err(Error::SingleClass(1));
    }
    Ok(labeled)
}

/// Repeated random-split classification at one training ratio. Rows of
/// `emb` are node indices of the labeled graph.
pub fn within_network_eval(
    emb: &NodeEmbeddings,
    labels: &GraphLabels,
    params: &WithinParams,
) -> Result<EvalReport> {
    within_network_sweep(emb, labels, &[params.train_ratio], params)
}

/// [`within_network_eval`] at several training ratios. Repeat `r` uses the
/// same shuffle stream at every ratio.
pub fn within_network_sweep(
    emb: &NodeEmbeddings,
    labels: &GraphLabels,
    ratios: &[f64],
    params: &WithinParams,
) -> Result<EvalReport> {
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::InvalidParameter(format!("training ratio {r} not in (0, 1)")));
    }
    if params.repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    let labeled = check_inputs(emb, labels)?;
    let cpu0 = crate::resources::user_cpu_secs();
    let t0 = Instant::now();
    let jobs: Vec<(f64, usize)> = ratios
        .iter()
        .flat_map(|&r| (0..params.repeats).map(move |i| (r, i)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(ratio, repeat)| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(repeat as u64);
            let (train, test) = random_split(&labeled, ratio, &mut rng, params.max_resamples)?;
            let [micro_f1, macro_f1, majority_micro_f1, majority_macro_f1] =
                score_split(emb, &train, &test, &params.logreg)?;
            Ok(RunScore {
                train_ratio: Some(ratio),
                repeat,
                train_size: train.len(),
                test_size: test.len(),
                micro_f1,
                macro_f1,
                majority_micro_f1,
                majority_macro_f1,
            })
        })
        .collect::<Result<Vec<RunScore>>>()?;
    Ok(EvalReport::from_runs(
        "within",
        runs,
        t0.elapsed().as_secs_f64(),
        crate::resources::user_cpu_secs() - cpu0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_hot(classes: &[u32], k: usize) -> NodeEmbeddings {
        let data = classes
            .iter()
            .flat_map(|&c| (0..k).map(move |j| if j == c as usize { 1.0 } else { 0.0 }))
            .collect();
        let names = (0..classes.len()).map(|i| i.to_string()).collect();
        NodeEmbeddings::new(names, k, data).unwrap()
    }

    #[test]
    fn split_sizes() {
        let labeled: Vec<(NodeId, u32)> = (0..100).map(|v| (v, v % 3)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (train, test) = random_split(&labeled, 0.8, &mut rng, 10).unwrap();
        assert_eq!((train.len(), test.len()), (80, 20));
        let mut all: Vec<NodeId> = train.iter().chain(&test).map(|p| p.0).collect();
        all.sort_unstable();
        assert_eq!(all, (0..100).collect::<Vec<_>>());
        assert_eq!(train_size(10, 0.01), 1);
        assert_eq!(train_size(10, 0.99), 9);
    }

    #[test]
    fn resamples_until_two_classes() {
        // 1 of 20 nodes is the minority: a 2-node training split often misses it.
        let labeled: Vec<(NodeId, u32)> = (0..20).map(|v| (v, u32::from(v == 7))).collect();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (train, _) = random_split(&labeled, 0.1, &mut rng, 1000).unwrap();
            assert!(train.iter().any(|p| p.1 == 1));
        }
        // A one-node training split can never hold two classes.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            random_split(&labeled, 0.05, &mut rng, 50),
            Err(Error::SingleClass(_))
        ));
    }

    #[test]
    fn informative_features_score_perfectly() {
        let classes: Vec<u32> = (0..60).map(|i| i % 3).collect();
        let emb = one_hot(&classes, 3);
        let labels = GraphLabels::from_classes(&classes);
        let r = within_network_eval(&emb, &labels, &WithinParams::default()).unwrap();
        assert_eq!(r.runs.len(), 10);
        assert!(r.runs.iter().all(|s| s.train_size == 48 && s.test_size == 12));
        assert_eq!(r.micro_f1(), 1.0);
        assert_eq!(r.macro_f1(), 1.0);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let classes: Vec<u32> = (0..40).map(|i| (i * 7 % 5) as u32 % 2).collect();
        let data: Vec<f32> = (0..80).map(|i| ((i * 37 % 11) as f32).sin()).collect();
        let emb = NodeEmbeddings::new((0..40).map(|i| i.to_string()).collect(), 2, data).unwrap();
        let labels = GraphLabels::from_classes(&classes);
        let p = WithinParams::default();
        let a = within_network_sweep(&emb, &labels, &[0.3, 0.7], &p).unwrap();
        let b = within_network_sweep(&emb, &labels, &[0.3, 0.7], &p).unwrap();
        assert_eq!(a.runs, b.runs);
        assert_eq!(a.summary.len(), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        let emb = one_hot(&[0, 1, 0], 2);
        let labels = GraphLabels::from_classes(&[0, 1, 0]);
        for ratio in [0.0, 1.0, -0.5] {
            let p = WithinParams { train_ratio: ratio, ..Default::default() };
            assert!(within_network_eval(&emb, &labels, &p).is_err());
        }
        let short = GraphLabels::from_classes(&[0, 1]);
        assert!(matches!(
            within_network_eval(&emb, &short, &WithinParams::default()),
            Err(Error::LabelMismatch(_))
        ));
        let single = GraphLabels::from_classes(&[1, 1, 1]);
        assert!(within_network_eval(&emb, &single, &WithinParams::default()).is_err());
    }
}
