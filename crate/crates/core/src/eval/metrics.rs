use std::collections::BTreeMap;

/// Micro- and macro-averaged F1 for single-label multiclass predictions.
///
/// Micro-F1 equals accuracy here. Macro-F1 averages per-class F1 over the
/// classes that occur in `pred` or `truth`.
pub fn f1_scores(pred: &[u32], truth: &[u32]) -> (f64, f64) {
    assert_eq!(pred.len(), truth.len(), "prediction/truth length mismatch");
    if truth.is_empty() {
        return (0.0, 0.0);
    }
    // class -> (tp, fp, fn)
    let mut counts: BTreeMap<u32, (u64, u64, u64)> = BTreeMap::new();
    let mut correct = 0u64;
    for (&p, &t) in pred.iter().zip(truth) {
        if p == t {
            correct += 1;
            counts.entry(p).or_default().0 += 1;
        } else {
            counts.entry(p).or_default().1 += 1;
            counts.entry(t).or_default().2 += 1;
        }
    }
    let micro = correct as f64 / truth.len() as f64;
    let macro_f1 = counts
        .values()
        .map(|&(tp, fp, fneg)| 2.0 * tp as f64 / (2 * tp + fp + fneg) as f64)
        .sum::<f64>()
        / counts.len() as f64;
    (micro, macro_f1)
}

/// Most frequent class, smallest id on ties.
pub fn majority_class(y: &[u32]) -> Option<u32> {
    let mut freq: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in y {
        *freq.entry(c).or_default() += 1;
    }
    freq.into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(c, _)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect() {
        assert_eq!(f1_scores(&[0, 1, 2], &[0, 1, 2]), (1.0, 1.0));
    }

    #[test]
    fn half_right() {
        // class 0: tp 1, fp 1, fn 1 -> 0.5; class 1 likewise.
        let (mi, ma) = f1_scores(&[0, 1, 0, 1], &[0, 0, 1, 1]);
        assert!((mi - 0.5).abs() < 1e-12);
        assert!((ma - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_predictor_on_imbalanced_split() {
        let truth: Vec<u32> = (0..100).map(|i| u32::from(i >= 90)).collect();
        let pred = vec![0; 100];
        let (mi, ma) = f1_scores(&pred, &truth);
        assert!((mi - 0.9).abs() < 1e-12);
        // class 0: 2*90 / (180 + 10) = 18/19; class 1: 0
        assert!((ma - 9.0 / 19.0).abs() < 1e-12);
        assert!((ma - 0.4737).abs() < 1e-4);
    }

    #[test]
    fn majority_ties_pick_smallest() {
        assert_eq!(majority_class(&[2, 1, 2, 1]), Some(1));
        assert_eq!(majority_class(&[3, 3, 1]), Some(3));
        assert_eq!(majority_class(&[]), None);
    }
}
