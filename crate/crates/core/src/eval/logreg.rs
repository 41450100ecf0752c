//! One-vs-rest L2-regularized logistic regression.
//!
//! Each binary problem minimizes
//! `Σ_i ln(1 + exp(-s_i (w·x_i + b))) + (l2 / 2) ||w||²` with `s_i = ±1`,
//! by damped Newton iterations. The bias is not penalized.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRegParams {
    pub l2: f64,
    /// Stop once the gradient norm falls below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Scale every feature row to unit length before fitting and predicting.
    pub normalize: bool,
}

impl Default for LogRegParams {
    fn default() -> Self {
        LogRegParams {
            l2: 1.0,
            tol: 1e-6,
            max_iter: 200,
            normalize: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub grad_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierModel {
    /// Class id handled by each binary model.
    pub classes: Vec<u32>,
    pub models: Vec<BinaryModel>,
    pub params: LogRegParams,
}

pub(crate) fn normalized(x: &[f64]) -> Vec<f64> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter().map(|v| v / n).collect()
    } else {
        x.to_vec()
    }
}

#[inline]
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Binary objective at `(w, b)` for signs `s`.
pub fn binary_objective(x: &[Vec<f64>], s: &[f64], w: &[f64], b: f64, l2: f64) -> f64 {
    let data: f64 = x
        .iter()
        .zip(s)
        .map(|(xi, &si)| softplus(-si * (dot(w, xi) + b)))
        .sum();
    data + 0.5 * l2 * dot(w, w)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Damped Newton's method with Armijo backtracking. Each step solves the
/// `(d + 1)`-dimensional Newton system by Cholesky; the bias row carries no
/// penalty, so a tiny ridge is added there if the curvature underflows.
pub fn fit_binary(x: &[Vec<f64>], s: &[f64], params: &LogRegParams) -> BinaryModel {
    let d = x.first().map_or(0, |r| r.len());
    let m = x.len();
    // Rows augmented with a constant 1 for the bias.
    let a = DMatrix::from_fn(m, d + 1, |i, j| if j < d { x[i][j] } else { 1.0 });
    let mut theta = DVector::<f64>::zeros(d + 1);
    let objective = |t: &DVector<f64>| binary_objective(x, s, &t.as_slice()[..d], t[d], params.l2);
    let mut f = objective(&theta);
    let mut iterations = 0;
    loop {
        let margins = &a * &theta;
        let mut coef = DVector::<f64>::zeros(m);
        let mut curv = DVector::<f64>::zeros(m);
        for i in 0..m {
            let p = sigmoid(-s[i] * margins[i]);
            coef[i] = -s[i] * p;
            curv[i] = p * (1.0 - p);
        }
        let mut grad = a.tr_mul(&coef);
        for j in 0..d {
            grad[j] += params.l2 * theta[j];
        }
        let gnorm = grad.norm();
        if gnorm < params.tol || iterations >= params.max_iter {
            return BinaryModel {
                weights: theta.as_slice()[..d].to_vec(),
                bias: theta[d],
                iterations,
                grad_norm: gnorm,
            };
        }
        iterations += 1;
        let mut scaled = a.clone();
        for (i, mut row) in scaled.row_iter_mut().enumerate() {
            row *= curv[i].sqrt();
        }
        let mut hess = scaled.tr_mul(&scaled);
        for j in 0..d {
            hess[(j, j)] += params.l2;
        }
        hess[(d, d)] += 1e-12;
        let step = match hess.cholesky() {
            Some(c) => c.solve(&grad),
            None => grad.clone(),
        };
        let slope = grad.dot(&step);
        let mut t = 1.0;
        loop {
            let cand = &theta - &step * t;
            let f_new = objective(&cand);
            if f_new <= f - 0.25 * t * slope {
                theta = cand;
                f = f_new;
                break;
            }
            t *= 0.5;
            if t < 1e-12 {
                // no further descent representable
                return BinaryModel {
                    weights: theta.as_slice()[..d].to_vec(),
                    bias: theta[d],
                    iterations,
                    grad_norm: gnorm,
                };
            }
        }
    }
}

/// Fit one binary model per class present in `y`.
pub fn train_logreg(x: &[Vec<f64>], y: &[u32], params: &LogRegParams) -> Result<ClassifierModel> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "{} feature rows for {} labels",
            x.len(),
            y.len()
        )));
    }
    let mut classes: Vec<u32> = y.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::SingleClass(classes.len()));
    }
    let xs: Vec<Vec<f64>> = if params.normalize {
        x.iter().map(|r| normalized(r)).collect()
    } else {
        x.to_vec()
    };
    let models = classes
        .iter()
        .map(|&c| {
            let s: Vec<f64> = y.iter().map(|&yi| if yi == c { 1.0 } else { -1.0 }).collect();
            fit_binary(&xs, &s, params)
        })
        .collect();
    Ok(ClassifierModel {
        classes,
        models,
        params: *params,
    })
}

impl ClassifierModel {
    /// Class with the highest decision value; ties go to the first class.
    pub fn predict_one(&self, x: &[f64]) -> u32 {
        let x = if self.params.normalize {
            normalized(x)
        } else {
            x.to_vec()
        };
        let mut best = (f64::NEG_INFINITY, self.classes[0]);
        for (m, &c) in self.models.iter().zip(&self.classes) {
            let z = dot(&m.weights, &x) + m.bias;
            if z > best.0 {
                best = (z, c);
            }
        }
        best.1
    }

    pub fn predict(&self, x: &[Vec<f64>]) -> Vec<u32> {
        x.iter().map(|r| self.predict_one(r)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.models
            .iter()
            .all(|m| m.bias.is_finite() && m.weights.iter().all(|w| w.is_finite()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_blobs() {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..20 {
            let t = i as f64 * 0.05;
            x.push(vec![2.0 + t, 1.0 - t]);
            y.push(0);
            x.push(vec![-2.0 - t, -1.0 + t]);
            y.push(1);
        }
        let m = train_logreg(&x, &y, &LogRegParams::default()).unwrap();
        assert_eq!(m.predict(&x), y);
        assert!(m.models.iter().all(|b| b.grad_norm < 1e-6));
    }

    #[test]
    fn identical_features_predict_majority() {
        let x = vec![vec![0.3, 0.4]; 10];
        let y = vec![2, 2, 2, 2, 2, 2, 5, 5, 7, 7];
        let m = train_logreg(&x, &y, &LogRegParams::default()).unwrap();
        assert!(m.predict(&x).iter().all(|&p| p == 2));
    }

    #[test]
    fn single_class_rejected() {
        let x = vec![vec![1.0]; 3];
        assert!(matches!(
            train_logreg(&x, &[4, 4, 4], &LogRegParams::default()),
            Err(Error::SingleClass(1))
        ));
    }

    #[test]
    fn objective_below_zero_weights() {
        let x: Vec<Vec<f64>> = (0..30).map(|i| vec![(i as f64).sin(), (i as f64 * 0.7).cos()]).collect();
        let s: Vec<f64> = (0..30).map(|i| if i % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let p = LogRegParams::default();
        let m = fit_binary(&x, &s, &p);
        let at_zero = binary_objective(&x, &s, &[0.0, 0.0], 0.0, p.l2);
        assert!(binary_objective(&x, &s, &m.weights, m.bias, p.l2) <= at_zero);
    }
}
