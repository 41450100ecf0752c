//! Skip-gram negative-sampling objective for a single (center, context)
//! pair:
//!
//! ```text
//! loss = -ln σ(u_ctx · v_c) - Σ_neg ln σ(-u_neg · v_c)
//! ```
//!
//! `v_c` is the center's input vector and `u_*` are output vectors.

use std::collections::BTreeMap;

use num_traits::Float;

use super::model::EmbeddingModel;

#[inline]
pub(crate) fn sigmoid<F: Float>(x: F) -> F {
    F::one() / (F::one() + (-x).exp())
}

/// `-ln σ(x)`, stable for large |x|.
#[inline]
pub(crate) fn neg_log_sigmoid<F: Float>(x: F) -> F {
    if x > F::zero() {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

#[inline]
pub(crate) fn dot<F: Float>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Gradients of the pair loss. `negatives[i]` belongs to the i-th negative
/// vector passed in.
#[derive(Clone, Debug, PartialEq)]
pub struct PairGradients<F> {
    pub center: Vec<F>,
    pub context: Vec<F>,
    pub negatives: Vec<Vec<F>>,
}

/// Loss and gradients on raw vectors.
pub fn pair_loss<F: Float>(center: &[F], context: &[F], negatives: &[&[F]]) -> (F, PairGradients<F>) {
    let d = center.len();
    let mut g_center = vec![F::zero(); d];

    let s = dot(center, context);
    let mut loss = neg_log_sigmoid(s);
    // d/ds [-ln σ(s)] = σ(s) - 1
    let coef = sigmoid(s) - F::one();
    let g_context: Vec<F> = center.iter().map(|&v| coef * v).collect();
    for (g, &u) in g_center.iter_mut().zip(context) {
        *g = *g + coef * u;
    }

    let mut g_negs = Vec::with_capacity(negatives.len());
    for &u in negatives {
        let s = dot(center, u);
        loss = loss + neg_log_sigmoid(-s);
        // d/ds [-ln σ(-s)] = σ(s)
        let coef = sigmoid(s);
        g_negs.push(center.iter().map(|&v| coef * v).collect());
        for (g, &x) in g_center.iter_mut().zip(u) {
            *g = *g + coef * x;
        }
    }
    (
        loss,
        PairGradients {
            center: g_center,
            context: g_context,
            negatives: g_negs,
        },
    )
}

/// Gradients keyed by the matrix rows they touch. Repeated output rows
/// (a negative equal to the context, or to another negative) accumulate.
#[derive(Clone, Debug, PartialEq)]
pub struct RowGradients {
    pub input: (u32, Vec<f64>),
    pub output: BTreeMap<u32, Vec<f64>>,
}

/// Pair loss on the rows of a model, evaluated in double precision.
pub fn sgns_pair_loss(
    center: u32,
    context: u32,
    negatives: &[u32],
    model: &EmbeddingModel,
) -> (f64, RowGradients) {
    let widen = |r: &[f32]| -> Vec<f64> { r.iter().map(|&x| x as f64).collect() };
    let v = widen(model.input_row(center));
    let u_ctx = widen(model.output_row(context));
    let u_negs: Vec<Vec<f64>> = negatives.iter().map(|&n| widen(model.output_row(n))).collect();
    let refs: Vec<&[f64]> = u_negs.iter().map(|u| u.as_slice()).collect();
    let (loss, g) = pair_loss(&v, &u_ctx, &refs);

    let mut output: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    let mut add = |row: u32, grad: Vec<f64>| {
        output
            .entry(row)
            .and_modify(|acc| acc.iter_mut().zip(&grad).for_each(|(a, b)| *a += b))
            .or_insert(grad);
    };
    add(context, g.context);
    for (&n, grad) in negatives.iter().zip(g.negatives) {
        add(n, grad);
    }
    (
        loss,
        RowGradients {
            input: (center, g.center),
            output,
        },
    )
}
