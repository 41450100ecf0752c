//! End-to-end embedding: graph → walk corpus → skip-gram → node vectors.

use std::time::Instant;

use log::info;
use serde::{Deserialize, Serialize};

use crate::embed::{build_vocab, train, NodeEmbeddings, TrainParams};
use crate::error::Result;
use crate::graph::Graph;
use crate::role::Variant;
use crate::walk::{build_corpus, WalkCorpus, WalkParams};

/// All knobs of one embedding run. Defaults: k = 4, d = 128, 80 walks of
/// 10 nodes per node, window 10, 5 negatives, 5 epochs, lr 0.025.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub variant: Variant,
    pub k: u32,
    pub dim: usize,
    pub gamma: usize,
    pub lambda: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub lr: f32,
    pub noise_exponent: f64,
    pub threads: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let w = WalkParams::default();
        let t = TrainParams::default();
        RunConfig {
            variant: Variant::Sp,
            k: w.k,
            dim: t.dim,
            gamma: w.gamma,
            lambda: w.lambda,
            window: t.window,
            negatives: t.negatives,
            epochs: t.epochs,
            lr: t.lr,
            noise_exponent: t.noise_exponent,
            threads: 1,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn walk_params(&self) -> WalkParams {
        WalkParams {
            k: self.k,
            gamma: self.gamma,
            lambda: self.lambda,
            seed: self.seed,
        }
    }

    pub fn train_params(&self) -> TrainParams {
        TrainParams {
            dim: self.dim,
            window: self.window,
            negatives: self.negatives,
            epochs: self.epochs,
            lr: self.lr,
            noise_exponent: self.noise_exponent,
            threads: self.threads,
            seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.walk_params().validate()?;
        self.train_params().validate()
    }
}

/// Wall-clock and resource usage of one run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub sampling_secs: f64,
    pub training_secs: f64,
    /// User CPU seconds consumed by the process during the run.
    pub cpu_secs: f64,
    pub walks: usize,
    pub tokens: usize,
    pub vocab_size: usize,
    /// Bytes held by graph, corpus and model at the peak of the run.
    pub est_peak_bytes: usize,
    /// Process high-water mark of resident memory, where available.
    pub peak_rss_bytes: Option<u64>,
}

pub struct EmbedRun {
    pub embeddings: NodeEmbeddings,
    pub stats: RunStats,
}

/// Sample the corpus for `g` under `cfg`.
pub fn sample(g: &Graph, cfg: &RunConfig) -> Result<WalkCorpus> {
    build_corpus(g, cfg.variant, &cfg.walk_params(), cfg.threads)
}

pub fn embed_graph(g: &Graph, cfg: &RunConfig) -> Result<EmbedRun> {
    cfg.validate()?;
    let cpu0 = crate::resources::user_cpu_secs();
    let t0 = Instant::now();
    let corpus = sample(g, cfg)?;
    let sampling_secs = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let vocab = build_vocab(&corpus)?;
    let model = train(&corpus, &vocab, &cfg.train_params())?;
    let training_secs = t1.elapsed().as_secs_f64();
    let embeddings = NodeEmbeddings::from_model(&model, &vocab, g)?;

    let stats = RunStats {
        sampling_secs,
        training_secs,
        cpu_secs: crate::resources::user_cpu_secs() - cpu0,
        walks: corpus.walk_count(),
        tokens: corpus.len(),
        vocab_size: vocab.len(),
        est_peak_bytes: g.heap_bytes()
            + corpus.heap_bytes()
            + model.heap_bytes()
            + cfg.threads.max(1) * g.node_count() * 5,
        peak_rss_bytes: crate::resources::peak_rss_bytes(),
    };
    info!(
        "{} variant: sampling {:.2}s ({} walks, {} tokens, vocab {}), training {:.2}s, cpu {:.2}s, peak rss {}",
        cfg.variant,
        stats.sampling_secs,
        stats.walks,
        stats.tokens,
        stats.vocab_size,
        stats.training_secs,
        stats.cpu_secs,
        stats
            .peak_rss_bytes
            .map_or("n/a".to_string(), |b| format!("{:.1} MiB", b as f64 / 1048576.0)),
    );
    Ok(EmbedRun { embeddings, stats })
}
