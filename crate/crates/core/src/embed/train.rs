//! Skip-gram training with negative sampling.
//!
//! With more than one thread, workers update the shared matrices without
//! locks. Updates are sparse, so interference is rare; results are then
//! reproducible only statistically. A single thread is bit-reproducible.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::OnceLock;

use log::debug;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::model::EmbeddingModel;
use super::sgns::neg_log_sigmoid;
use super::vocab::Vocabulary;
use crate::error::{Error, Result};
use crate::walk::WalkCorpus;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainParams {
    pub dim: usize,
    /// Maximum context window on each side.
    pub window: usize,
    /// Noise samples per positive pair.
    pub negatives: usize,
    pub epochs: usize,
    /// Initial learning rate; decays linearly to `lr * 1e-4`.
    pub lr: f32,
    /// Exponent applied to unigram counts for the noise distribution.
    pub noise_exponent: f64,
    pub threads: usize,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            dim: 128,
            window: 10,
            negatives: 5,
            epochs: 5,
            lr: 0.025,
            noise_exponent: 0.75,
            threads: 1,
            seed: 0,
        }
    }
}

impl TrainParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.dim == 0 {
            return bad("dimension must be at least 1");
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad("learning rate must be positive");
        }
        if !self.noise_exponent.is_finite() {
            return bad("noise exponent must be finite");
        }
        Ok(())
    }
}

const MIN_LR_FRACTION: f32 = 1e-4;
const SIGMOID_RANGE: f32 = 8.0;
const SIGMOID_STEPS: usize = 4096;

/// σ on `[-8, 8]` by linear interpolation in a table, clamped outside.
/// Absolute error stays below 1e-6.
fn sigmoid_table() -> &'static [f32] {
    static TABLE: OnceLock<Vec<f32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=SIGMOID_STEPS + 1)
            .map(|i| {
                let x = (i as f64 / SIGMOID_STEPS as f64 * 2.0 - 1.0) * SIGMOID_RANGE as f64;
                (1.0 / (1.0 + (-x).exp())) as f32
            })
            .collect()
    })
}

#[inline(always)]
fn sigmoid_lookup(table: &[f32], x: f32) -> f32 {
    let t = ((x / SIGMOID_RANGE + 1.0) * 0.5 * SIGMOID_STEPS as f32).clamp(0.0, SIGMOID_STEPS as f32);
    let i = t as usize;
    let frac = t - i as f32;
    table[i] + frac * (table[i + 1] - table[i])
}
const LOSS_SAMPLE_EVERY: usize = 64;

/// Row view over a matrix shared by all workers.
#[derive(Clone, Copy)]
struct Rows {
    ptr: *mut f32,
    dim: usize,
}

unsafe impl Send for Rows {}
unsafe impl Sync for Rows {}

impl Rows {
    fn new(data: &mut [f32], dim: usize) -> Self {
        Rows {
            ptr: data.as_mut_ptr(),
            dim,
        }
    }

    /// Caller guarantees `id` is in range. Other workers may be writing the
    /// same row concurrently.
    #[inline]
    #[allow(clippy::mut_from_ref)]
    unsafe fn row<'a>(&self, id: u32) -> &'a mut [f32] {
        std::slice::from_raw_parts_mut(self.ptr.add(id as usize * self.dim), self.dim)
    }
}

/// Ask the cache for row `id` ahead of use.
#[inline(always)]
fn prefetch_row(rows: Rows, id: u32) {
    #[cfg(target_arch = "x86_64")]
    unsafe {
        use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
        let p = rows.ptr.add(id as usize * rows.dim) as *const i8;
        let bytes = rows.dim * 4;
        for off in (0..bytes).step_by(64) {
            _mm_prefetch::<_MM_HINT_T0>(p.add(off));
        }
        _mm_prefetch::<_MM_HINT_T0>(p.add(bytes - 1));
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = (rows, id);
}

/// Pairs between drawing a negative and using it.
const NEG_LOOKAHEAD: usize = 4;

/// Noise ids drawn a few pairs before they are needed, so that their output
/// rows are already in cache once the pair runs. On large vocabularies
/// these rows are the main source of cache misses.
struct NegativeQueue {
    ids: VecDeque<u32>,
    per_pair: usize,
}

impl NegativeQueue {
    fn new<R: RngCore>(per_pair: usize, noise: &NoiseSampler, rng: &mut R, w_out: Rows) -> Self {
        let mut q = NegativeQueue {
            ids: VecDeque::with_capacity((NEG_LOOKAHEAD + 1) * per_pair),
            per_pair,
        };
        for _ in 0..NEG_LOOKAHEAD * per_pair {
            q.draw(noise, rng, w_out);
        }
        q
    }

    #[inline(always)]
    fn draw<R: RngCore>(&mut self, noise: &NoiseSampler, rng: &mut R, w_out: Rows) {
        let t = noise.sample(rng);
        prefetch_row(w_out, t);
        self.ids.push_back(t);
    }

    /// Move one pair's negatives into `out`, skipping any equal to
    /// `context`, and draw replacements.
    #[inline(always)]
    fn take<R: RngCore>(&mut self, out: &mut Vec<u32>, context: u32, noise: &NoiseSampler, rng: &mut R, w_out: Rows) {
        for _ in 0..self.per_pair {
            let t = self.ids.pop_front().expect("queue holds a full lookahead");
            if t != context {
                out.push(t);
            }
            self.draw(noise, rng, w_out);
        }
    }
}

#[inline(always)]
fn dot(a: &[f32], b: &[f32]) -> f32 {
    let mut acc = [0f32; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let tail: f32 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        for i in 0..8 {
            acc[i] += x[i] * y[i];
        }
    }
    acc.iter().sum::<f32>() + tail
}

/// For each element `i`: every row `r` gets `r[i] += g_r * v[i]` and `v[i]`
/// gets `Σ_r g_r * r[i]`, both from the values before the call. Rows must
/// be distinct from each other and from `v`.
#[inline(always)]
unsafe fn update(v: &mut [f32], rows: &[*mut f32], coef: &[f32]) {
    for (i, vi) in v.iter_mut().enumerate() {
        let mut e = 0.0;
        for (&r, &g) in rows.iter().zip(coef) {
            let u = *r.add(i);
            e += g * u;
            *r.add(i) = u + g * *vi;
        }
        *vi += e;
    }
}

#[cfg(target_arch = "x86_64")]
mod avx2 {
    use std::arch::x86_64::*;

    #[inline]
    #[target_feature(enable = "avx2,fma")]
    pub unsafe fn dot(a: &[f32], b: &[f32]) -> f32 {
        let n = a.len().min(b.len());
        let (pa, pb) = (a.as_ptr(), b.as_ptr());
        let mut acc0 = _mm256_setzero_ps();
        let mut acc1 = _mm256_setzero_ps();
        let mut i = 0;
        while i + 16 <= n {
            acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(pa.add(i)), _mm256_loadu_ps(pb.add(i)), acc0);
            acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(pa.add(i + 8)), _mm256_loadu_ps(pb.add(i + 8)), acc1);
            i += 16;
        }
        if i + 8 <= n {
            acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(pa.add(i)), _mm256_loadu_ps(pb.add(i)), acc0);
            i += 8;
        }
        let v = _mm256_add_ps(acc0, acc1);
        let q = _mm_add_ps(_mm256_castps256_ps128(v), _mm256_extractf128_ps(v, 1));
        let q = _mm_add_ps(q, _mm_movehl_ps(q, q));
        let q = _mm_add_ss(q, _mm_shuffle_ps(q, q, 1));
        let mut s = _mm_cvtss_f32(q);
        while i < n {
            s += *pa.add(i) * *pb.add(i);
            i += 1;
        }
        s
    }

    /// Same contract as the portable `update`.
    #[inline]
    #[target_feature(enable = "avx2,fma")]
    pub unsafe fn update(v: &mut [f32], rows: &[*mut f32], coef: &[f32]) {
        let n = v.len();
        let pv = v.as_mut_ptr();
        let mut i = 0;
        while i + 16 <= n {
            let v0 = _mm256_loadu_ps(pv.add(i));
            let v1 = _mm256_loadu_ps(pv.add(i + 8));
            let mut e0 = _mm256_setzero_ps();
            let mut e1 = _mm256_setzero_ps();
            for (&r, &g) in rows.iter().zip(coef) {
                let g = _mm256_set1_ps(g);
                let u0 = _mm256_loadu_ps(r.add(i));
                let u1 = _mm256_loadu_ps(r.add(i + 8));
                e0 = _mm256_fmadd_ps(g, u0, e0);
                e1 = _mm256_fmadd_ps(g, u1, e1);
                _mm256_storeu_ps(r.add(i), _mm256_fmadd_ps(g, v0, u0));
                _mm256_storeu_ps(r.add(i + 8), _mm256_fmadd_ps(g, v1, u1));
            }
            _mm256_storeu_ps(pv.add(i), _mm256_add_ps(v0, e0));
            _mm256_storeu_ps(pv.add(i + 8), _mm256_add_ps(v1, e1));
            i += 16;
        }
        while i < n {
            let vi = *pv.add(i);
            let mut e = 0.0;
            for (&r, &g) in rows.iter().zip(coef) {
                let u = *r.add(i);
                e += g * u;
                *r.add(i) = u + g * vi;
            }
            *pv.add(i) = vi + e;
            i += 1;
        }
    }
}

#[cfg(target_arch = "x86_64")]
mod avx512 {
    use std::arch::x86_64::*;

    #[inline]
    #[target_feature(enable = "avx512f")]
    pub unsafe fn dot(a: &[f32], b: &[f32]) -> f32 {
        let n = a.len().min(b.len());
        let (pa, pb) = (a.as_ptr(), b.as_ptr());
        let mut acc0 = _mm512_setzero_ps();
        let mut acc1 = _mm512_setzero_ps();
        let mut i = 0;
        while i + 32 <= n {
            acc0 = _mm512_fmadd_ps(_mm512_loadu_ps(pa.add(i)), _mm512_loadu_ps(pb.add(i)), acc0);
            acc1 = _mm512_fmadd_ps(_mm512_loadu_ps(pa.add(i + 16)), _mm512_loadu_ps(pb.add(i + 16)), acc1);
            i += 32;
        }
        if i + 16 <= n {
            acc0 = _mm512_fmadd_ps(_mm512_loadu_ps(pa.add(i)), _mm512_loadu_ps(pb.add(i)), acc0);
            i += 16;
        }
        let mut s = _mm512_reduce_add_ps(_mm512_add_ps(acc0, acc1));
        while i < n {
            s += *pa.add(i) * *pb.add(i);
            i += 1;
        }
        s
    }

    /// Same contract as the portable `update`.
    #[inline]
    #[target_feature(enable = "avx512f")]
    pub unsafe fn update(v: &mut [f32], rows: &[*mut f32], coef: &[f32]) {
        let n = v.len();
        let pv = v.as_mut_ptr();
        let mut i = 0;
        while i + 32 <= n {
            let v0 = _mm512_loadu_ps(pv.add(i));
            let v1 = _mm512_loadu_ps(pv.add(i + 16));
            let mut e0 = _mm512_setzero_ps();
            let mut e1 = _mm512_setzero_ps();
            for (&r, &g) in rows.iter().zip(coef) {
                let g = _mm512_set1_ps(g);
                let u0 = _mm512_loadu_ps(r.add(i));
                let u1 = _mm512_loadu_ps(r.add(i + 16));
                e0 = _mm512_fmadd_ps(g, u0, e0);
                e1 = _mm512_fmadd_ps(g, u1, e1);
                _mm512_storeu_ps(r.add(i), _mm512_fmadd_ps(g, v0, u0));
                _mm512_storeu_ps(r.add(i + 16), _mm512_fmadd_ps(g, v1, u1));
            }
            _mm512_storeu_ps(pv.add(i), _mm512_add_ps(v0, e0));
            _mm512_storeu_ps(pv.add(i + 16), _mm512_add_ps(v1, e1));
            i += 32;
        }
        while i < n {
            let vi = *pv.add(i);
            let mut e = 0.0;
            for (&r, &g) in rows.iter().zip(coef) {
                let u = *r.add(i);
                e += g * u;
                *r.add(i) = u + g * vi;
            }
            *pv.add(i) = vi + e;
            i += 1;
        }
    }
}

/// Per-worker buffers for [`pair_step`].
struct Scratch {
    sigmoid: &'static [f32],
    /// Output rows of the step: context first, then negatives.
    targets: Vec<u32>,
    coef: Vec<f32>,
    rows: Vec<*mut f32>,
}

impl Scratch {
    fn new(negatives: usize) -> Self {
        Scratch {
            sigmoid: sigmoid_table(),
            targets: Vec::with_capacity(negatives + 1),
            coef: Vec::with_capacity(negatives + 1),
            rows: Vec::with_capacity(negatives + 1),
        }
    }

    /// Fold repeated targets into one entry with the summed coefficient.
    #[inline(always)]
    fn merge_repeats(&mut self) {
        let mut len = 0;
        for i in 0..self.targets.len() {
            let (t, g) = (self.targets[i], self.coef[i]);
            match self.targets[..len].iter().position(|&x| x == t) {
                Some(j) => self.coef[j] += g,
                None => {
                    self.targets[len] = t;
                    self.coef[len] = g;
                    len += 1;
                }
            }
        }
        self.targets.truncate(len);
        self.coef.truncate(len);
    }
}

/// All scores are taken before any row moves, so the step follows the
/// exact gradient of the pair loss even when a row repeats.
macro_rules! pair_step_body {
    ($dot:path, $update:path, $w_in:ident, $w_out:ident, $center:ident, $lr:ident, $sc:ident, $track:ident) => {{
        let v = $w_in.row($center);
        $sc.coef.clear();
        let mut loss = 0.0;
        for (i, &target) in $sc.targets.iter().enumerate() {
            let f = $dot(v, $w_out.row(target));
            if !f.is_finite() {
                return None;
            }
            if i == 0 {
                $sc.coef.push((1.0 - sigmoid_lookup($sc.sigmoid, f)) * $lr);
                if $track {
                    loss += neg_log_sigmoid(f);
                }
            } else {
                $sc.coef.push(-sigmoid_lookup($sc.sigmoid, f) * $lr);
                if $track {
                    loss += neg_log_sigmoid(-f);
                }
            }
        }
        $sc.merge_repeats();
        $sc.rows.clear();
        for &t in &$sc.targets {
            $sc.rows.push($w_out.row(t).as_mut_ptr());
        }
        $update(v, &$sc.rows, &$sc.coef);
        Some(loss)
    }};
}

unsafe fn pair_step_portable(
    w_in: Rows,
    w_out: Rows,
    center: u32,
    lr: f32,
    sc: &mut Scratch,
    track: bool,
) -> Option<f32> {
    pair_step_body!(dot, update, w_in, w_out, center, lr, sc, track)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2,fma")]
unsafe fn pair_step_avx2(
    w_in: Rows,
    w_out: Rows,
    center: u32,
    lr: f32,
    sc: &mut Scratch,
    track: bool,
) -> Option<f32> {
    pair_step_body!(avx2::dot, avx2::update, w_in, w_out, center, lr, sc, track)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f")]
unsafe fn pair_step_avx512(
    w_in: Rows,
    w_out: Rows,
    center: u32,
    lr: f32,
    sc: &mut Scratch,
    track: bool,
) -> Option<f32> {
    pair_step_body!(avx512::dot, avx512::update, w_in, w_out, center, lr, sc, track)
}

/// Widest vector instruction set usable on this machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Simd {
    Portable,
    #[cfg(target_arch = "x86_64")]
    Avx2,
    #[cfg(target_arch = "x86_64")]
    Avx512,
}

impl Simd {
    fn detect() -> Simd {
        #[cfg(target_arch = "x86_64")]
        {
            if std::is_x86_feature_detected!("avx512f") {
                return Simd::Avx512;
            }
            if std::is_x86_feature_detected!("avx2") && std::is_x86_feature_detected!("fma") {
                return Simd::Avx2;
            }
        }
        Simd::Portable
    }
}

/// One SGD step on the pair loss: `-lr * gradient` applied to the center's
/// input row and to the output rows in `sc.targets` (context first, then
/// negatives). Returns the pair loss when `track` is set, or `None` on a
/// non-finite score.
#[inline]
unsafe fn pair_step(
    simd: Simd,
    w_in: Rows,
    w_out: Rows,
    center: u32,
    lr: f32,
    sc: &mut Scratch,
    track: bool,
) -> Option<f32> {
    match simd {
        #[cfg(target_arch = "x86_64")]
        Simd::Avx512 => pair_step_avx512(w_in, w_out, center, lr, sc, track),
        #[cfg(target_arch = "x86_64")]
        Simd::Avx2 => pair_step_avx2(w_in, w_out, center, lr, sc, track),
        Simd::Portable => pair_step_portable(w_in, w_out, center, lr, sc, track),
    }
}

/// Apply a single pair update to `model`, as done during training.
pub fn apply_pair_update(
    model: &mut EmbeddingModel,
    center: u32,
    context: u32,
    negatives: &[u32],
    lr: f32,
) {
    let dim = model.dim();
    let n = model.vocab_size() as u32;
    assert!(center < n && context < n && negatives.iter().all(|&x| x < n));
    let w_in = Rows::new(&mut model.w_in, dim);
    let w_out = Rows::new(&mut model.w_out, dim);
    let mut sc = Scratch::new(negatives.len());
    sc.targets.push(context);
    sc.targets.extend_from_slice(negatives);
    unsafe {
        pair_step(Simd::detect(), w_in, w_out, center, lr, &mut sc, false);
    }
}

/// Noise distribution over vocabulary ids: counts raised to `exponent`.
/// Walker's alias method; one 64-bit draw per sample.
pub struct NoiseSampler {
    /// (acceptance threshold scaled to 2^32, alias)
    table: Vec<(u32, u32)>,
}

impl NoiseSampler {
    pub fn new(counts: &[u64], exponent: f64) -> Result<Self> {
        let n = counts.len();
        if n == 0 || n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("noise distribution over {n} items")));
        }
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(exponent)).collect();
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) || weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidParameter("noise weights must be finite, non-negative and not all zero".into()));
        }
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut table = vec![(u32::MAX, 0u32); n];
        let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| scaled[i] < 1.0);
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            table[s] = (threshold(scaled[s]), l as u32);
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers are 1 up to rounding.
        for i in small.into_iter().chain(large) {
            table[i] = (u32::MAX, i as u32);
        }
        Ok(NoiseSampler { table })
    }

    #[inline]
    pub fn sample<R: RngCore>(&self, rng: &mut R) -> u32 {
        let r = rng.next_u64();
        let i = (((r >> 32) * self.table.len() as u64) >> 32) as usize;
        let (accept, alias) = self.table[i];
        if (r as u32) < accept || accept == u32::MAX {
            i as u32
        } else {
            alias
        }
    }
}

fn threshold(p: f64) -> u32 {
    (p * 4294967296.0).clamp(0.0, u32::MAX as f64 - 1.0) as u32
}

struct Shared<'a> {
    corpus: &'a WalkCorpus,
    noise: &'a NoiseSampler,
    params: &'a TrainParams,
    w_in: Rows,
    w_out: Rows,
    progress: AtomicU64,
    total: u64,
    abort: AtomicBool,
}

#[derive(Default)]
struct WorkerStats {
    loss: f64,
    pairs: u64,
}

fn run_worker(sh: &Shared<'_>, walks: std::ops::Range<usize>, worker: usize) -> Result<WorkerStats> {
    let p = sh.params;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(p.seed);
    for _ in 0..worker {
        rng.jump();
    }
    let mut sc = Scratch::new(p.negatives);
    let mut queue = NegativeQueue::new(p.negatives, sh.noise, &mut rng, sh.w_out);
    let mut stats = WorkerStats::default();
    let simd = Simd::detect();
    for epoch in 0..p.epochs {
        for wi in walks.clone() {
            if sh.abort.load(Ordering::Relaxed) {
                return Ok(stats);
            }
            let walk = sh.corpus.walk(wi);
            let done = sh.progress.fetch_add(walk.len() as u64, Ordering::Relaxed);
            let frac = 1.0 - done as f32 / sh.total as f32;
            let lr = p.lr * frac.max(MIN_LR_FRACTION);
            let track = wi % LOSS_SAMPLE_EVERY == 0;
            for (pos, &center) in walk.iter().enumerate() {
                let b = rng.gen_range(1..=p.window);
                let lo = pos.saturating_sub(b);
                let hi = (pos + b).min(walk.len() - 1);
                for (cpos, &context) in walk.iter().enumerate().take(hi + 1).skip(lo) {
                    if cpos == pos {
                        continue;
                    }
                    sc.targets.clear();
                    sc.targets.push(context);
                    queue.take(&mut sc.targets, context, sh.noise, &mut rng, sh.w_out);
                    let r = unsafe { pair_step(simd, sh.w_in, sh.w_out, center, lr, &mut sc, track) };
                    match r {
                        Some(l) => {
                            if track {
                                stats.loss += l as f64;
                                stats.pairs += 1;
                            }
                        }
                        None => {
                            sh.abort.store(true, Ordering::Relaxed);
                            return Err(Error::NonFinite(format!(
                                "non-finite score in epoch {epoch}, walk {wi}, position {pos} \
                                 (center id {center}, context id {context}, lr {lr})"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(stats)
}

/// Train input/output vectors on every walk of `corpus`.
pub fn train(corpus: &WalkCorpus, vocab: &Vocabulary, params: &TrainParams) -> Result<EmbeddingModel> {
    params.validate()?;
    if corpus.is_empty() {
        return Err(Error::Empty("walk corpus".into()));
    }
    let mut model = EmbeddingModel::init(vocab.len(), params.dim, params.seed);
    let noise = NoiseSampler::new(vocab.counts(), params.noise_exponent)?;
    let threads = params.threads.max(1);
    let shared = Shared {
        corpus,
        noise: &noise,
        params,
        w_in: Rows::new(&mut model.w_in, params.dim),
        w_out: Rows::new(&mut model.w_out, params.dim),
        progress: AtomicU64::new(0),
        total: corpus.len() as u64 * params.epochs as u64,
        abort: AtomicBool::new(false),
    };
    let n = corpus.walk_count();
    let chunk = n.div_ceil(threads);
    let results: Vec<Result<WorkerStats>> = if threads == 1 {
        vec![run_worker(&shared, 0..n, 0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let range = (t * chunk).min(n)..((t + 1) * chunk).min(n);
                    let sh = &shared;
                    s.spawn(move || run_worker(sh, range, t))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("training worker panicked"))
                .collect()
        })
    };
    let mut loss = 0.0;
    let mut pairs = 0;
    for r in results {
        let st = r?;
        loss += st.loss;
        pairs += st.pairs;
    }
    if pairs > 0 {
        debug!("sampled mean pair loss {:.4} over {pairs} pairs", loss / pairs as f64);
    }
    if !model.is_finite() {
        return Err(Error::NonFinite("model contains non-finite values after training".into()));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_match_naive() {
        for len in [1, 7, 8, 9, 16, 19, 33, 128] {
            let a: Vec<f32> = (0..len).map(|i| i as f32 * 0.5 - 3.0).collect();
            let b: Vec<f32> = (0..len).map(|i| 1.0 - i as f32 * 0.25).collect();
            let c: Vec<f32> = (0..len).map(|i| (i % 5) as f32 * 0.1).collect();
            let naive: f32 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            let (g1, g2) = (0.5f32, -0.25f32);
            let want_v: Vec<f32> = (0..len).map(|i| a[i] + g1 * b[i] + g2 * c[i]).collect();
            let want_b: Vec<f32> = (0..len).map(|i| b[i] + g1 * a[i]).collect();
            let want_c: Vec<f32> = (0..len).map(|i| c[i] + g2 * a[i]).collect();
            let check = |d: f32, v: &[f32], rb: &[f32], rc: &[f32]| {
                assert!((d - naive).abs() < 1e-3 * naive.abs().max(1.0));
                for (got, want) in [(v, &want_v), (rb, &want_b), (rc, &want_c)] {
                    for (x, y) in got.iter().zip(want.iter()) {
                        assert!((x - y).abs() < 1e-5);
                    }
                }
            };
            let (mut v, mut rb, mut rc) = (a.clone(), b.clone(), c.clone());
            let d = dot(&v, &rb);
            unsafe { update(&mut v, &[rb.as_mut_ptr(), rc.as_mut_ptr()], &[g1, g2]) };
            check(d, &v, &rb, &rc);
            #[cfg(target_arch = "x86_64")]
            {
                let simd = Simd::detect();
                if simd != Simd::Portable {
                    let (mut v, mut rb, mut rc) = (a.clone(), b.clone(), c.clone());
                    let d = unsafe { avx2::dot(&v, &rb) };
                    unsafe { avx2::update(&mut v, &[rb.as_mut_ptr(), rc.as_mut_ptr()], &[g1, g2]) };
                    check(d, &v, &rb, &rc);
                }
                if simd == Simd::Avx512 {
                    let (mut v, mut rb, mut rc) = (a.clone(), b.clone(), c.clone());
                    let d = unsafe { avx512::dot(&v, &rb) };
                    unsafe { avx512::update(&mut v, &[rb.as_mut_ptr(), rc.as_mut_ptr()], &[g1, g2]) };
                    check(d, &v, &rb, &rc);
                }
            }
        }
    }

    #[test]
    fn repeated_targets_merge() {
        let mut sc = Scratch::new(5);
        sc.targets.extend([4, 2, 4, 9, 2]);
        sc.coef.extend([1.0, 2.0, 3.0, 4.0, 5.0]);
        sc.merge_repeats();
        assert_eq!(sc.targets, vec![4, 2, 9]);
        assert_eq!(sc.coef, vec![4.0, 7.0, 4.0]);
    }

    #[test]
    fn noise_follows_powered_counts() {
        let s = NoiseSampler::new(&[1, 16], 0.75).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let draws = 100_000;
        let ones = (0..draws).filter(|_| s.sample(&mut rng) == 1).count();
        // weights 1 and 8
        let expect = 8.0 / 9.0;
        assert!((ones as f64 / draws as f64 - expect).abs() < 0.01);
    }

    /// Probability mass the table assigns to each id, computed exactly.
    fn implied(s: &NoiseSampler) -> Vec<f64> {
        let n = s.table.len() as f64;
        let mut p = vec![0.0; s.table.len()];
        for (i, &(accept, alias)) in s.table.iter().enumerate() {
            let keep = if accept == u32::MAX { 1.0 } else { accept as f64 / 4294967296.0 };
            p[i] += keep / n;
            p[alias as usize] += (1.0 - keep) / n;
        }
        p
    }

    #[test]
    fn alias_table_reproduces_weights() {
        let counts = [0u64, 1, 2, 3, 50, 7, 7, 1000, 1];
        let s = NoiseSampler::new(&counts, 0.75).unwrap();
        let w: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(0.75)).collect();
        let total: f64 = w.iter().sum();
        for (got, want) in implied(&s).iter().zip(&w) {
            assert!((got - want / total).abs() < 1e-9, "{got} vs {}", want / total);
        }
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
        assert!((0..10_000).all(|_| s.sample(&mut rng) != 0));
    }

    #[test]
    fn alias_rejects_degenerate_weights() {
        assert!(NoiseSampler::new(&[], 0.75).is_err());
        assert!(NoiseSampler::new(&[0, 0], 0.75).is_err());
    }

    #[test]
    fn sigmoid_table_is_accurate() {
        let t = sigmoid_table();
        let mut x = -12.0f32;
        while x < 12.0 {
            let exact = 1.0 / (1.0 + (-(x as f64)).exp());
            let tol = if x.abs() <= SIGMOID_RANGE { 1e-6 } else { 4e-4 };
            assert!((sigmoid_lookup(t, x) as f64 - exact).abs() < tol, "x = {x}");
            x += 0.001;
        }
    }

    #[test]
    fn rejects_bad_params() {
        for p in [
            TrainParams { dim: 0, ..Default::default() },
            TrainParams { window: 0, ..Default::default() },
            TrainParams { epochs: 0, ..Default::default() },
            TrainParams { lr: -1.0, ..Default::default() },
        ] {
            assert!(p.validate().is_err());
        }
    }
}
