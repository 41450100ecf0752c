use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Input and output vectors for every vocabulary id, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingModel {
    dim: usize,
    vocab_size: usize,
    pub(crate) w_in: Vec<f32>,
    pub(crate) w_out: Vec<f32>,
}

impl EmbeddingModel {
    /// Input rows uniform in `[-0.5/d, 0.5/d]`, output rows zero.
    pub fn init(vocab_size: usize, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        let half = 0.5 / dim as f32;
        // Rows are hit at random, so large matrices suffer TLB misses on
        // small pages.
        let mut w_in = vec![0.0; vocab_size * dim];
        let mut w_out = vec![0.0; vocab_size * dim];
        crate::resources::advise_huge_pages(&mut w_in);
        crate::resources::advise_huge_pages(&mut w_out);
        for x in &mut w_in {
            *x = rng.gen_range(-half..=half);
        }
        EmbeddingModel {
            dim,
            vocab_size,
            w_in,
            w_out,
        }
    }

    pub fn from_parts(dim: usize, w_in: Vec<f32>, w_out: Vec<f32>) -> Self {
        assert!(dim > 0 && w_in.len().is_multiple_of(dim) && w_in.len() == w_out.len());
        EmbeddingModel {
            dim,
            vocab_size: w_in.len() / dim,
            w_in,
            w_out,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn input_row(&self, id: u32) -> &[f32] {
        let s = id as usize * self.dim;
        &self.w_in[s..s + self.dim]
    }

    pub fn output_row(&self, id: u32) -> &[f32] {
        let s = id as usize * self.dim;
        &self.w_out[s..s + self.dim]
    }

    pub fn input_row_mut(&mut self, id: u32) -> &mut [f32] {
        let s = id as usize * self.dim;
        &mut self.w_in[s..s + self.dim]
    }

    pub fn output_row_mut(&mut self, id: u32) -> &mut [f32] {
        let s = id as usize * self.dim;
        &mut self.w_out[s..s + self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.w_in.iter().chain(&self.w_out).all(|x| x.is_finite())
    }

    pub fn heap_bytes(&self) -> usize {
        (self.w_in.capacity() + self.w_out.capacity()) * 4
    }
}
