//! Skip-gram with negative sampling over walk corpora.

mod io;
mod model;
mod sgns;
mod train;
mod vocab;

pub use io::{cosine, NodeEmbeddings};
pub use model::EmbeddingModel;
pub use sgns::{pair_loss, sgns_pair_loss, PairGradients, RowGradients};
pub use train::{apply_pair_update, train, NoiseSampler, TrainParams};
pub use vocab::{build_vocab, Vocabulary};
