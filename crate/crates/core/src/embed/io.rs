use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::model::EmbeddingModel;
use super::vocab::Vocabulary;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::role::Token;

/// One vector per original node, in node-index order.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeEmbeddings {
    names: Vec<String>,
    dim: usize,
    data: Vec<f32>,
}

impl NodeEmbeddings {
    pub fn new(names: Vec<String>, dim: usize, data: Vec<f32>) -> Result<Self> {
        if dim == 0 || data.len() != names.len() * dim {
            return Err(Error::InvalidParameter(format!(
                "{} values for {} rows of dimension {dim}",
                data.len(),
                names.len()
            )));
        }
        Ok(NodeEmbeddings { names, dim, data })
    }

    /// Input vectors of the original-node tokens. Role tokens are dropped.
    pub fn from_model(model: &EmbeddingModel, vocab: &Vocabulary, g: &Graph) -> Result<Self> {
        let dim = model.dim();
        let mut data = Vec::with_capacity(g.node_count() * dim);
        for v in g.nodes() {
            let id = vocab.id(&Token::Node(v)).ok_or_else(|| {
                Error::InvalidParameter(format!("node {} never appeared in a walk", g.name(v)))
            })?;
            data.extend_from_slice(model.input_row(id));
        }
        NodeEmbeddings::new(g.names(), dim, data)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn row(&self, v: NodeId) -> &[f32] {
        let s = v as usize * self.dim;
        &self.data[s..s + self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f32]> {
        self.data.chunks_exact(self.dim)
    }

    /// Rows reordered to follow `g`'s node indices, matching by identifier.
    pub fn aligned_to(&self, g: &Graph) -> Result<NodeEmbeddings> {
        let index: HashMap<&str, usize> = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut data = Vec::with_capacity(g.node_count() * self.dim);
        for v in g.nodes() {
            let name = g.name(v);
            let &i = index.get(name.as_str()).ok_or_else(|| {
                Error::LabelMismatch(format!("no embedding for node {name:?}"))
            })?;
            data.extend_from_slice(self.row(i as NodeId));
        }
        NodeEmbeddings::new(g.names(), self.dim, data)
    }

    /// Header `<rows> <dim>`, then `name v1 ... vd` per row with six
    /// decimals.
    pub fn write_word2vec<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e| Error::io("embeddings", e);
        writeln!(w, "{} {}", self.len(), self.dim).map_err(io)?;
        for (name, row) in self.names.iter().zip(self.rows()) {
            w.write_all(name.as_bytes()).map_err(io)?;
            for x in row {
                write!(w, " {x:.6}").map_err(io)?;
            }
            w.write_all(b"\n").map_err(io)?;
        }
        w.flush().map_err(io)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_word2vec(BufWriter::new(file))
            .map_err(|e| match e {
                Error::Io { source, .. } => Error::io(path, source),
                other => other,
            })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_word2vec(BufReader::new(file), path)
    }

    pub fn read_word2vec<R: BufRead>(reader: R, source: &Path) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse {
            path: source.to_path_buf(),
            line,
            msg,
        };
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Empty(source.display().to_string()))?
            .map_err(|e| Error::io(source, e))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| perr(1, format!("bad header: {e}")))?;
        if h.len() != 2 || h[1] == 0 {
            return Err(perr(1, format!("expected `<rows> <dim>`, got {header:?}")));
        }
        let (rows, dim) = (h[0], h[1]);
        let mut names = Vec::with_capacity(rows);
        let mut data = Vec::with_capacity(rows * dim);
        for (i, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(source, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let name = toks.next().unwrap().to_string();
            let before = data.len();
            for t in toks {
                data.push(
                    t.parse::<f32>()
                        .map_err(|e| perr(i + 2, format!("bad value {t:?}: {e}")))?,
                );
            }
            if data.len() - before != dim {
                return Err(perr(i + 2, format!("expected {dim} values, found {}", data.len() - before)));
            }
            names.push(name);
        }
        if names.len() != rows {
            return Err(perr(1, format!("header promises {rows} rows, found {}", names.len())));
        }
        NodeEmbeddings::new(names, dim, data)
    }
}

/// Cosine similarity; zero when either vector is zero.
pub fn cosine(a: &[f32], b: &[f32]) -> f64 {
    let (mut ab, mut aa, mut bb) = (0f64, 0f64, 0f64);
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (x as f64, y as f64);
        ab += x * y;
        aa += x * x;
        bb += y * y;
    }
    if aa == 0.0 || bb == 0.0 {
        0.0
    } else {
        ab / (aa.sqrt() * bb.sqrt())
    }
}
