//! Random walks on role-relabeled subgraphs.
//!
//! Walks move over the original topology of the anchor's k-hop subgraph and
//! are relabeled on emission: the anchor yields its own identifier and every
//! other node yields its role token. Each anchor owns an RNG stream derived
//! from the global seed and its index, so a corpus is the same no matter how
//! many workers produce it.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Graph, NodeId};
use crate::role::{AnchorKey, RoleContext, RoleToken, Token, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkParams {
    /// Neighborhood radius.
    pub k: u32,
    /// Walks per node.
    pub gamma: usize,
    /// Walk length in nodes.
    pub lambda: usize,
    pub seed: u64,
}

impl Default for WalkParams {
    fn default() -> Self {
        WalkParams {
            k: 4,
            gamma: 80,
            lambda: 10,
            seed: 0,
        }
    }
}

impl WalkParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > u8::MAX as u32 {
            return Err(Error::InvalidParameter(format!("k = {} not in 1..=255", self.k)));
        }
        if self.gamma == 0 {
            return Err(Error::InvalidParameter("gamma must be at least 1".into()));
        }
        if self.lambda == 0 {
            return Err(Error::InvalidParameter("lambda must be at least 1".into()));
        }
        Ok(())
    }
}

/// The RNG stream owned by `anchor` under `seed`.
pub fn anchor_rng(seed: u64, anchor: NodeId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(anchor as u64);
    rng
}

/// Simulate `gamma` uniform walks of up to `lambda` nodes from `anchor`,
/// moving only between nodes accepted by `member`. A walk stops early only
/// at a node without member neighbors.
fn simulate<R, M, F>(
    g: &Graph,
    anchor: NodeId,
    member: M,
    gamma: usize,
    lambda: usize,
    rng: &mut R,
    mut on_walk: F,
) where
    R: Rng,
    M: Fn(NodeId) -> bool,
    F: FnMut(&[NodeId]),
{
    let mut walk = Vec::with_capacity(lambda);
    let mut cands = Vec::new();
    for _ in 0..gamma {
        walk.clear();
        walk.push(anchor);
        let mut cur = anchor;
        while walk.len() < lambda {
            cands.clear();
            cands.extend(g.neighbors(cur).iter().copied().filter(|&u| member(u)));
            if cands.is_empty() {
                break;
            }
            cur = cands[rng.gen_range(0..cands.len())];
            walk.push(cur);
        }
        on_walk(&walk);
    }
}

/// Walks rooted at `ctx.anchor`, emitted through the context's mapping.
pub fn walk_anchor<R: Rng>(
    g: &Graph,
    ctx: &RoleContext,
    params: &WalkParams,
    rng: &mut R,
) -> Vec<Vec<Token>> {
    let mut out = Vec::with_capacity(params.gamma);
    simulate(
        g,
        ctx.anchor,
        |u| ctx.bfs.contains(u),
        params.gamma,
        params.lambda,
        rng,
        |w| {
            out.push(
                w.iter()
                    .map(|&v| ctx.emit(v).expect("walk left the subgraph"))
                    .collect(),
            )
        },
    );
    out
}

/// Same walks as [`walk_anchor`] but as raw node sequences, for tests that
/// need to check moves against the subgraph.
pub fn walk_anchor_nodes<R: Rng>(
    g: &Graph,
    ctx: &RoleContext,
    params: &WalkParams,
    rng: &mut R,
) -> Vec<Vec<NodeId>> {
    let mut out = Vec::with_capacity(params.gamma);
    simulate(
        g,
        ctx.anchor,
        |u| ctx.bfs.contains(u),
        params.gamma,
        params.lambda,
        rng,
        |w| out.push(w.to_vec()),
    );
    out
}

/// All walks of a run. Token ids index [`WalkCorpus::tokens`], which is
/// sorted; for corpora built from a graph, ids `0..n` are the graph's nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkCorpus {
    tokens: Vec<Token>,
    flat: Vec<u32>,
    offsets: Vec<usize>,
}

impl WalkCorpus {
    /// Build a corpus from explicit token sequences.
    pub fn from_walks(walks: &[Vec<Token>]) -> WalkCorpus {
        let set: BTreeSet<&Token> = walks.iter().flatten().collect();
        let tokens: Vec<Token> = set.into_iter().cloned().collect();
        let index: HashMap<&Token, u32> = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t, i as u32))
            .collect();
        let mut flat = Vec::new();
        let mut offsets = vec![0];
        for w in walks {
            flat.extend(w.iter().map(|t| index[t]));
            offsets.push(flat.len());
        }
        WalkCorpus {
            tokens,
            flat,
            offsets,
        }
    }

    pub fn walk_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn walk(&self, i: usize) -> &[u32] {
        &self.flat[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn walks(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        (0..self.walk_count()).map(move |i| self.walk(i))
    }

    /// Total number of emitted tokens.
    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    /// The distinct tokens, indexed by id.
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn token(&self, id: u32) -> &Token {
        &self.tokens[id as usize]
    }

    /// Frequency of each token id.
    pub fn counts(&self) -> Vec<u64> {
        let mut c = vec![0u64; self.tokens.len()];
        for &t in &self.flat {
            c[t as usize] += 1;
        }
        c
    }

    /// Walk `i` as tokens.
    pub fn walk_tokens(&self, i: usize) -> Vec<Token> {
        self.walk(i).iter().map(|&t| self.token(t).clone()).collect()
    }

    /// One walk per line, tokens separated by single spaces.
    pub fn write_text<W: Write>(&self, g: &Graph, mut w: W) -> Result<()> {
        let rendered: Vec<String> = self.tokens.iter().map(|t| t.render(g)).collect();
        let io = |e| Error::io("corpus", e);
        for walk in self.walks() {
            let mut first = true;
            for &t in walk {
                if !first {
                    w.write_all(b" ").map_err(io)?;
                }
                first = false;
                w.write_all(rendered[t as usize].as_bytes()).map_err(io)?;
            }
            w.write_all(b"\n").map_err(io)?;
        }
        w.flush().map_err(io)
    }

    pub fn heap_bytes(&self) -> usize {
        self.flat.capacity() * 4
            + self.offsets.capacity() * std::mem::size_of::<usize>()
            + self.tokens.capacity() * std::mem::size_of::<Token>()
    }
}

const ROLE_BIT: u32 = 1 << 31;
const BLOCK: usize = 64;

struct Block {
    flat: Vec<u32>,
    lens: Vec<u32>,
    roles: Vec<RoleToken>,
}

fn walk_block(
    g: &Graph,
    variant: Variant,
    params: &WalkParams,
    anchors: std::ops::Range<usize>,
    scratch: &mut BfsScratch,
) -> Block {
    let mut block = Block {
        flat: Vec::with_capacity(anchors.len() * params.gamma * params.lambda),
        lens: Vec::with_capacity(anchors.len() * params.gamma),
        roles: Vec::new(),
    };
    let mut interner: HashMap<RoleToken, u32> = HashMap::new();
    let mut cache: HashMap<NodeId, u32> = HashMap::new();
    let k = params.k;
    for a in anchors {
        let a = a as NodeId;
        scratch.run(g, a, k);
        let key = AnchorKey::new(variant, g, scratch, k, a);
        cache.clear();
        let mut rng = anchor_rng(params.seed, a);
        let scratch: &BfsScratch = scratch;
        let mut code = |v: NodeId| -> u32 {
            if v == a {
                return v;
            }
            *cache.entry(v).or_insert_with(|| {
                let dist = scratch.dist(v).expect("walk left the subgraph");
                match key.token(g, scratch, k, v, dist) {
                    Token::Node(u) => u,
                    Token::Role(r) => {
                        let next = block.roles.len() as u32;
                        let id = *interner.entry(r.clone()).or_insert_with(|| {
                            block.roles.push(r);
                            next
                        });
                        id | ROLE_BIT
                    }
                }
            })
        };
        let mut flat = std::mem::take(&mut block.flat);
        simulate(
            g,
            a,
            |u| scratch.contains(u),
            params.gamma,
            params.lambda,
            &mut rng,
            |w| {
                flat.extend(w.iter().map(|&v| code(v)));
                block.lens.push(w.len() as u32);
            },
        );
        block.flat = flat;
    }
    block
}

/// Walks for every anchor of `g`, in anchor order. The result does not
/// depend on `threads`.
pub fn build_corpus(
    g: &Graph,
    variant: Variant,
    params: &WalkParams,
    threads: usize,
) -> Result<WalkCorpus> {
    params.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Empty("graph".into()));
    }
    let ranges: Vec<std::ops::Range<usize>> = (0..n)
        .step_by(BLOCK)
        .map(|s| s..(s + BLOCK).min(n))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let blocks: Vec<Block> = pool.install(|| {
        ranges
            .into_par_iter()
            .map_init(
                || BfsScratch::new(n),
                |scratch, r| walk_block(g, variant, params, r, scratch),
            )
            .collect()
    });

    let roles: BTreeSet<&RoleToken> = blocks.iter().flat_map(|b| b.roles.iter()).collect();
    let roles: Vec<RoleToken> = roles.into_iter().cloned().collect();
    let role_id: HashMap<&RoleToken, u32> = roles
        .iter()
        .enumerate()
        .map(|(i, r)| (r, (n + i) as u32))
        .collect();
    let remaps: Vec<Vec<u32>> = blocks
        .iter()
        .map(|b| b.roles.iter().map(|r| role_id[r]).collect())
        .collect();
    drop(role_id);

    let total: usize = blocks.iter().map(|b| b.flat.len()).sum();
    let walks: usize = blocks.iter().map(|b| b.lens.len()).sum();
    let mut flat = Vec::with_capacity(total);
    let mut offsets = Vec::with_capacity(walks + 1);
    offsets.push(0);
    for (block, remap) in blocks.into_iter().zip(remaps) {
        flat.extend(block.flat.iter().map(|&c| {
            if c & ROLE_BIT != 0 {
                remap[(c & !ROLE_BIT) as usize]
            } else {
                c
            }
        }));
        let mut end = *offsets.last().unwrap();
        for len in block.lens {
            end += len as usize;
            offsets.push(end);
        }
    }

    let mut tokens: Vec<Token> = (0..n as NodeId).map(Token::Node).collect();
    tokens.extend(roles.into_iter().map(Token::Role));
    Ok(WalkCorpus {
        tokens,
        flat,
        offsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use crate::role::role_context;

    #[test]
    fn isolated_anchor_walks_are_single_tokens() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let ctx = role_context(&g, 2, 2, Variant::Sp).unwrap();
        let p = WalkParams {
            gamma: 5,
            ..WalkParams::default()
        };
        let walks = walk_anchor(&g, &ctx, &p, &mut anchor_rng(1, 2));
        assert_eq!(walks, vec![vec![Token::Node(2)]; 5]);
    }

    #[test]
    fn single_edge_alternates() {
        let g = generate::path(2);
        let ctx = role_context(&g, 0, 1, Variant::Sp).unwrap();
        let p = WalkParams {
            k: 1,
            gamma: 4,
            lambda: 3,
            seed: 0,
        };
        let b = ctx.psi[&1].clone();
        for w in walk_anchor(&g, &ctx, &p, &mut anchor_rng(0, 0)) {
            assert_eq!(w, vec![Token::Node(0), b.clone(), Token::Node(0)]);
        }
    }

    #[test]
    fn three_node_path_walk_count() {
        let g = generate::path(3);
        let p = WalkParams {
            gamma: 2,
            ..WalkParams::default()
        };
        let c = build_corpus(&g, Variant::Sp, &p, 1).unwrap();
        assert_eq!(c.walk_count(), 6);
        for (i, w) in c.walks().enumerate() {
            assert_eq!(w[0], (i / 2) as u32);
            assert_eq!(w.len(), 10);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let g = generate::path(3);
        for p in [
            WalkParams { k: 0, ..Default::default() },
            WalkParams { gamma: 0, ..Default::default() },
            WalkParams { lambda: 0, ..Default::default() },
        ] {
            assert!(build_corpus(&g, Variant::Sp, &p, 1).is_err());
        }
    }

    #[test]
    fn from_walks_sorts_tokens() {
        let c = WalkCorpus::from_walks(&[vec![Token::Node(3), Token::Node(1)]]);
        assert_eq!(c.tokens(), &[Token::Node(1), Token::Node(3)]);
        assert_eq!(c.walk(0), &[1, 0]);
    }

    #[test]
    fn text_output() {
        let g = generate::path(2);
        let p = WalkParams {
            k: 1,
            gamma: 1,
            lambda: 3,
            seed: 0,
        };
        let c = build_corpus(&g, Variant::Sp, &p, 1).unwrap();
        let mut out = Vec::new();
        c.write_text(&g, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "0 SP|1|1|1 0\n1 SP|1|1|1 1\n"
        );
    }
}
