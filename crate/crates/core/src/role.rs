//! Role identification: rename every context node of an anchor's k-hop
//! subgraph by how it connects to the anchor.
//!
//! Two schemes are provided. `Sp` combines the discounted degrees of the
//! anchor and the context node with their hop distance. `Wl` replaces the
//! degrees by a one-round neighborhood aggregation: for each node, the
//! discounted histogram of its neighbors' distances from the anchor.
//! A third scheme, `Plain`, keeps original identifiers and serves as a
//! proximity-based control.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{bfs_within, BfsResult, BfsScratch, Graph, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Sp,
    Wl,
    Plain,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Sp => "sp",
            Variant::Wl => "wl",
            Variant::Plain => "plain",
        })
    }
}

/// `floor(log2(x + 1))`.
#[inline]
pub fn discount(x: u64) -> u32 {
    // log2(x + 1) floored is the bit length of x + 1, minus one.
    63 - (x + 1).leading_zeros()
}

const FIELD_SEP: char = '|';
const INNER_SEP: char = ',';

pub type Counts = SmallVec<[u8; 8]>;

/// Structural identifier of a context node relative to its anchor.
///
/// The text form is `SP|h(δ_anchor)|h(δ_node)|dist` or
/// `WL|h(x_anchor)|h(x_node)|dist` with vectors joined by commas.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoleToken {
    Sp {
        anchor_degree: u8,
        degree: u8,
        dist: u8,
    },
    Wl {
        anchor: Counts,
        node: Counts,
        dist: u8,
    },
}

impl RoleToken {
    pub fn dist(&self) -> u32 {
        match self {
            RoleToken::Sp { dist, .. } | RoleToken::Wl { dist, .. } => *dist as u32,
        }
    }

    pub fn variant(&self) -> Variant {
        match self {
            RoleToken::Sp { .. } => Variant::Sp,
            RoleToken::Wl { .. } => Variant::Wl,
        }
    }
}

fn join(xs: &[u8]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(&INNER_SEP.to_string())
}

impl fmt::Display for RoleToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleToken::Sp {
                anchor_degree,
                degree,
                dist,
            } => write!(f, "SP{FIELD_SEP}{anchor_degree}{FIELD_SEP}{degree}{FIELD_SEP}{dist}"),
            RoleToken::Wl { anchor, node, dist } => write!(
                f,
                "WL{FIELD_SEP}{}{FIELD_SEP}{}{FIELD_SEP}{dist}",
                join(anchor),
                join(node)
            ),
        }
    }
}

impl FromStr for RoleToken {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadToken(s.to_string());
        let fields: Vec<&str> = s.split(FIELD_SEP).collect();
        if fields.len() != 4 {
            return Err(bad());
        }
        let num = |t: &str| t.parse::<u8>().map_err(|_| bad());
        let vec = |t: &str| -> Result<Counts> { t.split(INNER_SEP).map(num).collect() };
        match fields[0] {
            "SP" => Ok(RoleToken::Sp {
                anchor_degree: num(fields[1])?,
                degree: num(fields[2])?,
                dist: num(fields[3])?,
            }),
            "WL" => {
                let anchor = vec(fields[1])?;
                let node = vec(fields[2])?;
                if anchor.len() != node.len() {
                    return Err(bad());
                }
                Ok(RoleToken::Wl {
                    anchor,
                    node,
                    dist: num(fields[3])?,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// One vocabulary item: an original node or a role identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Node(NodeId),
    Role(RoleToken),
}

impl Token {
    pub fn is_node(&self) -> bool {
        matches!(self, Token::Node(_))
    }

    /// Text form; nodes print as their original identifier in `g`.
    pub fn render(&self, g: &Graph) -> String {
        match self {
            Token::Node(v) => g.name(*v),
            Token::Role(r) => r.to_string(),
        }
    }
}

/// Count of `v_j`'s neighbors at each distance `0..=k` from the anchor.
/// Neighbors beyond the radius are not counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WlVector(pub Vec<u32>);

impl WlVector {
    pub fn discounted(&self) -> Counts {
        self.0.iter().map(|&x| discount(x as u64) as u8).collect()
    }
}

/// Distance lookup shared by the map-based and scratch-based BFS results.
pub(crate) trait Distances {
    fn dist(&self, v: NodeId) -> Option<u32>;
}

impl Distances for BfsResult {
    fn dist(&self, v: NodeId) -> Option<u32> {
        BfsResult::dist(self, v)
    }
}

impl Distances for BfsScratch {
    fn dist(&self, v: NodeId) -> Option<u32> {
        BfsScratch::dist(self, v)
    }
}

pub(crate) fn neighbor_distance_counts<D: Distances>(
    g: &Graph,
    d: &D,
    k: u32,
    j: NodeId,
) -> Vec<u32> {
    let mut x = vec![0u32; k as usize + 1];
    for &l in g.neighbors(j) {
        if let Some(n) = d.dist(l) {
            x[n as usize] += 1;
        }
    }
    x
}

/// Per-anchor constants of a role identification run.
pub(crate) enum AnchorKey {
    Sp(u8),
    Wl(Counts),
    Plain,
}

impl AnchorKey {
    pub(crate) fn new<D: Distances>(variant: Variant, g: &Graph, d: &D, k: u32, anchor: NodeId) -> Self {
        match variant {
            Variant::Sp => AnchorKey::Sp(discount(g.neighbors(anchor).len() as u64) as u8),
            Variant::Wl => AnchorKey::Wl(
                WlVector(neighbor_distance_counts(g, d, k, anchor)).discounted(),
            ),
            Variant::Plain => AnchorKey::Plain,
        }
    }

    /// Token for context node `j` at distance `dist`.
    pub(crate) fn token<D: Distances>(&self, g: &Graph, d: &D, k: u32, j: NodeId, dist: u32) -> Token {
        match self {
            AnchorKey::Sp(a) => Token::Role(RoleToken::Sp {
                anchor_degree: *a,
                degree: discount(g.neighbors(j).len() as u64) as u8,
                dist: dist as u8,
            }),
            AnchorKey::Wl(a) => Token::Role(RoleToken::Wl {
                anchor: a.clone(),
                node: WlVector(neighbor_distance_counts(g, d, k, j)).discounted(),
                dist: dist as u8,
            }),
            AnchorKey::Plain => Token::Node(j),
        }
    }
}

/// The identifier mapping of one anchor's k-hop subgraph.
#[derive(Clone, Debug)]
pub struct RoleContext {
    pub anchor: NodeId,
    pub variant: Variant,
    pub psi: HashMap<NodeId, Token>,
    pub bfs: BfsResult,
}

impl RoleContext {
    /// Token emitted when a walk visits `v`: the anchor keeps its original
    /// identifier, other subgraph nodes go through `psi`.
    pub fn emit(&self, v: NodeId) -> Option<Token> {
        if v == self.anchor {
            Some(Token::Node(v))
        } else {
            self.psi.get(&v).cloned()
        }
    }
}

fn identify(g: &Graph, bfs: &BfsResult, variant: Variant) -> RoleContext {
    let k = bfs.radius();
    let anchor = bfs.anchor();
    let key = AnchorKey::new(variant, g, bfs, k, anchor);
    let psi = bfs
        .iter()
        .filter(|&(v, _)| v != anchor)
        .map(|(v, d)| (v, key.token(g, bfs, k, v, d)))
        .collect();
    RoleContext {
        anchor,
        variant,
        psi,
        bfs: bfs.clone(),
    }
}

pub fn identify_sp(g: &Graph, bfs: &BfsResult) -> RoleContext {
    identify(g, bfs, Variant::Sp)
}

pub fn identify_wl(g: &Graph, bfs: &BfsResult) -> RoleContext {
    identify(g, bfs, Variant::Wl)
}

/// Identity relabeling for the `Plain` control.
pub fn identify_plain(g: &Graph, bfs: &BfsResult) -> RoleContext {
    identify(g, bfs, Variant::Plain)
}

pub fn identify_with(g: &Graph, bfs: &BfsResult, variant: Variant) -> RoleContext {
    identify(g, bfs, variant)
}

/// BFS from `anchor` followed by role identification.
pub fn role_context(g: &Graph, anchor: NodeId, k: u32, variant: Variant) -> Result<RoleContext> {
    let bfs = bfs_within(g, anchor, k)?;
    Ok(identify(g, &bfs, variant))
}

pub fn wl_vector(g: &Graph, bfs: &BfsResult, j: NodeId) -> Result<WlVector> {
    if !bfs.contains(j) {
        return Err(Error::NotInSubgraph(j as usize));
    }
    Ok(WlVector(neighbor_distance_counts(g, bfs, bfs.radius(), j)))
}

/// Write `anchor context token` lines for every context node of every
/// anchor, contexts in breadth-first order.
pub fn write_role_dump<W: Write>(
    g: &Graph,
    variant: Variant,
    k: u32,
    anchors: impl IntoIterator<Item = NodeId>,
    mut w: W,
) -> Result<()> {
    let io = |e| Error::io("role dump", e);
    for a in anchors {
        let ctx = role_context(g, a, k, variant)?;
        for (v, _) in ctx.bfs.iter().filter(|&(v, _)| v != a) {
            writeln!(w, "{} {} {}", g.name(a), g.name(v), ctx.psi[&v].render(g)).map_err(io)?;
        }
    }
    Ok(())
}
