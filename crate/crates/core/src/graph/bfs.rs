use std::collections::{HashMap, VecDeque};

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// Hop distances from an anchor to every node within a radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsResult {
    anchor: NodeId,
    radius: u32,
    order: Vec<(NodeId, u32)>,
    dist: HashMap<NodeId, u32>,
}

impl BfsResult {
    pub fn anchor(&self) -> NodeId {
        self.anchor
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Distance of `v` from the anchor, or `None` beyond the radius.
    pub fn dist(&self, v: NodeId) -> Option<u32> {
        self.dist.get(&v).copied()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.dist.contains_key(&v)
    }

    /// `(node, distance)` pairs in breadth-first order, anchor first.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.order.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn distances(&self) -> &HashMap<NodeId, u32> {
        &self.dist
    }
}

/// Breadth-first search from `anchor`, stopping at depth `k`.
pub fn bfs_within(g: &Graph, anchor: NodeId, k: u32) -> Result<BfsResult> {
    g.check(anchor)?;
    if k == 0 {
        return Err(Error::InvalidParameter("radius k must be at least 1".into()));
    }
    let mut dist = HashMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    dist.insert(anchor, 0);
    queue.push_back(anchor);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        order.push((v, d));
        if d == k {
            continue;
        }
        for &u in g.neighbors(v) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(u) {
                e.insert(d + 1);
                queue.push_back(u);
            }
        }
    }
    Ok(BfsResult {
        anchor,
        radius: k,
        order,
        dist,
    })
}

/// Reusable BFS state sized to one graph. Each run costs time proportional
/// to the explored region only; membership is tracked with epoch stamps so
/// nothing is cleared between anchors.
pub struct BfsScratch {
    stamp: Vec<u32>,
    dist: Vec<u8>,
    epoch: u32,
    visited: Vec<NodeId>,
}

impl BfsScratch {
    pub fn new(node_count: usize) -> Self {
        BfsScratch {
            stamp: vec![0; node_count],
            dist: vec![0; node_count],
            epoch: 0,
            visited: Vec::new(),
        }
    }

    /// Explore up to depth `k` (at most 255) from `anchor`.
    pub fn run(&mut self, g: &Graph, anchor: NodeId, k: u32) {
        debug_assert!(k <= u8::MAX as u32);
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.visited.clear();
        let a = anchor as usize;
        self.stamp[a] = self.epoch;
        self.dist[a] = 0;
        self.visited.push(anchor);
        let mut head = 0;
        while head < self.visited.len() {
            let v = self.visited[head];
            head += 1;
            let d = self.dist[v as usize];
            if d as u32 == k {
                continue;
            }
            for &u in g.neighbors(v) {
                let ui = u as usize;
                if self.stamp[ui] != self.epoch {
                    self.stamp[ui] = self.epoch;
                    self.dist[ui] = d + 1;
                    self.visited.push(u);
                }
            }
        }
    }

    #[inline]
    pub fn dist(&self, v: NodeId) -> Option<u32> {
        let i = v as usize;
        (self.stamp[i] == self.epoch).then(|| self.dist[i] as u32)
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        self.stamp[v as usize] == self.epoch
    }

    /// Nodes reached by the last run, in breadth-first order.
    pub fn visited(&self) -> &[NodeId] {
        &self.visited
    }

    pub fn heap_bytes(&self) -> usize {
        self.stamp.len() * 5 + self.visited.capacity() * 4
    }
}
