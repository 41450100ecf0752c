//! Undirected simple graphs in compressed adjacency form.
//!
//! Node indices are dense `u32`s assigned at construction. Loaded graphs keep
//! the original string identifiers of their nodes for output.

mod bfs;
pub mod generate;
mod io;
mod labels;

use std::collections::HashMap;

pub use bfs::{bfs_within, BfsResult, BfsScratch};
pub use io::{load_edge_list, parse_edge_list, write_edge_list};
pub use labels::{load_labels, load_labels_for, parse_labels, write_labels, GraphLabels};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Immutable undirected graph without self-loops or parallel edges.
///
/// Neighbor lists are sorted ascending. The structure is `Sync` and is shared
/// by reference across sampling workers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    names: Option<Vec<String>>,
}

/// What was discarded while building a graph from raw edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CleanStats {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    /// Build a graph on `node_count` nodes. Edges may appear in either
    /// orientation and more than once; self-loops are dropped.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges_with_stats(node_count, edges).map(|(g, _)| g)
    }

    pub fn from_edges_with_stats<I>(node_count: usize, edges: I) -> Result<(Graph, CleanStats)>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if node_count > NodeId::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "{node_count} nodes exceed the index range"
            )));
        }
        let mut stats = CleanStats::default();
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x as usize >= node_count {
                    return Err(Error::NodeOutOfRange {
                        index: x as usize,
                        node_count,
                    });
                }
            }
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            pairs.push((u, v));
            pairs.push((v, u));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        stats.duplicates = (before - pairs.len()) / 2;

        let mut offsets = vec![0usize; node_count + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.into_iter().map(|(_, v)| v).collect();
        Ok((
            Graph {
                offsets,
                targets,
                names: None,
            },
            stats,
        ))
    }

    /// Attach original identifiers, one per node.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Graph> {
        if names.len() != self.node_count() {
            return Err(Error::InvalidParameter(format!(
                "{} names for {} nodes",
                names.len(),
                self.node_count()
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn empty() -> Graph {
        Graph {
            offsets: vec![0],
            targets: Vec::new(),
            names: None,
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbors of `v`. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.check(v)?;
        Ok(self.neighbors(v).len())
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        (u as usize) < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub(crate) fn check(&self, v: NodeId) -> Result<()> {
        if (v as usize) < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                index: v as usize,
                node_count: self.node_count(),
            })
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.node_count() as NodeId
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    /// Original identifier of `v`, or its index when the graph carries none.
    pub fn name(&self, v: NodeId) -> String {
        match &self.names {
            Some(names) => names[v as usize].clone(),
            None => v.to_string(),
        }
    }

    pub fn has_names(&self) -> bool {
        self.names.is_some()
    }

    /// Original identifiers of all nodes, by index.
    pub fn names(&self) -> Vec<String> {
        self.nodes().map(|v| self.name(v)).collect()
    }

    /// Mapping from original identifier to dense index.
    pub fn label_map(&self) -> HashMap<String, NodeId> {
        self.nodes().map(|v| (self.name(v), v)).collect()
    }

    /// Approximate heap footprint in bytes.
    pub fn heap_bytes(&self) -> usize {
        self.offsets.len() * std::mem::size_of::<usize>()
            + self.targets.len() * std::mem::size_of::<NodeId>()
            + self
                .names
                .as_ref()
                .map_or(0, |n| n.iter().map(|s| s.len() + 24).sum())
    }
}

/// Disjoint union of two graphs. Nodes of `b` are shifted by the returned
/// offset, which equals `a.node_count()`. Names are kept when both inputs
/// carry them; otherwise names become the union's indices.
pub fn merge_disjoint(a: &Graph, b: &Graph) -> (Graph, usize) {
    let offset = a.node_count();
    let n = offset + b.node_count();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.extend_from_slice(&a.offsets);
    let base = a.targets.len();
    offsets.extend(b.offsets[1..].iter().map(|o| o + base));
    let mut targets = Vec::with_capacity(a.targets.len() + b.targets.len());
    targets.extend_from_slice(&a.targets);
    targets.extend(b.targets.iter().map(|&v| v + offset as NodeId));
    let names = match (&a.names, &b.names) {
        (Some(x), Some(y)) => Some(x.iter().chain(y.iter()).cloned().collect()),
        _ => None,
    };
    (
        Graph {
            offsets,
            targets,
            names,
        },
        offset,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> Graph {
        Graph::from_edges(n as usize, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn builds_symmetric_sorted_adjacency() {
        let g = Graph::from_edges(4, [(2, 0), (0, 1), (3, 0), (1, 0), (2, 2)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.neighbors(1), &[0]);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn clean_stats_count_dropped_edges() {
        let (_, stats) =
            Graph::from_edges_with_stats(3, [(0, 1), (1, 0), (1, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(stats.self_loops, 1);
        assert_eq!(stats.duplicates, 2);
    }

    #[test]
    fn degrees() {
        let star = Graph::from_edges(7, (1..6).map(|i| (0, i))).unwrap();
        assert_eq!(star.degree(0).unwrap(), 5);
        assert_eq!(star.degree(3).unwrap(), 1);
        assert_eq!(star.degree(6).unwrap(), 0);
        assert!(matches!(
            star.degree(7),
            Err(Error::NodeOutOfRange { index: 7, .. })
        ));
    }

    #[test]
    fn endpoint_out_of_range_is_rejected() {
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn merge_two_triangles() {
        let t = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let (m, off) = merge_disjoint(&t, &t);
        assert_eq!(off, 3);
        assert_eq!(m.node_count(), 6);
        assert_eq!(m.edge_count(), 6);
        assert_eq!(m.neighbors(4), &[3, 5]);
        assert!(!m.has_edge(0, 3));
        for v in m.nodes() {
            assert_eq!(m.degree(v).unwrap(), 2);
        }
    }

    #[test]
    fn merge_with_empty_is_identity() {
        let g = path(5);
        let (m, off) = merge_disjoint(&g, &Graph::empty());
        assert_eq!(off, 5);
        assert_eq!(m, g);
        let (m, off) = merge_disjoint(&Graph::empty(), &g);
        assert_eq!(off, 0);
        assert_eq!(m, g);
    }

    #[test]
    fn merge_keeps_names() {
        let a = path(2).with_names(vec!["a".into(), "b".into()]).unwrap();
        let b = path(2).with_names(vec!["c".into(), "d".into()]).unwrap();
        let (m, _) = merge_disjoint(&a, &b);
        assert_eq!(m.name(3), "d");
        assert_eq!(m.label_map()["c"], 2);
    }
}
