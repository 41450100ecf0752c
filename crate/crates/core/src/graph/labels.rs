use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// Ground-truth classes for (a subset of) the nodes of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphLabels {
    class_of: Vec<Option<u32>>,
    class_names: Vec<String>,
}

impl GraphLabels {
    /// `class_of[v]` is the class of node `v`; class ids must index `class_names`.
    pub fn new(class_of: Vec<Option<u32>>, class_names: Vec<String>) -> Result<Self> {
        if let Some(c) = class_of
            .iter()
            .flatten()
            .find(|&&c| c as usize >= class_names.len())
        {
            return Err(Error::InvalidParameter(format!(
                "class id {c} has no name ({} classes)",
                class_names.len()
            )));
        }
        Ok(GraphLabels {
            class_of,
            class_names,
        })
    }

    /// Labels from plain integer classes, named by their decimal value.
    pub fn from_classes(classes: &[u32]) -> Self {
        let k = classes.iter().max().map_or(0, |&m| m + 1);
        GraphLabels {
            class_of: classes.iter().map(|&c| Some(c)).collect(),
            class_names: (0..k).map(|c| c.to_string()).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn class(&self, v: NodeId) -> Option<u32> {
        self.class_of.get(v as usize).copied().flatten()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    /// `(node, class)` for every labeled node, ascending by node.
    pub fn labeled(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| (v as NodeId, c)))
    }

    /// Number of labeled nodes per class.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.class_names.len()];
        for (_, c) in self.labeled() {
            h[c as usize] += 1;
        }
        h
    }

    /// Re-express these labels over another class vocabulary with the same
    /// names, e.g. to align two graphs before transfer.
    pub fn remap_to(&self, names: &[String]) -> Result<GraphLabels> {
        let index: HashMap<&str, u32> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i as u32))
            .collect();
        let mut class_of = Vec::with_capacity(self.class_of.len());
        for c in &self.class_of {
            class_of.push(match c {
                None => None,
                Some(c) => {
                    let name = &self.class_names[*c as usize];
                    Some(*index.get(name.as_str()).ok_or_else(|| {
                        Error::LabelMismatch(format!("class {name:?} missing from target"))
                    })?)
                }
            });
        }
        GraphLabels::new(class_of, names.to_vec())
    }

    /// Labels for the disjoint union produced by `merge_disjoint(a, b)`.
    pub fn concat(a: &GraphLabels, b: &GraphLabels) -> Result<GraphLabels> {
        if a.class_names != b.class_names {
            return Err(Error::LabelMismatch(format!(
                "{:?} vs {:?}",
                a.class_names, b.class_names
            )));
        }
        let mut class_of = a.class_of.clone();
        class_of.extend_from_slice(&b.class_of);
        GraphLabels::new(class_of, a.class_names.clone())
    }
}

/// Order class names numerically when they all parse as integers.
fn sorted_class_names(names: BTreeSet<String>) -> Vec<String> {
    let mut v: Vec<String> = names.into_iter().collect();
    if v.iter().all(|s| s.parse::<i64>().is_ok()) {
        v.sort_by_key(|s| s.parse::<i64>().unwrap());
    }
    v
}

/// Read a two-column `node label` file against `g`'s original identifiers.
/// An optional header line reading `node label` is skipped, as are `#`
/// comments. Nodes absent from the graph are an error.
pub fn load_labels(path: impl AsRef<Path>, g: &Graph) -> Result<GraphLabels> {
    load_labels_for(path, &g.names())
}

/// Like [`load_labels`], for nodes known only by their identifiers
/// (`names[v]` is node `v`).
pub fn load_labels_for(path: impl AsRef<Path>, names: &[String]) -> Result<GraphLabels> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_labels(BufReader::new(file), path, names)
}

pub fn parse_labels<R: BufRead>(reader: R, source: &Path, node_names: &[String]) -> Result<GraphLabels> {
    let index: HashMap<&str, NodeId> = node_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i as NodeId))
        .collect();
    let mut rows = Vec::new();
    let mut names = BTreeSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                path: source.to_path_buf(),
                line: i + 1,
                msg: format!("expected `node label`, found {} tokens", toks.len()),
            });
        }
        if rows.is_empty() && toks[0].eq_ignore_ascii_case("node") && toks[1].eq_ignore_ascii_case("label") {
            continue;
        }
        let v = *index.get(toks[0]).ok_or_else(|| Error::Parse {
            path: source.to_path_buf(),
            line: i + 1,
            msg: format!("node {:?} is not in the graph", toks[0]),
        })?;
        names.insert(toks[1].to_string());
        rows.push((v, toks[1].to_string()));
    }
    if rows.is_empty() {
        return Err(Error::Empty(source.display().to_string()));
    }
    let class_names = sorted_class_names(names);
    let class_index: HashMap<&str, u32> = class_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i as u32))
        .collect();
    let mut class_of = vec![None; node_names.len()];
    for (v, name) in &rows {
        class_of[*v as usize] = Some(class_index[name.as_str()]);
    }
    GraphLabels::new(class_of, class_names)
}

pub fn write_labels(labels: &GraphLabels, g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(w, "node label").map_err(io)?;
    for (v, c) in labels.labeled() {
        writeln!(w, "{} {}", g.name(v), labels.class_names[c as usize]).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    #[test]
    fn parse_with_header_and_numeric_order() {
        let g = parse_edge_list("a b\nb c\nc d".as_bytes(), Path::new("g")).unwrap();
        let l = parse_labels("node label\na 10\nb 2\nd 2\n".as_bytes(), Path::new("l"), &g.names()).unwrap();
        assert_eq!(l.class_names(), &["2".to_string(), "10".to_string()]);
        assert_eq!(l.class(0), Some(1));
        assert_eq!(l.class(1), Some(0));
        assert_eq!(l.class(2), None);
        assert_eq!(l.histogram(), vec![2, 1]);
    }

    #[test]
    fn unknown_node_is_an_error() {
        let g = parse_edge_list("a b".as_bytes(), Path::new("g")).unwrap();
        assert!(parse_labels("z 1".as_bytes(), Path::new("l"), &g.names()).is_err());
    }

    #[test]
    fn concat_requires_same_classes() {
        let a = GraphLabels::from_classes(&[0, 1]);
        let b = GraphLabels::from_classes(&[0, 1, 2]);
        assert!(GraphLabels::concat(&a, &b).is_err());
        let c = GraphLabels::concat(&a, &a).unwrap();
        assert_eq!(c.class(3), Some(1));
    }

    #[test]
    fn round_trip_file() {
        let g = parse_edge_list("a b\nb c".as_bytes(), Path::new("g")).unwrap();
        let l = GraphLabels::from_classes(&[1, 0, 1]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("labels.txt");
        write_labels(&l, &g, &p).unwrap();
        assert_eq!(load_labels(&p, &g).unwrap(), l);
    }
}
