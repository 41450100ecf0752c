use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use log::info;

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// Read a whitespace-separated edge list. Lines starting with `#` and blank
/// lines are skipped; node tokens are arbitrary strings and receive dense
/// indices in order of first appearance.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(BufReader::new(file), path)
}

pub fn parse_edge_list<R: BufRead>(reader: R, source: &Path) -> Result<Graph> {
    let mut index: HashMap<String, NodeId> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |tok: &str| -> NodeId {
        if let Some(&id) = index.get(tok) {
            return id;
        }
        let id = names.len() as NodeId;
        names.push(tok.to_string());
        index.insert(tok.to_string(), id);
        id
    };

    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                path: source.to_path_buf(),
                line: i + 1,
                msg: format!("expected 2 tokens, found {}", tokens.len()),
            });
        }
        let u = intern(tokens[0]);
        let v = intern(tokens[1]);
        edges.push((u, v));
    }
    if names.is_empty() {
        return Err(Error::Empty(source.display().to_string()));
    }

    let (g, stats) = Graph::from_edges_with_stats(names.len(), edges)?;
    if stats.self_loops + stats.duplicates > 0 {
        info!(
            "{}: dropped {} self-loops and {} duplicate edges",
            source.display(),
            stats.self_loops,
            stats.duplicates
        );
    }
    g.with_names(names)
}

/// Write `g` in the same format `load_edge_list` reads. Isolated nodes cannot
/// be represented and are lost.
pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", g.name(u), g.name(v)).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Graph> {
        parse_edge_list(s.as_bytes(), Path::new("mem"))
    }

    #[test]
    fn path_graph() {
        let g = parse("0 1\n1 2").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.neighbors(2), &[1]);
    }

    #[test]
    fn duplicates_and_self_loops_dropped() {
        let g = parse("a b\nb a\na a").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn comments_skipped() {
        let g = parse("x y\n# comment\ny z").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.name(2), "z");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match parse("a b\nc\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("a b c"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse(""), Err(Error::Empty(_))));
        assert!(matches!(parse("# only a comment\n"), Err(Error::Empty(_))));
    }

    #[test]
    fn write_then_load() {
        let g = parse("a b\nb c\nc a\nc d").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.edges");
        write_edge_list(&g, &p).unwrap();
        let h = load_edge_list(&p).unwrap();
        assert_eq!(g, h);
    }
}
