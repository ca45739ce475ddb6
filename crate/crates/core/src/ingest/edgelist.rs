//! Tab-separated `child<TAB>parent` ontology files.
//!
//! `#` starts a comment line, a lone label declares an isolated node and
//! `!root <label>` pins the root.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::taxonomy::{RawGraph, SynsetId, Taxonomy};

use super::IngestError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeList {
    pub graph: RawGraph,
    /// Repeated `(child, parent)` lines, dropped from the graph.
    pub duplicate_edges: Vec<(SynsetId, SynsetId)>,
}

pub fn parse_edgelist(path: impl AsRef<Path>) -> Result<EdgeList, IngestError> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(IngestError::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| IngestError::Io { path: path.to_path_buf(), source: e })?;
    parse_edgelist_str(&text, path)
}

/// `path` is only used for error messages.
pub fn parse_edgelist_str(text: &str, path: &Path) -> Result<EdgeList, IngestError> {
    let mut out = EdgeList::default();
    let mut seen_nodes: BTreeSet<SynsetId> = BTreeSet::new();
    let mut seen_edges: BTreeSet<(SynsetId, SynsetId)> = BTreeSet::new();
    let mut byte = 0usize;

    let malformed = |line: usize, byte_offset: usize, reason: &str| IngestError::MalformedLine {
        path: path.to_path_buf(),
        line,
        byte_offset,
        reason: reason.to_owned(),
    };

    for (i, raw_line) in text.split_inclusive('\n').enumerate() {
        let start = byte;
        byte += raw_line.len();
        let line = raw_line.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("!root") {
            let label = rest.trim();
            if label.is_empty() || label.contains(char::is_whitespace) {
                return Err(malformed(i + 1, start, "`!root` takes exactly one label"));
            }
            if out.graph.root.is_some() {
                return Err(malformed(i + 1, start, "root pinned twice"));
            }
            out.graph.root = Some(SynsetId::from(label));
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.iter().any(|f| f.is_empty()) || fields.len() > 2 {
            return Err(malformed(i + 1, start, "expected `child<TAB>parent` or a single label"));
        }
        if fields.iter().any(|f| f.starts_with('#')) {
            return Err(malformed(i + 1, start, "labels may not start with `#`"));
        }
        for f in &fields {
            let id = SynsetId::from(*f);
            if seen_nodes.insert(id.clone()) {
                out.graph.nodes.push(crate::taxonomy::RawNode { id, ..Default::default() });
            }
        }
        if let [child, parent] = fields[..] {
            let edge = (SynsetId::from(child), SynsetId::from(parent));
            if seen_edges.insert(edge.clone()) {
                out.graph.edges.push(edge);
            } else {
                out.duplicate_edges.push(edge);
            }
        }
    }
    Ok(out)
}

/// Serializes a frozen taxonomy back into edge-list text. A synthetic root is
/// omitted, since re-freezing recreates it.
pub fn write_edgelist(t: &Taxonomy) -> String {
    let synthetic = t.id(t.root()).as_str() == crate::taxonomy::SYNTHETIC_ROOT;
    let mut out = String::new();
    if !synthetic {
        let _ = writeln!(out, "!root {}", t.id(t.root()));
    }
    for s in t.synsets() {
        if synthetic && &s.id == t.id(t.root()) {
            continue;
        }
        let parents: Vec<_> = s
            .parents
            .iter()
            .filter(|&&p| !(synthetic && p == t.root()))
            .collect();
        if parents.is_empty() {
            let _ = writeln!(out, "{}", s.id);
        }
        for &&p in &parents {
            let _ = writeln!(out, "{}\t{}", s.id, t.id(p));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<EdgeList, IngestError> {
        parse_edgelist_str(s, Path::new("<test>"))
    }

    #[test]
    fn two_lines_make_a_chain() {
        let el = parse("A\tR\nB\tA\n").unwrap();
        let t = Taxonomy::freeze(el.graph).unwrap();
        assert_eq!(t.id(t.root()).as_str(), "R");
        assert_eq!(t.depth(&"B".into()).unwrap(), 2);
    }

    #[test]
    fn comments_root_pin_and_isolated_nodes() {
        let el = parse("# toy\n!root R\nA\tR\n\nR\n").unwrap();
        assert_eq!(el.graph.root, Some("R".into()));
        assert_eq!(el.graph.nodes.len(), 2);
        assert_eq!(el.graph.edges.len(), 1);
    }

    #[test]
    fn duplicate_edges_are_dropped_with_warning() {
        let el = parse("A\tR\nA\tR\n").unwrap();
        assert_eq!(el.graph.edges.len(), 1);
        assert_eq!(el.duplicate_edges.len(), 1);
    }

    #[test]
    fn malformed_lines() {
        for bad in ["A\tB\tC\n", "A\t\n", "\tR\n", "!root\n", "A\t#x\n"] {
            match parse(bad) {
                Err(IngestError::MalformedLine { line, .. }) => assert_eq!(line, 1, "{bad:?}"),
                other => panic!("{bad:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn empty_file_fails_at_freeze() {
        let el = parse("# nothing here\n").unwrap();
        assert_eq!(
            Taxonomy::freeze(el.graph).unwrap_err(),
            crate::TaxonomyError::EmptyGraph
        );
    }

    #[test]
    fn write_then_parse_roundtrip() {
        let t = Taxonomy::freeze(parse("A\tR\nB\tA\nC\tR\nB\tC\n").unwrap().graph).unwrap();
        let again = Taxonomy::freeze(parse(&write_edgelist(&t)).unwrap().graph).unwrap();
        assert_eq!(t.edges(), again.edges());
    }
}
