//! Plain `src dst weight` edge lists.
//!
//! The first line is a header comment `# nodes <n> <undirected|directed>`;
//! undirected edges are written once with `src < dst`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::graph::WeightedGraph;

pub fn write_edge_list<W: Write>(graph: &WeightedGraph, mut out: W) -> std::io::Result<()> {
    let kind = if graph.is_directed() { "directed" } else { "undirected" };
    writeln!(out, "# nodes {} {kind}", graph.node_count())?;
    for e in graph.edges() {
        writeln!(out, "{} {} {}", e.src, e.dst, e.weight)?;
    }
    out.flush()
}

pub fn save_edge_list(graph: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list(graph, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

/// Node count, directedness and `(src, dst, weight)` triples.
pub type EdgeListParts = (usize, bool, Vec<(usize, usize, f64)>);

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<EdgeListParts, ParseError> {
    let mut header = None;
    let mut edges = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let k = k + 1;
        let line = line.map_err(|e| ParseError { line: k, kind: ParseErrorKind::MalformedEntry(e.to_string()) })?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix('#') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if let ["nodes", n, kind] = parts.as_slice() {
                let n = n.parse::<usize>().ok();
                let directed = match *kind {
                    "directed" => Some(true),
                    "undirected" => Some(false),
                    _ => None,
                };
                match (n, directed) {
                    (Some(n), Some(d)) => header = Some((n, d)),
                    _ => return Err(ParseError { line: k, kind: ParseErrorKind::MalformedHeader(text.into()) }),
                }
            }
            continue;
        }
        let bad = || ParseError { line: k, kind: ParseErrorKind::MalformedEntry(text.into()) };
        let parts: Vec<&str> = text.split_whitespace().collect();
        let [src, dst, w] = parts.as_slice() else { return Err(bad()) };
        let src = src.parse::<usize>().map_err(|_| bad())?;
        let dst = dst.parse::<usize>().map_err(|_| bad())?;
        let w = w.parse::<f64>().map_err(|_| bad())?;
        if !w.is_finite() {
            return Err(ParseError { line: k, kind: ParseErrorKind::NonFiniteValue(parts[2].into()) });
        }
        if let Some((n, _)) = header {
            if src >= n || dst >= n {
                return Err(ParseError {
                    line: k,
                    kind: ParseErrorKind::IndexOutOfBounds { row: src, col: dst, rows: n, cols: n },
                });
            }
        }
        edges.push((src, dst, w));
    }
    let (n, directed) = header.ok_or(ParseError {
        line: 1,
        kind: ParseErrorKind::MalformedHeader("missing `# nodes <n> <kind>` line".into()),
    })?;
    Ok((n, directed, edges))
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let (n, directed, edges) =
        parse_edge_list(BufReader::new(file)).map_err(|source| Error::Parse { path: path.to_path_buf(), source })?;
    WeightedGraph::new(n, directed, edges)
}
