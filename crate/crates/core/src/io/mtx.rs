//! Matrix Market coordinate files.
//!
//! Supported headers: `%%MatrixMarket matrix coordinate {real|integer|pattern}
//! {general|symmetric}`. Indices are 1-based on disk and 0-based in memory.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::graph::{BipartiteProblem, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
}

/// Parsed coordinate file with 0-based entries in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixMarket {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    pub symmetry: Symmetry,
    pub entries: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadOptions {
    /// Replace negative values by their magnitude instead of rejecting them.
    pub absolute_values: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    /// Diagonal entries skipped while loading.
    pub self_loops_dropped: usize,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

pub fn parse_matrix_market<R: BufRead>(reader: R, options: &LoadOptions) -> Result<MatrixMarket, ParseError> {
    let mut lines = reader.lines().enumerate().map(|(k, l)| (k + 1, l));
    let io_err = |line, e: std::io::Error| err(line, ParseErrorKind::MalformedEntry(e.to_string()));

    let (line_no, header) = match lines.next() {
        Some((k, l)) => (k, l.map_err(|e| io_err(k, e))?),
        None => return Err(err(1, ParseErrorKind::MalformedHeader("empty file".into()))),
    };
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    let bad_header = |msg: &str| err(line_no, ParseErrorKind::MalformedHeader(msg.to_string()));
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(bad_header("expected `%%MatrixMarket matrix coordinate <field> <symmetry>`"));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(bad_header("only `matrix coordinate` files are supported"));
    }
    let field = match tokens[3].as_str() {
        "real" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(bad_header(&format!("unsupported field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(bad_header(&format!("unsupported symmetry `{other}`"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = line_no;
    for (k, line) in lines {
        let line = line.map_err(|e| io_err(k, e))?;
        last_line = k;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = text.split_whitespace().collect();
        let Some((rows, cols, declared)) = size else {
            let parsed: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[r, c, nnz]) => {
                    if symmetry == Symmetry::Symmetric && r != c {
                        return Err(err(k, ParseErrorKind::MalformedSize("symmetric matrix must be square".into())));
                    }
                    size = Some((r, c, nnz));
                    entries.reserve(nnz);
                }
                _ => return Err(err(k, ParseErrorKind::MalformedSize(text.to_string()))),
            }
            continue;
        };

        let expected = if field == Field::Pattern { 2 } else { 3 };
        if parts.len() != expected {
            return Err(err(k, ParseErrorKind::MalformedEntry(text.to_string())));
        }
        let index = |s: &str| s.parse::<usize>().map_err(|_| err(k, ParseErrorKind::MalformedEntry(text.to_string())));
        let (r, c) = (index(parts[0])?, index(parts[1])?);
        if r == 0 || c == 0 || r > rows || c > cols {
            return Err(err(k, ParseErrorKind::IndexOutOfBounds { row: r, col: c, rows, cols }));
        }
        let mut value = match field {
            Field::Pattern => 1.0,
            _ => parts[2].parse::<f64>().map_err(|_| err(k, ParseErrorKind::MalformedEntry(text.to_string())))?,
        };
        if !value.is_finite() {
            return Err(err(k, ParseErrorKind::NonFiniteValue(parts[2].to_string())));
        }
        if value < 0.0 {
            if !options.absolute_values {
                return Err(err(k, ParseErrorKind::NegativeValue(parts[2].to_string())));
            }
            value = -value;
        }
        let key = match symmetry {
            Symmetry::General => (r, c),
            Symmetry::Symmetric => (r.max(c), r.min(c)),
        };
        if !seen.insert(key) {
            return Err(err(k, ParseErrorKind::DuplicateEntry { row: r, col: c }));
        }
        if entries.len() == declared {
            return Err(err(k, ParseErrorKind::EntryCountMismatch { declared, found: declared + 1 }));
        }
        entries.push((r - 1, c - 1, value));
    }

    let Some((rows, cols, declared)) = size else {
        return Err(err(last_line, ParseErrorKind::MalformedSize("missing size line".into())));
    };
    if entries.len() != declared {
        return Err(err(last_line, ParseErrorKind::EntryCountMismatch { declared, found: entries.len() }));
    }
    Ok(MatrixMarket { rows, cols, field, symmetry, entries })
}

fn read(path: &Path, options: &LoadOptions) -> Result<MatrixMarket> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_market(BufReader::new(file), options)
        .map_err(|source| Error::Parse { path: path.to_path_buf(), source })
}

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    load_matrix_market_with(path, &LoadOptions::default())
}

/// Square file as a graph: symmetric files give an undirected graph, general
/// files a directed one. Diagonal entries are dropped and counted.
pub fn load_matrix_market_with(path: impl AsRef<Path>, options: &LoadOptions) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let mm = read(path, options)?;
    matrix_to_graph(&mm).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::invalid(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn matrix_to_graph(mm: &MatrixMarket) -> Result<LoadedGraph> {
    if mm.rows != mm.cols {
        return Err(Error::invalid(format!(
            "{}x{} matrix is not square; load it as a bipartite problem",
            mm.rows, mm.cols
        )));
    }
    let loops = mm.entries.iter().filter(|e| e.0 == e.1).count();
    let edges = mm.entries.iter().copied().filter(|e| e.0 != e.1);
    let graph = WeightedGraph::new(mm.rows, mm.symmetry == Symmetry::General, edges)?;
    Ok(LoadedGraph { graph, self_loops_dropped: loops })
}

/// Any coordinate file as buyers (rows) by objects (columns). Symmetric
/// files contribute both `(i, j)` and `(j, i)`.
pub fn load_matrix_market_bipartite(path: impl AsRef<Path>, options: &LoadOptions) -> Result<BipartiteProblem> {
    let mm = read(path.as_ref(), options)?;
    let mut edges = mm.entries.clone();
    if mm.symmetry == Symmetry::Symmetric {
        edges.extend(mm.entries.iter().filter(|e| e.0 != e.1).map(|&(r, c, w)| (c, r, w)));
    }
    BipartiteProblem::new(mm.rows, mm.cols, edges)
}

/// Writes `graph` as a real coordinate file: `symmetric` (lower triangle)
/// when undirected, `general` when directed.
pub fn write_matrix_market<W: Write>(graph: &WeightedGraph, mut out: W) -> std::io::Result<()> {
    let symmetry = if graph.is_directed() { "general" } else { "symmetric" };
    writeln!(out, "%%MatrixMarket matrix coordinate real {symmetry}")?;
    let n = graph.node_count();
    writeln!(out, "{n} {n} {}", graph.edge_count())?;
    for e in graph.edges() {
        let (r, c) = if graph.is_directed() { (e.src, e.dst) } else { (e.dst, e.src) };
        writeln!(out, "{} {} {}", r + 1, c + 1, e.weight)?;
    }
    out.flush()
}

pub fn write_matrix_market_bipartite<W: Write>(problem: &BipartiteProblem, mut out: W) -> std::io::Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(out, "{} {} {}", problem.buyer_count(), problem.object_count(), problem.edge_count())?;
    for e in problem.edges() {
        writeln!(out, "{} {} {}", e.buyer + 1, e.object + 1, e.weight)?;
    }
    out.flush()
}

pub fn save_matrix_market(graph: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_matrix_market(graph, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn save_matrix_market_bipartite(problem: &BipartiteProblem, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_matrix_market_bipartite(problem, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
