//! Seeded instance generators and the Gaussian-kernel adjacency builder.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, so instances depend only on `(n, seed)`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::graph::{BipartiteProblem, WeightedGraph};

/// Point cloud stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("feature matrix needs at least one row and column"));
        }
        if values.len() != rows * cols {
            return Err(Error::invalid(format!("{} values for a {rows}x{cols} matrix", values.len())));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite feature value {v}")));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complete `n/2 x n/2` bipartite problem with U(0,1) weights, drawn buyer by
/// buyer in ascending object order.
pub fn gen_uniform_bipartite(n: usize, seed: u64) -> Result<BipartiteProblem> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("bipartite generator needs an even n >= 2, got {n}")));
    }
    let half = n / 2;
    let mut rng = rng(seed);
    let mut edges = Vec::with_capacity(half * half);
    for i in 0..half {
        for j in 0..half {
            edges.push((i, j, rng.random::<f64>()));
        }
    }
    BipartiteProblem::new(half, half, edges)
}

/// Complete undirected graph on `n` nodes with U(0,1) weights, drawn for
/// `i < j` in row-major order.
pub fn gen_uniform_unipartite(n: usize, seed: u64) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::invalid(format!("unipartite generator needs n >= 2, got {n}")));
    }
    let mut rng = rng(seed);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, rng.random::<f64>()));
        }
    }
    WeightedGraph::new(n, false, edges)
}

/// Two interleaved half circles in the plane with Gaussian noise: `n / 2`
/// points on the upper moon, the rest on the lower one.
pub fn gen_two_moons(n: usize, noise: f64, seed: u64) -> Result<FeatureMatrix> {
    if n < 2 {
        return Err(Error::invalid("two moons needs at least two points"));
    }
    let normal = Normal::new(0.0, noise).map_err(|e| Error::invalid(format!("noise: {e}")))?;
    let mut rng = rng(seed);
    let outer = n / 2;
    let inner = n - outer;
    let angle = |k: usize, count: usize| {
        if count > 1 {
            std::f64::consts::PI * k as f64 / (count - 1) as f64
        } else {
            0.0
        }
    };
    let mut values = Vec::with_capacity(2 * n);
    for k in 0..outer {
        let t = angle(k, outer);
        values.extend([t.cos(), t.sin()]);
    }
    for k in 0..inner {
        let t = angle(k, inner);
        values.extend([1.0 - t.cos(), 0.5 - t.sin()]);
    }
    for v in &mut values {
        *v += normal.sample(&mut rng);
    }
    FeatureMatrix::new(n, 2, values)
}

/// Complete graph with `w_ij = exp(-|x_i - x_j|^2 / (2 bandwidth^2))`.
/// Weights that underflow are raised to the smallest positive normal double
/// so every pair stays an edge.
pub fn build_gaussian_adjacency(points: &FeatureMatrix, bandwidth: f64) -> Result<WeightedGraph> {
    if points.rows() < 2 {
        return Err(Error::invalid("kernel adjacency needs at least two points"));
    }
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::invalid(format!("bandwidth must be positive, got {bandwidth}")));
    }
    let n = points.rows();
    let scale = 2.0 * bandwidth * bandwidth;
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d2: f64 = points.row(i).iter().zip(points.row(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            if !d2.is_finite() {
                return Err(Error::invalid(format!("non-finite distance between points {i} and {j}")));
            }
            edges.push((i, j, (-d2 / scale).exp().max(f64::MIN_POSITIVE)));
        }
    }
    WeightedGraph::new(n, false, edges)
}

/// One whitespace-separated row per point.
pub fn save_points(points: &FeatureMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let write = || -> std::io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        for i in 0..points.rows() {
            let row: Vec<String> = points.row(i).iter().map(f64::to_string).collect();
            writeln!(out, "{}", row.join(" "))?;
        }
        out.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

pub fn load_points(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line, kind| Error::Parse { path: path.to_path_buf(), source: ParseError { line, kind } };
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let row: Option<Vec<f64>> = text.split_whitespace().map(|s| s.parse().ok()).collect();
        let row = row.ok_or_else(|| parse_err(k + 1, ParseErrorKind::MalformedEntry(text.into())))?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(parse_err(k + 1, ParseErrorKind::NonFiniteValue(text.into())));
        }
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err(parse_err(k + 1, ParseErrorKind::MalformedEntry("ragged row".into())));
        }
        values.extend(row);
        rows += 1;
    }
    FeatureMatrix::new(rows, cols.unwrap_or(0), values)
}
