//! File formats, instance generators and report output.

mod edgelist;
mod generate;
mod mtx;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub use edgelist::{load_edge_list, parse_edge_list, save_edge_list, write_edge_list, EdgeListParts};
pub use generate::{
    build_gaussian_adjacency, gen_two_moons, gen_uniform_bipartite, gen_uniform_unipartite, load_points, save_points,
    FeatureMatrix,
};
pub use mtx::{
    load_matrix_market, load_matrix_market_bipartite, load_matrix_market_with, matrix_to_graph, parse_matrix_market,
    save_matrix_market, save_matrix_market_bipartite, write_matrix_market, write_matrix_market_bipartite, Field,
    LoadOptions, LoadedGraph, MatrixMarket, Symmetry,
};

use crate::error::{Error, Result};
use crate::metrics::{MetricsReport, DEGREE_CONVENTION};

/// `key = value` lines, one per report field; histogram buckets appear as
/// `degree_histogram.<degree> = <count>` and echoed parameters as
/// `param.<name> = <value>`.
pub fn write_report<W: Write>(report: &MetricsReport, mut out: W) -> std::io::Result<()> {
    fn opt<T: ToString>(v: Option<T>) -> String {
        v.map_or_else(|| "none".to_string(), |v| v.to_string())
    }
    writeln!(out, "node_count = {}", report.node_count)?;
    writeln!(out, "selected_edges = {}", report.selected_edges)?;
    writeln!(out, "total_selected_weight = {}", report.total_selected_weight)?;
    writeln!(out, "degree_mean = {}", report.degree_mean)?;
    writeln!(out, "degree_variance = {}", report.degree_variance)?;
    writeln!(out, "degree_convention = {DEGREE_CONVENTION}")?;
    for (degree, count) in &report.degree_histogram {
        writeln!(out, "degree_histogram.{degree} = {count}")?;
    }
    writeln!(out, "degree_target = {}", opt(report.degree_target))?;
    writeln!(out, "degree_deficit_nodes = {}", opt(report.degree_deficit_nodes))?;
    writeln!(out, "is_symmetric = {}", report.is_symmetric)?;
    writeln!(out, "iterations = {}", report.iterations)?;
    writeln!(out, "wall_time_seconds = {}", report.wall_time_seconds)?;
    writeln!(out, "epsilon_used = {}", opt(report.epsilon_used))?;
    writeln!(out, "cs_residual_max = {}", opt(report.cs_residual_max))?;
    for (key, value) in &report.parameters {
        writeln!(out, "param.{key} = {value}")?;
    }
    out.flush()
}

pub fn save_report(report: &MetricsReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_report(report, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
